#pragma once

#include "mmdnet/common.hpp"

#include <vector>

namespace mmdnet {

// Multi-scale Gaussian kernel
//
//   k(x, y) = sum_{i=0}^{n} c_i * exp(-|x - y|^2 / (2 sigma_i^2))
//
// with the scale ladder sigma_i = s * 10^(w * (i/n) - w/2). The ladder spans
// w decades centered (logarithmically) on the average scale s, so gradients
// stay informative over a wide band of point-cloud diameters.
struct KernelSpec {
  double base_scale = 1.0;           // s, average scale of the ladder
  double width = 4.0;                // w, decades covered; 0 collapses all rungs to s
  int num_scales = 10;               // n; the ladder has n+1 rungs
  std::vector<double> coefficients;  // c_i, length num_scales + 1, all positive

  // Ladder of n+1 rungs around `s` with unit coefficients.
  static KernelSpec multi_scale(double s, double w = 4.0, int n = 10);

  // Behaves exactly like a single Gaussian of scale sigma: two coincident
  // rungs carrying weight 1/2 each, so k(x, x) = 1.
  static KernelSpec single_scale(double sigma);

  // Throws std::invalid_argument if any field violates its constraint.
  void validate() const;

  // sigma_0 .. sigma_n; strictly increasing for width > 0, all equal otherwise.
  std::vector<double> scales() const;

  double coefficient_sum() const;
};

// exp(-|x - y|^2 / (2 sigma^2)); symmetric, in (0, 1].
double gaussian_kernel(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& y,
                       double sigma);

double multiscale_kernel(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& y,
                         const KernelSpec& spec);

// Entry (i, j) = k(a_i, b_j). Per-entry scale sums run in ladder order, so
// entries do not depend on any batching of the rows.
Mat kernel_matrix(const Eigen::Ref<const Mat>& a, const Eigen::Ref<const Mat>& b,
                  const KernelSpec& spec);

// The three averaged kernel blocks of the unbiased MMD^2 estimator. Kept
// separate because the self terms are sometimes reusable (they are invariant
// under isometries of their sample set).
struct MmdTerms {
  double self_first = 0.0;   // mean of k over ordered pairs of distinct rows of X
  double self_second = 0.0;  // same for Y
  double cross = 0.0;        // mean of k over all (x, y) pairs

  double value() const { return self_first + self_second - 2.0 * cross; }
};

MmdTerms mmd_u2_terms(const Eigen::Ref<const Mat>& x, const Eigen::Ref<const Mat>& y,
                      const KernelSpec& spec);

// Mean of k(a_i, b_j) over all pairs; the cross block above.
double mean_cross_kernel(const Eigen::Ref<const Mat>& a, const Eigen::Ref<const Mat>& b,
                         const KernelSpec& spec);

// Unbiased estimator of MMD^2 between the samples X (m rows) and Y (p rows).
// Signed: negative values are returned as-is. Requires m >= 2 and p >= 2.
// mmd_u2(X, Y) == mmd_u2(Y, X) bitwise; the cross block is accumulated in a
// transposition-invariant order to make the swap exact.
double mmd_u2(const Eigen::Ref<const Mat>& x, const Eigen::Ref<const Mat>& y,
              const KernelSpec& spec);

// d mmd_u2 / dX with Y held fixed; same shape as X.
Mat mmd_u2_grad(const Eigen::Ref<const Mat>& x, const Eigen::Ref<const Mat>& y,
                const KernelSpec& spec);

struct MmdValueGrad {
  double value = 0.0;
  Mat grad;
};

// Value and gradient from one pass over the kernel blocks.
MmdValueGrad mmd_u2_value_grad(const Eigen::Ref<const Mat>& x, const Eigen::Ref<const Mat>& y,
                               const KernelSpec& spec);

}  // namespace mmdnet
