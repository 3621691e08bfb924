#include "mmdnet/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mmdnet {

namespace {

void check_same_cols(const Eigen::Ref<const Mat>& a, const Eigen::Ref<const Mat>& b) {
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("kernel: dimension mismatch (" + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.cols()) + " columns)");
  }
}

double squared_distance(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& y) {
  double r2 = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    r2 += d * d;
  }
  return r2;
}

// Precomputed per-rung quantities: 1/(2 sigma_i^2) for values, c_i/sigma_i^2
// for gradients.
struct Ladder {
  std::vector<double> coef;
  std::vector<double> inv_two_sigma2;
  std::vector<double> coef_over_sigma2;

  explicit Ladder(const KernelSpec& spec) {
    spec.validate();
    const auto sigmas = spec.scales();
    coef = spec.coefficients;
    if (coef.empty()) coef.assign(sigmas.size(), 1.0);
    inv_two_sigma2.resize(sigmas.size());
    coef_over_sigma2.resize(sigmas.size());
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
      inv_two_sigma2[i] = 0.5 / (sigmas[i] * sigmas[i]);
      coef_over_sigma2[i] = coef[i] / (sigmas[i] * sigmas[i]);
    }
  }

  double value(double r2) const {
    double k = 0.0;
    for (std::size_t i = 0; i < coef.size(); ++i) {
      k += coef[i] * std::exp(-r2 * inv_two_sigma2[i]);
    }
    return k;
  }

  // w(r2) such that dk/dx = -(x - y) * w(|x - y|^2).
  double grad_weight(double r2) const {
    double w = 0.0;
    for (std::size_t i = 0; i < coef.size(); ++i) {
      w += coef_over_sigma2[i] * std::exp(-r2 * inv_two_sigma2[i]);
    }
    return w;
  }

  void value_and_weight(double r2, double& k, double& w) const {
    k = 0.0;
    w = 0.0;
    for (std::size_t i = 0; i < coef.size(); ++i) {
      const double e = std::exp(-r2 * inv_two_sigma2[i]);
      k += coef[i] * e;
      w += coef_over_sigma2[i] * e;
    }
  }
};

}  // namespace

KernelSpec KernelSpec::multi_scale(double s, double w, int n) {
  KernelSpec spec;
  spec.base_scale = s;
  spec.width = w;
  spec.num_scales = n;
  spec.coefficients.assign(static_cast<std::size_t>(n) + 1, 1.0);
  return spec;
}

KernelSpec KernelSpec::single_scale(double sigma) {
  KernelSpec spec;
  spec.base_scale = sigma;
  spec.width = 0.0;
  spec.num_scales = 1;
  spec.coefficients = {0.5, 0.5};  // two coincident rungs, unit total weight
  return spec;
}

void KernelSpec::validate() const {
  if (!(base_scale > 0.0)) throw std::invalid_argument("KernelSpec: base_scale must be > 0");
  if (!(width >= 0.0)) throw std::invalid_argument("KernelSpec: width must be >= 0");
  if (num_scales < 1) throw std::invalid_argument("KernelSpec: num_scales must be >= 1");
  if (!coefficients.empty()) {
    if (coefficients.size() != static_cast<std::size_t>(num_scales) + 1) {
      throw std::invalid_argument("KernelSpec: need num_scales + 1 coefficients, got " +
                                  std::to_string(coefficients.size()));
    }
    for (double c : coefficients) {
      if (!(c > 0.0)) throw std::invalid_argument("KernelSpec: coefficients must be > 0");
    }
  }
}

std::vector<double> KernelSpec::scales() const {
  std::vector<double> sigmas(static_cast<std::size_t>(num_scales) + 1);
  for (int i = 0; i <= num_scales; ++i) {
    const double exponent = width * (static_cast<double>(i) / num_scales) - width / 2.0;
    sigmas[static_cast<std::size_t>(i)] = base_scale * std::pow(10.0, exponent);
  }
  return sigmas;
}

double KernelSpec::coefficient_sum() const {
  if (coefficients.empty()) return static_cast<double>(num_scales) + 1.0;
  double s = 0.0;
  for (double c : coefficients) s += c;
  return s;
}

double gaussian_kernel(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& y,
                       double sigma) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("gaussian_kernel: dimension mismatch (" +
                                std::to_string(x.size()) + " vs " + std::to_string(y.size()) +
                                ")");
  }
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_kernel: sigma must be > 0");
  return std::exp(-squared_distance(x, y) * (0.5 / (sigma * sigma)));
}

double multiscale_kernel(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& y,
                         const KernelSpec& spec) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("multiscale_kernel: dimension mismatch");
  }
  return Ladder(spec).value(squared_distance(x, y));
}

Mat kernel_matrix(const Eigen::Ref<const Mat>& a, const Eigen::Ref<const Mat>& b,
                  const KernelSpec& spec) {
  check_same_cols(a, b);
  const Ladder ladder(spec);
  Mat k(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      k(i, j) = ladder.value(squared_distance(a.row(i), b.row(j)));
    }
  }
  return k;
}

namespace {

void check_mmd_sizes(const Eigen::Ref<const Mat>& x, const Eigen::Ref<const Mat>& y) {
  check_same_cols(x, y);
  if (x.rows() < 2 || y.rows() < 2) {
    throw std::invalid_argument("mmd_u2: both sample sets need at least 2 rows (got " +
                                std::to_string(x.rows()) + " and " + std::to_string(y.rows()) +
                                ")");
  }
}

double self_term(const Eigen::Ref<const Mat>& x, const Ladder& ladder) {
  const Eigen::Index m = x.rows();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      sum += ladder.value(squared_distance(x.row(i), x.row(j)));
    }
  }
  // Each unordered pair appears twice in the i != j double sum.
  return 2.0 * sum / (static_cast<double>(m) * (static_cast<double>(m) - 1.0));
}

// Accumulates the cross block in an order invariant under swapping the two
// sample sets: entries (i, j) and (j, i) are added pairwise (a commutative
// binary add), and the outer walk depends only on the unordered index pair.
double cross_term(const Eigen::Ref<const Mat>& x, const Eigen::Ref<const Mat>& y,
                  const Ladder& ladder) {
  const Eigen::Index m = x.rows();
  const Eigen::Index p = y.rows();
  const Eigen::Index q = std::max(m, p);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < q; ++i) {
    if (i < m && i < p) {
      sum += ladder.value(squared_distance(x.row(i), y.row(i)));
    }
    for (Eigen::Index j = i + 1; j < q; ++j) {
      const bool has_ij = i < m && j < p;
      const bool has_ji = j < m && i < p;
      if (!has_ij && !has_ji) continue;
      const double kij = has_ij ? ladder.value(squared_distance(x.row(i), y.row(j))) : 0.0;
      const double kji = has_ji ? ladder.value(squared_distance(x.row(j), y.row(i))) : 0.0;
      sum += kij + kji;
    }
  }
  return sum / (static_cast<double>(m) * static_cast<double>(p));
}

}  // namespace

MmdTerms mmd_u2_terms(const Eigen::Ref<const Mat>& x, const Eigen::Ref<const Mat>& y,
                      const KernelSpec& spec) {
  check_mmd_sizes(x, y);
  const Ladder ladder(spec);
  MmdTerms t;
  t.self_first = self_term(x, ladder);
  t.self_second = self_term(y, ladder);
  t.cross = cross_term(x, y, ladder);
  return t;
}

double mean_cross_kernel(const Eigen::Ref<const Mat>& a, const Eigen::Ref<const Mat>& b,
                         const KernelSpec& spec) {
  check_same_cols(a, b);
  if (a.rows() < 1 || b.rows() < 1) {
    throw std::invalid_argument("mean_cross_kernel: empty sample set");
  }
  return cross_term(a, b, Ladder(spec));
}

double mmd_u2(const Eigen::Ref<const Mat>& x, const Eigen::Ref<const Mat>& y,
              const KernelSpec& spec) {
  return mmd_u2_terms(x, y, spec).value();
}

MmdValueGrad mmd_u2_value_grad(const Eigen::Ref<const Mat>& x, const Eigen::Ref<const Mat>& y,
                               const KernelSpec& spec) {
  check_mmd_sizes(x, y);
  const Ladder ladder(spec);
  const Eigen::Index m = x.rows();
  const Eigen::Index p = y.rows();
  const Eigen::Index d = x.cols();

  const double self_norm = 2.0 / (static_cast<double>(m) * (static_cast<double>(m) - 1.0));
  const double cross_norm = 2.0 / (static_cast<double>(m) * static_cast<double>(p));

  MmdValueGrad out;
  out.grad = Mat::Zero(m, d);

  // X-X block: value and the two gradient contributions of each unordered pair.
  double self_x = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      double k, w;
      ladder.value_and_weight(squared_distance(x.row(i), x.row(j)), k, w);
      self_x += k;
      for (Eigen::Index c = 0; c < d; ++c) {
        const double g = self_norm * w * (x(i, c) - x(j, c));
        out.grad(i, c) -= g;
        out.grad(j, c) += g;
      }
    }
  }
  self_x *= self_norm;

  // X-Y block.
  double cross = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      double k, w;
      ladder.value_and_weight(squared_distance(x.row(i), y.row(j)), k, w);
      cross += k;
      for (Eigen::Index c = 0; c < d; ++c) {
        out.grad(i, c) += cross_norm * w * (x(i, c) - y(j, c));
      }
    }
  }
  cross *= 0.5 * cross_norm;

  out.value = self_x + self_term(y, ladder) - 2.0 * cross;
  return out;
}

Mat mmd_u2_grad(const Eigen::Ref<const Mat>& x, const Eigen::Ref<const Mat>& y,
                const KernelSpec& spec) {
  check_mmd_sizes(x, y);
  const Ladder ladder(spec);
  const Eigen::Index m = x.rows();
  const Eigen::Index p = y.rows();
  const Eigen::Index d = x.cols();

  const double self_norm = 2.0 / (static_cast<double>(m) * (static_cast<double>(m) - 1.0));
  const double cross_norm = 2.0 / (static_cast<double>(m) * static_cast<double>(p));

  Mat grad = Mat::Zero(m, d);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double w = ladder.grad_weight(squared_distance(x.row(i), x.row(j)));
      for (Eigen::Index c = 0; c < d; ++c) {
        const double g = self_norm * w * (x(i, c) - x(j, c));
        grad(i, c) -= g;
        grad(j, c) += g;
      }
    }
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      const double w = ladder.grad_weight(squared_distance(x.row(i), y.row(j)));
      for (Eigen::Index c = 0; c < d; ++c) {
        grad(i, c) += cross_norm * w * (x(i, c) - y(j, c));
      }
    }
  }
  return grad;
}

}  // namespace mmdnet
