#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>

namespace mmdnet {

// Rows are observations throughout; row-major keeps per-sample access contiguous.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;
using Rng = std::mt19937_64;

// Bad key or value in a run configuration (CLI exit code 1).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file; the message carries file and line context (CLI exit code 2).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite loss encountered during training (CLI exit code 3).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mmdnet
