#pragma once

#include "mmdnet/common.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace mmdnet {

enum class Activation { Identity, Tanh, Relu };

std::string to_string(Activation a);
Activation activation_from_string(std::string_view name);  // throws ConfigError

struct Layer {
  Mat weight;  // out x in
  Vec bias;    // out
  Activation activation = Activation::Identity;
};

// A feed-forward mapping R^d -> R^e applied row-wise. The single-layer
// identity-activation case is a plain linear transformation.
struct ModelParams {
  std::vector<Layer> layers;
  bool bias_enabled = true;  // when false, biases stay zero and receive no gradient

  int input_dim() const;
  int output_dim() const;
  void validate() const;  // throws std::invalid_argument on a broken layer chain
};

// n channels = the same network applied to n separate inputs (tied weights;
// there is only ever one parameter set).
struct ChannelBatch {
  std::vector<Mat> inputs;
};

// Weights i.i.d. Gaussian with std 1/sqrt(fan_in), biases zero. Hidden layers
// get `hidden_activation`, the output layer is linear. Deterministic per seed.
ModelParams init_params(int input_dim, int output_dim, const std::vector<int>& hidden,
                        std::uint64_t seed, Activation hidden_activation = Activation::Tanh,
                        bool bias_enabled = true);

// Row-wise application of the layer stack; X is m x input_dim.
Mat forward(const ModelParams& params, const Eigen::Ref<const Mat>& x);

std::vector<Mat> n_channel_forward(const ModelParams& params, const ChannelBatch& batch);

struct LayerGrads {
  Mat weight;
  Vec bias;
};

struct BackwardResult {
  std::vector<LayerGrads> params;  // same shapes as the layer stack
  Mat input;                       // m x input_dim
};

// Gradients of sum(upstream .* forward(params, X)) with respect to parameters
// and inputs. upstream is m x output_dim.
BackwardResult backward(const ModelParams& params, const Eigen::Ref<const Mat>& x,
                        const Eigen::Ref<const Mat>& upstream);

std::vector<LayerGrads> zero_grads(const ModelParams& params);

// Closed-form least-squares fit of a single linear layer (optionally with an
// intercept column): minimizes sum_i |W x_i + b - y_i|^2.
ModelParams fit_linear_least_squares(const Eigen::Ref<const Mat>& x,
                                     const Eigen::Ref<const Mat>& y, bool with_bias);

// Textual checkpoint format, version tagged, shortest-round-trip decimals.
void save_model(const std::string& path, const ModelParams& params);
ModelParams load_model(const std::string& path);  // throws ParseError with line numbers

}  // namespace mmdnet
