#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hybridsec/rng.hpp"

namespace hybridsec {

enum class OutputActivation : std::uint8_t { Identity = 0, Tanh = 1 };

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
};

// Fully connected network: tanh on every hidden layer, then the output
// activation (tanh scaled by output_scale, or identity).
struct MlpParams {
  std::vector<DenseLayer> layers;
  OutputActivation output = OutputActivation::Identity;
  double output_scale = 1.0;

  int input_size() const;
  int output_size() const;
  std::vector<int> sizes() const;
  std::size_t parameter_count() const;
  bool all_finite() const;
};

// Same shape as MlpParams; used for gradients and optimizer moments.
struct MlpGradients {
  std::vector<DenseLayer> layers;

  double squared_norm() const;
  void scale(double factor);
};

// Weights and biases uniform in +-1/sqrt(fan_in).
MlpParams make_mlp(std::span<const int> sizes, OutputActivation output, double output_scale,
                   Rng& rng);
MlpParams zero_mlp(std::span<const int> sizes, OutputActivation output, double output_scale);
MlpGradients zero_gradients(const MlpParams& net);

std::vector<double> forward(const MlpParams& net, std::span<const double> input);

// Post-activation values per layer, index 0 is the input batch. The last entry
// holds tanh(z) before output scaling for a tanh output.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> activations;
};

// Columns are samples.
Eigen::MatrixXd forward_batch(const MlpParams& net, const Eigen::MatrixXd& inputs,
                              ForwardCache* cache = nullptr);

// Backpropagates d(loss)/d(output) through the cached pass. Parameter
// gradients are written to `grads` when given; returns d(loss)/d(input).
Eigen::MatrixXd backward(const MlpParams& net, const ForwardCache& cache,
                         const Eigen::MatrixXd& output_grad, MlpGradients* grads);

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  friend bool operator==(const AdamConfig&, const AdamConfig&) = default;
};

struct AdamState {
  AdamConfig config;
  MlpGradients first_moment;
  MlpGradients second_moment;
  std::int64_t step = 0;
};

AdamState make_adam(const MlpParams& net, AdamConfig config);

// One bias-corrected Adam step, in place.
void adam_step(MlpParams& net, AdamState& adam, const MlpGradients& grads);

// target <- tau * online + (1 - tau) * target
void soft_update(MlpParams& target, const MlpParams& online, double tau);

// Rescales the gradients to `max_norm` when their global norm exceeds it.
// Non-positive max_norm disables clipping. Returns the norm before clipping.
double clip_gradients(MlpGradients& grads, double max_norm);

}  // namespace hybridsec
