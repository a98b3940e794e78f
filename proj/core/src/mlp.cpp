#include "hybridsec/mlp.hpp"

#include <cmath>

#include "hybridsec/errors.hpp"

namespace hybridsec {

int MlpParams::input_size() const {
  return layers.empty() ? 0 : static_cast<int>(layers.front().weight.cols());
}

int MlpParams::output_size() const {
  return layers.empty() ? 0 : static_cast<int>(layers.back().weight.rows());
}

std::vector<int> MlpParams::sizes() const {
  std::vector<int> s;
  if (layers.empty()) return s;
  s.push_back(input_size());
  for (const auto& l : layers) s.push_back(static_cast<int>(l.weight.rows()));
  return s;
}

std::size_t MlpParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

bool MlpParams::all_finite() const {
  for (const auto& l : layers)
    if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
  return true;
}

double MlpGradients::squared_norm() const {
  double s = 0.0;
  for (const auto& l : layers) s += l.weight.squaredNorm() + l.bias.squaredNorm();
  return s;
}

void MlpGradients::scale(double factor) {
  for (auto& l : layers) {
    l.weight *= factor;
    l.bias *= factor;
  }
}

namespace {

void check_sizes(std::span<const int> sizes) {
  if (sizes.size() < 2) throw ContractViolation("mlp: need at least input and output sizes");
  for (int s : sizes)
    if (s < 1) throw ContractViolation("mlp: layer sizes must be positive");
}

}  // namespace

MlpParams make_mlp(std::span<const int> sizes, OutputActivation output, double output_scale,
                   Rng& rng) {
  check_sizes(sizes);
  MlpParams net;
  net.output = output;
  net.output_scale = output_scale;
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(sizes[i - 1]));
    DenseLayer layer{Eigen::MatrixXd(sizes[i], sizes[i - 1]), Eigen::VectorXd(sizes[i])};
    // Column-major fill order is part of the reproducibility contract.
    for (Eigen::Index j = 0; j < layer.weight.size(); ++j)
      layer.weight.data()[j] = uniform_real(rng, -bound, bound);
    for (Eigen::Index j = 0; j < layer.bias.size(); ++j)
      layer.bias[j] = uniform_real(rng, -bound, bound);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

MlpParams zero_mlp(std::span<const int> sizes, OutputActivation output, double output_scale) {
  check_sizes(sizes);
  MlpParams net;
  net.output = output;
  net.output_scale = output_scale;
  for (std::size_t i = 1; i < sizes.size(); ++i)
    net.layers.push_back(
        {Eigen::MatrixXd::Zero(sizes[i], sizes[i - 1]), Eigen::VectorXd::Zero(sizes[i])});
  return net;
}

MlpGradients zero_gradients(const MlpParams& net) {
  MlpGradients g;
  for (const auto& l : net.layers)
    g.layers.push_back({Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()),
                        Eigen::VectorXd::Zero(l.bias.size())});
  return g;
}

Eigen::MatrixXd forward_batch(const MlpParams& net, const Eigen::MatrixXd& inputs,
                              ForwardCache* cache) {
  if (net.layers.empty()) throw ContractViolation("forward: empty network");
  if (inputs.rows() != net.input_size())
    throw ContractViolation("forward: input width " + std::to_string(inputs.rows()) +
                            " does not match network input " + std::to_string(net.input_size()));
  if (cache) {
    cache->activations.resize(net.layers.size() + 1);
    cache->activations[0] = inputs;
  }
  Eigen::MatrixXd a = inputs;
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    const auto& layer = net.layers[i];
    Eigen::MatrixXd z = layer.weight * a;
    z.colwise() += layer.bias;
    const bool last = i + 1 == net.layers.size();
    if (!last || net.output == OutputActivation::Tanh)
      a = z.array().tanh().matrix();
    else
      a = std::move(z);
    if (cache) cache->activations[i + 1] = a;
  }
  if (net.output == OutputActivation::Tanh) a *= net.output_scale;
  return a;
}

std::vector<double> forward(const MlpParams& net, std::span<const double> input) {
  const Eigen::Map<const Eigen::VectorXd> x(input.data(), static_cast<Eigen::Index>(input.size()));
  const Eigen::MatrixXd y = forward_batch(net, x);
  return {y.data(), y.data() + y.size()};
}

Eigen::MatrixXd backward(const MlpParams& net, const ForwardCache& cache,
                         const Eigen::MatrixXd& output_grad, MlpGradients* grads) {
  const std::size_t depth = net.layers.size();
  if (cache.activations.size() != depth + 1)
    throw ContractViolation("backward: cache does not belong to this network");
  if (grads && grads->layers.size() != depth) *grads = zero_gradients(net);

  // delta holds d(loss)/d(pre-activation) of the current layer.
  Eigen::MatrixXd delta;
  const Eigen::MatrixXd& out = cache.activations[depth];
  if (net.output == OutputActivation::Tanh)
    delta = (output_grad.array() * net.output_scale * (1.0 - out.array().square())).matrix();
  else
    delta = output_grad;

  for (std::size_t i = depth; i-- > 0;) {
    const auto& layer = net.layers[i];
    const Eigen::MatrixXd& input = cache.activations[i];
    if (grads) {
      grads->layers[i].weight.noalias() = delta * input.transpose();
      grads->layers[i].bias = delta.rowwise().sum();
    }
    Eigen::MatrixXd upstream = layer.weight.transpose() * delta;
    if (i == 0) return upstream;
    delta = (upstream.array() * (1.0 - input.array().square())).matrix();
  }
  return {};
}

AdamState make_adam(const MlpParams& net, AdamConfig config) {
  AdamState s;
  s.config = config;
  s.first_moment = zero_gradients(net);
  s.second_moment = zero_gradients(net);
  return s;
}

void adam_step(MlpParams& net, AdamState& adam, const MlpGradients& grads) {
  if (grads.layers.size() != net.layers.size() ||
      adam.first_moment.layers.size() != net.layers.size())
    throw ContractViolation("adam_step: shape mismatch");
  const AdamConfig& c = adam.config;
  ++adam.step;
  const double t = static_cast<double>(adam.step);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);

  auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
    m = c.beta1 * m + (1.0 - c.beta1) * g;
    v = c.beta2 * v + (1.0 - c.beta2) * g.cwiseProduct(g);
    param.array() -= c.learning_rate * (m.array() / correction1) /
                     ((v.array() / correction2).sqrt() + c.epsilon);
  };
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    auto& layer = net.layers[i];
    const auto& g = grads.layers[i];
    if (g.weight.rows() != layer.weight.rows() || g.weight.cols() != layer.weight.cols() ||
        g.bias.size() != layer.bias.size())
      throw ContractViolation("adam_step: gradient shape mismatch");
    update(layer.weight, adam.first_moment.layers[i].weight, adam.second_moment.layers[i].weight,
           g.weight);
    update(layer.bias, adam.first_moment.layers[i].bias, adam.second_moment.layers[i].bias, g.bias);
  }
}

void soft_update(MlpParams& target, const MlpParams& online, double tau) {
  if (target.layers.size() != online.layers.size())
    throw ContractViolation("soft_update: layer count mismatch");
  for (std::size_t i = 0; i < target.layers.size(); ++i) {
    auto& t = target.layers[i];
    const auto& o = online.layers[i];
    if (t.weight.rows() != o.weight.rows() || t.weight.cols() != o.weight.cols() ||
        t.bias.size() != o.bias.size())
      throw ContractViolation("soft_update: layer shape mismatch");
    t.weight = tau * o.weight + (1.0 - tau) * t.weight;
    t.bias = tau * o.bias + (1.0 - tau) * t.bias;
  }
}

double clip_gradients(MlpGradients& grads, double max_norm) {
  const double norm = std::sqrt(grads.squared_norm());
  if (max_norm > 0.0 && norm > max_norm) grads.scale(max_norm / norm);
  return norm;
}

}  // namespace hybridsec
