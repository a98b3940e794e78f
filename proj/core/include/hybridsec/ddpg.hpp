#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hybridsec/environment.hpp"
#include "hybridsec/mlp.hpp"
#include "hybridsec/replay_buffer.hpp"
#include "hybridsec/rng.hpp"

namespace hybridsec {

struct AgentConfig {
  double gamma = 0.95;
  double tau = 0.005;
  int batch_size = 70;
  std::size_t buffer_capacity = 8000;
  double noise_variance = 0.6;  // initial variance of the exploration noise
  double noise_decay = 0.999;   // applied to the std once per environment step
  int episodes = 1000;
  AdamConfig adam;              // shared by actor and critic
  std::vector<int> hidden{300, 100, 100};
  double grad_clip = 0.0;       // global-norm ceiling, <= 0 disables
  std::string warm_start;       // checkpoint to copy network weights from
  int eval_episodes = 10;

  friend bool operator==(const AgentConfig&, const AgentConfig&) = default;
};

void validate_agent_config(const AgentConfig& config);

// Minibatch in column layout. Actions are in m/s.
struct Batch {
  Eigen::MatrixXd states;       // obs x B
  Eigen::MatrixXd actions;      // 2 x B
  Eigen::VectorXd rewards;      // B
  Eigen::MatrixXd next_states;  // obs x B
};

Batch make_batch(std::span<const Transition* const> transitions);

// Critic input stacks the observation over the action divided by action_scale.
Eigen::MatrixXd critic_inputs(const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions,
                              double action_scale);

// y = r + gamma * Q'(s', mu'(s')); every transition bootstraps.
Eigen::VectorXd critic_targets(const Batch& batch, const MlpParams& critic_target,
                               const MlpParams& actor_target, double gamma, double action_scale);

// Mean squared error over the batch and its gradient.
double critic_loss(const MlpParams& critic, const Eigen::MatrixXd& inputs,
                   const Eigen::VectorXd& targets, MlpGradients* grads);

// J = mean_b Q(s_b, mu(s_b)). Gradients are of -J with respect to the actor.
double actor_objective(const MlpParams& actor, const MlpParams& critic,
                       const Eigen::MatrixXd& states, double action_scale, MlpGradients* grads);

struct UpdateStats {
  double value = 0.0;      // loss for the critic, J for the actor
  double grad_norm = 0.0;  // before clipping
};

UpdateStats critic_update(MlpParams& critic, AdamState& adam, const Batch& batch,
                          const Eigen::VectorXd& targets, double action_scale, double grad_clip);

UpdateStats actor_update(MlpParams& actor, AdamState& adam, const MlpParams& critic,
                         const Batch& batch, double action_scale, double grad_clip);

// mu(s) plus independent N(0, noise_std^2) per component, unprojected.
Action act_with_noise(const MlpParams& actor, std::span<const double> observation,
                      double noise_std, Rng& rng);

Action policy_action(const MlpParams& actor, std::span<const double> observation);

struct DdpgNetworks {
  MlpParams actor;
  MlpParams critic;
  MlpParams actor_target;
  MlpParams critic_target;
  AdamState actor_adam;
  AdamState critic_adam;
};

// Online networks drawn from rng; targets start as exact copies.
DdpgNetworks make_networks(int observation_size, double v_max, const AgentConfig& config,
                           Rng& rng);

struct EpisodeLog {
  int episode = 0;              // 1-based
  double discounted_return = 0.0;
  double undiscounted_return = 0.0;
  double mean_sum_rate = 0.0;   // mean over slots of the chosen-mode secrecy sum-rate
  double noise_std = 0.0;       // at the end of the episode

  friend bool operator==(const EpisodeLog&, const EpisodeLog&) = default;
};

struct TrainingLog {
  std::vector<EpisodeLog> episodes;
  std::int64_t gradient_updates = 0;
};

// Resumable training state: networks, optimizer, buffer, noise and streams.
class Trainer {
 public:
  Trainer(EnvConfig env_config, AgentConfig agent_config, std::uint64_t seed);

  // Runs one episode of the training loop and returns its log entry.
  const EpisodeLog& run_episode();
  void run(int episodes);
  // Runs episodes until `agent_config().episodes` have completed.
  void run_to_completion();

  const Environment& environment() const { return env_; }
  const AgentConfig& agent_config() const { return agent_config_; }
  const DdpgNetworks& networks() const { return nets_; }
  const TrainingLog& log() const { return log_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  double noise_std() const { return noise_std_; }
  std::int64_t env_steps() const { return env_steps_; }
  std::uint64_t seed() const { return seed_; }

  void save_checkpoint(const std::filesystem::path& path) const;
  static Trainer load_checkpoint(const std::filesystem::path& path, EnvConfig env_config,
                                 AgentConfig agent_config);

 private:
  friend struct CheckpointCodec;

  Environment env_;
  AgentConfig agent_config_;
  std::uint64_t seed_;
  DdpgNetworks nets_;
  ReplayBuffer buffer_;
  Rng agent_rng_;
  Rng env_rng_;
  double noise_std_;
  std::int64_t env_steps_ = 0;
  TrainingLog log_;
};

struct TrainResult {
  MlpParams actor;
  TrainingLog log;
};

TrainResult train(const EnvConfig& env_config, const AgentConfig& agent_config, std::uint64_t seed);

using Policy = std::function<Action(const EnvState& state, std::span<const double> observation)>;

Policy actor_policy(const MlpParams& actor);

struct SlotRecord {
  int slot = 0;                 // 1-based
  Position position;            // after the move
  StepResult step;
};

struct EvaluationMetrics {
  std::vector<double> episode_sum_rates;  // sum over slots of the chosen-mode rate
  std::vector<double> episode_rewards;    // undiscounted
  double mean_sum_rate = 0.0;
  double std_sum_rate = 0.0;
  std::vector<std::vector<Mode>> modes;
  std::vector<std::vector<SlotRecord>> episodes;
};

// Noise-free rollouts of `policy`. Projection onto v_max happens inside step.
EvaluationMetrics evaluate_policy(const Policy& policy, const Environment& env, int episodes,
                                  Rng& rng);
EvaluationMetrics evaluate_policy(const MlpParams& actor, const Environment& env, int episodes,
                                  Rng& rng);

}  // namespace hybridsec
