#include "hybridsec/ddpg.hpp"

#include <cmath>

#include "hybridsec/checkpoint.hpp"
#include "hybridsec/errors.hpp"

namespace hybridsec {

void validate_agent_config(const AgentConfig& c) {
  auto require = [](bool ok, const char* key, const char* what) {
    if (!ok) throw ConfigError(std::string(key) + " " + what, key);
  };
  require(c.gamma >= 0.0 && c.gamma <= 1.0, "gamma", "must lie in [0, 1]");
  require(c.tau > 0.0 && c.tau <= 1.0, "tau", "must lie in (0, 1]");
  require(c.batch_size >= 1, "batch_size", "must be at least 1");
  require(c.buffer_capacity >= 1, "buffer_capacity", "must be at least 1");
  require(c.noise_variance >= 0.0, "noise_variance", "must be nonnegative");
  require(c.noise_decay > 0.0 && c.noise_decay <= 1.0, "noise_decay", "must lie in (0, 1]");
  require(c.episodes >= 0, "episodes", "must be nonnegative");
  require(c.adam.learning_rate >= 0.0, "learning_rate", "must be nonnegative");
  require(c.adam.beta1 >= 0.0 && c.adam.beta1 < 1.0, "adam_beta1", "must lie in [0, 1)");
  require(c.adam.beta2 >= 0.0 && c.adam.beta2 < 1.0, "adam_beta2", "must lie in [0, 1)");
  require(c.adam.epsilon > 0.0, "adam_epsilon", "must be positive");
  require(!c.hidden.empty(), "hidden", "needs at least one layer");
  for (int h : c.hidden) require(h >= 1, "hidden", "sizes must be positive");
  require(c.eval_episodes >= 1, "eval_episodes", "must be at least 1");
}

Batch make_batch(std::span<const Transition* const> transitions) {
  if (transitions.empty()) throw ContractViolation("make_batch: empty batch");
  const auto obs = static_cast<Eigen::Index>(transitions.front()->state.size());
  const auto n = static_cast<Eigen::Index>(transitions.size());
  Batch b{Eigen::MatrixXd(obs, n), Eigen::MatrixXd(2, n), Eigen::VectorXd(n),
          Eigen::MatrixXd(obs, n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    const Transition& t = *transitions[static_cast<std::size_t>(j)];
    if (static_cast<Eigen::Index>(t.state.size()) != obs ||
        static_cast<Eigen::Index>(t.next_state.size()) != obs)
      throw ContractViolation("make_batch: inconsistent observation sizes");
    b.states.col(j) = Eigen::Map<const Eigen::VectorXd>(t.state.data(), obs);
    b.next_states.col(j) = Eigen::Map<const Eigen::VectorXd>(t.next_state.data(), obs);
    b.actions(0, j) = t.action.vx;
    b.actions(1, j) = t.action.vy;
    b.rewards(j) = t.reward;
  }
  return b;
}

Eigen::MatrixXd critic_inputs(const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions,
                              double action_scale) {
  if (states.cols() != actions.cols())
    throw ContractViolation("critic_inputs: state and action batch sizes differ");
  Eigen::MatrixXd x(states.rows() + actions.rows(), states.cols());
  x.topRows(states.rows()) = states;
  x.bottomRows(actions.rows()) = actions / action_scale;
  return x;
}

Eigen::VectorXd critic_targets(const Batch& batch, const MlpParams& critic_target,
                               const MlpParams& actor_target, double gamma, double action_scale) {
  if (batch.rewards.size() == 0) throw ContractViolation("critic_targets: empty batch");
  const Eigen::MatrixXd next_actions = forward_batch(actor_target, batch.next_states);
  const Eigen::MatrixXd q_next =
      forward_batch(critic_target, critic_inputs(batch.next_states, next_actions, action_scale));
  return batch.rewards + gamma * q_next.row(0).transpose();
}

double critic_loss(const MlpParams& critic, const Eigen::MatrixXd& inputs,
                   const Eigen::VectorXd& targets, MlpGradients* grads) {
  if (inputs.cols() != targets.size())
    throw ContractViolation("critic_loss: targets do not match the batch");
  ForwardCache cache;
  const Eigen::MatrixXd q = forward_batch(critic, inputs, grads ? &cache : nullptr);
  const Eigen::RowVectorXd err = q.row(0) - targets.transpose();
  const double n = static_cast<double>(targets.size());
  const double loss = err.squaredNorm() / n;
  if (grads) {
    const Eigen::MatrixXd dq = (2.0 / n) * err;
    backward(critic, cache, dq, grads);
  }
  return loss;
}

double actor_objective(const MlpParams& actor, const MlpParams& critic,
                       const Eigen::MatrixXd& states, double action_scale, MlpGradients* grads) {
  if (states.cols() == 0) throw ContractViolation("actor_objective: empty batch");
  ForwardCache actor_cache;
  ForwardCache critic_cache;
  const Eigen::MatrixXd actions = forward_batch(actor, states, grads ? &actor_cache : nullptr);
  const Eigen::MatrixXd q = forward_batch(critic, critic_inputs(states, actions, action_scale),
                                          grads ? &critic_cache : nullptr);
  const double n = static_cast<double>(states.cols());
  const double objective = q.sum() / n;
  if (grads) {
    const Eigen::MatrixXd dq = Eigen::MatrixXd::Constant(1, states.cols(), -1.0 / n);
    const Eigen::MatrixXd d_input = backward(critic, critic_cache, dq, nullptr);
    const Eigen::MatrixXd d_action = d_input.bottomRows(actions.rows()) / action_scale;
    backward(actor, actor_cache, d_action, grads);
  }
  return objective;
}

UpdateStats critic_update(MlpParams& critic, AdamState& adam, const Batch& batch,
                          const Eigen::VectorXd& targets, double action_scale, double grad_clip) {
  MlpGradients grads;
  const double loss =
      critic_loss(critic, critic_inputs(batch.states, batch.actions, action_scale), targets, &grads);
  if (!std::isfinite(loss)) throw TrainingFault("critic loss is not finite");
  const double norm = clip_gradients(grads, grad_clip);
  if (!std::isfinite(norm)) throw TrainingFault("critic gradient is not finite");
  adam_step(critic, adam, grads);
  if (!critic.all_finite()) throw TrainingFault("critic parameters became non-finite");
  return {loss, norm};
}

UpdateStats actor_update(MlpParams& actor, AdamState& adam, const MlpParams& critic,
                         const Batch& batch, double action_scale, double grad_clip) {
  MlpGradients grads;
  const double objective = actor_objective(actor, critic, batch.states, action_scale, &grads);
  const double norm = clip_gradients(grads, grad_clip);
  if (!std::isfinite(objective) || !std::isfinite(norm))
    throw TrainingFault("actor gradient is not finite");
  adam_step(actor, adam, grads);
  if (!actor.all_finite()) throw TrainingFault("actor parameters became non-finite");
  return {objective, norm};
}

Action policy_action(const MlpParams& actor, std::span<const double> observation) {
  const auto out = forward(actor, observation);
  if (out.size() != 2) throw ContractViolation("actor must produce two outputs");
  return {out[0], out[1]};
}

Action act_with_noise(const MlpParams& actor, std::span<const double> observation,
                      double noise_std, Rng& rng) {
  Action a = policy_action(actor, observation);
  if (noise_std > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_std);
    a.vx += noise(rng);
    a.vy += noise(rng);
  }
  return a;
}

DdpgNetworks make_networks(int observation_size, double v_max, const AgentConfig& config,
                           Rng& rng) {
  std::vector<int> actor_sizes{observation_size};
  actor_sizes.insert(actor_sizes.end(), config.hidden.begin(), config.hidden.end());
  actor_sizes.push_back(2);
  std::vector<int> critic_sizes{observation_size + 2};
  critic_sizes.insert(critic_sizes.end(), config.hidden.begin(), config.hidden.end());
  critic_sizes.push_back(1);

  DdpgNetworks n;
  n.actor = make_mlp(actor_sizes, OutputActivation::Tanh, v_max, rng);
  n.critic = make_mlp(critic_sizes, OutputActivation::Identity, 1.0, rng);
  n.actor_target = n.actor;
  n.critic_target = n.critic;
  n.actor_adam = make_adam(n.actor, config.adam);
  n.critic_adam = make_adam(n.critic, config.adam);
  return n;
}

Trainer::Trainer(EnvConfig env_config, AgentConfig agent_config, std::uint64_t seed)
    : env_(std::move(env_config)),
      agent_config_(std::move(agent_config)),
      seed_(seed),
      buffer_(agent_config_.buffer_capacity),
      agent_rng_(make_stream(seed, Stream::Agent)),
      env_rng_(make_stream(seed, Stream::Environment)),
      noise_std_(std::sqrt(agent_config_.noise_variance)) {
  validate_agent_config(agent_config_);
  nets_ = make_networks(env_.observation_size(), env_.config().v_max, agent_config_, agent_rng_);
  if (!agent_config_.warm_start.empty()) {
    DdpgNetworks warm = load_networks(agent_config_.warm_start);
    if (warm.actor.sizes() != nets_.actor.sizes() || warm.critic.sizes() != nets_.critic.sizes())
      throw ConfigError("warm_start checkpoint has a different network shape", "warm_start");
    nets_.actor = warm.actor;
    nets_.critic = warm.critic;
    nets_.actor_target = warm.actor;
    nets_.critic_target = warm.critic;
  }
}

const EpisodeLog& Trainer::run_episode() {
  const EnvConfig& cfg = env_.config();
  const double scale = cfg.v_max;
  EnvState state = env_.reset();
  std::vector<double> obs = env_.observe(state);
  EpisodeLog entry;
  entry.episode = static_cast<int>(log_.episodes.size()) + 1;
  double discount = 1.0;
  double rate_total = 0.0;

  for (int t = 0; t < cfg.slots; ++t) {
    const Action action = act_with_noise(nets_.actor, obs, noise_std_, agent_rng_);
    StepResult step = env_.step(state, action, env_rng_);
    std::vector<double> next_obs = env_.observe(step.next_state);

    entry.discounted_return += discount * step.reward;
    entry.undiscounted_return += step.reward;
    discount *= agent_config_.gamma;
    const auto& diag = step.diagnostics;
    rate_total += diag.outcomes[static_cast<std::size_t>(diag.chosen_mode)].sum_rate;

    buffer_.push(Transition{obs, action, step.reward, next_obs});
    ++env_steps_;
    noise_std_ *= agent_config_.noise_decay;

    if (buffer_.size() >= static_cast<std::size_t>(agent_config_.batch_size)) {
      const auto sampled =
          buffer_.sample(static_cast<std::size_t>(agent_config_.batch_size), agent_rng_);
      const Batch batch = make_batch(sampled);
      const Eigen::VectorXd targets = critic_targets(batch, nets_.critic_target,
                                                     nets_.actor_target, agent_config_.gamma, scale);
      critic_update(nets_.critic, nets_.critic_adam, batch, targets, scale, agent_config_.grad_clip);
      actor_update(nets_.actor, nets_.actor_adam, nets_.critic, batch, scale,
                   agent_config_.grad_clip);
      soft_update(nets_.critic_target, nets_.critic, agent_config_.tau);
      soft_update(nets_.actor_target, nets_.actor, agent_config_.tau);
      ++log_.gradient_updates;
    }

    state = std::move(step.next_state);
    obs = std::move(next_obs);
  }
  entry.mean_sum_rate = rate_total / cfg.slots;
  entry.noise_std = noise_std_;
  log_.episodes.push_back(entry);
  return log_.episodes.back();
}

void Trainer::run(int episodes) {
  for (int e = 0; e < episodes; ++e) run_episode();
}

void Trainer::run_to_completion() {
  while (static_cast<int>(log_.episodes.size()) < agent_config_.episodes) run_episode();
}

TrainResult train(const EnvConfig& env_config, const AgentConfig& agent_config, std::uint64_t seed) {
  Trainer trainer(env_config, agent_config, seed);
  trainer.run_to_completion();
  return {trainer.networks().actor, trainer.log()};
}

Policy actor_policy(const MlpParams& actor) {
  return [actor](const EnvState&, std::span<const double> obs) { return policy_action(actor, obs); };
}

EvaluationMetrics evaluate_policy(const Policy& policy, const Environment& env, int episodes,
                                  Rng& rng) {
  EvaluationMetrics m;
  const int slots = env.config().slots;
  for (int e = 0; e < episodes; ++e) {
    EnvState state = env.reset();
    std::vector<SlotRecord> records;
    std::vector<Mode> modes;
    double rate = 0.0;
    double reward = 0.0;
    for (int t = 0; t < slots; ++t) {
      const auto obs = env.observe(state);
      StepResult step = env.step(state, policy(state, obs), rng);
      const auto& diag = step.diagnostics;
      rate += diag.outcomes[static_cast<std::size_t>(diag.chosen_mode)].sum_rate;
      reward += step.reward;
      modes.push_back(diag.chosen_mode);
      state = step.next_state;
      records.push_back(SlotRecord{t + 1, state.helper, std::move(step)});
    }
    m.episode_sum_rates.push_back(rate);
    m.episode_rewards.push_back(reward);
    m.modes.push_back(std::move(modes));
    m.episodes.push_back(std::move(records));
  }
  if (!m.episode_sum_rates.empty()) {
    double mean = 0.0;
    for (double r : m.episode_sum_rates) mean += r;
    mean /= static_cast<double>(m.episode_sum_rates.size());
    double var = 0.0;
    for (double r : m.episode_sum_rates) var += (r - mean) * (r - mean);
    m.mean_sum_rate = mean;
    m.std_sum_rate = std::sqrt(var / static_cast<double>(m.episode_sum_rates.size()));
  }
  return m;
}

EvaluationMetrics evaluate_policy(const MlpParams& actor, const Environment& env, int episodes,
                                  Rng& rng) {
  return evaluate_policy(actor_policy(actor), env, episodes, rng);
}

}  // namespace hybridsec
