#include <doctest.h>

#include <cmath>

#include "../oracles/finite_diff.hpp"
#include "hybridsec/baselines.hpp"
#include "hybridsec/ddpg.hpp"
#include "hybridsec/errors.hpp"

using namespace hybridsec;

namespace {

Batch random_batch(int obs, int n, Rng& rng, double action_scale) {
  Batch b{Eigen::MatrixXd(obs, n), Eigen::MatrixXd(2, n), Eigen::VectorXd(n), Eigen::MatrixXd(obs, n)};
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < obs; ++i) {
      b.states(i, j) = uniform_real(rng, -1, 1);
      b.next_states(i, j) = uniform_real(rng, -1, 1);
    }
    b.actions(0, j) = uniform_real(rng, -action_scale, action_scale);
    b.actions(1, j) = uniform_real(rng, -action_scale, action_scale);
    b.rewards(j) = uniform_real(rng, -1, 3);
  }
  return b;
}

AgentConfig small_agent(int episodes) {
  AgentConfig a;
  a.hidden = {16, 8};
  a.episodes = episodes;
  a.batch_size = 8;
  a.eval_episodes = 2;
  return a;
}

}  // namespace

TEST_SUITE("ddpg") {

TEST_CASE("exploration noise") {
  Rng rng = make_stream(1, Stream::Agent);
  const std::vector<int> sizes{3, 8, 2};
  const MlpParams actor = make_mlp(sizes, OutputActivation::Tanh, 20.0, rng);
  const std::vector<double> s{0.1, -0.4, 0.7};
  const Action mu = policy_action(actor, s);
  CHECK(act_with_noise(actor, s, 0.0, rng) == mu);

  Rng a = make_stream(5, Stream::Agent), b = make_stream(5, Stream::Agent);
  CHECK(act_with_noise(actor, s, 0.7, a) == act_with_noise(actor, s, 0.7, b));

  const double sigma = std::sqrt(0.6);
  double sq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const Action x = act_with_noise(actor, s, sigma, rng);
    sq += (x.vx - mu.vx) * (x.vx - mu.vx);
  }
  CHECK(std::sqrt(sq / n) == doctest::Approx(sigma).epsilon(0.02));
}

TEST_CASE("critic targets") {
  Rng rng = make_stream(2, Stream::Agent);
  const Batch b = random_batch(4, 5, rng, 20.0);
  const std::vector<int> as{4, 6, 2}, cs{6, 6, 1};
  const MlpParams actor = make_mlp(as, OutputActivation::Tanh, 20.0, rng);
  const MlpParams critic = make_mlp(cs, OutputActivation::Identity, 1.0, rng);
  CHECK(critic_targets(b, critic, actor, 0.0, 20.0) == b.rewards);
  const MlpParams zero = zero_mlp(cs, OutputActivation::Identity, 1.0);
  CHECK(critic_targets(b, zero, actor, 0.95, 20.0) == b.rewards);

  // one transition by hand: every transition bootstraps
  Batch one{b.states.leftCols(1), b.actions.leftCols(1), b.rewards.head(1), b.next_states.leftCols(1)};
  const std::vector<double> s2(one.next_states.data(), one.next_states.data() + 4);
  const Action a2 = policy_action(actor, s2);
  std::vector<double> ci = s2;
  ci.push_back(a2.vx / 20.0);
  ci.push_back(a2.vy / 20.0);
  const double q = forward(critic, ci)[0];
  CHECK(critic_targets(one, critic, actor, 0.95, 20.0)(0) == doctest::Approx(one.rewards(0) + 0.95 * q).epsilon(1e-14));
}

TEST_CASE("critic loss edge cases") {
  Rng rng = make_stream(3, Stream::Agent);
  const std::vector<int> cs{6, 5, 1};
  const MlpParams critic = make_mlp(cs, OutputActivation::Identity, 1.0, rng);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(6, 7);
  const Eigen::VectorXd y = forward_batch(critic, x).row(0).transpose();
  MlpGradients g;
  CHECK(critic_loss(critic, x, y, &g) == 0.0);
  CHECK(g.squared_norm() == 0.0);

  const std::vector<int> one{1, 1};
  MlpParams w = zero_mlp(one, OutputActivation::Identity, 1.0);
  w.layers[0].bias(0) = 1.0;
  MlpGradients gw;
  const Eigen::MatrixXd x1 = Eigen::MatrixXd::Zero(1, 1);
  CHECK(critic_loss(w, x1, Eigen::VectorXd::Zero(1), &gw) == 1.0);
  CHECK(gw.layers[0].bias(0) == 2.0);
}

TEST_CASE("critic gradient matches finite differences") {
  Rng rng = make_stream(4, Stream::Agent);
  for (int trial = 0; trial < 20; ++trial) {
    const int obs = 2 + trial % 4;
    const std::vector<int> cs{obs + 2, 1 + trial % 8, 1 + (trial * 3) % 8, 1};
    const MlpParams critic = make_mlp(cs, OutputActivation::Identity, 1.0, rng);
    const Batch b = random_batch(obs, 6, rng, 20.0);
    const Eigen::MatrixXd x = critic_inputs(b.states, b.actions, 20.0);
    MlpGradients g;
    critic_loss(critic, x, b.rewards, &g);
    const double err = oracle::max_relative_error(
        critic, g, [&](const MlpParams& n) { return oracle::critic_loss_ld(n, x, b.rewards); });
    CHECK(err < 1e-4);
  }
}

TEST_CASE("actor gradient matches finite differences") {
  Rng rng = make_stream(5, Stream::Agent);
  for (int trial = 0; trial < 20; ++trial) {
    const int obs = 2 + trial % 4;
    const std::vector<int> as{obs, 1 + trial % 8, 2 + (trial * 5) % 7, 2};
    const std::vector<int> cs{obs + 2, 1 + (trial * 7) % 8, 1};
    const MlpParams actor = make_mlp(as, OutputActivation::Tanh, 20.0, rng);
    const MlpParams critic = make_mlp(cs, OutputActivation::Identity, 1.0, rng);
    const Batch b = random_batch(obs, 6, rng, 20.0);
    MlpGradients g;
    actor_objective(actor, critic, b.states, 20.0, &g);
    const double err = oracle::max_relative_error(actor, g, [&](const MlpParams& n) {
      return -oracle::actor_objective_ld(n, critic, b.states, 20.0);
    });
    CHECK(err < 1e-4);
  }
}

TEST_CASE("actor gradient by hand for Q = a") {
  const std::vector<int> as{1, 2}, cs{3, 1};
  MlpParams actor = zero_mlp(as, OutputActivation::Tanh, 20.0);
  const double w = 0.7;
  actor.layers[0].weight(0, 0) = w;
  MlpParams critic = zero_mlp(cs, OutputActivation::Identity, 1.0);
  critic.layers[0].weight(0, 1) = 20.0;  // Q = a_x, the action enters divided by 20
  Eigen::MatrixXd states(1, 4);
  states << 0.3, -1.2, 0.8, 2.0;
  MlpGradients g;
  actor_objective(actor, critic, states, 20.0, &g);
  double expected = 0.0;
  for (int j = 0; j < 4; ++j) {
    const double t = std::tanh(w * states(0, j));
    expected += 20.0 * (1.0 - t * t) * states(0, j);
  }
  expected /= 4.0;
  CHECK(-g.layers[0].weight(0, 0) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("critic blind to the action leaves the actor unchanged") {
  Rng rng = make_stream(6, Stream::Agent);
  const std::vector<int> as{3, 5, 2}, cs{5, 4, 1};
  MlpParams actor = make_mlp(as, OutputActivation::Tanh, 20.0, rng);
  MlpParams critic = make_mlp(cs, OutputActivation::Identity, 1.0, rng);
  critic.layers[0].weight.rightCols(2).setZero();
  AdamState adam = make_adam(actor, AdamConfig{});
  const Batch b = random_batch(3, 5, rng, 20.0);
  MlpGradients g;
  actor_objective(actor, critic, b.states, 20.0, &g);
  CHECK(g.squared_norm() == 0.0);
  const MlpParams before = actor;
  actor_update(actor, adam, critic, b, 20.0, 0.0);
  for (std::size_t l = 0; l < actor.layers.size(); ++l) CHECK(actor.layers[l].weight == before.layers[l].weight);
}

TEST_CASE("updates reject non-finite values") {
  Rng rng = make_stream(7, Stream::Agent);
  const std::vector<int> cs{5, 4, 1};
  MlpParams critic = make_mlp(cs, OutputActivation::Identity, 1.0, rng);
  AdamState adam = make_adam(critic, AdamConfig{});
  Batch b = random_batch(3, 4, rng, 20.0);
  Eigen::VectorXd y = b.rewards;
  y(1) = std::nan("");
  CHECK_THROWS_AS(critic_update(critic, adam, b, y, 20.0, 0.0), TrainingFault);
}

TEST_CASE("replay buffer is a bounded ring") {
  ReplayBuffer buf(8000);
  for (int i = 0; i < 8001; ++i) buf.push(Transition{{double(i)}, Action{}, double(i), {0.0}});
  CHECK(buf.size() == 8000);
  CHECK(buf.at(0).reward == 1.0);
  CHECK(buf.at(7999).reward == 8000.0);
  Rng rng = make_stream(1, Stream::Agent);
  for (const Transition* t : buf.sample(70, rng)) CHECK(t->reward >= 1.0);
}

TEST_CASE("no updates before the buffer holds a batch") {
  EnvConfig env;
  AgentConfig agent;
  agent.episodes = 1;
  const TrainResult r = train(env, agent, 1);
  CHECK(r.log.episodes.size() == 1);
  CHECK(r.log.gradient_updates == 0);
}

TEST_CASE("training is deterministic and the noise decays per step") {
  EnvConfig env;
  const AgentConfig agent = small_agent(12);
  Trainer a(env, agent, 3), b(env, agent, 3);
  a.run_to_completion();
  b.run_to_completion();
  CHECK(a.log().episodes == b.log().episodes);
  CHECK(a.log().gradient_updates == 120 - 7);
  CHECK(a.noise_std() == doctest::Approx(std::sqrt(0.6) * std::pow(0.999, 120)).epsilon(1e-12));
  CHECK(a.networks().actor.all_finite());
  CHECK(a.networks().critic.all_finite());
  for (const auto& e : a.log().episodes) CHECK(e.episode >= 1);
}

TEST_CASE("zero learning rate freezes both networks") {
  EnvConfig env;
  AgentConfig agent = small_agent(3);
  agent.adam.learning_rate = 0.0;
  Trainer t(env, agent, 4);
  const DdpgNetworks before = t.networks();
  t.run_to_completion();
  CHECK(t.log().gradient_updates > 0);
  for (std::size_t l = 0; l < before.actor.layers.size(); ++l)
    CHECK(t.networks().actor.layers[l].weight == before.actor.layers[l].weight);
  for (std::size_t l = 0; l < before.critic.layers.size(); ++l)
    CHECK(t.networks().critic.layers[l].weight == before.critic.layers[l].weight);
}

TEST_CASE("targets start as copies of the online networks") {
  Rng rng = make_stream(8, Stream::Agent);
  const DdpgNetworks n = make_networks(15, 20.0, AgentConfig{}, rng);
  for (std::size_t l = 0; l < n.actor.layers.size(); ++l) {
    CHECK(n.actor.layers[l].weight == n.actor_target.layers[l].weight);
    CHECK(n.critic.layers[l].weight == n.critic_target.layers[l].weight);
  }
  CHECK(n.actor.sizes() == std::vector<int>{15, 300, 100, 100, 2});
  CHECK(n.critic.sizes() == std::vector<int>{17, 300, 100, 100, 1});
}

TEST_CASE("evaluation of a zero actor hovers") {
  EnvConfig env;
  const Environment e(env);
  AgentConfig agent;
  const std::vector<int> as{e.observation_size(), 300, 100, 100, 2};
  const MlpParams actor = zero_mlp(as, OutputActivation::Tanh, env.v_max);
  Rng rng = make_stream(1, Stream::Evaluation);
  const EvaluationMetrics m = evaluate_policy(actor, e, 1, rng);
  REQUIRE(m.episodes.size() == 1);
  for (const auto& rec : m.episodes[0]) CHECK(rec.position == env.layout.helper_init);
  CHECK(m.mean_sum_rate == m.episode_sum_rates[0]);
  CHECK(m.std_sum_rate == 0.0);
}

TEST_CASE("forced-mode evaluation never beats hybrid evaluation") {
  EnvConfig env;
  const Environment hybrid(env);
  for (Mode m : {Mode::Jam, Mode::Relay}) {
    EnvConfig fc = env;
    fc.forced_mode = m;
    const Environment forced(fc);
    Rng r1 = make_stream(2, Stream::Evaluation), r2 = make_stream(2, Stream::Evaluation);
    // Fixed actions so both rollouts share trajectory and fading.
    const Policy p = [](const EnvState&, std::span<const double>) { return Action{9, 11}; };
    const EvaluationMetrics h = evaluate_policy(p, hybrid, 3, r1);
    const EvaluationMetrics f = evaluate_policy(p, forced, 3, r2);
    for (std::size_t e = 0; e < 3; ++e)
      for (std::size_t t = 0; t < h.episodes[e].size(); ++t)
        CHECK(h.episodes[e][t].step.reward >= f.episodes[e][t].step.reward);
  }
}

}
