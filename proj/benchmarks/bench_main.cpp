#include <benchmark/benchmark.h>

#include "hybridsec/ddpg.hpp"
#include "hybridsec/environment.hpp"
#include "hybridsec/replay_buffer.hpp"

using namespace hybridsec;

static void BM_EnvironmentStep(benchmark::State& state) {
  EnvConfig cfg;
  cfg.num_ues = static_cast<int>(state.range(0));
  const Environment env(cfg);
  Rng rng = make_stream(1, Stream::Environment);
  EnvState s = env.reset();
  for (auto _ : state) {
    StepResult r = env.step(s, Action{5.0, 5.0}, rng);
    s = r.next_state.slot >= cfg.slots ? env.reset() : std::move(r.next_state);
    benchmark::DoNotOptimize(r.reward);
  }
}
BENCHMARK(BM_EnvironmentStep)->Arg(10)->Arg(40);

static void BM_ActorForward(benchmark::State& state) {
  AgentConfig agent;
  Rng rng = make_stream(1, Stream::Agent);
  const DdpgNetworks nets = make_networks(15, 20.0, agent, rng);
  const std::vector<double> obs(15, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(forward(nets.actor, obs));
}
BENCHMARK(BM_ActorForward);

static void BM_DdpgUpdate(benchmark::State& state) {
  EnvConfig env_cfg;
  AgentConfig agent;
  const Environment env(env_cfg);
  Rng rng = make_stream(1, Stream::Agent);
  DdpgNetworks nets = make_networks(env.observation_size(), env_cfg.v_max, agent, rng);
  ReplayBuffer buffer(static_cast<std::size_t>(agent.buffer_capacity));
  Rng env_rng = make_stream(1, Stream::Environment);
  EnvState s = env.reset();
  for (int i = 0; i < 500; ++i) {
    const auto obs = env.observe(s);
    const Action a{uniform_real(rng, -20.0, 20.0), uniform_real(rng, -20.0, 20.0)};
    StepResult r = env.step(s, a, env_rng);
    const EnvState next = r.next_state.slot >= env_cfg.slots ? env.reset() : r.next_state;
    buffer.push({obs, a, r.reward, env.observe(r.next_state)});
    s = next;
  }
  for (auto _ : state) {
    const auto sampled = buffer.sample(static_cast<std::size_t>(agent.batch_size), rng);
    const Batch batch = make_batch(sampled);
    const Eigen::VectorXd y =
        critic_targets(batch, nets.critic_target, nets.actor_target, agent.gamma, env_cfg.v_max);
    benchmark::DoNotOptimize(
        critic_update(nets.critic, nets.critic_adam, batch, y, env_cfg.v_max, agent.grad_clip));
    benchmark::DoNotOptimize(
        actor_update(nets.actor, nets.actor_adam, nets.critic, batch, env_cfg.v_max, agent.grad_clip));
    soft_update(nets.actor_target, nets.actor, agent.tau);
    soft_update(nets.critic_target, nets.critic, agent.tau);
  }
}
BENCHMARK(BM_DdpgUpdate)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
