#include "hybridsec/baselines.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "hybridsec/errors.hpp"

namespace hybridsec {

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::ReLT: return "Re-LT";
    case Scheme::JaLT: return "Ja-LT";
    case Scheme::ReOT: return "Re-OT";
    case Scheme::JaOT: return "Ja-OT";
    case Scheme::Proposed: return "Proposed";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(std::string_view text) {
  std::string key;
  for (char c : text)
    if (c != '-' && c != '_') key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (key == "relt") return Scheme::ReLT;
  if (key == "jalt") return Scheme::JaLT;
  if (key == "reot") return Scheme::ReOT;
  if (key == "jaot") return Scheme::JaOT;
  if (key == "proposed" || key == "hybrid") return Scheme::Proposed;
  return std::nullopt;
}

bool is_linear(Scheme scheme) { return scheme == Scheme::ReLT || scheme == Scheme::JaLT; }

bool is_trained(Scheme scheme) { return !is_linear(scheme); }

std::optional<Mode> scheme_mode(Scheme scheme) {
  switch (scheme) {
    case Scheme::ReLT:
    case Scheme::ReOT: return Mode::Relay;
    case Scheme::JaLT:
    case Scheme::JaOT: return Mode::Jam;
    case Scheme::Proposed: return std::nullopt;
  }
  return std::nullopt;
}

Position linear_target(Scheme scheme, const ScenarioLayout& layout) {
  if (scheme == Scheme::JaLT) return layout.eve;
  if (scheme != Scheme::ReLT) throw ContractViolation("linear_target: not a linear scheme");
  if (layout.ues.empty()) throw ContractViolation("linear_target: layout has no UEs");
  Position centroid;
  for (const auto& ue : layout.ues) {
    centroid.x += ue.x;
    centroid.y += ue.y;
  }
  centroid.x /= static_cast<double>(layout.ues.size());
  centroid.y /= static_cast<double>(layout.ues.size());
  return {0.5 * (layout.legit.x + centroid.x), 0.5 * (layout.legit.y + centroid.y)};
}

Action linear_trajectory_action(Scheme scheme, const EnvState& state, const ScenarioLayout& layout,
                                int slots, double slot_seconds, double v_max) {
  if (state.slot >= slots) throw ContractViolation("linear_trajectory_action: episode finished");
  const Position target = linear_target(scheme, layout);
  const double remaining = static_cast<double>(slots - state.slot) * slot_seconds;
  const Action v{(target.x - state.helper.x) / remaining, (target.y - state.helper.y) / remaining};
  return project_action(v, v_max);
}

EnvConfig scheme_env_config(Scheme scheme, EnvConfig base) {
  base.forced_mode = scheme_mode(scheme);
  return base;
}

SchemeMetrics run_fixed_mode(Scheme scheme, const EnvConfig& env_config,
                             const AgentConfig& agent_config, std::uint64_t seed,
                             const TrainerSink& sink) {
  if (scheme != Scheme::ReOT && scheme != Scheme::JaOT && scheme != Scheme::Proposed)
    throw ContractViolation("run_fixed_mode: scheme is not DDPG-trained");
  EnvConfig cfg = scheme_env_config(scheme, env_config);
  cfg.seed = seed;
  Trainer trainer(cfg, agent_config, seed);
  trainer.run_to_completion();
  if (sink) sink(trainer);

  SchemeMetrics m;
  m.scheme = scheme;
  m.seed = seed;
  m.training = trainer.log();
  m.actor = trainer.networks().actor;
  Rng eval_rng = make_stream(seed, Stream::Evaluation);
  m.evaluation =
      evaluate_policy(*m.actor, trainer.environment(), agent_config.eval_episodes, eval_rng);
  return m;
}

SchemeMetrics run_scheme(Scheme scheme, const EnvConfig& env_config,
                         const AgentConfig& agent_config, std::uint64_t seed,
                         const TrainerSink& sink) {
  if (is_trained(scheme)) return run_fixed_mode(scheme, env_config, agent_config, seed, sink);

  EnvConfig cfg = scheme_env_config(scheme, env_config);
  cfg.seed = seed;
  const Environment env(cfg);
  const ScenarioLayout layout = env.layout();
  const int slots = cfg.slots;
  const double dt = cfg.energy.slot;
  const double v_max = cfg.v_max;
  const Policy policy = [=](const EnvState& state, std::span<const double>) {
    return linear_trajectory_action(scheme, state, layout, slots, dt, v_max);
  };
  SchemeMetrics m;
  m.scheme = scheme;
  m.seed = seed;
  Rng eval_rng = make_stream(seed, Stream::Evaluation);
  m.evaluation = evaluate_policy(policy, env, agent_config.eval_episodes, eval_rng);
  return m;
}

}  // namespace hybridsec
