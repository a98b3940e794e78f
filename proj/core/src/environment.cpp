#include "hybridsec/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hybridsec/errors.hpp"

namespace hybridsec {

void validate_env_config(const EnvConfig& c) {
  auto require = [](bool ok, const char* key, const char* what) {
    if (!ok) throw ConfigError(std::string(key) + " " + what, key);
  };
  require(c.slots >= 1, "slots", "must be at least 1");
  require(c.v_max > 0.0 && std::isfinite(c.v_max), "v_max", "must be positive");
  require(c.epsilon >= 0.0, "epsilon", "must be nonnegative");
  require(c.off_map_penalty >= 0.0, "r_om", "must be nonnegative");
  require(c.layout.ues.empty() ? c.num_ues >= 1 : true, "num_ues", "must be at least 1");
  require(c.channel.beta0 > 0.0, "beta0", "must be positive");
  require(c.channel.beta1 > 0.0, "beta1", "must be positive");
  require(c.channel.k_g2a >= 0.0, "k_g2a_db", "must give a nonnegative factor");
  require(c.channel.k_a2a >= 0.0, "k_a2a_db", "must give a nonnegative factor");
  require(c.channel.noise_power > 0.0, "noise_dbm", "must give positive noise power");
  require(c.channel.d_min > 0.0, "d_min", "must be positive");
  require(c.power.p_ue > 0.0, "p_ue", "must be positive");
  require(c.power.p_relay > 0.0, "p_relay", "must be positive");
  require(c.power.p_jam > 0.0, "p_jam", "must be positive");
  require(c.power.noise_power == c.channel.noise_power, "noise_dbm",
          "must agree between power and channel settings");
  require(c.energy.kappa > 0.0, "kappa", "must be positive");
  require(c.energy.mass > 0.0, "mass", "must be positive");
  require(c.energy.slot > 0.0, "slot", "must be positive");
  require(c.energy.ue_budget > 0.0, "e_ue", "must be positive");
  require(c.energy.legit_budget > 0.0, "e_legit", "must be positive");
  require(c.energy.helper_budget > 0.0, "e_helper", "must be positive");
  require(c.tasks.kb_min > 0.0 && c.tasks.kb_max >= c.tasks.kb_min, "task_kb_max",
          "must satisfy 0 < task_kb_min <= task_kb_max");
  require(c.tasks.bits_per_kb > 0.0, "bits_per_kb", "must be positive");
  require(c.tasks.cycles_min > 0.0 && c.tasks.cycles_max >= c.tasks.cycles_min, "cycles_max",
          "must satisfy 0 < cycles_min <= cycles_max");
}

Action project_action(Action raw, double v_max) {
  const double speed = raw.speed();
  if (speed <= v_max) return raw;
  const double scale = v_max / speed;
  return {raw.vx * scale, raw.vy * scale};
}

MoveResult apply_action(Position current, Action velocity, double slot, double map_side) {
  const Position candidate{current.x + velocity.vx * slot, current.y + velocity.vy * slot};
  if (!inside_map(candidate, map_side)) return {current, true};
  return {candidate, false};
}

std::vector<UeLinkGains> link_gains(const ScenarioLayout& layout, Position helper,
                                    const ChannelParams& channel, const SlotDraw& draw) {
  const double h = layout.altitude;
  const double he = layout.eve_altitude;
  const double helper_legit = a2a_power_gain(helper, layout.legit, 0.0, channel, draw.helper_legit);
  const double helper_eve = a2a_power_gain(helper, layout.eve, h - he, channel, draw.helper_eve);
  std::vector<UeLinkGains> gains(layout.ues.size());
  for (std::size_t u = 0; u < gains.size(); ++u) {
    const Position ue = layout.ues[u];
    gains[u].ue_legit = g2a_power_gain(ue, layout.legit, h, channel, draw.ue_legit[u]);
    gains[u].ue_helper = g2a_power_gain(ue, helper, h, channel, draw.ue_helper[u]);
    gains[u].ue_eve = g2a_power_gain(ue, layout.eve, he, channel, draw.ue_eve[u]);
    gains[u].helper_legit = helper_legit;
    gains[u].helper_eve = helper_eve;
  }
  return gains;
}

bool in_coverage(Mode mode, Position ue, Position helper, const ScenarioLayout& layout) {
  const bool legit_ok = horizontal_distance(ue, layout.legit) <= layout.coverage_radius;
  if (mode == Mode::Jam) return legit_ok;
  return legit_ok && horizontal_distance(ue, helper) <= layout.coverage_radius;
}

OffloadDecision offloading_decision(Mode mode, Position helper, std::span<const UeLinkGains> gains,
                                    const EnvConfig& config, const ScenarioLayout& layout,
                                    std::span<const TaskSpec> tasks) {
  const std::size_t n = layout.ues.size();
  if (gains.size() != n || tasks.size() != n)
    throw ContractViolation("offloading_decision: gains/tasks do not match the UE count");
  const int num_ues = static_cast<int>(n);
  OffloadDecision z(n, 0);
  for (std::size_t u = 0; u < n; ++u) {
    if (!in_coverage(mode, layout.ues[u], helper, layout)) continue;
    if (!check_ue_energy(true, mode, tasks[u], config.power, config.energy, num_ues)) continue;
    const double margin = rate_legitimate(mode, gains[u], config.power) -
                          rate_eavesdropper(mode, gains[u], config.power);
    const bool local_ok = check_ue_energy(false, mode, tasks[u], config.power, config.energy, num_ues);
    if (margin > config.epsilon || !local_ok) z[u] = 1;
  }
  return z;
}

Environment::Environment(EnvConfig config) : config_(std::move(config)), layout_(config_.layout) {
  validate_env_config(config_);
  if (layout_.ues.empty()) {
    Rng layout_rng = make_stream(config_.seed, Stream::Layout);
    layout_.ues = generate_ues(layout_.kind, layout_, config_.num_ues, layout_rng);
  }
  validate_layout(layout_);
}

std::vector<double> Environment::distances(Position helper) const {
  std::vector<double> d;
  d.reserve(layout_.ues.size() + 2);
  for (const auto& ue : layout_.ues) d.push_back(horizontal_distance(helper, ue));
  d.push_back(horizontal_distance(helper, layout_.legit));
  d.push_back(horizontal_distance(helper, layout_.eve));
  return d;
}

EnvState Environment::reset() const {
  EnvState s;
  s.helper = layout_.helper_init;
  s.prev_mode = Mode::Jam;
  s.dists = distances(s.helper);
  s.slot = 0;
  s.prev_offload.assign(layout_.ues.size(), 0);
  s.prev_tasks.assign(layout_.ues.size(), TaskSpec{});
  return s;
}

SlotDraw Environment::draw_slot(Rng& rng) const {
  const std::size_t n = layout_.ues.size();
  const TaskDistribution& t = config_.tasks;
  SlotDraw d;
  d.tasks.resize(n);
  for (auto& task : d.tasks) {
    task.bits = uniform_real(rng, t.kb_min, t.kb_max) * t.bits_per_kb;
    task.cycles_per_bit = uniform_real(rng, t.cycles_min, t.cycles_max);
  }
  d.ue_legit.resize(n);
  d.ue_helper.resize(n);
  d.ue_eve.resize(n);
  for (std::size_t u = 0; u < n; ++u) {
    d.ue_legit[u] = sample_fading(config_.channel.k_g2a, rng);
    d.ue_helper[u] = sample_fading(config_.channel.k_g2a, rng);
    d.ue_eve[u] = sample_fading(config_.channel.k_g2a, rng);
  }
  d.helper_legit = sample_fading(config_.channel.k_a2a, rng);
  d.helper_eve = sample_fading(config_.channel.k_a2a, rng);
  return d;
}

ModeOutcome Environment::evaluate_mode(Mode mode, Position helper,
                                       std::span<const UeLinkGains> gains,
                                       std::span<const TaskSpec> tasks) const {
  const std::size_t n = layout_.ues.size();
  const int num_ues = static_cast<int>(n);
  ModeOutcome out;
  out.mode = mode;
  out.offload = offloading_decision(mode, helper, gains, config_, layout_, tasks);
  out.secrecy.resize(n);
  out.margin.resize(n);
  for (std::size_t u = 0; u < n; ++u) {
    out.margin[u] = rate_legitimate(mode, gains[u], config_.power) -
                    rate_eavesdropper(mode, gains[u], config_.power);
    out.secrecy[u] = std::max(out.margin[u], 0.0);
  }

  // The load received now is computed by the legitimate UAV next slot; drop
  // the weakest offloaders until that computation fits its budget.
  while (!check_legit_energy(out.offload, tasks, config_.energy)) {
    std::size_t victim = n;
    for (std::size_t u = 0; u < n; ++u) {
      if (!out.offload[u]) continue;
      if (!check_ue_energy(false, mode, tasks[u], config_.power, config_.energy, num_ues)) continue;
      if (victim == n || out.secrecy[u] < out.secrecy[victim]) victim = u;
    }
    if (victim == n) break;
    out.offload[victim] = 0;
  }

  out.sum_rate = secrecy_sum_rate(mode, out.offload, gains, config_.power);
  return out;
}

StepResult Environment::step(const EnvState& state, Action raw_action, Rng& rng) const {
  if (state.slot >= config_.slots)
    throw ContractViolation("step: episode already finished");
  return step_with(state, raw_action, draw_slot(rng));
}

StepResult Environment::step_with(const EnvState& state, Action raw_action,
                                  const SlotDraw& draw) const {
  if (state.slot >= config_.slots)
    throw ContractViolation("step: episode already finished");
  if (!std::isfinite(raw_action.vx) || !std::isfinite(raw_action.vy))
    throw ContractViolation("step: action is not finite");
  const std::size_t n = layout_.ues.size();
  if (draw.tasks.size() != n || draw.ue_legit.size() != n || draw.ue_helper.size() != n ||
      draw.ue_eve.size() != n)
    throw ContractViolation("step: slot draw does not match the UE count");

  Action velocity = project_action(raw_action, config_.v_max);
  const double speed_cap = max_feasible_speed(config_.power, config_.energy);
  if (velocity.speed() > speed_cap) {
    // Slightly inside the cap so rounding cannot push the energy over budget.
    const double scale = speed_cap / velocity.speed() * (1.0 - 1e-12);
    velocity = {velocity.vx * scale, velocity.vy * scale};
  }
  const MoveResult move =
      apply_action(state.helper, velocity, config_.energy.slot, layout_.map_side);

  const auto gains = link_gains(layout_, move.position, config_.channel, draw);

  StepResult result;
  StepDiagnostics& diag = result.diagnostics;
  diag.outcomes[0] = evaluate_mode(Mode::Jam, move.position, gains, draw.tasks);
  diag.outcomes[1] = evaluate_mode(Mode::Relay, move.position, gains, draw.tasks);
  diag.c_jam = diag.outcomes[0].sum_rate;
  diag.c_relay = diag.outcomes[1].sum_rate;
  if (config_.forced_mode)
    diag.chosen_mode = *config_.forced_mode;
  else
    diag.chosen_mode = diag.c_relay > diag.c_jam ? Mode::Relay : Mode::Jam;  // ties go to jam
  const ModeOutcome& chosen = diag.outcomes[static_cast<std::size_t>(diag.chosen_mode)];
  diag.offload = chosen.offload;
  diag.off_map = move.off_map;
  diag.executed = velocity;
  diag.tasks = draw.tasks;

  const int num_ues = static_cast<int>(n);
  diag.energies.ue.resize(n);
  for (std::size_t u = 0; u < n; ++u)
    diag.energies.ue[u] = ue_energy(chosen.offload[u] != 0, diag.chosen_mode, draw.tasks[u],
                                    config_.power, config_.energy, num_ues);
  diag.energies.legit = computation_energy(
      legit_cpu_frequency(state.prev_offload, state.prev_tasks, config_.energy.slot),
      config_.energy.kappa, config_.energy.slot);
  diag.energies.helper_transmit =
      helper_transmit_energy(diag.chosen_mode, chosen.offload, config_.power, config_.energy.slot);
  diag.energies.helper_flight =
      helper_flight_energy(velocity, config_.energy.mass, config_.energy.slot);

  result.reward = chosen.sum_rate - (move.off_map ? config_.off_map_penalty : 0.0);

  EnvState& next = result.next_state;
  next.helper = move.position;
  next.prev_mode = diag.chosen_mode;
  next.dists = distances(move.position);
  next.slot = state.slot + 1;
  next.prev_offload = chosen.offload;
  next.prev_tasks = draw.tasks;
  return result;
}

std::vector<double> Environment::observe(const EnvState& state) const {
  const double half = 0.5 * layout_.map_side;
  std::vector<double> obs;
  obs.reserve(static_cast<std::size_t>(observation_size()));
  obs.push_back(state.helper.x / half);
  obs.push_back(state.helper.y / half);
  obs.push_back(state.prev_mode == Mode::Relay ? 1.0 : 0.0);
  for (double d : state.dists) obs.push_back(d / layout_.map_side);
  return obs;
}

}  // namespace hybridsec
