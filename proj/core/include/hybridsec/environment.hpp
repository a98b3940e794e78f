#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hybridsec/compute_energy.hpp"
#include "hybridsec/geometry_channel.hpp"
#include "hybridsec/link_rates.hpp"
#include "hybridsec/rng.hpp"

namespace hybridsec {

// Uniform task draw ranges. Sizes are given in KB and converted with bits_per_kb.
struct TaskDistribution {
  double kb_min = 20.0;
  double kb_max = 30.0;
  double bits_per_kb = 8000.0;
  double cycles_min = 1000.0;
  double cycles_max = 1200.0;

  friend bool operator==(const TaskDistribution&, const TaskDistribution&) = default;
};

struct EnvConfig {
  ScenarioLayout layout;
  int num_ues = 10;  // used when layout.ues is empty
  ChannelParams channel;
  PowerConfig power;
  EnergyParams energy;
  TaskDistribution tasks;
  int slots = 10;
  double v_max = 20.0;
  double epsilon = 0.1;
  double off_map_penalty = 0.2;
  std::uint64_t seed = 1;
  // Set for the fixed-mode baselines; the hybrid environment leaves it empty.
  std::optional<Mode> forced_mode;

  friend bool operator==(const EnvConfig&, const EnvConfig&) = default;
};

void validate_env_config(const EnvConfig& config);

struct EnvState {
  Position helper;
  Mode prev_mode = Mode::Jam;
  // helper->UE_1..U, helper->legit, helper->eve
  std::vector<double> dists;
  int slot = 0;
  // Offloads of the previous slot; the legitimate UAV computes them now.
  OffloadDecision prev_offload;
  std::vector<TaskSpec> prev_tasks;

  friend bool operator==(const EnvState&, const EnvState&) = default;
};

// All randomness consumed by one slot.
struct SlotDraw {
  std::vector<TaskSpec> tasks;
  std::vector<FadingSample> ue_legit;
  std::vector<FadingSample> ue_helper;
  std::vector<FadingSample> ue_eve;
  FadingSample helper_legit;
  FadingSample helper_eve;
};

struct ModeOutcome {
  Mode mode = Mode::Jam;
  OffloadDecision offload;
  std::vector<double> secrecy;   // per-UE [R^d - R^e]^+
  std::vector<double> margin;    // per-UE R^d - R^e, unclamped
  double sum_rate = 0.0;
};

struct SlotEnergies {
  std::vector<double> ue;
  double legit = 0.0;
  double helper_transmit = 0.0;
  double helper_flight = 0.0;
};

struct StepDiagnostics {
  double c_relay = 0.0;
  double c_jam = 0.0;
  Mode chosen_mode = Mode::Jam;
  OffloadDecision offload;
  bool off_map = false;
  Action executed;  // after projection and energy scaling
  SlotEnergies energies;
  std::vector<TaskSpec> tasks;
  std::array<ModeOutcome, 2> outcomes;  // indexed by Mode value
};

struct StepResult {
  double reward = 0.0;
  EnvState next_state;
  StepDiagnostics diagnostics;
};

// Euclidean projection of the velocity onto the disc of radius v_max.
Action project_action(Action raw, double v_max);

struct MoveResult {
  Position position;
  bool off_map = false;
};

// A move that would leave the map square reverts to the previous position.
MoveResult apply_action(Position current, Action velocity, double slot, double map_side);

// Per-UE gains for a helper position under one fading draw.
std::vector<UeLinkGains> link_gains(const ScenarioLayout& layout, Position helper,
                                    const ChannelParams& channel, const SlotDraw& draw);

// Offloading relaxation: margin above epsilon, coverage, and UE energy. A UE
// whose local branch breaks its budget offloads whenever coverage and the
// offload energy allow it.
OffloadDecision offloading_decision(Mode mode, Position helper, std::span<const UeLinkGains> gains,
                                    const EnvConfig& config, const ScenarioLayout& layout,
                                    std::span<const TaskSpec> tasks);

bool in_coverage(Mode mode, Position ue, Position helper, const ScenarioLayout& layout);

class Environment {
 public:
  explicit Environment(EnvConfig config);

  const EnvConfig& config() const { return config_; }
  const ScenarioLayout& layout() const { return layout_; }
  int num_ues() const { return static_cast<int>(layout_.ues.size()); }
  int observation_size() const { return num_ues() + 5; }

  EnvState reset() const;
  SlotDraw draw_slot(Rng& rng) const;
  StepResult step(const EnvState& state, Action raw_action, Rng& rng) const;
  StepResult step_with(const EnvState& state, Action raw_action, const SlotDraw& draw) const;
  ModeOutcome evaluate_mode(Mode mode, Position helper, std::span<const UeLinkGains> gains,
                            std::span<const TaskSpec> tasks) const;
  std::vector<double> observe(const EnvState& state) const;
  std::vector<double> distances(Position helper) const;

 private:
  EnvConfig config_;
  ScenarioLayout layout_;
};

}  // namespace hybridsec
