#pragma once

#include <optional>
#include <string_view>

#include "hybridsec/ddpg.hpp"
#include "hybridsec/environment.hpp"

namespace hybridsec {

enum class Scheme : std::uint8_t { ReLT, JaLT, ReOT, JaOT, Proposed };

inline constexpr std::array<Scheme, 5> kAllSchemes{Scheme::Proposed, Scheme::ReOT, Scheme::JaOT,
                                                   Scheme::ReLT, Scheme::JaLT};

std::string_view to_string(Scheme scheme);
// Accepts "proposed", "re-ot", "reot", "Re-OT", ...
std::optional<Scheme> parse_scheme(std::string_view text);

bool is_linear(Scheme scheme);
bool is_trained(Scheme scheme);
// Relay for Re-*, Jam for Ja-*, empty for the hybrid scheme.
std::optional<Mode> scheme_mode(Scheme scheme);

// Re-LT heads for the midpoint of the legitimate UAV and the UE centroid;
// Ja-LT for the eavesdropper's horizontal position.
Position linear_target(Scheme scheme, const ScenarioLayout& layout);

// Constant-velocity leg that arrives at the target at the last slot, capped
// at v_max along the same direction.
Action linear_trajectory_action(Scheme scheme, const EnvState& state, const ScenarioLayout& layout,
                                int slots, double slot_seconds, double v_max);

// The environment configuration a scheme is trained and evaluated in.
EnvConfig scheme_env_config(Scheme scheme, EnvConfig base);

struct SchemeMetrics {
  Scheme scheme = Scheme::Proposed;
  std::uint64_t seed = 0;
  TrainingLog training;  // empty for linear schemes
  EvaluationMetrics evaluation;
  std::optional<MlpParams> actor;
};

// Hook for persisting the trainer before it is discarded (checkpoints).
using TrainerSink = std::function<void(const Trainer&)>;

SchemeMetrics run_fixed_mode(Scheme scheme, const EnvConfig& env_config,
                             const AgentConfig& agent_config, std::uint64_t seed,
                             const TrainerSink& sink = {});

SchemeMetrics run_scheme(Scheme scheme, const EnvConfig& env_config,
                         const AgentConfig& agent_config, std::uint64_t seed,
                         const TrainerSink& sink = {});

}  // namespace hybridsec
