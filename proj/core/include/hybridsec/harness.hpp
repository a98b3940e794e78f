#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hybridsec/baselines.hpp"
#include "hybridsec/config.hpp"

namespace hybridsec {

// CSV headers. Bump the schema version when any of them changes.
inline constexpr int kCsvSchemaVersion = 1;
inline constexpr std::string_view kRewardsHeader =
    "episode,discounted_reward,undiscounted_reward,mean_sum_rate,noise_std";
inline constexpr std::string_view kTrajectoryHeader =
    "episode,slot,x,y,mode,c_relay,c_jam,reward,offloaders,vx,vy,off_map";
inline constexpr std::string_view kDecisionsHeader = "episode,slot,ue,offload,task_bits,cycles_per_bit";
inline constexpr std::string_view kRunSummaryHeader =
    "scheme,horizon,seed,mean_sum_rate,std_sum_rate,eval_episodes";
inline constexpr std::string_view kSummaryHeader =
    "scheme,horizon,seeds,mean_sum_rate,std_sum_rate,median_sum_rate";
inline constexpr std::string_view kRewardCurvesHeader =
    "scheme,horizon,seed,episode,discounted_reward,undiscounted_reward";
inline constexpr std::string_view kSegmentsHeader =
    "scheme,horizon,seed,slot,x_from,y_from,x_to,y_to,mode";
inline constexpr std::string_view kSumRateHeader = "scheme,horizon,mean_sum_rate,std_sum_rate,seeds";

// Files written into every run directory.
inline constexpr std::string_view kConfigFile = "config.txt";
inline constexpr std::string_view kLayoutFile = "layout.scn";
inline constexpr std::string_view kRewardsFile = "rewards.csv";
inline constexpr std::string_view kTrajectoryFile = "trajectory.csv";
inline constexpr std::string_view kDecisionsFile = "decisions.csv";
inline constexpr std::string_view kRunSummaryFile = "run_summary.csv";
inline constexpr std::string_view kCheckpointFile = "checkpoint.bin";
inline constexpr std::string_view kSummaryFile = "summary.csv";

// Environment for one seeded run: scenario file (if any) applied, seed set.
EnvConfig resolve_env(const RunConfig& config, std::uint64_t seed);

// "re-ot", "proposed", ... used for directory names.
std::string scheme_slug(Scheme scheme);

struct RunRecord {
  Scheme scheme;
  int horizon;
  std::uint64_t seed;
  double mean_sum_rate;
  double std_sum_rate;
  std::filesystem::path directory;
};

// Trains/evaluates `config.scheme` for every seed into
// <output>/<scheme>/seed_<n>/ and writes <output>/summary.csv. Each run
// directory is built under a temporary name and renamed into place, so a
// failed run leaves nothing behind.
std::vector<RunRecord> run_train(const RunConfig& config);

// Noise-free evaluation of a checkpointed actor under config.scheme's
// environment, for every seed.
std::vector<RunRecord> run_evaluate(const RunConfig& config,
                                    const std::filesystem::path& checkpoint);

// Continues training from a checkpoint written for config.scheme and the
// single seed in config.seeds, then writes the run directory as run_train.
RunRecord run_resume(const RunConfig& config, const std::filesystem::path& checkpoint);

// Runs each of `schemes` in turn (see run_train) into one output tree.
std::vector<RunRecord> run_schemes(const RunConfig& config, const std::vector<Scheme>& schemes);

// All five schemes at every horizon on the two-cluster layout, into
// <output>/N<h>/<scheme>/seed_<n>/, aggregated in <output>/summary.csv.
std::vector<RunRecord> run_sweep(const RunConfig& config, const std::vector<int>& horizons);

// Scans `metrics_dir` for run directories and writes reward_curves.csv,
// trajectory_segments.csv and sumrate_vs_horizon.csv into `out_dir`. All inputs are
// checked before anything is written.
void emit_plot_data(const std::filesystem::path& metrics_dir, const std::filesystem::path& out_dir);

}  // namespace hybridsec
