#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hybridsec/config.hpp"
#include "hybridsec/errors.hpp"
#include "hybridsec/harness.hpp"

namespace fs = std::filesystem;
using namespace hybridsec;

namespace {

struct CommonOptions {
  std::string config;
  std::vector<std::uint64_t> seeds;
  std::optional<int> episodes;
  std::string scheme;
  std::string out;
  std::optional<int> jobs;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_scheme) {
  cmd->add_option("--config", o.config, "Configuration file (key = value)")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seeds, "Seed; repeat for several")->expected(1, -1);
  cmd->add_option("--episodes", o.episodes, "Training episodes")->check(CLI::PositiveNumber);
  if (with_scheme) cmd->add_option("--scheme", o.scheme, "Proposed, Re-OT, Ja-OT, Re-LT or Ja-LT");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--jobs", o.jobs, "Concurrent runs")->check(CLI::PositiveNumber);
}

RunConfig build_config(const CommonOptions& o) {
  RunConfig config = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (!o.seeds.empty()) config.seeds = o.seeds;
  if (o.episodes) config.agent.episodes = *o.episodes;
  if (!o.scheme.empty()) {
    const auto scheme = parse_scheme(o.scheme);
    if (!scheme) throw ConfigError("unknown scheme '" + o.scheme + "'", "scheme");
    config.scheme = *scheme;
  }
  if (!o.out.empty()) config.output = o.out;
  if (o.jobs) config.jobs = *o.jobs;
  validate_run_config(config);
  return config;
}

void report(const std::vector<RunRecord>& records) {
  for (const auto& r : records)
    std::cout << to_string(r.scheme) << " N=" << r.horizon << " seed=" << r.seed
              << " mean_sum_rate=" << r.mean_sum_rate << " std=" << r.std_sum_rate << "  "
              << r.directory.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Helper-UAV secure offloading simulator and DDPG trainer"};
  app.require_subcommand(1);

  CommonOptions train_opts;
  std::string resume;
  auto* train = app.add_subcommand("train", "Train a scheme and evaluate it");
  add_common(train, train_opts, true);
  train->add_option("--resume", resume, "Continue from a checkpoint")->check(CLI::ExistingFile);

  CommonOptions eval_opts;
  std::string checkpoint;
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a checkpointed actor without noise");
  add_common(evaluate, eval_opts, true);
  evaluate->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();

  CommonOptions base_opts;
  auto* baseline = app.add_subcommand("baseline", "Run baselines (all four unless --scheme)");
  add_common(baseline, base_opts, true);

  CommonOptions sweep_opts;
  std::vector<int> horizons;
  auto* sweep = app.add_subcommand("sweep", "All schemes over mission horizons on the two-cluster layout");
  add_common(sweep, sweep_opts, false);
  sweep->add_option("--horizons", horizons, "Horizons in seconds")->expected(1, -1);

  std::string metrics_dir;
  std::string plot_out;
  auto* plot = app.add_subcommand("plot-data", "Turn run outputs into figure CSVs");
  plot->add_option("--in", metrics_dir, "Directory written by train/baseline/sweep")->required();
  plot->add_option("--out", plot_out, "Directory for the figure CSVs")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      const RunConfig config = build_config(train_opts);
      if (resume.empty())
        report(run_train(config));
      else
        report({run_resume(config, resume)});
    } else if (evaluate->parsed()) {
      report(run_evaluate(build_config(eval_opts), checkpoint));
    } else if (baseline->parsed()) {
      const RunConfig config = build_config(base_opts);
      std::vector<Scheme> schemes{Scheme::ReOT, Scheme::JaOT, Scheme::ReLT, Scheme::JaLT};
      if (!base_opts.scheme.empty()) {
        if (config.scheme == Scheme::Proposed)
          throw ConfigError("baseline expects Re-OT, Ja-OT, Re-LT or Ja-LT", "scheme");
        schemes = {config.scheme};
      }
      report(run_schemes(config, schemes));
    } else if (sweep->parsed()) {
      const RunConfig config = build_config(sweep_opts);
      report(run_sweep(config, horizons.empty() ? config.horizons : horizons));
    } else if (plot->parsed()) {
      emit_plot_data(metrics_dir, plot_out);
      std::cout << "wrote reward_curves.csv, trajectory_segments.csv, sumrate_vs_horizon.csv to " << plot_out
                << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "hybridsec: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "hybridsec: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "hybridsec: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
