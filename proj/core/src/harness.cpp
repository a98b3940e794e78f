#include "hybridsec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "hybridsec/checkpoint.hpp"
#include "hybridsec/csv.hpp"
#include "hybridsec/errors.hpp"
#include "hybridsec/scenario_io.hpp"

namespace fs = std::filesystem;

namespace hybridsec {

namespace {

struct RunJob {
  Scheme scheme = Scheme::Proposed;
  int horizon = 0;
  std::uint64_t seed = 0;
  EnvConfig env;
  AgentConfig agent;
  fs::path directory;
  // Set for evaluate: actor comes from here instead of training.
  const MlpParams* actor = nullptr;
  // Set for resume: training continues from this checkpoint.
  fs::path resume;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

int horizon_of(const EnvConfig& env) {
  return static_cast<int>(std::lround(env.slots * env.energy.slot));
}

void write_rewards(const fs::path& path, const SchemeMetrics& m, double gamma) {
  CsvWriter csv(path, kRewardsHeader);
  if (!m.training.episodes.empty()) {
    for (const auto& e : m.training.episodes) {
      csv.field(e.episode).field(e.discounted_return).field(e.undiscounted_return)
          .field(e.mean_sum_rate).field(e.noise_std);
      csv.end_row();
    }
  } else {
    // No learning curve: one row per evaluation episode, noise-free.
    for (std::size_t k = 0; k < m.evaluation.episodes.size(); ++k) {
      const auto& slots = m.evaluation.episodes[k];
      double discounted = 0.0;
      double weight = 1.0;
      for (const auto& rec : slots) {
        discounted += weight * rec.step.reward;
        weight *= gamma;
      }
      const double per_slot =
          slots.empty() ? 0.0 : m.evaluation.episode_sum_rates[k] / static_cast<double>(slots.size());
      csv.field(static_cast<int>(k + 1)).field(discounted).field(m.evaluation.episode_rewards[k])
          .field(per_slot).field(0.0);
      csv.end_row();
    }
  }
  csv.close();
}

void write_trajectory(const fs::path& traj_path, const fs::path& decisions_path,
                      const EvaluationMetrics& eval) {
  CsvWriter traj(traj_path, kTrajectoryHeader);
  CsvWriter dec(decisions_path, kDecisionsHeader);
  for (std::size_t k = 0; k < eval.episodes.size(); ++k) {
    const int episode = static_cast<int>(k + 1);
    for (const auto& rec : eval.episodes[k]) {
      const auto& d = rec.step.diagnostics;
      int offloaders = 0;
      for (auto z : d.offload) offloaders += z;
      traj.field(episode).field(rec.slot).field(rec.position.x).field(rec.position.y)
          .field(to_string(d.chosen_mode)).field(d.c_relay).field(d.c_jam).field(rec.step.reward)
          .field(offloaders).field(d.executed.vx).field(d.executed.vy).field(d.off_map ? 1 : 0);
      traj.end_row();
      for (std::size_t u = 0; u < d.offload.size(); ++u) {
        dec.field(episode).field(rec.slot).field(static_cast<int>(u + 1))
            .field(static_cast<int>(d.offload[u])).field(d.tasks[u].bits)
            .field(d.tasks[u].cycles_per_bit);
        dec.end_row();
      }
    }
  }
  traj.close();
  dec.close();
}

RunRecord execute(const RunJob& job, const RunConfig& base) {
  const fs::path stage = job.directory.string() + ".partial";
  fs::remove_all(stage);
  fs::create_directories(stage);
  try {
    SchemeMetrics m;
    if (job.actor != nullptr) {
      EnvConfig cfg = scheme_env_config(job.scheme, job.env);
      cfg.seed = job.seed;
      const Environment env(cfg);
      if (job.actor->input_size() != env.observation_size())
        throw ConfigError("checkpoint actor expects " + std::to_string(job.actor->input_size()) +
                          " inputs but the environment observes " +
                          std::to_string(env.observation_size()));
      m.scheme = job.scheme;
      m.seed = job.seed;
      m.actor = *job.actor;
      Rng eval_rng = make_stream(job.seed, Stream::Evaluation);
      m.evaluation = evaluate_policy(*job.actor, env, job.agent.eval_episodes, eval_rng);
    } else if (!job.resume.empty()) {
      EnvConfig cfg = scheme_env_config(job.scheme, job.env);
      cfg.seed = job.seed;
      Trainer trainer = Trainer::load_checkpoint(job.resume, cfg, job.agent);
      if (trainer.seed() != job.seed)
        throw ConfigError("checkpoint " + job.resume.string() + " was written for seed " +
                              std::to_string(trainer.seed()) + ", not " + std::to_string(job.seed),
                          "seeds");
      trainer.run_to_completion();
      trainer.save_checkpoint(stage / kCheckpointFile);
      m.scheme = job.scheme;
      m.seed = job.seed;
      m.training = trainer.log();
      m.actor = trainer.networks().actor;
      Rng eval_rng = make_stream(job.seed, Stream::Evaluation);
      m.evaluation = evaluate_policy(*m.actor, trainer.environment(), job.agent.eval_episodes,
                                     eval_rng);
    } else {
      const fs::path ckpt = stage / kCheckpointFile;
      m = run_scheme(job.scheme, job.env, job.agent, job.seed,
                     [&](const Trainer& t) { t.save_checkpoint(ckpt); });
    }

    RunConfig used = base;
    used.env = job.env;
    used.agent = job.agent;
    used.scheme = job.scheme;
    used.seeds = {job.seed};
    used.horizons = {job.horizon};
    used.scenario_file.clear();
    write_text(stage / kConfigFile, dump_config(used));

    EnvConfig cfg = scheme_env_config(job.scheme, job.env);
    cfg.seed = job.seed;
    write_text(stage / kLayoutFile, dump_scenario(Environment(cfg).layout()));
    write_rewards(stage / kRewardsFile, m, job.agent.gamma);
    write_trajectory(stage / kTrajectoryFile, stage / kDecisionsFile, m.evaluation);

    CsvWriter summary(stage / kRunSummaryFile, kRunSummaryHeader);
    summary.field(to_string(job.scheme)).field(job.horizon).field(job.seed)
        .field(m.evaluation.mean_sum_rate).field(m.evaluation.std_sum_rate)
        .field(static_cast<int>(m.evaluation.episode_sum_rates.size()));
    summary.end_row();
    summary.close();

    fs::remove_all(job.directory);
    fs::create_directories(job.directory.parent_path());
    fs::rename(stage, job.directory);
    return {job.scheme, job.horizon, job.seed, m.evaluation.mean_sum_rate,
            m.evaluation.std_sum_rate, job.directory};
  } catch (...) {
    std::error_code ignored;
    fs::remove_all(stage, ignored);
    throw;
  }
}

std::vector<RunRecord> execute_all(const std::vector<RunJob>& jobs, const RunConfig& base) {
  std::vector<RunRecord> records(jobs.size());
  const int workers = std::min<int>(base.jobs, static_cast<int>(jobs.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) records[i] = execute(jobs[i], base);
    return records;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < jobs.size(); i = next++) {
        try {
          records[i] = execute(jobs[i], base);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = jobs.size();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return records;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void write_summary(const fs::path& path, const std::vector<RunRecord>& records) {
  // Grouped by horizon, then in the canonical scheme order.
  std::map<std::pair<int, int>, std::vector<double>> groups;
  auto rank = [](Scheme s) {
    return static_cast<int>(std::find(kAllSchemes.begin(), kAllSchemes.end(), s) -
                            kAllSchemes.begin());
  };
  for (const auto& r : records) groups[{r.horizon, rank(r.scheme)}].push_back(r.mean_sum_rate);

  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".partial";
  CsvWriter csv(tmp, kSummaryHeader);
  for (const auto& [key, values] : groups) {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    csv.field(to_string(kAllSchemes[static_cast<std::size_t>(key.second)])).field(key.first)
        .field(static_cast<int>(values.size())).field(mean)
        .field(std::sqrt(var / static_cast<double>(values.size()))).field(median(values));
    csv.end_row();
  }
  csv.close();
  fs::rename(tmp, path);
}

fs::path run_dir(const fs::path& root, Scheme scheme, std::uint64_t seed) {
  return root / scheme_slug(scheme) / ("seed_" + std::to_string(seed));
}

}  // namespace

EnvConfig resolve_env(const RunConfig& config, std::uint64_t seed) {
  EnvConfig env = config.env;
  if (!config.scenario_file.empty()) env.layout = load_scenario(config.scenario_file);
  env.seed = seed;
  return env;
}

std::string scheme_slug(Scheme scheme) {
  std::string slug;
  for (char c : to_string(scheme)) slug.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return slug;
}

std::vector<RunRecord> run_schemes(const RunConfig& config, const std::vector<Scheme>& schemes) {
  validate_run_config(config);
  std::vector<RunJob> jobs;
  for (Scheme scheme : schemes) {
    for (std::uint64_t seed : config.seeds) {
      RunJob job;
      job.scheme = scheme;
      job.seed = seed;
      job.env = resolve_env(config, seed);
      job.agent = config.agent;
      job.horizon = horizon_of(job.env);
      job.directory = run_dir(config.output, scheme, seed);
      jobs.push_back(std::move(job));
    }
  }
  auto records = execute_all(jobs, config);
  write_summary(config.output / kSummaryFile, records);
  return records;
}

std::vector<RunRecord> run_train(const RunConfig& config) {
  return run_schemes(config, {config.scheme});
}

std::vector<RunRecord> run_evaluate(const RunConfig& config, const fs::path& checkpoint) {
  validate_run_config(config);
  if (is_linear(config.scheme))
    throw ConfigError("evaluate needs a trained scheme, got " + std::string(to_string(config.scheme)),
                      "scheme");
  if (!fs::exists(checkpoint)) throw IoError("missing input file " + checkpoint.string());
  const DdpgNetworks nets = load_networks(checkpoint);
  std::vector<RunJob> jobs;
  for (std::uint64_t seed : config.seeds) {
    RunJob job;
    job.scheme = config.scheme;
    job.seed = seed;
    job.env = resolve_env(config, seed);
    job.agent = config.agent;
    job.horizon = horizon_of(job.env);
    job.directory = run_dir(config.output, config.scheme, seed);
    job.actor = &nets.actor;
    jobs.push_back(std::move(job));
  }
  auto records = execute_all(jobs, config);
  write_summary(config.output / kSummaryFile, records);
  return records;
}

RunRecord run_resume(const RunConfig& config, const fs::path& checkpoint) {
  validate_run_config(config);
  if (is_linear(config.scheme))
    throw ConfigError("resume needs a trained scheme, got " + std::string(to_string(config.scheme)),
                      "scheme");
  if (config.seeds.size() != 1) throw ConfigError("resume takes exactly one seed", "seeds");
  if (!fs::exists(checkpoint)) throw IoError("missing input file " + checkpoint.string());
  RunJob job;
  job.scheme = config.scheme;
  job.seed = config.seeds.front();
  job.env = resolve_env(config, job.seed);
  job.agent = config.agent;
  job.horizon = horizon_of(job.env);
  job.directory = run_dir(config.output, config.scheme, job.seed);
  job.resume = checkpoint;
  auto records = execute_all({job}, config);
  write_summary(config.output / kSummaryFile, records);
  return records.front();
}

std::vector<RunRecord> run_sweep(const RunConfig& config, const std::vector<int>& horizons) {
  validate_run_config(config);
  if (horizons.empty()) throw ConfigError("sweep needs at least one horizon", "horizons");
  std::vector<RunJob> jobs;
  for (int horizon : horizons) {
    const double slots = horizon / config.env.energy.slot;
    if (slots < 1.0 || std::abs(slots - std::round(slots)) > 1e-9)
      throw ConfigError("horizon " + std::to_string(horizon) + " is not a whole number of slots",
                        "horizons");
    for (Scheme scheme : kAllSchemes) {
      for (std::uint64_t seed : config.seeds) {
        RunJob job;
        job.scheme = scheme;
        job.seed = seed;
        job.horizon = horizon;
        job.env = resolve_env(config, seed);
        if (config.scenario_file.empty()) job.env.layout.kind = LayoutKind::TwoCluster;
        job.env.slots = static_cast<int>(std::lround(slots));
        job.agent = config.agent;
        job.directory =
            run_dir(config.output / ("N" + std::to_string(horizon)), scheme, seed);
        jobs.push_back(std::move(job));
      }
    }
  }
  auto records = execute_all(jobs, config);
  write_summary(config.output / kSummaryFile, records);
  return records;
}

namespace {

struct RunFiles {
  fs::path dir;
  std::string scheme;
  std::string horizon;
  std::string seed;
  CsvTable rewards;
  CsvTable trajectory;
  ScenarioLayout layout;
};

CsvTable read_checked(const fs::path& path, std::string_view header) {
  if (!fs::exists(path)) throw IoError("missing input file " + path.string());
  CsvTable t = read_csv(path);
  std::string joined;
  for (std::size_t i = 0; i < t.header.size(); ++i) joined += (i ? "," : "") + t.header[i];
  if (joined != header)
    throw IoError(path.string() + ": unexpected header '" + joined + "', expected '" +
                  std::string(header) + "'");
  for (const auto& row : t.rows)
    if (row.size() != t.header.size())
      throw IoError(path.string() + ": row has " + std::to_string(row.size()) + " fields, expected " +
                    std::to_string(t.header.size()));
  return t;
}

}  // namespace

void emit_plot_data(const fs::path& metrics_dir, const fs::path& out_dir) {
  if (!fs::is_directory(metrics_dir))
    throw IoError("missing input directory " + metrics_dir.string());
  const CsvTable summary = read_checked(metrics_dir / kSummaryFile, kSummaryHeader);

  std::vector<fs::path> dirs;
  for (const auto& entry : fs::recursive_directory_iterator(metrics_dir)) {
    if (entry.is_regular_file() && entry.path().filename() == kRunSummaryFile &&
        entry.path().parent_path().extension() != ".partial")
      dirs.push_back(entry.path().parent_path());
  }
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) throw IoError("no run directories under " + metrics_dir.string());

  std::vector<RunFiles> runs;
  for (const auto& dir : dirs) {
    RunFiles r;
    r.dir = dir;
    const CsvTable rs = read_checked(dir / kRunSummaryFile, kRunSummaryHeader);
    if (rs.rows.size() != 1) throw IoError((dir / kRunSummaryFile).string() + ": expected one row");
    r.scheme = rs.rows[0][0];
    r.horizon = rs.rows[0][1];
    r.seed = rs.rows[0][2];
    r.rewards = read_checked(dir / kRewardsFile, kRewardsHeader);
    r.trajectory = read_checked(dir / kTrajectoryFile, kTrajectoryHeader);
    if (!fs::exists(dir / kLayoutFile)) throw IoError("missing input file " + (dir / kLayoutFile).string());
    r.layout = load_scenario(dir / kLayoutFile);
    runs.push_back(std::move(r));
  }

  fs::create_directories(out_dir);
  {
    CsvWriter curves(out_dir / "reward_curves.csv", kRewardCurvesHeader);
    for (const auto& r : runs) {
      for (const auto& row : r.rewards.rows) {
        curves.field(r.scheme).field(r.horizon).field(r.seed).field(row[0]).field(row[1]).field(row[2]);
        curves.end_row();
      }
    }
    curves.close();
  }
  {
    // First evaluation episode, as segments starting at the initial position.
    CsvWriter segments(out_dir / "trajectory_segments.csv", kSegmentsHeader);
    for (const auto& r : runs) {
      Position from = r.layout.helper_init;
      for (const auto& row : r.trajectory.rows) {
        if (row[0] != "1") continue;
        const Position to{std::stod(row[2]), std::stod(row[3])};
        segments.field(r.scheme).field(r.horizon).field(r.seed).field(row[1]).field(from.x)
            .field(from.y).field(to.x).field(to.y).field(row[4]);
        segments.end_row();
        from = to;
      }
    }
    segments.close();
  }
  {
    CsvWriter sumrate(out_dir / "sumrate_vs_horizon.csv", kSumRateHeader);
    for (const auto& row : summary.rows) {
      sumrate.field(row[0]).field(row[1]).field(row[3]).field(row[4]).field(row[2]);
      sumrate.end_row();
    }
    sumrate.close();
  }
}

}  // namespace hybridsec
