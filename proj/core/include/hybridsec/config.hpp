#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hybridsec/baselines.hpp"
#include "hybridsec/ddpg.hpp"
#include "hybridsec/environment.hpp"

namespace hybridsec {

struct RunConfig {
  EnvConfig env;
  AgentConfig agent;
  Scheme scheme = Scheme::Proposed;
  std::vector<std::uint64_t> seeds{1};
  std::filesystem::path output{"out"};
  std::vector<int> horizons{10, 20};  // seconds, N = T * slot
  int jobs = 1;
  std::filesystem::path scenario_file;  // optional fixed layout

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Parses `key = value` lines; `#` starts a comment. Omitted keys keep their
// defaults, unknown keys and out-of-range values are ConfigErrors naming the
// key and line. `source` labels diagnostics.
RunConfig parse_config(std::string_view text, std::string_view source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

// Inverse of parse_config: every key, values printed to round-trip exactly.
std::string dump_config(const RunConfig& config);

// Range checks shared by the loader and programmatic callers.
void validate_run_config(const RunConfig& config);

// Key names accepted by parse_config, in dump order.
const std::vector<std::string>& config_keys();

}  // namespace hybridsec
