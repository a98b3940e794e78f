#include "hybridsec/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "hybridsec/csv.hpp"
#include "hybridsec/errors.hpp"
#include "hybridsec/scenario_io.hpp"

namespace hybridsec {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Field {
  std::string key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

double to_real(std::string_view text, const std::string& key) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw ConfigError("'" + key + "' expects a number, got '" + std::string(text) + "'", key);
  return v;
}

long long to_integer(std::string_view text, const std::string& key) {
  long long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw ConfigError("'" + key + "' expects an integer, got '" + std::string(text) + "'", key);
  return v;
}

std::vector<std::string_view> list_items(std::string_view text) {
  std::vector<std::string_view> items;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ',' || text[i] == ' ' || text[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < text.size() && text[i] != ',' && text[i] != ' ' && text[i] != '\t') ++i;
    if (i > start) items.push_back(text.substr(start, i - start));
  }
  return items;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(values[i]);
  }
  return out;
}

// `ref` is a generic accessor usable on both const and mutable configs.
template <typename Ref>
Field real(std::string key, Ref ref) {
  return {key,
          [ref, key](RunConfig& c, std::string_view v) { ref(c) = to_real(v, key); },
          [ref](const RunConfig& c) { return format_real(ref(c)); }};
}

template <typename Ref>
Field integer(std::string key, Ref ref) {
  return {key,
          [ref, key](RunConfig& c, std::string_view v) {
            const long long x = to_integer(v, key);
            if (x < INT32_MIN || x > INT32_MAX) throw ConfigError("'" + key + "' is out of range", key);
            ref(c) = static_cast<int>(x);
          },
          [ref](const RunConfig& c) { return std::to_string(ref(c)); }};
}

// Keys in dump order. Some quantities accept an alternative unit on input
// (k_g2a_db, k_a2a_db, noise_dbm) but dump in the exact linear form.
const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    // scenario
    f.push_back({"layout",
                 [](RunConfig& c, std::string_view v) { c.env.layout.kind = parse_layout_kind(v); },
                 [](const RunConfig& c) { return std::string(to_string(c.env.layout.kind)); }});
    f.push_back({"scenario_file",
                 [](RunConfig& c, std::string_view v) { c.scenario_file = std::string(v); },
                 [](const RunConfig& c) { return c.scenario_file.string(); }});
    f.push_back(integer("num_ues", [](auto& c) -> auto& { return c.env.num_ues; }));
    f.push_back(real("legit_x", [](auto& c) -> auto& { return c.env.layout.legit.x; }));
    f.push_back(real("legit_y", [](auto& c) -> auto& { return c.env.layout.legit.y; }));
    f.push_back(real("eve_x", [](auto& c) -> auto& { return c.env.layout.eve.x; }));
    f.push_back(real("eve_y", [](auto& c) -> auto& { return c.env.layout.eve.y; }));
    f.push_back(real("helper_x", [](auto& c) -> auto& { return c.env.layout.helper_init.x; }));
    f.push_back(real("helper_y", [](auto& c) -> auto& { return c.env.layout.helper_init.y; }));
    f.push_back(real("altitude", [](auto& c) -> auto& { return c.env.layout.altitude; }));
    f.push_back(real("eve_altitude", [](auto& c) -> auto& { return c.env.layout.eve_altitude; }));
    f.push_back(real("map_side", [](auto& c) -> auto& { return c.env.layout.map_side; }));
    f.push_back(real("coverage_radius",
                     [](auto& c) -> auto& { return c.env.layout.coverage_radius; }));
    // channel
    f.push_back(real("beta0", [](auto& c) -> auto& { return c.env.channel.beta0; }));
    f.push_back(real("beta1", [](auto& c) -> auto& { return c.env.channel.beta1; }));
    f.push_back(real("k_g2a", [](auto& c) -> auto& { return c.env.channel.k_g2a; }));
    f.push_back(real("k_a2a", [](auto& c) -> auto& { return c.env.channel.k_a2a; }));
    f.push_back({"noise_power",
                 [](RunConfig& c, std::string_view v) {
                   c.env.channel.noise_power = c.env.power.noise_power = to_real(v, "noise_power");
                 },
                 [](const RunConfig& c) { return format_real(c.env.channel.noise_power); }});
    f.push_back(real("d_min", [](auto& c) -> auto& { return c.env.channel.d_min; }));
    // power
    f.push_back(real("p_ue", [](auto& c) -> auto& { return c.env.power.p_ue; }));
    f.push_back(real("p_relay", [](auto& c) -> auto& { return c.env.power.p_relay; }));
    f.push_back(real("p_jam", [](auto& c) -> auto& { return c.env.power.p_jam; }));
    // tasks and energy
    f.push_back(real("task_kb_min", [](auto& c) -> auto& { return c.env.tasks.kb_min; }));
    f.push_back(real("task_kb_max", [](auto& c) -> auto& { return c.env.tasks.kb_max; }));
    f.push_back(real("bits_per_kb", [](auto& c) -> auto& { return c.env.tasks.bits_per_kb; }));
    f.push_back(real("cycles_min", [](auto& c) -> auto& { return c.env.tasks.cycles_min; }));
    f.push_back(real("cycles_max", [](auto& c) -> auto& { return c.env.tasks.cycles_max; }));
    f.push_back(real("kappa", [](auto& c) -> auto& { return c.env.energy.kappa; }));
    f.push_back(real("mass", [](auto& c) -> auto& { return c.env.energy.mass; }));
    f.push_back(real("slot", [](auto& c) -> auto& { return c.env.energy.slot; }));
    f.push_back(real("e_ue", [](auto& c) -> auto& { return c.env.energy.ue_budget; }));
    f.push_back(real("e_legit", [](auto& c) -> auto& { return c.env.energy.legit_budget; }));
    f.push_back(real("e_helper", [](auto& c) -> auto& { return c.env.energy.helper_budget; }));
    // environment
    f.push_back(integer("slots", [](auto& c) -> auto& { return c.env.slots; }));
    f.push_back(real("v_max", [](auto& c) -> auto& { return c.env.v_max; }));
    f.push_back(real("epsilon", [](auto& c) -> auto& { return c.env.epsilon; }));
    f.push_back(real("r_om", [](auto& c) -> auto& { return c.env.off_map_penalty; }));
    // agent
    f.push_back(real("gamma", [](auto& c) -> auto& { return c.agent.gamma; }));
    f.push_back(real("tau", [](auto& c) -> auto& { return c.agent.tau; }));
    f.push_back(integer("batch_size", [](auto& c) -> auto& { return c.agent.batch_size; }));
    f.push_back({"buffer_capacity",
                 [](RunConfig& c, std::string_view v) {
                   const long long x = to_integer(v, "buffer_capacity");
                   if (x < 1) throw ConfigError("buffer_capacity must be at least 1", "buffer_capacity");
                   c.agent.buffer_capacity = static_cast<std::size_t>(x);
                 },
                 [](const RunConfig& c) { return std::to_string(c.agent.buffer_capacity); }});
    f.push_back(real("noise_variance", [](auto& c) -> auto& { return c.agent.noise_variance; }));
    f.push_back(real("noise_decay", [](auto& c) -> auto& { return c.agent.noise_decay; }));
    f.push_back(integer("episodes", [](auto& c) -> auto& { return c.agent.episodes; }));
    f.push_back(real("learning_rate",
                     [](auto& c) -> auto& { return c.agent.adam.learning_rate; }));
    f.push_back(real("adam_beta1", [](auto& c) -> auto& { return c.agent.adam.beta1; }));
    f.push_back(real("adam_beta2", [](auto& c) -> auto& { return c.agent.adam.beta2; }));
    f.push_back(real("adam_epsilon", [](auto& c) -> auto& { return c.agent.adam.epsilon; }));
    f.push_back({"hidden",
                 [](RunConfig& c, std::string_view v) {
                   c.agent.hidden.clear();
                   for (auto item : list_items(v)) {
                     const long long x = to_integer(item, "hidden");
                     if (x < 1 || x > 100000) throw ConfigError("hidden sizes must be positive", "hidden");
                     c.agent.hidden.push_back(static_cast<int>(x));
                   }
                 },
                 [](const RunConfig& c) { return join(c.agent.hidden); }});
    f.push_back(real("grad_clip", [](auto& c) -> auto& { return c.agent.grad_clip; }));
    f.push_back({"warm_start",
                 [](RunConfig& c, std::string_view v) { c.agent.warm_start = std::string(v); },
                 [](const RunConfig& c) { return c.agent.warm_start; }});
    f.push_back(integer("eval_episodes", [](auto& c) -> auto& { return c.agent.eval_episodes; }));
    // run
    f.push_back({"scheme",
                 [](RunConfig& c, std::string_view v) {
                   const auto s = parse_scheme(v);
                   if (!s) throw ConfigError("unknown scheme '" + std::string(v) + "'", "scheme");
                   c.scheme = *s;
                 },
                 [](const RunConfig& c) { return std::string(to_string(c.scheme)); }});
    f.push_back({"seeds",
                 [](RunConfig& c, std::string_view v) {
                   c.seeds.clear();
                   for (auto item : list_items(v)) {
                     const long long x = to_integer(item, "seeds");
                     if (x < 0) throw ConfigError("seeds must be nonnegative", "seeds");
                     c.seeds.push_back(static_cast<std::uint64_t>(x));
                   }
                 },
                 [](const RunConfig& c) { return join(c.seeds); }});
    f.push_back({"output",
                 [](RunConfig& c, std::string_view v) { c.output = std::string(v); },
                 [](const RunConfig& c) { return c.output.string(); }});
    f.push_back({"horizons",
                 [](RunConfig& c, std::string_view v) {
                   c.horizons.clear();
                   for (auto item : list_items(v)) {
                     const long long x = to_integer(item, "horizons");
                     if (x < 1 || x > 1000000) throw ConfigError("horizons must be positive", "horizons");
                     c.horizons.push_back(static_cast<int>(x));
                   }
                 },
                 [](const RunConfig& c) { return join(c.horizons); }});
    f.push_back(integer("jobs", [](auto& c) -> auto& { return c.jobs; }));
    return f;
  }();
  return table;
}

// Input-only aliases in alternative units.
bool apply_alias(RunConfig& c, const std::string& key, std::string_view value) {
  if (key == "k_g2a_db") {
    c.env.channel.k_g2a = db_to_linear(to_real(value, key));
  } else if (key == "k_a2a_db") {
    c.env.channel.k_a2a = db_to_linear(to_real(value, key));
  } else if (key == "noise_dbm") {
    c.env.channel.noise_power = c.env.power.noise_power = dbm_to_watts(to_real(value, key));
  } else {
    return false;
  }
  return true;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

void validate_run_config(const RunConfig& c) {
  validate_env_config(c.env);
  validate_agent_config(c.agent);
  const ScenarioLayout& l = c.env.layout;
  if (!(l.map_side > 0.0)) throw ConfigError("map_side must be positive", "map_side");
  if (!(l.altitude > 0.0)) throw ConfigError("altitude must be positive", "altitude");
  if (!(l.eve_altitude > l.altitude))
    throw ConfigError("eve_altitude must exceed altitude", "eve_altitude");
  if (!(l.coverage_radius > 0.0))
    throw ConfigError("coverage_radius must be positive", "coverage_radius");
  if (c.scenario_file.empty()) {
    if (!inside_map(l.legit, l.map_side)) throw ConfigError("legit lies outside the map", "legit_x");
    if (!inside_map(l.eve, l.map_side)) throw ConfigError("eve lies outside the map", "eve_x");
    if (!inside_map(l.helper_init, l.map_side))
      throw ConfigError("helper lies outside the map", "helper_x");
  }
  if (c.seeds.empty()) throw ConfigError("seeds needs at least one value", "seeds");
  if (c.horizons.empty()) throw ConfigError("horizons needs at least one value", "horizons");
  for (int n : c.horizons) {
    const double slots = n / c.env.energy.slot;
    if (slots < 1.0 || std::abs(slots - std::round(slots)) > 1e-9)
      throw ConfigError("horizon " + std::to_string(n) + " is not a whole number of slots", "horizons");
  }
  if (c.jobs < 1) throw ConfigError("jobs must be at least 1", "jobs");
  if (c.output.empty()) throw ConfigError("output must not be empty", "output");
}

RunConfig parse_config(std::string_view text, std::string_view source) {
  RunConfig config;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError(where + ": duplicate key '" + key + "'", key);
    try {
      if (apply_alias(config, key, value)) continue;
      bool found = false;
      for (const auto& f : fields()) {
        if (f.key == key) {
          f.set(config, value);
          found = true;
          break;
        }
      }
      if (!found) throw ConfigError("unknown key '" + key + "'", key);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what(), e.key().empty() ? key : e.key());
    }
  }
  try {
    validate_run_config(config);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(source) + ": " + e.what(), e.key());
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  RunConfig config = parse_config(ss.str(), path.string());
  if (!config.scenario_file.empty() && config.scenario_file.is_relative())
    config.scenario_file = path.parent_path() / config.scenario_file;
  return config;
}

std::string dump_config(const RunConfig& config) {
  std::ostringstream os;
  for (const auto& f : fields()) {
    const std::string value = f.get(config);
    os << f.key << " =";
    if (!value.empty()) os << ' ' << value;
    os << '\n';
  }
  return os.str();
}

}  // namespace hybridsec
