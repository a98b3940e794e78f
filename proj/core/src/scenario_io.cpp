#include "hybridsec/scenario_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "hybridsec/csv.hpp"
#include "hybridsec/errors.hpp"

namespace hybridsec {

std::string_view to_string(LayoutKind kind) {
  return kind == LayoutKind::TwoCluster ? "two-cluster" : "uniform-disc";
}

LayoutKind parse_layout_kind(std::string_view text) {
  if (text == "uniform-disc") return LayoutKind::UniformDisc;
  if (text == "two-cluster") return LayoutKind::TwoCluster;
  throw ConfigError("unknown layout '" + std::string(text) + "' (uniform-disc or two-cluster)",
                    "layout");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> numbers(std::string_view value, const std::string& where, const std::string& key) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i < value.size()) {
    while (i < value.size() && (value[i] == ' ' || value[i] == '\t' || value[i] == ',')) ++i;
    if (i >= value.size()) break;
    double v = 0.0;
    const auto res = std::from_chars(value.data() + i, value.data() + value.size(), v);
    if (res.ec != std::errc{})
      throw ConfigError(where + ": '" + key + "' expects numbers, got '" + std::string(value) + "'", key);
    i = static_cast<std::size_t>(res.ptr - value.data());
    out.push_back(v);
  }
  return out;
}

}  // namespace

ScenarioLayout parse_scenario(std::string_view text, std::string_view source) {
  ScenarioLayout layout;
  layout.ues.clear();
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
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

    auto scalar = [&] {
      const auto v = numbers(value, where, key);
      if (v.size() != 1) throw ConfigError(where + ": '" + key + "' expects one number", key);
      return v[0];
    };
    auto point = [&] {
      const auto v = numbers(value, where, key);
      if (v.size() != 2) throw ConfigError(where + ": '" + key + "' expects 'x y'", key);
      return Position{v[0], v[1]};
    };

    if (key == "layout") layout.kind = parse_layout_kind(value);
    else if (key == "map_side") layout.map_side = scalar();
    else if (key == "altitude") layout.altitude = scalar();
    else if (key == "eve_altitude") layout.eve_altitude = scalar();
    else if (key == "coverage_radius") layout.coverage_radius = scalar();
    else if (key == "legit") layout.legit = point();
    else if (key == "eve") layout.eve = point();
    else if (key == "helper") layout.helper_init = point();
    else if (key == "ue") layout.ues.push_back(point());
    else throw ConfigError(where + ": unknown scenario key '" + key + "'", key);
  }
  validate_layout(layout);
  return layout;
}

ScenarioLayout load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario file " + path.string(), "scenario_file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.string());
}

std::string dump_scenario(const ScenarioLayout& layout) {
  std::ostringstream os;
  auto point = [&](const char* key, Position p) {
    os << key << " = " << format_real(p.x) << ' ' << format_real(p.y) << '\n';
  };
  os << "layout = " << to_string(layout.kind) << '\n';
  os << "map_side = " << format_real(layout.map_side) << '\n';
  os << "altitude = " << format_real(layout.altitude) << '\n';
  os << "eve_altitude = " << format_real(layout.eve_altitude) << '\n';
  os << "coverage_radius = " << format_real(layout.coverage_radius) << '\n';
  point("legit", layout.legit);
  point("eve", layout.eve);
  point("helper", layout.helper_init);
  for (const auto& ue : layout.ues) point("ue", ue);
  return os.str();
}

}  // namespace hybridsec
