#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "hybridsec/geometry_channel.hpp"

namespace hybridsec {

// Plain-text scenario file:
//
//   layout = two-cluster
//   map_side = 200
//   altitude = 80
//   eve_altitude = 120
//   coverage_radius = 45
//   legit = 0 0
//   eve = 70 70
//   helper = -90 -90
//   ue = -31.5 22.1        (one line per UE, in order)
//
// dump_scenario writes values in shortest round-trip form, so a dumped file
// reloads to an identical layout and dumps to identical bytes.
ScenarioLayout parse_scenario(std::string_view text, std::string_view source = "<scenario>");
ScenarioLayout load_scenario(const std::filesystem::path& path);
std::string dump_scenario(const ScenarioLayout& layout);

std::string_view to_string(LayoutKind kind);
LayoutKind parse_layout_kind(std::string_view text);

}  // namespace hybridsec
