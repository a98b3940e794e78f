#include "hybridsec/geometry_channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hybridsec/errors.hpp"

namespace hybridsec {

double Action::speed() const { return std::hypot(vx, vy); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double horizontal_distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool inside_map(Position p, double map_side) {
  const double half = 0.5 * map_side;
  return p.x >= -half && p.x <= half && p.y >= -half && p.y <= half;
}

FadingSample sample_fading(double k_linear, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  // Scattered component: CSCG with unit second moment.
  const double re = normal(rng) * std::numbers::sqrt2 / 2.0;
  const double im = normal(rng) * std::numbers::sqrt2 / 2.0;
  if (!(k_linear < kPureLosK)) return FadingSample{1.0};
  const double los = std::sqrt(k_linear / (k_linear + 1.0));
  const double nlos = std::sqrt(1.0 / (k_linear + 1.0));
  const double sum_re = los + nlos * re;
  const double sum_im = nlos * im;
  return FadingSample{sum_re * sum_re + sum_im * sum_im};
}

double g2a_power_gain(Position ue, Position uav, double altitude, const ChannelParams& params,
                      FadingSample fading) {
  const double d = horizontal_distance(ue, uav);
  return params.beta0 * fading.power_factor / (altitude * altitude + d * d);
}

double a2a_power_gain(Position helper, Position other, double altitude_diff,
                      const ChannelParams& params, FadingSample fading) {
  const double d = std::max(horizontal_distance(helper, other), params.d_min);
  return params.beta1 * fading.power_factor / (altitude_diff * altitude_diff + d * d);
}

namespace {

void require_inside(Position p, double map_side, const std::string& what) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y))
    throw ConfigError(what + " position is not finite", what);
  if (!inside_map(p, map_side))
    throw ConfigError(what + " position (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                          ") lies outside the map square",
                      what);
}

}  // namespace

void validate_layout(const ScenarioLayout& layout) {
  if (!(layout.map_side > 0.0)) throw ConfigError("map_side must be positive", "map_side");
  if (!(layout.altitude > 0.0)) throw ConfigError("altitude must be positive", "altitude");
  if (!(layout.eve_altitude > layout.altitude))
    throw ConfigError("eve_altitude must exceed altitude", "eve_altitude");
  if (!(layout.coverage_radius > 0.0))
    throw ConfigError("coverage_radius must be positive", "coverage_radius");
  if (layout.ues.empty()) throw ConfigError("layout has no UEs", "num_ues");
  require_inside(layout.legit, layout.map_side, "legit");
  require_inside(layout.eve, layout.map_side, "eve");
  require_inside(layout.helper_init, layout.map_side, "helper");
  for (std::size_t u = 0; u < layout.ues.size(); ++u)
    require_inside(layout.ues[u], layout.map_side, "ue[" + std::to_string(u) + "]");
}

std::pair<int, int> two_cluster_sizes(int count) {
  const int large = static_cast<int>(std::lround(0.7 * count));
  return {large, count - large};
}

namespace {

Position uniform_in_disc(Position center, double radius, Rng& rng) {
  const double r = radius * std::sqrt(uniform_real(rng, 0.0, 1.0));
  const double phi = uniform_real(rng, 0.0, 2.0 * std::numbers::pi);
  return {center.x + r * std::cos(phi), center.y + r * std::sin(phi)};
}

}  // namespace

std::vector<Position> generate_ues(LayoutKind kind, const ScenarioLayout& base, int count,
                                   Rng& rng) {
  if (count < 1) throw ConfigError("num_ues must be at least 1", "num_ues");
  std::vector<Position> ues;
  ues.reserve(static_cast<std::size_t>(count));
  const double radius = base.coverage_radius;
  if (kind == LayoutKind::UniformDisc) {
    for (int u = 0; u < count; ++u) ues.push_back(uniform_in_disc(base.legit, radius, rng));
    return ues;
  }
  // Two clusters on opposite sides of the legitimate UAV, each of radius
  // 0.2 R centered 0.7 R away, so every UE stays inside the coverage disc.
  const auto [large, small] = two_cluster_sizes(count);
  const double offset = 0.7 * radius;
  const double cluster_radius = 0.2 * radius;
  const double angle = 0.75 * std::numbers::pi;
  const Position large_center{base.legit.x + offset * std::cos(angle),
                               base.legit.y + offset * std::sin(angle)};
  const Position small_center{base.legit.x - offset * std::cos(angle),
                              base.legit.y - offset * std::sin(angle)};
  for (int u = 0; u < large; ++u) ues.push_back(uniform_in_disc(large_center, cluster_radius, rng));
  for (int u = 0; u < small; ++u) ues.push_back(uniform_in_disc(small_center, cluster_radius, rng));
  return ues;
}

}  // namespace hybridsec
