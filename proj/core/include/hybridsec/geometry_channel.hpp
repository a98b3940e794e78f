#pragma once

#include <cstdint>
#include <vector>

#include "hybridsec/rng.hpp"

namespace hybridsec {

// Horizontal coordinates in meters.
struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

// Helper velocity command for one slot, m/s.
struct Action {
  double vx = 0.0;
  double vy = 0.0;

  double speed() const;
  friend bool operator==(const Action&, const Action&) = default;
};

enum class LayoutKind : std::uint8_t { UniformDisc, TwoCluster };

struct ScenarioLayout {
  Position legit{0.0, 0.0};
  Position eve{70.0, 70.0};
  std::vector<Position> ues;
  Position helper_init{-90.0, -90.0};
  double altitude = 80.0;        // helper and legitimate UAV
  double eve_altitude = 120.0;
  double map_side = 200.0;
  double coverage_radius = 45.0;
  LayoutKind kind = LayoutKind::UniformDisc;

  friend bool operator==(const ScenarioLayout&, const ScenarioLayout&) = default;
};

struct ChannelParams {
  double beta0 = 1e-5;                 // G2A reference gain at 1 m
  double beta1 = 1e-4;                 // A2A reference gain at 1 m
  double k_g2a = 15.848931924611133;   // 12 dB
  double k_a2a = 100.0;                // 20 dB
  double noise_power = 1e-13;          // W, -100 dBm
  double d_min = 1.0;                  // A2A horizontal clamp, m

  friend bool operator==(const ChannelParams&, const ChannelParams&) = default;
};

// Realized |gamma(t)|^2 of the Rician small-scale term.
struct FadingSample {
  double power_factor = 1.0;
};

double db_to_linear(double db);
double dbm_to_watts(double dbm);

double horizontal_distance(Position a, Position b);

bool inside_map(Position p, double map_side);

// Above this the scattered component is numerically irrelevant and the
// sample is reported as exactly 1.
inline constexpr double kPureLosK = 1e12;

// Always consumes the same number of engine draws regardless of k_linear.
FadingSample sample_fading(double k_linear, Rng& rng);

double g2a_power_gain(Position ue, Position uav, double altitude, const ChannelParams& params,
                      FadingSample fading);

double a2a_power_gain(Position helper, Position other, double altitude_diff,
                      const ChannelParams& params, FadingSample fading);

// Throws ConfigError when the layout breaks its invariants.
void validate_layout(const ScenarioLayout& layout);

// Uniform-disc: every UE uniform in the coverage disc around the legitimate UAV.
// Two-cluster: a 70/30 split into two separated clusters inside that disc.
std::vector<Position> generate_ues(LayoutKind kind, const ScenarioLayout& base, int count, Rng& rng);

// Cluster sizes used by the two-cluster generator for `count` UEs.
std::pair<int, int> two_cluster_sizes(int count);

}  // namespace hybridsec
