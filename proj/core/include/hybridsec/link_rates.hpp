#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace hybridsec {

// Helper role in one slot. Numeric values follow the k(t) convention.
enum class Mode : std::uint8_t { Jam = 0, Relay = 1 };

std::string_view to_string(Mode mode);

struct PowerConfig {
  double p_ue = 0.1;
  double p_relay = 0.012;
  double p_jam = 0.08;
  double noise_power = 1e-13;

  double helper_power(Mode mode) const { return mode == Mode::Relay ? p_relay : p_jam; }
  friend bool operator==(const PowerConfig&, const PowerConfig&) = default;
};

// Realized power gains seen by one UE in one slot.
struct UeLinkGains {
  double ue_legit = 0.0;
  double ue_helper = 0.0;
  double ue_eve = 0.0;
  double helper_legit = 0.0;
  double helper_eve = 0.0;
};

// One bit per UE: 1 offloads, 0 computes locally.
using OffloadDecision = std::vector<std::uint8_t>;

// log2(1 + x) without losing precision for small x.
double log2_1p(double x);

// Spectral efficiencies in bits/s/Hz.
double rate_legitimate(Mode mode, const UeLinkGains& gains, const PowerConfig& power);
double rate_eavesdropper(Mode mode, const UeLinkGains& gains, const PowerConfig& power);

// [R^d - R^e]^+
double secrecy_rate_ue(Mode mode, const UeLinkGains& gains, const PowerConfig& power);

// Sum over offloading UEs. Throws ContractViolation on length mismatch.
double secrecy_sum_rate(Mode mode, std::span<const std::uint8_t> offload,
                        std::span<const UeLinkGains> gains, const PowerConfig& power);

}  // namespace hybridsec
