#include "hybridsec/link_rates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hybridsec/errors.hpp"

namespace hybridsec {

std::string_view to_string(Mode mode) { return mode == Mode::Relay ? "relay" : "jam"; }

double log2_1p(double x) { return std::log1p(x) / std::numbers::ln2; }

double rate_legitimate(Mode mode, const UeLinkGains& g, const PowerConfig& p) {
  if (mode == Mode::Relay) {
    // DF: both hops share the per-UE fraction, the weaker one limits.
    const double combined = (p.p_relay * g.helper_legit + p.p_ue * g.ue_legit) / p.noise_power;
    const double first_hop = p.p_ue * g.ue_helper / p.noise_power;
    return 0.5 * std::min(log2_1p(combined), log2_1p(first_hop));
  }
  return log2_1p(p.p_ue * g.ue_legit / (p.p_jam * g.helper_legit + p.noise_power));
}

double rate_eavesdropper(Mode mode, const UeLinkGains& g, const PowerConfig& p) {
  if (mode == Mode::Relay)
    return 0.5 * log2_1p((p.p_relay * g.helper_eve + p.p_ue * g.ue_eve) / p.noise_power);
  return log2_1p(p.p_ue * g.ue_eve / (p.p_jam * g.helper_eve + p.noise_power));
}

double secrecy_rate_ue(Mode mode, const UeLinkGains& gains, const PowerConfig& power) {
  return std::max(rate_legitimate(mode, gains, power) - rate_eavesdropper(mode, gains, power), 0.0);
}

double secrecy_sum_rate(Mode mode, std::span<const std::uint8_t> offload,
                        std::span<const UeLinkGains> gains, const PowerConfig& power) {
  if (offload.size() != gains.size())
    throw ContractViolation("secrecy_sum_rate: offload and gain sequences differ in length");
  double total = 0.0;
  for (std::size_t u = 0; u < gains.size(); ++u)
    if (offload[u]) total += secrecy_rate_ue(mode, gains[u], power);
  return total;
}

}  // namespace hybridsec
