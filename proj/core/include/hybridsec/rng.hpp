#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace hybridsec {

using Rng = std::mt19937_64;

// Independent named streams derived from one run seed.
enum class Stream : std::uint32_t {
  Layout = 1,
  Environment = 2,
  Agent = 3,
  Evaluation = 4,
};

inline Rng make_stream(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

// Distribution objects are created per call so the engine is the only state
// that has to be checkpointed.
inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double standard_normal(Rng& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

std::string serialize_rng(const Rng& rng);
Rng deserialize_rng(const std::string& text);

}  // namespace hybridsec
