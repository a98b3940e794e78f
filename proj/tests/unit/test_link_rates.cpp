#include <doctest.h>

#include <cmath>

#include "../oracles/rate_oracle.hpp"
#include "hybridsec/errors.hpp"
#include "hybridsec/link_rates.hpp"
#include "hybridsec/rng.hpp"

using namespace hybridsec;

namespace {

UeLinkGains worked_gains() {
  UeLinkGains g;
  g.ue_legit = 1.25e-9;
  g.ue_helper = 1.25e-9;
  g.helper_legit = 4e-8;
  g.ue_eve = 4.098e-10;
  g.helper_eve = 1.25e-8;
  return g;
}

}  // namespace

TEST_SUITE("link_rates") {

TEST_CASE("legitimate rate worked examples") {
  const PowerConfig p;
  const auto g = worked_gains();
  CHECK(rate_legitimate(Mode::Relay, g, p) == doctest::Approx(0.5 * std::log2(1251.0)).epsilon(1e-12));
  CHECK(rate_legitimate(Mode::Relay, g, p) == doctest::Approx(5.1445).epsilon(1e-4));
  CHECK(rate_legitimate(Mode::Jam, g, p) ==
        doctest::Approx(std::log2(1.0 + 1.25e-10 / (3.2e-9 + 1e-13))).epsilon(1e-12));
  CHECK(rate_legitimate(Mode::Jam, g, p) == doctest::Approx(0.05528).epsilon(1e-3));
  UeLinkGains silent = g;
  silent.ue_legit = 0.0;
  silent.ue_helper = 0.0;
  CHECK(rate_legitimate(Mode::Relay, silent, p) == 0.0);
  CHECK(rate_legitimate(Mode::Jam, silent, p) == 0.0);
}

TEST_CASE("eavesdropper rate worked examples") {
  const PowerConfig p;
  const auto g = worked_gains();
  CHECK(rate_eavesdropper(Mode::Relay, g, p) ==
        doctest::Approx(0.5 * std::log2(1.0 + (0.012 * 1.25e-8 + 0.1 * 4.098e-10) / 1e-13)).epsilon(1e-12));
  CHECK(rate_eavesdropper(Mode::Relay, g, p) == doctest::Approx(5.4497).epsilon(1e-4));
  CHECK(rate_eavesdropper(Mode::Jam, g, p) == doctest::Approx(0.05796).epsilon(1e-3));
  UeLinkGains deaf = g;
  deaf.ue_eve = 0.0;
  deaf.helper_eve = 0.0;
  CHECK(rate_eavesdropper(Mode::Jam, deaf, p) == 0.0);
}

TEST_CASE("secrecy rate clamps") {
  const PowerConfig p;
  const auto g = worked_gains();
  CHECK(secrecy_rate_ue(Mode::Relay, g, p) == 0.0);
  UeLinkGains deaf = g;
  deaf.ue_eve = 0.0;
  deaf.helper_eve = 0.0;
  CHECK(secrecy_rate_ue(Mode::Jam, deaf, p) == rate_legitimate(Mode::Jam, deaf, p));
  UeLinkGains mirror = g;
  mirror.ue_eve = mirror.ue_legit;
  mirror.helper_eve = mirror.helper_legit;
  CHECK(secrecy_rate_ue(Mode::Jam, mirror, p) == 0.0);
}

TEST_CASE("secrecy sum over every offload pattern") {
  const PowerConfig p;
  std::vector<UeLinkGains> gains(3, worked_gains());
  for (auto& g : gains) g.ue_eve = 0.0, g.helper_eve = 0.0;
  gains[1].ue_legit = 3e-9;
  gains[2].ue_legit = 7e-10;
  std::array<double, 3> s{};
  for (int u = 0; u < 3; ++u) s[u] = secrecy_rate_ue(Mode::Jam, gains[u], p);
  for (int mask = 0; mask < 8; ++mask) {
    OffloadDecision z{static_cast<std::uint8_t>(mask & 1), static_cast<std::uint8_t>((mask >> 1) & 1),
                      static_cast<std::uint8_t>((mask >> 2) & 1)};
    double expected = 0.0;
    for (int u = 0; u < 3; ++u) expected += z[u] ? s[u] : 0.0;
    CHECK(secrecy_sum_rate(Mode::Jam, z, gains, p) == doctest::Approx(expected).epsilon(1e-14));
  }
  CHECK(secrecy_sum_rate(Mode::Jam, OffloadDecision{1}, std::vector<UeLinkGains>{gains[0]}, p) ==
        secrecy_rate_ue(Mode::Jam, gains[0], p));
  CHECK_THROWS_AS(secrecy_sum_rate(Mode::Jam, OffloadDecision{1, 0}, gains, p), ContractViolation);
}

TEST_CASE("log2_1p keeps precision for tiny arguments") {
  CHECK(log2_1p(1e-12) == doctest::Approx(1e-12 / std::log(2.0)).epsilon(1e-12));
  CHECK(log2_1p(0.0) == 0.0);
}

TEST_CASE("rate properties on random tuples") {
  Rng rng = make_stream(11, Stream::Evaluation);
  for (int i = 0; i < 2000; ++i) {
    UeLinkGains g;
    g.ue_legit = std::pow(10.0, uniform_real(rng, -12, -8));
    g.ue_helper = std::pow(10.0, uniform_real(rng, -12, -8));
    g.ue_eve = std::pow(10.0, uniform_real(rng, -12, -8));
    g.helper_legit = std::pow(10.0, uniform_real(rng, -10, -6));
    g.helper_eve = std::pow(10.0, uniform_real(rng, -10, -6));
    PowerConfig p;
    const double cap = 0.5 * std::log2(1.0 + p.p_ue * g.ue_helper / p.noise_power);
    CHECK(rate_legitimate(Mode::Relay, g, p) <= cap * (1.0 + 1e-15));
    CHECK(secrecy_rate_ue(Mode::Relay, g, p) >= 0.0);
    CHECK(secrecy_rate_ue(Mode::Jam, g, p) >= 0.0);
    PowerConfig louder = p;
    louder.p_jam = p.p_jam * 1.5;
    CHECK(rate_legitimate(Mode::Jam, g, louder) < rate_legitimate(Mode::Jam, g, p));
    CHECK(rate_eavesdropper(Mode::Jam, g, louder) < rate_eavesdropper(Mode::Jam, g, p));
    CHECK(rate_legitimate(Mode::Jam, g, p) == rate_legitimate(Mode::Jam, g, p));
  }
}

TEST_CASE("turning an offload on never lowers the sum") {
  Rng rng = make_stream(12, Stream::Evaluation);
  const PowerConfig p;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<UeLinkGains> gains(6);
    OffloadDecision z(6);
    for (std::size_t u = 0; u < 6; ++u) {
      gains[u] = {std::pow(10.0, uniform_real(rng, -11, -8)), std::pow(10.0, uniform_real(rng, -11, -8)),
                  std::pow(10.0, uniform_real(rng, -11, -8)), std::pow(10.0, uniform_real(rng, -9, -7)),
                  std::pow(10.0, uniform_real(rng, -9, -7))};
      z[u] = uniform_real(rng, 0, 1) < 0.5;
    }
    for (Mode m : {Mode::Jam, Mode::Relay}) {
      const double base = secrecy_sum_rate(m, z, gains, p);
      for (std::size_t u = 0; u < 6; ++u) {
        if (z[u]) continue;
        auto more = z;
        more[u] = 1;
        CHECK(secrecy_sum_rate(m, more, gains, p) >= base);
      }
    }
  }
}

TEST_CASE("matches the extended precision transcription") {
  Rng rng = make_stream(21, Stream::Evaluation);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    UeLinkGains g{std::pow(10.0, uniform_real(rng, -12, -7)), std::pow(10.0, uniform_real(rng, -12, -7)),
                  std::pow(10.0, uniform_real(rng, -12, -7)), std::pow(10.0, uniform_real(rng, -10, -5)),
                  std::pow(10.0, uniform_real(rng, -10, -5))};
    PowerConfig p;
    p.p_ue = uniform_real(rng, 0.01, 1.0);
    p.p_relay = uniform_real(rng, 0.001, 0.1);
    p.p_jam = uniform_real(rng, 0.01, 0.5);
    const oracle::Gains og{g.ue_legit, g.ue_helper, g.ue_eve, g.helper_legit, g.helper_eve};
    const oracle::Powers op{p.p_ue, p.p_relay, p.p_jam, p.noise_power};
    auto rel = [](double a, long double b) {
      return static_cast<double>(std::abs(a - b) / std::max(std::abs(b), 1e-300L));
    };
    worst = std::max(worst, rel(rate_legitimate(Mode::Relay, g, p), oracle::relay_legit(og, op)));
    worst = std::max(worst, rel(rate_legitimate(Mode::Jam, g, p), oracle::jam_legit(og, op)));
    worst = std::max(worst, rel(rate_eavesdropper(Mode::Relay, g, p), oracle::relay_eve(og, op)));
    worst = std::max(worst, rel(rate_eavesdropper(Mode::Jam, g, p), oracle::jam_eve(og, op)));
  }
  CHECK(worst < 1e-12);
}

}
