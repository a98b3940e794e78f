#include <doctest.h>

#include <cmath>

#include "hybridsec/compute_energy.hpp"

using namespace hybridsec;

TEST_SUITE("compute_energy") {

TEST_CASE("local cpu frequency") {
  CHECK(local_cpu_frequency({163840, 1000}, 1.0) == doctest::Approx(1.6384e8).epsilon(1e-12));
  CHECK(local_cpu_frequency({1, 1}, 1.0) == 1.0);
  CHECK(local_cpu_frequency({245760, 1200}, 1.0) == doctest::Approx(2.94912e8).epsilon(1e-12));
}

TEST_CASE("legitimate cpu frequency sums last slot's offloads") {
  const std::vector<TaskSpec> tasks(10, TaskSpec{204800, 1100});
  CHECK(legit_cpu_frequency(OffloadDecision(10, 0), tasks, 1.0) == 0.0);
  OffloadDecision one(10, 0);
  one[3] = 1;
  CHECK(legit_cpu_frequency(one, tasks, 1.0) == local_cpu_frequency(tasks[3], 1.0));
  CHECK(legit_cpu_frequency(OffloadDecision(10, 1), tasks, 1.0) == doctest::Approx(2.2528e9).epsilon(1e-12));
}

TEST_CASE("computation energy") {
  CHECK(computation_energy(0.0, 1e-27, 1.0) == 0.0);
  CHECK(computation_energy(2.2e8, 1e-27, 1.0) == doctest::Approx(1.0648e-2).epsilon(1e-12));
  const double e = computation_energy(2.2528e9, 1e-27, 1.0);
  CHECK(e == doctest::Approx(11.433).epsilon(1e-4));
  CHECK(e < 24.0);
  CHECK(computation_energy(2e8, 1e-27, 1.0) < computation_energy(2.1e8, 1e-27, 1.0));
  CHECK(computation_energy(4e8, 1e-27, 1.0) == doctest::Approx(8.0 * computation_energy(2e8, 1e-27, 1.0)));
}

TEST_CASE("helper transmit energy") {
  const PowerConfig p;
  CHECK(helper_transmit_energy(Mode::Jam, OffloadDecision(10, 0), p, 1.0) == doctest::Approx(0.08));
  CHECK(helper_transmit_energy(Mode::Jam, OffloadDecision(10, 1), p, 1.0) == doctest::Approx(0.08));
  CHECK(helper_transmit_energy(Mode::Relay, OffloadDecision(10, 0), p, 1.0) == 0.0);
  CHECK(helper_transmit_energy(Mode::Relay, OffloadDecision(10, 1), p, 1.0) == doctest::Approx(0.006).epsilon(1e-12));
  OffloadDecision z(10, 0);
  double last = 0.0;
  for (int k = 1; k <= 10; ++k) {
    z[static_cast<std::size_t>(k - 1)] = 1;
    const double e = helper_transmit_energy(Mode::Relay, z, p, 1.0);
    CHECK(e == doctest::Approx(0.0006 * k).epsilon(1e-12));
    CHECK(e > last);
    last = e;
  }
}

TEST_CASE("helper flight energy") {
  CHECK(helper_flight_energy({0, 0}, 9.65, 1.0) == 0.0);
  CHECK(helper_flight_energy({20, 0}, 9.65, 1.0) == doctest::Approx(1930.0).epsilon(1e-12));
  CHECK(helper_flight_energy({3, 4}, 9.65, 1.0) == doctest::Approx(120.625).epsilon(1e-12));
  CHECK(helper_flight_energy({6, 8}, 9.65, 1.0) == doctest::Approx(482.5).epsilon(1e-12));
  for (double a = 0.0; a < 6.3; a += 0.3)
    CHECK(helper_flight_energy({5 * std::cos(a), 5 * std::sin(a)}, 9.65, 1.0) ==
          doctest::Approx(helper_flight_energy({5, 0}, 9.65, 1.0)).epsilon(1e-12));
}

TEST_CASE("UE energy check") {
  const PowerConfig p;
  const EnergyParams e;
  const TaskSpec worst{245760, 1200};
  CHECK(ue_energy(true, Mode::Jam, worst, p, e, 10) == doctest::Approx(0.01));
  CHECK(check_ue_energy(true, Mode::Jam, worst, p, e, 10));
  CHECK(ue_energy(true, Mode::Relay, worst, p, e, 10) == doctest::Approx(0.005));
  CHECK(check_ue_energy(true, Mode::Relay, worst, p, e, 10));
  CHECK(ue_energy(false, Mode::Jam, worst, p, e, 10) == doctest::Approx(0.02565).epsilon(1e-3));
  CHECK_FALSE(check_ue_energy(false, Mode::Jam, worst, p, e, 10));
}

TEST_CASE("legitimate and helper energy checks") {
  const PowerConfig p;
  EnergyParams e;
  const std::vector<TaskSpec> tasks(10, TaskSpec{204800, 1100});
  CHECK(check_legit_energy(OffloadDecision(10, 0), tasks, e));
  CHECK(check_legit_energy(OffloadDecision(10, 1), tasks, e));
  CHECK(check_helper_energy(Mode::Jam, OffloadDecision(10, 0), {20, 0}, p, e));
  e.mass = 30.0;
  CHECK_FALSE(check_helper_energy(Mode::Jam, OffloadDecision(10, 0), {20, 0}, p, e));
}

TEST_CASE("helper budget never binds within v_max under default parameters") {
  const PowerConfig p;
  const EnergyParams e;
  CHECK(max_feasible_speed(p, e) > 20.0);
  for (double a = 0.0; a < 6.3; a += 0.1)
    for (Mode m : {Mode::Jam, Mode::Relay})
      CHECK(check_helper_energy(m, OffloadDecision(10, 1), {20 * std::cos(a), 20 * std::sin(a)}, p, e));
}

TEST_CASE("all energies are nonnegative") {
  const PowerConfig p;
  const EnergyParams e;
  for (double bits : {1.0, 1e5, 3e5})
    for (bool z : {false, true})
      for (Mode m : {Mode::Jam, Mode::Relay}) CHECK(ue_energy(z, m, {bits, 1000}, p, e, 10) >= 0.0);
}

}
