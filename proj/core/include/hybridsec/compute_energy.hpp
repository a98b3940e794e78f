#pragma once

#include <cstdint>
#include <span>

#include "hybridsec/geometry_channel.hpp"
#include "hybridsec/link_rates.hpp"

namespace hybridsec {

struct TaskSpec {
  double bits = 0.0;
  double cycles_per_bit = 0.0;

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct EnergyParams {
  double kappa = 1e-27;
  double mass = 9.65;            // kg, helper incl. payload
  double slot = 1.0;             // seconds per slot
  double ue_budget = 0.025;      // J per slot
  double legit_budget = 24.0;    // J per slot
  double helper_budget = 3900.0; // J per slot

  friend bool operator==(const EnergyParams&, const EnergyParams&) = default;
};

double local_cpu_frequency(const TaskSpec& task, double slot);

// Load received in the previous slot, computed during the current one.
double legit_cpu_frequency(std::span<const std::uint8_t> prev_offload,
                           std::span<const TaskSpec> prev_tasks, double slot);

double computation_energy(double frequency, double kappa, double slot);

// U is taken from offload.size().
double helper_transmit_energy(Mode mode, std::span<const std::uint8_t> offload,
                              const PowerConfig& power, double slot);

double helper_flight_energy(Action velocity, double mass, double slot);

// Energy of one UE in the slot for the given branch.
double ue_energy(bool offload, Mode mode, const TaskSpec& task, const PowerConfig& power,
                 const EnergyParams& params, int num_ues);

bool check_ue_energy(bool offload, Mode mode, const TaskSpec& task, const PowerConfig& power,
                     const EnergyParams& params, int num_ues);

bool check_legit_energy(std::span<const std::uint8_t> prev_offload,
                        std::span<const TaskSpec> prev_tasks, const EnergyParams& params);

bool check_helper_energy(Mode mode, std::span<const std::uint8_t> offload, Action velocity,
                         const PowerConfig& power, const EnergyParams& params);

// Largest speed for which flight plus the worst-case transmit energy of either
// mode fits the helper budget. Zero when even hovering is infeasible.
double max_feasible_speed(const PowerConfig& power, const EnergyParams& params);

}  // namespace hybridsec
