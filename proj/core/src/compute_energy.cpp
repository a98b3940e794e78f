#include "hybridsec/compute_energy.hpp"

#include <algorithm>
#include <cmath>

#include "hybridsec/errors.hpp"

namespace hybridsec {

double local_cpu_frequency(const TaskSpec& task, double slot) {
  return task.bits * task.cycles_per_bit / slot;
}

double legit_cpu_frequency(std::span<const std::uint8_t> prev_offload,
                           std::span<const TaskSpec> prev_tasks, double slot) {
  if (prev_offload.size() != prev_tasks.size())
    throw ContractViolation("legit_cpu_frequency: decision and task sequences differ in length");
  double cycles = 0.0;
  for (std::size_t u = 0; u < prev_tasks.size(); ++u)
    if (prev_offload[u]) cycles += prev_tasks[u].bits * prev_tasks[u].cycles_per_bit;
  return cycles / slot;
}

double computation_energy(double frequency, double kappa, double slot) {
  return kappa * frequency * frequency * frequency * slot;
}

double helper_transmit_energy(Mode mode, std::span<const std::uint8_t> offload,
                              const PowerConfig& power, double slot) {
  if (mode == Mode::Jam) return power.p_jam * slot;
  if (offload.empty()) throw ContractViolation("helper_transmit_energy: no UEs");
  const auto offloaders = std::count_if(offload.begin(), offload.end(), [](auto z) { return z != 0; });
  return power.p_relay * slot / (2.0 * static_cast<double>(offload.size())) *
         static_cast<double>(offloaders);
}

double helper_flight_energy(Action velocity, double mass, double slot) {
  return 0.5 * mass * slot * (velocity.vx * velocity.vx + velocity.vy * velocity.vy);
}

double ue_energy(bool offload, Mode mode, const TaskSpec& task, const PowerConfig& power,
                 const EnergyParams& params, int num_ues) {
  if (offload) {
    const double share = params.slot / static_cast<double>(num_ues);
    // Relay halves the UE's own transmission time.
    return power.p_ue * (mode == Mode::Relay ? 0.5 * share : share);
  }
  return computation_energy(local_cpu_frequency(task, params.slot), params.kappa, params.slot);
}

bool check_ue_energy(bool offload, Mode mode, const TaskSpec& task, const PowerConfig& power,
                     const EnergyParams& params, int num_ues) {
  return ue_energy(offload, mode, task, power, params, num_ues) <= params.ue_budget;
}

bool check_legit_energy(std::span<const std::uint8_t> prev_offload,
                        std::span<const TaskSpec> prev_tasks, const EnergyParams& params) {
  const double f = legit_cpu_frequency(prev_offload, prev_tasks, params.slot);
  return computation_energy(f, params.kappa, params.slot) <= params.legit_budget;
}

bool check_helper_energy(Mode mode, std::span<const std::uint8_t> offload, Action velocity,
                         const PowerConfig& power, const EnergyParams& params) {
  return helper_flight_energy(velocity, params.mass, params.slot) +
             helper_transmit_energy(mode, offload, power, params.slot) <=
         params.helper_budget;
}

double max_feasible_speed(const PowerConfig& power, const EnergyParams& params) {
  const double worst_transmit = std::max(power.p_jam, 0.5 * power.p_relay) * params.slot;
  const double spare = params.helper_budget - worst_transmit;
  if (spare <= 0.0) return 0.0;
  return std::sqrt(2.0 * spare / (params.mass * params.slot));
}

}  // namespace hybridsec
