#pragma once

// End-to-end operation: actuator motion, phase EMFs from the flux linkage of
// the stator coils, the rectifier transient and its metrics.

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "hwec/circuit.hpp"
#include "hwec/machine.hpp"

namespace hwec {

/// Flux-linkage model of a machine, built once and shared read-only.
class GeneratorModel {
 public:
  explicit GeneratorModel(const MachineConfig& machine);

  /// Phase EMFs for a given magnet current and actuator state.
  [[nodiscard]] std::array<double, 3> emf(double current_A, double position_m,
                                          double velocity_mps) const;
  /// d(lambda)/dz of each phase at unit magnet current, boost included.
  [[nodiscard]] std::array<double, 3> gradient_per_amp(double position_m) const;
  [[nodiscard]] const LinkageModel& linkage() const { return linkage_; }
  [[nodiscard]] double boost() const { return boost_; }

 private:
  LinkageModel linkage_;
  double boost_;
};

/// e_k(t) = -(d lambda_k / dz)(z(t)) v(t) on the given times.
std::vector<std::array<double, 3>> emf_waveforms(const GeneratorModel& model,
                                                 const WaveSpec& wave, double current_A,
                                                 std::span<const double> times);

struct CaseSpec {
  WaveSpec wave;
  double current_A = 0.0;
  /// Known critical current; run_case refuses currents above it.
  std::optional<double> critical_current_A;
};

struct CaseResult {
  CaseSpec spec;
  /// Output step actually used so that a wave period holds whole steps.
  double dt_s = 0.0;
  TransientResult transient;
  Metrics metrics;
};

/// Time step snapped to divide one period exactly.
double aligned_step(double period_s, double requested_dt_s);

/// Simulates warmup + analysis cycles and evaluates metrics over the
/// analysis cycles.
CaseResult run_case(const MachineConfig& machine, const GeneratorModel& model,
                    const CaseSpec& spec);

/// The machine's wave with a different amplitude, at a given current.
CaseSpec case_for(const MachineConfig& machine, double amplitude_m, double current_A);

}  // namespace hwec
