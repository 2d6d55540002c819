#pragma once

// Three-phase source feeding a six-pulse diode bridge. Each phase is an EMF
// in series with the armature resistance and the source inductance; the
// sources are star connected with a floating neutral. The DC side is the
// load resistor in series with the smoothing inductor.

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hwec {

enum class DiodeModel { ideal, smooth };

std::string to_string(DiodeModel model);
DiodeModel diode_model_from_string(const std::string& name);

struct CircuitSpec {
  /// Values below 1 nH, zero included, are simulated as 1 nH.
  double source_inductance_H = 0.15;
  double load_resistance_ohm = 4.2;
  double smoothing_inductance_H = 2.7;
  DiodeModel diode = DiodeModel::ideal;
  /// Ideal-switch conduction drop.
  double forward_drop_V = 0.0;
  /// Per-phase armature resistance; unset means derive it from the coils.
  std::optional<double> armature_resistance_ohm;
  /// Exponential diode i = Is (exp(v / Vt) - 1).
  double smooth_saturation_current_A = 1e-4;
  double smooth_emission_voltage_V = 0.02585;

  void validate() const;
  bool operator==(const CircuitSpec&) const = default;
};

using EmfSource = std::function<std::array<double, 3>(double t_s)>;

struct SimulationOptions {
  double t_end_s = 1.0;
  /// Output sampling interval; the span is split into round(t_end/dt) steps.
  double dt_s = 1e-3;
  /// Switching instants are located to this width.
  double event_tolerance_s = 1e-6;
  int max_state_iterations = 64;
  int max_newton_iterations = 100;
};

struct EnergyLedger {
  double source_J = 0.0;
  double load_J = 0.0;
  double armature_J = 0.0;
  double diode_J = 0.0;
  double stored_J = 0.0;  // inductor energy at this instant
};

struct TransientResult {
  std::vector<double> t_s;
  std::array<std::vector<double>, 3> emf_V;
  std::array<std::vector<double>, 3> current_A;
  /// Voltage across the load resistor.
  std::vector<double> vout_V;
  std::vector<double> idc_A;
  /// Bit k set when diode k conducts: 0-2 upper (phases 1-3), 3-5 lower.
  std::vector<std::uint8_t> diode_state;
  /// Diode currents, same bit order as diode_state.
  std::vector<std::array<double, 6>> diode_current_A;
  /// Cumulative energies since t = 0, sampled with the outputs.
  std::vector<EnergyLedger> energy;
  double armature_resistance_ohm = 0.0;
  int switching_events = 0;

  [[nodiscard]] std::size_t size() const { return t_s.size(); }
};

/// Integrates the network from rest. Throws ConvergenceError when the diode
/// states cycle without settling or a Newton solve fails.
TransientResult simulate(const EmfSource& emf, const CircuitSpec& circuit,
                         const SimulationOptions& options);

/// Relative energy balance residual over [t_begin, t_end]: source energy
/// minus load, losses and the change in stored energy, over source energy.
double energy_residual(const TransientResult& ts, double t_begin_s, double t_end_s);

struct Spectrum {
  double fundamental_Hz = 0.0;
  double thd = 0.0;
};

/// Harmonic distortion of uniformly sampled data covering a whole number of
/// periods of interest: energy of every non-DC bin except the strongest one,
/// over the energy of that bin. Throws DomainError when there is no AC
/// content.
Spectrum spectrum_of(const std::vector<double>& samples, double duration_s);

struct Metrics {
  double window_begin_s = 0.0;
  double window_end_s = 0.0;
  std::array<double, 3> vrms_in_V{};
  std::array<double, 3> irms_A{};
  std::array<double, 3> peak_emf_V{};
  double peak_phase_current_A = 0.0;
  double vrms_out_V = 0.0;
  /// Mean power into the load resistor.
  double power_out_W = 0.0;
  /// Mean real power delivered by the EMFs.
  double source_power_W = 0.0;
  double armature_loss_W = 0.0;
  double diode_loss_W = 0.0;
  double joule_loss_W = 0.0;
  double efficiency_percent = 0.0;
  /// Source real power over the sum of per-phase Vrms * Irms.
  double power_factor = 0.0;
  std::array<double, 3> thd_in{};
  double thd_out = 0.0;
  double fundamental_in_Hz = 0.0;
  double fundamental_out_Hz = 0.0;
  double energy_residual = 0.0;
};

/// Metrics over the samples in [t_begin, t_end]. The window must hold at
/// least two samples and should span whole wave periods.
Metrics compute_metrics(const TransientResult& ts, double t_begin_s, double t_end_s);

/// CSV with columns t_s, e1_V, e2_V, e3_V, i1_A, i2_A, i3_A, vout_V, idc_A.
void write_transient_csv(std::ostream& os, const TransientResult& ts);

}  // namespace hwec
