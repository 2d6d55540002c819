#pragma once

// Prescribed actuator kinematics. The buoy is rigidly coupled to the
// actuator, so the actuator follows the wave elevation directly.

#include <iosfwd>
#include <span>
#include <string>

namespace hwec {

enum class WaveForm { sinusoidal, triangular };

std::string to_string(WaveForm form);
WaveForm wave_form_from_string(const std::string& name);

struct WaveSpec {
  WaveForm form = WaveForm::sinusoidal;
  double amplitude_m = 1.25;
  double frequency_Hz = 0.167;
  double phase_rad = 0.0;

  [[nodiscard]] double period_s() const { return 1.0 / frequency_Hz; }
  void validate() const;
  bool operator==(const WaveSpec&) const = default;
};

struct ActuatorState {
  double position_m;
  double velocity_mps;
};

/// Sinusoid z = A sin(2 pi f t + phi), or the triangle wave through the same
/// zero crossings and extremes with |v| = 4 A f. At a triangle vertex the
/// velocity is the left limit.
ActuatorState actuator_state(const WaveSpec& wave, double t_s);

/// CSV with columns t_s, z_m, v_mps.
void write_waveform_csv(std::ostream& os, const WaveSpec& wave, std::span<const double> times);

}  // namespace hwec
