#include "hwec/excitation.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "hwec/errors.hpp"
#include "hwec/io.hpp"

namespace hwec {

std::string to_string(WaveForm form) {
  return form == WaveForm::sinusoidal ? "sinusoidal" : "triangular";
}

WaveForm wave_form_from_string(const std::string& name) {
  if (name == "sinusoidal") return WaveForm::sinusoidal;
  if (name == "triangular") return WaveForm::triangular;
  throw ValidationError("wave: unknown form '" + name + "' (sinusoidal | triangular)");
}

void WaveSpec::validate() const {
  if (!(amplitude_m > 0.0)) throw ValidationError("wave: amplitude must be positive");
  if (!(frequency_Hz > 0.0)) throw ValidationError("wave: frequency must be positive");
  if (!std::isfinite(phase_rad)) throw ValidationError("wave: phase must be finite");
}

ActuatorState actuator_state(const WaveSpec& wave, double t_s) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double a = wave.amplitude_m;
  const double f = wave.frequency_Hz;
  if (wave.form == WaveForm::sinusoidal) {
    const double theta = two_pi * f * t_s + wave.phase_rad;
    return {a * std::sin(theta), two_pi * f * a * std::cos(theta)};
  }
  // Fraction of the cycle, 0 at an upward zero crossing.
  double u = f * t_s + wave.phase_rad / two_pi;
  u -= std::floor(u);
  const double speed = 4.0 * a * f;
  if (u <= 0.25) return {4.0 * a * u, speed};
  if (u <= 0.75) return {a * (2.0 - 4.0 * u), -speed};
  return {a * (4.0 * u - 4.0), speed};
}

void write_waveform_csv(std::ostream& os, const WaveSpec& wave, std::span<const double> times) {
  os << "t_s,z_m,v_mps\n";
  for (double t : times) {
    const auto s = actuator_state(wave, t);
    os << io::fmt(t) << ',' << io::fmt(s.position_m) << ',' << io::fmt(s.velocity_mps) << '\n';
  }
}

}  // namespace hwec
