#include "hwec/generator.hpp"

#include <cmath>
#include <sstream>

#include "hwec/errors.hpp"

namespace hwec {

GeneratorModel::GeneratorModel(const MachineConfig& machine)
    : linkage_(machine.assembly,
               armature_coils(machine.armature, machine.assembly.pole_pitch_m),
               machine.numerics.profile, machine.numerics.flux),
      boost_(machine.iron_boost_factor) {}

std::array<double, 3> GeneratorModel::gradient_per_amp(double position_m) const {
  std::array<double, 3> g{};
  for (int k = 0; k < 3; ++k) g[k] = boost_ * linkage_.phase_gradient_per_amp(k, position_m);
  return g;
}

std::array<double, 3> GeneratorModel::emf(double current_A, double position_m,
                                          double velocity_mps) const {
  auto g = gradient_per_amp(position_m);
  for (double& v : g) v *= -current_A * velocity_mps;
  return g;
}

std::vector<std::array<double, 3>> emf_waveforms(const GeneratorModel& model,
                                                 const WaveSpec& wave, double current_A,
                                                 std::span<const double> times) {
  std::vector<std::array<double, 3>> out;
  out.reserve(times.size());
  for (double t : times) {
    const auto s = actuator_state(wave, t);
    out.push_back(model.emf(current_A, s.position_m, s.velocity_mps));
  }
  return out;
}

double aligned_step(double period_s, double requested_dt_s) {
  if (!(period_s > 0.0) || !(requested_dt_s > 0.0)) {
    throw ValidationError("time step: period and step must be positive");
  }
  const double n = std::max(1.0, std::round(period_s / requested_dt_s));
  return period_s / n;
}

CaseSpec case_for(const MachineConfig& machine, double amplitude_m, double current_A) {
  CaseSpec c;
  c.wave = machine.wave;
  c.wave.amplitude_m = amplitude_m;
  c.current_A = current_A;
  return c;
}

CaseResult run_case(const MachineConfig& machine, const GeneratorModel& model,
                    const CaseSpec& spec) {
  spec.wave.validate();
  if (!(spec.current_A >= 0.0)) throw ValidationError("run_case: magnet current must be >= 0");
  if (spec.critical_current_A && spec.current_A > *spec.critical_current_A) {
    std::ostringstream os;
    os << "run_case: magnet current " << spec.current_A << " A exceeds the critical current "
       << *spec.critical_current_A << " A";
    throw ValidationError(os.str());
  }
  const auto& num = machine.numerics;
  const double period = spec.wave.period_s();
  CaseResult r;
  r.spec = spec;
  r.dt_s = aligned_step(period, num.time_step_s);
  const int cycles = num.warmup_cycles + num.analysis_cycles;
  const long steps_per_period = std::lround(period / r.dt_s);

  CircuitSpec circuit = machine.circuit;
  circuit.armature_resistance_ohm = armature_resistance(machine);
  const WaveSpec wave = spec.wave;
  const double current = spec.current_A;
  EmfSource source = [&model, wave, current](double t) {
    const auto s = actuator_state(wave, t);
    return model.emf(current, s.position_m, s.velocity_mps);
  };
  SimulationOptions opt;
  opt.dt_s = r.dt_s;
  opt.t_end_s = static_cast<double>(cycles * steps_per_period) * r.dt_s;
  r.transient = simulate(source, circuit, opt);
  const double t0 = static_cast<double>(num.warmup_cycles * steps_per_period) * r.dt_s;
  r.metrics = compute_metrics(r.transient, t0, opt.t_end_s);
  return r;
}

}  // namespace hwec
