#include "hwec/circuit.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <ostream>
#include <sstream>

#include "hwec/errors.hpp"
#include "hwec/io.hpp"

namespace hwec {

std::string to_string(DiodeModel model) { return model == DiodeModel::ideal ? "ideal" : "smooth"; }

DiodeModel diode_model_from_string(const std::string& name) {
  if (name == "ideal") return DiodeModel::ideal;
  if (name == "smooth") return DiodeModel::smooth;
  throw ValidationError("circuit: unknown diode model '" + name + "' (ideal | smooth)");
}

void CircuitSpec::validate() const {
  if (!(source_inductance_H >= 0.0) || !(smoothing_inductance_H >= 0.0)) {
    throw ValidationError("circuit: inductances must be non-negative");
  }
  if (!(load_resistance_ohm > 0.0)) throw ValidationError("circuit: load resistance must be positive");
  if (!(forward_drop_V >= 0.0)) throw ValidationError("circuit: forward drop must be non-negative");
  if (armature_resistance_ohm && !(*armature_resistance_ohm >= 0.0)) {
    throw ValidationError("circuit: armature resistance must be non-negative");
  }
  if (!(smooth_saturation_current_A > 0.0) || !(smooth_emission_voltage_V > 0.0)) {
    throw ValidationError("circuit: smooth diode parameters must be positive");
  }
}

namespace {

// Unknowns: node voltages a, b, c, P, n (N is ground), branch currents
// ia, ib, ic, idc, then the six diode currents.
constexpr int kN = 15;
constexpr int kVP = 3;
constexpr int kVn = 4;
constexpr int kI = 5;
constexpr int kIdc = 8;
constexpr int kD = 9;
constexpr double kGmin = 1e-12;
constexpr double kMinSourceInductance = 1e-9;

using Vec = Eigen::Matrix<double, kN, 1>;
using Mat = Eigen::Matrix<double, kN, kN>;
using Emf = std::array<double, 3>;

enum class Method { trapezoid, backward_euler };

// Anode minus cathode voltage of diode d.
inline double diode_voltage(const Vec& x, int d) {
  return d < 3 ? x[d] - x[kVP] : -x[d - 3];
}

class Network {
 public:
  Network(const CircuitSpec& c, double r_arm) : c_(c), r_(r_arm) {}

  // Shared rows: KCL, inductive branches. Diode rows are left to the caller.
  void assemble(Mat& a, Vec& b, const Vec& x0, const Emf& e0, const Emf& e1, double h,
                Method m) const {
    a.setZero();
    b.setZero();
    for (int k = 0; k < 3; ++k) {
      a(k, kI + k) = 1.0;
      a(k, kD + k) = -1.0;
      a(k, kD + 3 + k) = 1.0;
      a(k, k) = -kGmin;
      a(kVP, kD + k) = 1.0;
      a(kVn, kI + k) = -1.0;
    }
    a(kVP, kIdc) = -1.0;
    a(kVP, kVP) = -kGmin;
    a(kVn, kVn) = -kGmin;

    // A zero source inductance would make overlap states singular.
    const double l = std::max(c_.source_inductance_H, kMinSourceInductance);
    for (int k = 0; k < 3; ++k) {
      const int row = kI + k;
      double alpha, hist;
      if (m == Method::trapezoid) {
        alpha = 2.0 * l / h + r_;
        hist = (2.0 * l / h - r_) * x0[kI + k] + (e0[k] - (x0[k] - x0[kVn]));
      } else {
        alpha = l / h + r_;
        hist = l / h * x0[kI + k];
      }
      a(row, kI + k) = alpha;
      a(row, k) = 1.0;
      a(row, kVn) = -1.0;
      b[row] = e1[k] + hist;
    }
    const double ld = c_.smoothing_inductance_H;
    const double rl = c_.load_resistance_ohm;
    double beta, hist;
    if (m == Method::trapezoid) {
      beta = 2.0 * ld / h + rl;
      hist = ld > 0.0 ? (2.0 * ld / h - rl) * x0[kIdc] + x0[kVP] : 0.0;
    } else {
      beta = ld / h + rl;
      hist = ld / h * x0[kIdc];
    }
    a(kIdc, kIdc) = beta;
    a(kIdc, kVP) = -1.0;
    b[kIdc] = hist;
  }

  // Diode row for an ideal switch.
  void ideal_row(Mat& a, Vec& b, int d, bool on) const {
    const int row = kD + d;
    if (!on) {
      a(row, kD + d) = 1.0;
      return;
    }
    if (d < 3) {
      a(row, d) = 1.0;
      a(row, kVP) = -1.0;
    } else {
      a(row, d - 3) = -1.0;
    }
    b[row] = c_.forward_drop_V;
  }

  // Linearised exponential diode at junction voltage v.
  void smooth_row(Mat& a, Vec& b, int d, double v) const {
    const double is = c_.smooth_saturation_current_A;
    const double vt = c_.smooth_emission_voltage_V;
    const double ex = std::exp(v / vt);
    const double g = is / vt * ex + kGmin;
    const double i = is * (ex - 1.0) + kGmin * v;
    const int row = kD + d;
    a(row, kD + d) = 1.0;
    if (d < 3) {
      a(row, d) = -g;
      a(row, kVP) = g;
    } else {
      a(row, d - 3) = g;
    }
    b[row] = i - g * v;
  }

  [[nodiscard]] double smooth_current(double v) const {
    return c_.smooth_saturation_current_A * (std::exp(v / c_.smooth_emission_voltage_V) - 1.0) +
           kGmin * v;
  }

  [[nodiscard]] double limit_junction(double v_new, double v_old) const {
    const double vt = c_.smooth_emission_voltage_V;
    const double vcrit = vt * std::log(vt / (std::sqrt(2.0) * c_.smooth_saturation_current_A));
    if (v_new > vcrit && std::abs(v_new - v_old) > 2.0 * vt) {
      if (v_old > 0.0) {
        const double arg = 1.0 + (v_new - v_old) / vt;
        return arg > 0.0 ? v_old + vt * std::log(arg) : vcrit;
      }
      return vt * std::log(v_new / vt);
    }
    return v_new;
  }

  [[nodiscard]] const CircuitSpec& spec() const { return c_; }
  [[nodiscard]] double r_arm() const { return r_; }

 private:
  const CircuitSpec& c_;
  double r_;
};

Vec solve(const Mat& a, const Vec& b) {
  Vec x = a.partialPivLu().solve(b);
  if (!x.allFinite()) throw ConvergenceError("circuit: singular network matrix");
  return x;
}

constexpr double kCurrentTol = 1e-10;
constexpr double kVoltageTol = 1e-7;

// Index of the diode whose state contradicts the solution, or -1.
int worst_violation(const Vec& x, std::uint8_t state, double drop) {
  int worst = -1;
  double amount = 0.0;
  for (int d = 0; d < 6; ++d) {
    if ((state >> d) & 1U) {
      const double i = x[kD + d];
      if (i < -kCurrentTol && -i > amount) {
        amount = -i;
        worst = d;
      }
    }
  }
  if (worst >= 0) return worst;
  for (int d = 0; d < 6; ++d) {
    if (!((state >> d) & 1U)) {
      const double over = diode_voltage(x, d) - drop;
      if (over > kVoltageTol && over > amount) {
        amount = over;
        worst = d;
      }
    }
  }
  return worst;
}

struct Recorder {
  TransientResult& out;
  const Network& net;
  EnergyLedger acc;

  [[nodiscard]] double stored(const Vec& x) const {
    const auto& c = net.spec();
    double s = 0.5 * c.smoothing_inductance_H * x[kIdc] * x[kIdc];
    for (int k = 0; k < 3; ++k) s += 0.5 * c.source_inductance_H * x[kI + k] * x[kI + k];
    return s;
  }

  struct Power {
    double source, load, armature, diode;
  };

  [[nodiscard]] Power power(const Vec& x, const Emf& e, bool smooth) const {
    const auto& c = net.spec();
    Power p{0.0, c.load_resistance_ohm * x[kIdc] * x[kIdc], 0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
      p.source += e[k] * x[kI + k];
      p.armature += net.r_arm() * x[kI + k] * x[kI + k];
    }
    for (int d = 0; d < 6; ++d) {
      p.diode += (smooth ? diode_voltage(x, d) : c.forward_drop_V) * x[kD + d];
    }
    return p;
  }

  void advance(const Vec& x0, const Emf& e0, const Vec& x1, const Emf& e1, double h, bool smooth) {
    const Power p0 = power(x0, e0, smooth);
    const Power p1 = power(x1, e1, smooth);
    acc.source_J += 0.5 * h * (p0.source + p1.source);
    acc.load_J += 0.5 * h * (p0.load + p1.load);
    acc.armature_J += 0.5 * h * (p0.armature + p1.armature);
    acc.diode_J += 0.5 * h * (p0.diode + p1.diode);
  }

  void sample(double t, const Vec& x, const Emf& e, std::uint8_t state) {
    out.t_s.push_back(t);
    for (int k = 0; k < 3; ++k) {
      out.emf_V[k].push_back(e[k]);
      out.current_A[k].push_back(x[kI + k]);
    }
    out.idc_A.push_back(x[kIdc]);
    out.vout_V.push_back(net.spec().load_resistance_ohm * x[kIdc]);
    out.diode_state.push_back(state);
    std::array<double, 6> id{};
    for (int d = 0; d < 6; ++d) id[d] = x[kD + d];
    out.diode_current_A.push_back(id);
    EnergyLedger e_now = acc;
    e_now.stored_J = stored(x);
    out.energy.push_back(e_now);
  }
};

class IdealStepper {
 public:
  IdealStepper(const Network& net, const EmfSource& emf, const SimulationOptions& opt,
               Recorder& rec)
      : net_(net), emf_(emf), opt_(opt), rec_(rec) {}

  Vec step_with(std::uint8_t state, const Vec& x0, const Emf& e0, double t0, double h, Method m,
                Emf& e1) const {
    e1 = emf_(t0 + h);
    Mat a;
    Vec b;
    net_.assemble(a, b, x0, e0, e1, h, m);
    for (int d = 0; d < 6; ++d) net_.ideal_row(a, b, d, (state >> d) & 1U);
    return solve(a, b);
  }

  void commit(Vec& x, Emf& e, double& t, const Vec& x1, const Emf& e1, double h) {
    rec_.advance(x, e, x1, e1, h, false);
    x = x1;
    e = e1;
    t += h;
  }

  // Advances (t, x) to t_target.
  void run_to(double t_target, double& t, Vec& x, Emf& e) {
    int events = 0;
    while (t_target - t > 1e-12 * std::max(1.0, t_target)) {
      const double h = t_target - t;
      const Method m = restart_ ? Method::backward_euler : Method::trapezoid;
      Emf e1;
      Vec x1 = step_with(state_, x, e, t, h, m, e1);
      if (worst_violation(x1, state_, net_.spec().forward_drop_V) < 0) {
        commit(x, e, t, x1, e1, h);
        restart_ = false;
        continue;
      }
      if (++events > 100000) fail(t, "too many switching events in one output step");
      // Bisect for the last consistent step length.
      double lo = 0.0;
      double hi = h;
      Vec x_lo = x;
      Emf e_lo = e;
      while (hi - lo > opt_.event_tolerance_s) {
        const double mid = 0.5 * (lo + hi);
        Emf em;
        Vec xm = step_with(state_, x, e, t, mid, m, em);
        if (worst_violation(xm, state_, net_.spec().forward_drop_V) < 0) {
          lo = mid;
          x_lo = xm;
          e_lo = em;
        } else {
          hi = mid;
        }
      }
      if (lo > 0.0) commit(x, e, t, x_lo, e_lo, lo);
      // Short implicit step across the switching instant with a settled state.
      const double hs = std::min(hi - lo, t_target - t);
      Emf es;
      Vec xs;
      for (int iter = 0;; ++iter) {
        if (iter >= opt_.max_state_iterations) fail(t, "diode states did not settle");
        xs = step_with(state_, x, e, t, hs, Method::backward_euler, es);
        const int d = worst_violation(xs, state_, net_.spec().forward_drop_V);
        if (d < 0) break;
        state_ ^= static_cast<std::uint8_t>(1U << d);
      }
      commit(x, e, t, xs, es, hs);
      ++rec_.out.switching_events;
      restart_ = true;
    }
    t = t_target;
  }

  [[nodiscard]] std::uint8_t state() const { return state_; }

 private:
  [[noreturn]] void fail(double t, const char* why) const {
    std::ostringstream os;
    os << "circuit: " << why << " at t = " << t << " s, diode states 0x" << std::hex
       << static_cast<int>(state_);
    throw ConvergenceError(os.str());
  }

  const Network& net_;
  const EmfSource& emf_;
  const SimulationOptions& opt_;
  Recorder& rec_;
  std::uint8_t state_ = 0;
  bool restart_ = true;
};

class SmoothStepper {
 public:
  SmoothStepper(const Network& net, const EmfSource& emf, const SimulationOptions& opt,
                Recorder& rec)
      : net_(net), emf_(emf), opt_(opt), rec_(rec) {}

  bool newton(const Vec& x0, const Emf& e0, double t0, double h, Vec& x1, Emf& e1) const {
    e1 = emf_(t0 + h);
    Mat base;
    Vec rhs;
    net_.assemble(base, rhs, x0, e0, e1, h, Method::backward_euler);
    Vec x = x0;
    std::array<double, 6> vj{};
    for (int d = 0; d < 6; ++d) vj[d] = diode_voltage(x0, d);
    for (int it = 0; it < opt_.max_newton_iterations; ++it) {
      Mat a = base;
      Vec b = rhs;
      for (int d = 0; d < 6; ++d) net_.smooth_row(a, b, d, vj[d]);
      const Vec xn = solve(a, b);
      bool limited = false;
      for (int d = 0; d < 6; ++d) {
        const double v = diode_voltage(xn, d);
        const double vl = net_.limit_junction(v, vj[d]);
        limited = limited || vl != v;
        vj[d] = vl;
      }
      const double scale = std::max(1.0, xn.cwiseAbs().maxCoeff());
      const double change = (xn - x).cwiseAbs().maxCoeff();
      x = xn;
      if (!limited && it > 0 && change <= 1e-10 * scale) {
        // Replace the linearised diode currents by the exact ones at the
        // converged junction voltages.
        for (int d = 0; d < 6; ++d) x[kD + d] = net_.smooth_current(diode_voltage(x, d));
        x1 = x;
        return true;
      }
    }
    return false;
  }

  void advance(double t0, double h, Vec& x, Emf& e, int depth) {
    Vec x1;
    Emf e1;
    if (newton(x, e, t0, h, x1, e1)) {
      rec_.advance(x, e, x1, e1, h, true);
      x = x1;
      e = e1;
      return;
    }
    if (depth >= 12) {
      std::ostringstream os;
      os << "circuit: Newton iteration failed near t = " << t0 << " s";
      throw ConvergenceError(os.str());
    }
    advance(t0, 0.5 * h, x, e, depth + 1);
    advance(t0 + 0.5 * h, 0.5 * h, x, e, depth + 1);
  }

 private:
  const Network& net_;
  const EmfSource& emf_;
  const SimulationOptions& opt_;
  Recorder& rec_;
};

std::uint8_t smooth_state(const Vec& x) {
  std::uint8_t s = 0;
  for (int d = 0; d < 6; ++d) {
    if (x[kD + d] > 1e-3) s |= static_cast<std::uint8_t>(1U << d);
  }
  return s;
}

}  // namespace

TransientResult simulate(const EmfSource& emf, const CircuitSpec& circuit,
                         const SimulationOptions& options) {
  circuit.validate();
  if (!(options.t_end_s > 0.0) || !(options.dt_s > 0.0)) {
    throw ValidationError("simulate: time span and step must be positive");
  }
  if (!(options.event_tolerance_s > 0.0)) throw ValidationError("simulate: event tolerance must be positive");
  const long steps = std::lround(options.t_end_s / options.dt_s);
  if (steps < 1) throw ValidationError("simulate: time span shorter than one step");
  const double dt = options.t_end_s / static_cast<double>(steps);

  TransientResult out;
  out.armature_resistance_ohm = circuit.armature_resistance_ohm.value_or(0.0);
  const Network net(circuit, out.armature_resistance_ohm);
  Recorder rec{out, net, {}};
  const std::size_t n = static_cast<std::size_t>(steps) + 1;
  out.t_s.reserve(n);
  out.vout_V.reserve(n);
  out.idc_A.reserve(n);
  out.energy.reserve(n);
  for (int k = 0; k < 3; ++k) {
    out.emf_V[k].reserve(n);
    out.current_A[k].reserve(n);
  }

  Vec x = Vec::Zero();
  Emf e = emf(0.0);
  double t = 0.0;
  if (circuit.diode == DiodeModel::ideal) {
    IdealStepper stepper(net, emf, options, rec);
    rec.sample(0.0, x, e, 0);
    for (long s = 1; s <= steps; ++s) {
      stepper.run_to(static_cast<double>(s) * dt, t, x, e);
      rec.sample(t, x, e, stepper.state());
    }
  } else {
    SmoothStepper stepper(net, emf, options, rec);
    rec.sample(0.0, x, e, 0);
    for (long s = 1; s <= steps; ++s) {
      const double t1 = static_cast<double>(s) * dt;
      stepper.advance(t, t1 - t, x, e, 0);
      t = t1;
      rec.sample(t, x, e, smooth_state(x));
    }
  }
  return out;
}

namespace {

std::pair<std::size_t, std::size_t> window_indices(const TransientResult& ts, double t0, double t1) {
  if (!(t1 > t0)) throw ValidationError("metrics: window end must follow its start");
  const double slack = 1e-9 * std::max(1.0, t1);
  const auto first = std::lower_bound(ts.t_s.begin(), ts.t_s.end(), t0 - slack);
  const auto last = std::upper_bound(ts.t_s.begin(), ts.t_s.end(), t1 + slack);
  if (std::distance(first, last) < 2) {
    throw ValidationError("metrics: analysis window holds fewer than two samples");
  }
  if (ts.t_s.empty() || ts.t_s.back() < t1 - slack) {
    throw ValidationError("metrics: transient is shorter than the analysis window");
  }
  return {static_cast<std::size_t>(first - ts.t_s.begin()),
          static_cast<std::size_t>(last - ts.t_s.begin()) - 1};
}

// Trapezoid mean of f(i) over samples [i0, i1].
template <class F>
double window_mean(const TransientResult& ts, std::size_t i0, std::size_t i1, F&& f) {
  double acc = 0.0;
  for (std::size_t i = i0; i < i1; ++i) {
    acc += 0.5 * (ts.t_s[i + 1] - ts.t_s[i]) * (f(i) + f(i + 1));
  }
  return acc / (ts.t_s[i1] - ts.t_s[i0]);
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

double energy_residual(const TransientResult& ts, double t_begin_s, double t_end_s) {
  const auto [i0, i1] = window_indices(ts, t_begin_s, t_end_s);
  const EnergyLedger& a = ts.energy[i0];
  const EnergyLedger& b = ts.energy[i1];
  const double source = b.source_J - a.source_J;
  const double sinks = (b.load_J - a.load_J) + (b.armature_J - a.armature_J) +
                       (b.diode_J - a.diode_J) + (b.stored_J - a.stored_J);
  if (source == 0.0) return sinks == 0.0 ? 0.0 : 1.0;
  return std::abs(source - sinks) / std::abs(source);
}

Spectrum spectrum_of(const std::vector<double>& samples, double duration_s) {
  const std::size_t n = samples.size();
  if (n < 4) throw ValidationError("spectrum: need at least four samples");
  if (!(duration_s > 0.0)) throw ValidationError("spectrum: duration must be positive");
  std::vector<double> in(samples);
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  // One-sided energies; interior bins stand for their mirror image too.
  std::vector<double> energy(out.size());
  double ac = 0.0;
  for (std::size_t k = 1; k < out.size(); ++k) {
    const bool nyquist = n % 2 == 0 && k == n / 2;
    energy[k] = (nyquist ? 1.0 : 2.0) * std::norm(out[k]);
    ac += energy[k];
  }
  const double dc = std::norm(out[0]);
  if (!(ac > 1e-24 * (dc + ac)) || ac == 0.0) {
    throw DomainError("spectrum: signal has no AC content, harmonic distortion undefined");
  }
  std::size_t fund = 1;
  for (std::size_t k = 2; k < out.size(); ++k) {
    if (energy[k] > energy[fund]) fund = k;
  }
  return {static_cast<double>(fund) / duration_s, (ac - energy[fund]) / energy[fund]};
}

Metrics compute_metrics(const TransientResult& ts, double t_begin_s, double t_end_s) {
  const auto [i0, i1] = window_indices(ts, t_begin_s, t_end_s);
  Metrics m;
  m.window_begin_s = ts.t_s[i0];
  m.window_end_s = ts.t_s[i1];
  const double r = ts.armature_resistance_ohm;
  double apparent = 0.0;
  for (int k = 0; k < 3; ++k) {
    const auto& e = ts.emf_V[k];
    const auto& i = ts.current_A[k];
    m.vrms_in_V[k] = std::sqrt(window_mean(ts, i0, i1, [&](std::size_t j) { return e[j] * e[j]; }));
    m.irms_A[k] = std::sqrt(window_mean(ts, i0, i1, [&](std::size_t j) { return i[j] * i[j]; }));
    m.source_power_W += window_mean(ts, i0, i1, [&](std::size_t j) { return e[j] * i[j]; });
    m.armature_loss_W += r * m.irms_A[k] * m.irms_A[k];
    apparent += m.vrms_in_V[k] * m.irms_A[k];
    for (std::size_t j = i0; j <= i1; ++j) {
      m.peak_emf_V[k] = std::max(m.peak_emf_V[k], std::abs(e[j]));
      m.peak_phase_current_A = std::max(m.peak_phase_current_A, std::abs(i[j]));
    }
  }
  m.vrms_out_V = std::sqrt(
      window_mean(ts, i0, i1, [&](std::size_t j) { return ts.vout_V[j] * ts.vout_V[j]; }));
  m.power_out_W =
      window_mean(ts, i0, i1, [&](std::size_t j) { return ts.vout_V[j] * ts.idc_A[j]; });
  const double span = ts.t_s[i1] - ts.t_s[i0];
  m.diode_loss_W = (ts.energy[i1].diode_J - ts.energy[i0].diode_J) / span;
  m.joule_loss_W = m.armature_loss_W + m.diode_loss_W;
  const double total = m.power_out_W + m.joule_loss_W;
  m.efficiency_percent = total > 0.0 ? 100.0 * m.power_out_W / total : 0.0;
  m.power_factor = apparent > 0.0 ? m.source_power_W / apparent : 0.0;

  // Periodic sampling: drop the closing sample of the window.
  auto slice = [&](const std::vector<double>& v) {
    return std::vector<double>(v.begin() + static_cast<long>(i0), v.begin() + static_cast<long>(i1));
  };
  for (int k = 0; k < 3; ++k) {
    const Spectrum s = spectrum_of(slice(ts.emf_V[k]), span);
    m.thd_in[k] = s.thd;
    if (k == 0) m.fundamental_in_Hz = s.fundamental_Hz;
  }
  const Spectrum so = spectrum_of(slice(ts.vout_V), span);
  m.thd_out = so.thd;
  m.fundamental_out_Hz = so.fundamental_Hz;
  m.energy_residual = energy_residual(ts, t_begin_s, t_end_s);
  return m;
}

void write_transient_csv(std::ostream& os, const TransientResult& ts) {
  os << "t_s,e1_V,e2_V,e3_V,i1_A,i2_A,i3_A,vout_V,idc_A\n";
  for (std::size_t j = 0; j < ts.size(); ++j) {
    os << io::fmt(ts.t_s[j]);
    for (int k = 0; k < 3; ++k) os << ',' << io::fmt(ts.emf_V[k][j]);
    for (int k = 0; k < 3; ++k) os << ',' << io::fmt(ts.current_A[k][j]);
    os << ',' << io::fmt(ts.vout_V[j]) << ',' << io::fmt(ts.idc_A[j]) << '\n';
  }
}

}  // namespace hwec
