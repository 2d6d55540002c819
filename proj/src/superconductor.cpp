#include "hwec/superconductor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "hwec/errors.hpp"

namespace hwec {

LiftModel LiftModel::kim_model(double k, double b0_T, double beta) {
  LiftModel m;
  m.kind = Kind::kim;
  m.k = k;
  m.b0_T = b0_T;
  m.beta = beta;
  m.validate();
  return m;
}

LiftModel LiftModel::tabulated(std::vector<double> b_perp_T, std::vector<double> b_par_T,
                               std::vector<double> values) {
  LiftModel m;
  m.kind = Kind::table;
  m.b_perp_T = std::move(b_perp_T);
  m.b_par_T = std::move(b_par_T);
  m.values = std::move(values);
  m.validate();
  return m;
}

void LiftModel::validate() const {
  switch (kind) {
    case Kind::constant:
      return;
    case Kind::kim:
      if (!(k >= 0.0) || !(b0_T > 0.0) || !(beta > 0.0)) {
        throw ValidationError("lift: Kim parameters need k >= 0, B0 > 0, beta > 0");
      }
      return;
    case Kind::table: {
      auto axis = [](const std::vector<double>& a, const char* name) {
        if (a.size() < 2) throw ValidationError(std::string("lift table: ") + name + " needs 2 nodes");
        if (a.front() != 0.0) throw ValidationError(std::string("lift table: ") + name + " must start at 0");
        for (std::size_t i = 1; i < a.size(); ++i) {
          if (!(a[i] > a[i - 1])) {
            throw ValidationError(std::string("lift table: ") + name + " must increase strictly");
          }
        }
      };
      axis(b_perp_T, "b_perp");
      axis(b_par_T, "b_par");
      const std::size_t np = b_perp_T.size();
      const std::size_t nq = b_par_T.size();
      if (values.size() != np * nq) throw ValidationError("lift table: value count mismatch");
      for (std::size_t i = 0; i < np; ++i) {
        for (std::size_t j = 0; j < nq; ++j) {
          const double v = values[i * nq + j];
          if (!(v > 0.0)) throw ValidationError("lift table: values must be positive");
          if ((i > 0 && v > values[(i - 1) * nq + j]) || (j > 0 && v > values[i * nq + j - 1])) {
            throw ValidationError("lift table: values must not increase with field");
          }
        }
      }
      return;
    }
  }
}

namespace {

// Bracketing interval and fraction on a clamped axis.
std::pair<std::size_t, double> locate(const std::vector<double>& axis, double x) {
  if (x >= axis.back()) return {axis.size() - 2, 1.0};
  const auto it = std::upper_bound(axis.begin(), axis.end(), x);
  const std::size_t i = static_cast<std::size_t>(std::distance(axis.begin(), it)) - 1;
  return {i, (x - axis[i]) / (axis[i + 1] - axis[i])};
}

}  // namespace

double LiftModel::operator()(const FieldVector& b) const {
  const double perp = std::abs(b.br_T);
  const double par = std::abs(b.bz_T);
  switch (kind) {
    case Kind::constant:
      return 1.0;
    case Kind::kim:
      return std::pow(1.0 + std::sqrt(k * k * par * par + perp * perp) / b0_T, -beta);
    case Kind::table: {
      const auto [i, u] = locate(b_perp_T, perp);
      const auto [j, v] = locate(b_par_T, par);
      const std::size_t nq = b_par_T.size();
      const double f00 = values[i * nq + j];
      const double f01 = values[i * nq + j + 1];
      const double f10 = values[(i + 1) * nq + j];
      const double f11 = values[(i + 1) * nq + j + 1];
      return (1 - u) * ((1 - v) * f00 + v * f01) + u * ((1 - v) * f10 + v * f11);
    }
  }
  return 1.0;
}

double ic_local(const TapeSpec& tape, const LiftModel& lift, const FieldVector& b, double T_K) {
  const double t_op = tape.reference_temperature_K;
  const double t_c = tape.critical_temperature_K;
  if (!(T_K >= t_op && T_K <= t_c)) {
    std::ostringstream os;
    os << "ic_local: temperature " << T_K << " K outside [" << t_op << ", " << t_c << "] K";
    throw DomainError(os.str());
  }
  const double ic0 = tape.ic_ref_A * lift(b);
  if (T_K == t_op) return ic0;
  return ic0 * (t_c - T_K) / (t_c - t_op);
}

std::vector<double> turn_critical_currents(const WindingField& field, const LiftModel& lift,
                                           double current_A, double T_K) {
  const auto per_amp = field.per_amp();
  std::vector<double> out(per_amp.size());
  for (std::size_t i = 0; i < per_amp.size(); ++i) {
    out[i] = ic_local(field.tape(i), lift, current_A * per_amp[i], T_K);
  }
  return out;
}

std::pair<double, std::size_t> min_turn_critical_current(const WindingField& field,
                                                         const LiftModel& lift, double current_A,
                                                         double T_K) {
  const auto turns = field.turns();
  if (turns.empty()) throw ValidationError("load line: winding has no turns");
  const auto per_amp = field.per_amp();
  auto rank = [&](std::size_t i) {
    const TurnLoop& t = turns[i];
    return std::make_tuple(t.pack, t.pancake, t.layer, t.turn);
  };
  double best = 0.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < turns.size(); ++i) {
    const double ic = ic_local(field.tape(i), lift, current_A * per_amp[i], T_K);
    if (i == 0 || ic < best || (ic == best && rank(i) < rank(arg))) {
      best = ic;
      arg = i;
    }
  }
  return {best, arg};
}

LoadLineResult magnet_critical_current(const WindingField& field, const LiftModel& lift,
                                       double T_K, double operating_current_A,
                                       const LoadLineOptions& options) {
  if (!(options.tolerance_A > 0.0) || options.max_iterations < 1) {
    throw ValidationError("load line: tolerance and iteration cap must be positive");
  }
  // g(I) = min Ic(B(I)) - I decreases strictly; g(0) > 0 and g(upper) <= 0.
  auto min_ic = [&](double i) { return min_turn_critical_current(field, lift, i, T_K); };
  double lo = 0.0;
  double hi = min_ic(0.0).first;
  LoadLineResult r;
  r.operating_current_A = operating_current_A;
  int it = 0;
  if (min_ic(hi).first < hi) {
    while (hi - lo > 0.1 * options.tolerance_A) {
      if (++it > options.max_iterations) {
        std::ostringstream os;
        os << "load line: no convergence after " << options.max_iterations
           << " iterations, bracket [" << lo << ", " << hi << "] A";
        throw ConvergenceError(os.str());
      }
      const double mid = 0.5 * (lo + hi);
      (min_ic(mid).first > mid ? lo : hi) = mid;
    }
  }
  // One fixed-point step from the bracket end pins the residual well below
  // the bracket width because the map is a contraction near I*.
  const auto [ic, index] = min_ic(hi);
  r.critical_current_A = ic;
  r.limiting_index = index;
  r.limiting_turn = field.turns()[index];
  r.iterations = it;
  r.margin_A = ic - operating_current_A;
  r.margin_percent = operating_current_A > 0.0 ? 100.0 * r.margin_A / operating_current_A : 0.0;
  return r;
}

CurrentMargin current_margin(double operating_current_A, double critical_current_A) {
  if (!(operating_current_A > 0.0)) throw ValidationError("current margin: I_op must be positive");
  if (operating_current_A >= critical_current_A) {
    std::ostringstream os;
    os << "operating current " << operating_current_A << " A is not below the critical current "
       << critical_current_A << " A";
    throw NegativeMarginError(os.str());
  }
  const double m = critical_current_A - operating_current_A;
  return {m, 100.0 * m / operating_current_A};
}

std::vector<LoadLinePoint> load_line_curve(const WindingField& field, const LiftModel& lift,
                                           double T_K, double max_current_A, int n_points) {
  if (n_points < 2 || !(max_current_A > 0.0)) {
    throw ValidationError("load line curve: need n >= 2 and a positive current range");
  }
  std::vector<LoadLinePoint> out;
  out.reserve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double current = max_current_A * i / (n_points - 1);
    out.push_back({current, min_turn_critical_current(field, lift, current, T_K).first});
  }
  return out;
}

std::vector<TemperaturePoint> ic_temperature_curve(double ic0_A, double T_op_K, double T_c_K,
                                                   int n_points) {
  if (!(T_op_K < T_c_K)) throw ValidationError("Ic(T) curve: T_op must be below T_C");
  if (n_points < 2) throw ValidationError("Ic(T) curve: need at least two points");
  std::vector<TemperaturePoint> out;
  out.reserve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double T = i == n_points - 1 ? T_c_K : T_op_K + (T_c_K - T_op_K) * i / (n_points - 1);
    out.push_back({T, ic0_A * (T_c_K - T) / (T_c_K - T_op_K)});
  }
  return out;
}

double current_sharing_temperature(double operating_current_A, double ic0_A, double T_op_K,
                                   double T_c_K) {
  if (!(operating_current_A > 0.0) || !(operating_current_A <= ic0_A)) {
    throw DomainError("current sharing temperature: need 0 < I_op <= Ic0");
  }
  if (!(T_op_K < T_c_K)) throw ValidationError("current sharing temperature: T_op must be below T_C");
  return T_c_K - (T_c_K - T_op_K) * operating_current_A / ic0_A;
}

}  // namespace hwec
