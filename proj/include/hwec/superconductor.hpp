#pragma once

// Critical current of the tape under local field and temperature, the magnet
// load line and the derived margins.

#include <span>
#include <utility>
#include <vector>

#include "hwec/geometry.hpp"
#include "hwec/magnetostatics.hpp"

namespace hwec {

/// Reduction of the tape critical current by the local field.
/// B_perp is the radial component (normal to the tape face in a pancake),
/// B_par the axial one.
struct LiftModel {
  enum class Kind { constant, kim, table };
  Kind kind = Kind::constant;

  // Kim form: 1 / (1 + sqrt(k^2 B_par^2 + B_perp^2) / B0)^beta
  double k = 1.0;
  double b0_T = 1.0;
  double beta = 1.0;

  // Tabulated form on |B_perp| x |B_par|, row-major by B_perp. Bilinear;
  // field beyond the last node is clamped to it.
  std::vector<double> b_perp_T;
  std::vector<double> b_par_T;
  std::vector<double> values;

  static LiftModel unity() { return {}; }
  static LiftModel kim_model(double k, double b0_T, double beta);
  static LiftModel tabulated(std::vector<double> b_perp_T, std::vector<double> b_par_T,
                             std::vector<double> values);

  [[nodiscard]] double operator()(const FieldVector& b) const;
  void validate() const;
  bool operator==(const LiftModel&) const = default;
};

/// Local critical current with the linear temperature scaling
/// Ic(T) = Ic0(B) (T_C - T) / (T_C - T_op), T_op being the tape reference
/// temperature. Throws DomainError for T outside [T_op, T_C].
double ic_local(const TapeSpec& tape, const LiftModel& lift, const FieldVector& b, double T_K);

struct LoadLineOptions {
  double tolerance_A = 1e-3;
  int max_iterations = 200;

  bool operator==(const LoadLineOptions&) const = default;
};

struct LoadLineResult {
  double critical_current_A = 0.0;
  double operating_current_A = 0.0;
  double margin_A = 0.0;
  double margin_percent = 0.0;
  /// Index into WindingField::turns() of the turn that sets the limit.
  std::size_t limiting_index = 0;
  TurnLoop limiting_turn;
  int iterations = 0;
};

/// Per-turn critical currents at a magnet current.
std::vector<double> turn_critical_currents(const WindingField& field, const LiftModel& lift,
                                           double current_A, double T_K);

/// Smallest per-turn critical current at `current_A`, and the turn holding it
/// (ties go to the lowest pack, pancake, layer, turn).
std::pair<double, std::size_t> min_turn_critical_current(const WindingField& field,
                                                         const LiftModel& lift, double current_A,
                                                         double T_K);

/// Solves I* = min over turns of Ic(B(I*)) by bisection. The margin fields
/// are filled for `operating_current_A` without throwing when it is negative.
LoadLineResult magnet_critical_current(const WindingField& field, const LiftModel& lift,
                                       double T_K, double operating_current_A,
                                       const LoadLineOptions& options = {});

struct CurrentMargin {
  double margin_A = 0.0;
  double percent = 0.0;
};

/// Throws NegativeMarginError when I_op >= Ic.
CurrentMargin current_margin(double operating_current_A, double critical_current_A);

struct LoadLinePoint {
  double current_A;
  double min_ic_A;
};

/// min-turn Ic sampled on n uniform currents in [0, I_max].
std::vector<LoadLinePoint> load_line_curve(const WindingField& field, const LiftModel& lift,
                                           double T_K, double max_current_A, int n_points);

struct TemperaturePoint {
  double T_K;
  double ic_A;
};

/// Straight line from (T_op, Ic0) to (T_C, 0).
std::vector<TemperaturePoint> ic_temperature_curve(double ic0_A, double T_op_K, double T_c_K,
                                                   int n_points);

/// Temperature at which the linear Ic(T) falls to I_op.
double current_sharing_temperature(double operating_current_A, double ic0_A, double T_op_K,
                                   double T_c_K);

}  // namespace hwec
