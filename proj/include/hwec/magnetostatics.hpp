#pragma once

// Axisymmetric magnetostatics of the magnet stack. Every turn is a circular
// filament; fields come from the closed-form ring solution in terms of the
// complete elliptic integrals K and E, and stack fields are plain sums.

#include <span>
#include <string>
#include <vector>

#include "hwec/geometry.hpp"
#include "hwec/numerics.hpp"

namespace hwec {

inline constexpr double kMu0 = 4e-7 * 3.14159265358979323846;

struct RZPoint {
  double r_m = 0.0;
  double z_m = 0.0;
};

struct FieldVector {
  double br_T = 0.0;
  double bz_T = 0.0;

  [[nodiscard]] double magnitude() const;
  FieldVector& operator+=(const FieldVector& o) {
    br_T += o.br_T;
    bz_T += o.bz_T;
    return *this;
  }
  friend FieldVector operator*(double s, FieldVector v) { return {s * v.br_T, s * v.bz_T}; }
  friend FieldVector operator+(FieldVector a, const FieldVector& b) { return a += b; }
};

/// Field of a single filament loop of radius `radius` in the plane z = 0.
/// Throws SingularPointError within `singular_eps` of the filament.
FieldVector loop_field(double radius_m, double current_A, RZPoint p, double singular_eps_m = 1e-6);

/// Azimuthal vector potential A_phi of the same loop.
double loop_vector_potential(double radius_m, double current_A, RZPoint p,
                             double singular_eps_m = 1e-6);

/// Flux through the disc of radius p.r at height p.z: 2 pi r A_phi.
double loop_flux(double radius_m, double current_A, RZPoint p, double singular_eps_m = 1e-6);

struct FieldOptions {
  /// Axial Gauss-Legendre filaments per turn across the tape width.
  int subfilaments = 2;
  double singular_eps_m = 1e-6;
  /// A pancake whose bounding box is farther than this multiple of its own
  /// size from the evaluation point is summed by radial Gauss-Legendre
  /// quadrature instead of turn by turn. 0 disables lumping.
  double far_field_ratio = 3.0;
  int far_field_nodes = 6;

  bool operator==(const FieldOptions&) const = default;
};

/// Turn filaments grouped by pancake. Weights carry current sign and the
/// sub-filament share of the turn current.
class FilamentSet {
 public:
  FilamentSet() = default;
  FilamentSet(std::span<const TurnLoop> loops, const FieldOptions& options);

  /// Field per ampere of magnet current. Fixed summation order.
  [[nodiscard]] FieldVector field_per_amp(RZPoint p) const;
  /// Flux per ampere through the disc at p.
  [[nodiscard]] double flux_per_amp(RZPoint p) const;
  [[nodiscard]] std::size_t filament_count() const { return radius_.size(); }

 private:
  struct Group {
    double r_min, r_max, z_min, z_max;
    double reach2;  // squared lumping distance
    std::size_t exact_begin, exact_end;
    std::size_t lumped_begin, lumped_end;
  };
  template <class Kernel>
  void accumulate(RZPoint p, Kernel&& kernel) const;

  FieldOptions options_;
  std::vector<Group> groups_;
  std::vector<double> radius_, z_, weight_;
  std::vector<double> lumped_radius_, lumped_z_, lumped_weight_;
};

/// Superposed field of the assembly at `current`, scaled by the iron boost.
FieldVector assembly_field(const MagnetAssembly& assembly, double current_A, RZPoint p,
                           double iron_boost_factor = 1.0, const FieldOptions& options = {});

struct FieldSample {
  RZPoint point;
  FieldVector field;
  int pack = -1;
  int pancake = -1;
  int layer = -1;
  int turn = -1;
};

struct FieldMap {
  std::vector<FieldSample> samples;
  double max_T = 0.0;
  double mean_T = 0.0;

  void summarize();
};

/// Unit-current field at every turn centre of every pack, reused by the load
/// line, the winding map and the stress estimate.
class WindingField {
 public:
  WindingField(const MagnetAssembly& assembly, double iron_boost_factor,
               const FieldOptions& options = {});

  [[nodiscard]] std::span<const TurnLoop> turns() const { return turns_; }
  /// Field per ampere at turn i (boost included).
  [[nodiscard]] std::span<const FieldVector> per_amp() const { return per_amp_; }
  [[nodiscard]] FieldMap at_current(double current_A) const;
  /// Tape of turn i.
  [[nodiscard]] const TapeSpec& tape(std::size_t i) const { return tapes_[tape_index_[i]]; }
  [[nodiscard]] std::span<const TapeSpec> tapes() const { return tapes_; }

 private:
  std::vector<TurnLoop> turns_;
  std::vector<FieldVector> per_amp_;
  std::vector<TapeSpec> tapes_;
  std::vector<std::size_t> tape_index_;
};

/// Field map over the winding cross-sections, sampled at every turn.
FieldMap winding_field_map(const MagnetAssembly& assembly, double current_A,
                           double iron_boost_factor = 1.0, const FieldOptions& options = {});

/// Field map on a rectangular (r, z) grid; both axes strictly increasing.
FieldMap grid_field_map(const MagnetAssembly& assembly, double current_A,
                        std::span<const double> r_grid, std::span<const double> z_grid,
                        double iron_boost_factor = 1.0, const FieldOptions& options = {});

struct FluxOptions {
  double rel_tol = 1e-8;
  FieldOptions field{1, 1e-6, 3.0, 6};

  bool operator==(const FluxOptions&) const = default;
};

struct FluxLinkage {
  double linkage_Wb = 0.0;
  /// Derivative with respect to actuator displacement.
  double derivative_Wb_per_m = 0.0;
};

/// Linkage of `coil` (turns times mean disc flux over its rectangular cross
/// section) when the actuator is displaced by `displacement_m`.
FluxLinkage flux_linkage(const MagnetAssembly& assembly, const ArmatureCoil& coil,
                         double displacement_m, double current_A, double iron_boost_factor = 1.0,
                         const FluxOptions& options = {});

/// Tabulated radially averaged disc flux of one winding pack (unit current,
/// polarity +1, pack centred on z = 0) over the annulus [r_inner, r_outer],
/// as a function of axial offset.
class AxialFluxProfile {
 public:
  struct Grid {
    double fine_step_m = 2.5e-3;
    double fine_half_span_m = 0.6;
    double max_step_m = 0.05;
    double growth = 1.05;
    double half_span_m = 4.0;

    bool operator==(const Grid&) const = default;
  };

  AxialFluxProfile(const WindingPack& pack, double r_inner_m, double r_outer_m, const Grid& grid,
                   const FluxOptions& options = {});

  /// Mean flux per ampere; zero beyond the tabulated span.
  [[nodiscard]] double operator()(double offset_m) const { return spline_(offset_m); }
  [[nodiscard]] double half_span_m() const { return half_span_; }
  [[nodiscard]] std::size_t node_count() const { return spline_.nodes().size(); }

 private:
  numerics::CubicSpline spline_;
  double half_span_ = 0.0;
};

/// Per-phase linkage gradients of an armature against a moving assembly.
class LinkageModel {
 public:
  LinkageModel(const MagnetAssembly& assembly, std::vector<ArmatureCoil> coils,
               const AxialFluxProfile::Grid& grid, const FluxOptions& options = {});

  /// d(lambda_phase)/d(displacement) per ampere of magnet current (no boost).
  [[nodiscard]] double phase_gradient_per_amp(int phase, double displacement_m) const;
  [[nodiscard]] std::span<const ArmatureCoil> coils() const { return coils_; }

 private:
  struct PackRef {
    std::size_t profile;
    double position_m;
    int polarity;
  };
  std::vector<AxialFluxProfile> profiles_;
  std::vector<PackRef> packs_;
  std::vector<ArmatureCoil> coils_;
};

}  // namespace hwec
