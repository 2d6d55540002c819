#include "hwec/magnetostatics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <tuple>

#include "hwec/errors.hpp"

namespace hwec {

namespace {

constexpr double kPi = std::numbers::pi;

struct RingTerms {
  double alpha2;
  double beta;
  double m;
};

inline RingTerms ring_terms(double a, double r, double z) {
  const double dr = a - r;
  const double sr = a + r;
  const double alpha2 = dr * dr + z * z;
  const double beta2 = sr * sr + z * z;
  return {alpha2, std::sqrt(beta2), 4.0 * a * r / beta2};
}

[[noreturn]] void singular(double a, RZPoint p) {
  std::ostringstream os;
  os << "evaluation point (r=" << p.r_m << ", z=" << p.z_m << ") lies on the filament of radius "
     << a;
  throw SingularPointError(os.str());
}

// Field of a unit-current loop, prefactor mu0/pi applied by the caller.
inline FieldVector ring_field_unit(double a, double r, double z) {
  if (r < 1e-12 * a) {
    const double d2 = a * a + z * z;
    // mu0 a^2 / (2 d^3) rewritten with the mu0/pi prefactor pulled out.
    return {0.0, 0.5 * kPi * a * a / (d2 * std::sqrt(d2))};
  }
  const RingTerms t = ring_terms(a, r, z);
  const auto ke = numerics::ellipke(t.m);
  const double denom = 2.0 * t.alpha2 * t.beta;
  const double rho2 = r * r + z * z;
  const double bz = ((a * a - rho2) * ke.E + t.alpha2 * ke.K) / denom;
  const double br = z * ((a * a + rho2) * ke.E - t.alpha2 * ke.K) / (denom * r);
  return {br, bz};
}

inline double ring_flux_unit(double a, double r, double z) {
  if (r <= 0.0) return 0.0;
  const RingTerms t = ring_terms(a, r, z);
  return t.beta * numerics::ellip_vector_potential_kernel(t.m);
}

struct MirrorMap {
  // +1: sign(z) = sign(-z); -1: sign(z) = -sign(-z); 0: no symmetry.
  int relation = 0;
  std::vector<std::size_t> partner;
};

// Pairs every turn with its image under z -> -z when the whole set has one.
MirrorMap mirror_partners(const std::vector<TurnLoop>& turns) {
  MirrorMap out;
  const std::size_t n = turns.size();
  if (n == 0) return out;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  auto key = [&](std::size_t i, bool flip) {
    return std::make_pair(flip ? -turns[i].z_m : turns[i].z_m, turns[i].radius_m);
  };
  std::vector<std::size_t> image = order;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return key(a, false) < key(b, false); });
  std::sort(image.begin(), image.end(), [&](auto a, auto b) { return key(a, true) < key(b, true); });
  std::vector<std::size_t> partner(n);
  int relation = 0;
  const double tol = 1e-12;
  for (std::size_t k = 0; k < n; ++k) {
    const TurnLoop& a = turns[order[k]];
    const TurnLoop& b = turns[image[k]];
    if (std::abs(a.z_m + b.z_m) > tol || std::abs(a.radius_m - b.radius_m) > tol ||
        a.tape_width_m != b.tape_width_m) {
      return out;
    }
    const int rel = a.sign * b.sign;
    if (relation == 0) relation = rel;
    if (rel != relation) return out;
    partner[order[k]] = image[k];
  }
  out.relation = relation;
  out.partner = std::move(partner);
  return out;
}

}  // namespace

double FieldVector::magnitude() const { return std::hypot(br_T, bz_T); }

FieldVector loop_field(double radius_m, double current_A, RZPoint p, double singular_eps_m) {
  if (!(radius_m > 0.0)) throw DomainError("loop_field: radius must be positive");
  const double r = std::abs(p.r_m);
  const double dr = radius_m - r;
  if (dr * dr + p.z_m * p.z_m < singular_eps_m * singular_eps_m) singular(radius_m, p);
  if (current_A == 0.0) return {};
  const FieldVector unit = ring_field_unit(radius_m, r, p.z_m);
  return (kMu0 / kPi * current_A) * unit;
}

double loop_vector_potential(double radius_m, double current_A, RZPoint p, double singular_eps_m) {
  const double r = std::abs(p.r_m);
  if (r == 0.0) return 0.0;
  return loop_flux(radius_m, current_A, p, singular_eps_m) / (2.0 * kPi * r);
}

double loop_flux(double radius_m, double current_A, RZPoint p, double singular_eps_m) {
  if (!(radius_m > 0.0)) throw DomainError("loop_flux: radius must be positive");
  const double r = std::abs(p.r_m);
  const double dr = radius_m - r;
  if (dr * dr + p.z_m * p.z_m < singular_eps_m * singular_eps_m) singular(radius_m, p);
  return kMu0 * current_A * ring_flux_unit(radius_m, r, p.z_m);
}

FilamentSet::FilamentSet(std::span<const TurnLoop> loops, const FieldOptions& options)
    : options_(options) {
  if (options.subfilaments < 1) throw ValidationError("subfilaments must be at least 1");
  if (options.far_field_ratio > 0.0 && options.far_field_nodes < 1) {
    throw ValidationError("far-field quadrature needs at least one node");
  }
  const auto& axial = numerics::gauss_legendre(static_cast<std::size_t>(options.subfilaments));

  // Group turns by (pack, pancake, layer) in order of first appearance.
  std::vector<std::vector<const TurnLoop*>> members;
  std::map<std::tuple<int, int, int>, std::size_t> index;
  for (const auto& loop : loops) {
    const auto key = std::make_tuple(loop.pack, loop.pancake, loop.layer);
    auto [it, inserted] = index.try_emplace(key, members.size());
    if (inserted) members.emplace_back();
    members[it->second].push_back(&loop);
  }

  for (const auto& group_loops : members) {
    Group g{};
    g.exact_begin = radius_.size();
    double r_lo = group_loops.front()->radius_m;
    double r_hi = r_lo;
    bool same_plane = true;
    double width = 0.0;
    for (const TurnLoop* loop : group_loops) {
      r_lo = std::min(r_lo, loop->radius_m);
      r_hi = std::max(r_hi, loop->radius_m);
      same_plane = same_plane && loop->z_m == group_loops.front()->z_m &&
                   loop->sign == group_loops.front()->sign;
      width = std::max(width, loop->tape_width_m);
      for (std::size_t k = 0; k < axial.nodes.size(); ++k) {
        radius_.push_back(loop->radius_m);
        z_.push_back(loop->z_m + 0.5 * loop->tape_width_m * axial.nodes[k]);
        weight_.push_back(loop->sign * 0.5 * axial.weights[k]);
      }
    }
    g.exact_end = radius_.size();
    const std::size_t n = group_loops.size();
    const double pitch = n > 1 ? (r_hi - r_lo) / static_cast<double>(n - 1) : 0.0;
    // Lumping replaces the turn sum by the midpoint-rule integral, which
    // needs equally spaced turns in one plane.
    bool uniform = same_plane && n > 1;
    if (uniform) {
      std::vector<double> radii;
      radii.reserve(n);
      for (const TurnLoop* loop : group_loops) radii.push_back(loop->radius_m);
      std::sort(radii.begin(), radii.end());
      for (std::size_t i = 1; i < n && uniform; ++i) {
        uniform = std::abs(radii[i] - radii[i - 1] - pitch) <= 1e-9 * r_hi;
      }
    }
    const double r_in = r_lo - 0.5 * pitch;
    const double r_out = r_hi + 0.5 * pitch;
    const double z0 = group_loops.front()->z_m;
    g.r_min = r_in;
    g.r_max = r_out;
    g.z_min = z0 - 0.5 * width;
    g.z_max = z0 + 0.5 * width;
    g.lumped_begin = lumped_radius_.size();
    if (uniform && options.far_field_ratio > 0.0) {
      const double reach = options.far_field_ratio * std::max(r_out - r_in, width);
      g.reach2 = reach * reach;
      const auto& radial = numerics::gauss_legendre(static_cast<std::size_t>(options.far_field_nodes));
      const int sign = group_loops.front()->sign;
      const double mid = 0.5 * (r_in + r_out);
      const double half = 0.5 * (r_out - r_in);
      for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
        for (std::size_t k = 0; k < axial.nodes.size(); ++k) {
          lumped_radius_.push_back(mid + half * radial.nodes[i]);
          lumped_z_.push_back(z0 + 0.5 * width * axial.nodes[k]);
          lumped_weight_.push_back(sign * 0.5 * static_cast<double>(n) * radial.weights[i] * 0.5 *
                                   axial.weights[k]);
        }
      }
    } else {
      g.reach2 = std::numeric_limits<double>::infinity();
    }
    g.lumped_end = lumped_radius_.size();
    groups_.push_back(g);
  }
}

template <class Kernel>
void FilamentSet::accumulate(RZPoint p, Kernel&& kernel) const {
  const double r = std::abs(p.r_m);
  const double eps2 = options_.singular_eps_m * options_.singular_eps_m;
  for (const Group& g : groups_) {
    const double dr = r < g.r_min ? g.r_min - r : (r > g.r_max ? r - g.r_max : 0.0);
    const double dz = p.z_m < g.z_min ? g.z_min - p.z_m : (p.z_m > g.z_max ? p.z_m - g.z_max : 0.0);
    if (dr * dr + dz * dz > g.reach2) {
      for (std::size_t i = g.lumped_begin; i < g.lumped_end; ++i) {
        kernel(lumped_radius_[i], r, p.z_m - lumped_z_[i], lumped_weight_[i]);
      }
      continue;
    }
    for (std::size_t i = g.exact_begin; i < g.exact_end; ++i) {
      const double a = radius_[i];
      const double ddz = p.z_m - z_[i];
      const double ddr = a - r;
      if (ddr * ddr + ddz * ddz < eps2) singular(a, p);
      kernel(a, r, ddz, weight_[i]);
    }
  }
}

FieldVector FilamentSet::field_per_amp(RZPoint p) const {
  double br = 0.0;
  double bz = 0.0;
  accumulate(p, [&](double a, double r, double dz, double w) {
    const FieldVector f = ring_field_unit(a, r, dz);
    br += w * f.br_T;
    bz += w * f.bz_T;
  });
  const double scale = kMu0 / kPi;
  return {scale * br, scale * bz};
}

double FilamentSet::flux_per_amp(RZPoint p) const {
  double acc = 0.0;
  accumulate(p, [&](double a, double r, double dz, double w) { acc += w * ring_flux_unit(a, r, dz); });
  return kMu0 * acc;
}

FieldVector assembly_field(const MagnetAssembly& assembly, double current_A, RZPoint p,
                           double iron_boost_factor, const FieldOptions& options) {
  const auto loops = turn_loops_of(assembly);
  const FilamentSet set(loops, options);
  const FieldVector unit = set.field_per_amp(p);
  return (current_A * iron_boost_factor) * unit;
}

void FieldMap::summarize() {
  max_T = 0.0;
  double sum = 0.0;
  for (const auto& s : samples) {
    const double b = s.field.magnitude();
    max_T = std::max(max_T, b);
    sum += b;
  }
  mean_T = samples.empty() ? 0.0 : sum / static_cast<double>(samples.size());
}

WindingField::WindingField(const MagnetAssembly& assembly, double iron_boost_factor,
                           const FieldOptions& options)
    : turns_(turn_loops_of(assembly)) {
  tape_index_.reserve(turns_.size());
  for (const auto& t : turns_) {
    const TapeSpec& tape = assembly.packs[t.pack].pack.pancakes[t.pancake].tape;
    auto it = std::find(tapes_.begin(), tapes_.end(), tape);
    tape_index_.push_back(static_cast<std::size_t>(std::distance(tapes_.begin(), it)));
    if (it == tapes_.end()) tapes_.push_back(tape);
  }
  const FilamentSet set(turns_, options);
  per_amp_.resize(turns_.size());
  const auto mirror = mirror_partners(turns_);
  const std::size_t n = turns_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (mirror.relation != 0 && mirror.partner[i] < i) continue;
    const RZPoint p{turns_[i].radius_m, turns_[i].z_m};
    per_amp_[i] = iron_boost_factor * set.field_per_amp(p);
  }
  if (mirror.relation == 0) return;
  // Even current distribution: Br odd and Bz even in z. Odd distribution:
  // the reverse.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = mirror.partner[i];
    if (j >= i) continue;
    const FieldVector& f = per_amp_[j];
    per_amp_[i] = mirror.relation > 0 ? FieldVector{-f.br_T, f.bz_T} : FieldVector{f.br_T, -f.bz_T};
  }
}

FieldMap WindingField::at_current(double current_A) const {
  FieldMap map;
  map.samples.reserve(turns_.size());
  for (std::size_t i = 0; i < turns_.size(); ++i) {
    const auto& t = turns_[i];
    map.samples.push_back(
        {{t.radius_m, t.z_m}, current_A * per_amp_[i], t.pack, t.pancake, t.layer, t.turn});
  }
  map.summarize();
  return map;
}

FieldMap winding_field_map(const MagnetAssembly& assembly, double current_A,
                           double iron_boost_factor, const FieldOptions& options) {
  return WindingField(assembly, iron_boost_factor, options).at_current(current_A);
}

FieldMap grid_field_map(const MagnetAssembly& assembly, double current_A,
                        std::span<const double> r_grid, std::span<const double> z_grid,
                        double iron_boost_factor, const FieldOptions& options) {
  auto check = [](std::span<const double> g, const char* axis) {
    if (g.empty()) throw ValidationError(std::string("field map: empty ") + axis + " grid");
    for (std::size_t i = 1; i < g.size(); ++i) {
      if (!(g[i] > g[i - 1])) {
        throw ValidationError(std::string("field map: ") + axis + " grid must increase strictly");
      }
    }
  };
  check(r_grid, "r");
  check(z_grid, "z");
  const auto loops = turn_loops_of(assembly);
  const FilamentSet set(loops, options);
  FieldMap map;
  map.samples.reserve(r_grid.size() * z_grid.size());
  const double scale = current_A * iron_boost_factor;
  for (double z : z_grid) {
    for (double r : r_grid) {
      const RZPoint p{r, z};
      map.samples.push_back({p, scale * set.field_per_amp(p)});
    }
  }
  map.summarize();
  return map;
}

FluxLinkage flux_linkage(const MagnetAssembly& assembly, const ArmatureCoil& coil,
                         double displacement_m, double current_A, double iron_boost_factor,
                         const FluxOptions& options) {
  if (!(coil.outer_radius_m > coil.inner_radius_m) || !(coil.height_m > 0.0)) {
    throw ValidationError("flux_linkage: coil cross-section must be non-degenerate");
  }
  const auto loops = turn_loops_of(assembly);
  const FilamentSet set(loops, options.field);
  const double r0 = coil.inner_radius_m;
  const double r1 = coil.outer_radius_m;
  const double width = r1 - r0;
  const double z_bottom = coil.axial_center_m - 0.5 * coil.height_m - displacement_m;
  const double z_top = coil.axial_center_m + 0.5 * coil.height_m - displacement_m;

  auto radial_mean = [&](double z) {
    return numerics::integrate_adaptive(
               [&](double r) { return set.flux_per_amp({r, z}); }, r0, r1, options.rel_tol) /
           width;
  };
  const double mean_flux =
      numerics::integrate_adaptive(radial_mean, z_bottom, z_top, options.rel_tol) /
      coil.height_m;
  const double edge_difference = numerics::integrate_adaptive(
      [&](double r) { return set.flux_per_amp({r, z_top}) - set.flux_per_amp({r, z_bottom}); }, r0,
      r1, options.rel_tol);
  const double scale = current_A * iron_boost_factor * coil.turns;
  return {scale * mean_flux, -scale * edge_difference / (width * coil.height_m)};
}

namespace {

std::vector<double> profile_offsets(const AxialFluxProfile::Grid& g) {
  // Non-negative half: uniform fine steps, then geometric growth.
  std::vector<double> half{0.0};
  double s = 0.0;
  double step = g.fine_step_m;
  while (s < g.half_span_m) {
    if (s >= g.fine_half_span_m) step = std::min(g.max_step_m, step * g.growth);
    s = std::min(g.half_span_m, s + step);
    half.push_back(s);
  }
  std::vector<double> full;
  full.reserve(2 * half.size() - 1);
  for (auto it = half.rbegin(); it != half.rend(); ++it) {
    if (*it != 0.0) full.push_back(-*it);
  }
  full.insert(full.end(), half.begin(), half.end());
  return full;
}

bool mirror_symmetric(const WindingPack& pack) {
  const auto& p = pack.pancakes;
  for (std::size_t i = 0, j = p.size() - 1; i < p.size(); ++i, --j) {
    if (p[i].tape.width_m != p[j].tape.width_m || p[i].tape.thickness_m != p[j].tape.thickness_m ||
        p[i].inner_radius_m != p[j].inner_radius_m ||
        p[i].turns_per_pancake != p[j].turns_per_pancake || p[i].polarity != p[j].polarity ||
        std::abs(p[i].axial_center_m + p[j].axial_center_m) > 1e-12) {
      return false;
    }
  }
  return true;
}

}  // namespace

AxialFluxProfile::AxialFluxProfile(const WindingPack& pack, double r_inner_m, double r_outer_m,
                                   const Grid& grid, const FluxOptions& options)
    : half_span_(grid.half_span_m) {
  if (!(r_outer_m > r_inner_m) || !(r_inner_m > pack.outer_radius_m())) {
    throw ValidationError("flux profile: coil annulus must lie outside the winding");
  }
  const auto loops = turn_loops_of(pack);
  const FilamentSet set(loops, options.field);
  const double width = r_outer_m - r_inner_m;
  auto mean_flux = [&](double z) {
    return numerics::integrate_adaptive([&](double r) { return set.flux_per_amp({r, z}); },
                                        r_inner_m, r_outer_m, options.rel_tol) /
           width;
  };
  std::vector<double> offsets = profile_offsets(grid);
  std::vector<double> values(offsets.size());
  // A mirror-symmetric pack has an even profile; evaluate one half.
  const bool symmetric = mirror_symmetric(pack);
  const std::size_t centre = offsets.size() / 2;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    if (symmetric && i < centre) continue;
    values[i] = mean_flux(offsets[i]);
  }
  if (symmetric) {
    for (std::size_t i = 0; i < centre; ++i) values[i] = values[offsets.size() - 1 - i];
  }
  spline_ = numerics::CubicSpline(std::move(offsets), std::move(values));
}

LinkageModel::LinkageModel(const MagnetAssembly& assembly, std::vector<ArmatureCoil> coils,
                           const AxialFluxProfile::Grid& grid, const FluxOptions& options)
    : coils_(std::move(coils)) {
  if (coils_.empty()) throw ValidationError("linkage model: no armature coils");
  const double r0 = coils_.front().inner_radius_m;
  const double r1 = coils_.front().outer_radius_m;
  for (const auto& c : coils_) {
    if (c.inner_radius_m != r0 || c.outer_radius_m != r1) {
      throw ValidationError("linkage model: all coils must share one annulus");
    }
  }
  std::vector<const WindingPack*> unique;
  for (const auto& placed : assembly.packs) {
    auto it = std::find_if(unique.begin(), unique.end(),
                           [&](const WindingPack* w) { return *w == placed.pack; });
    std::size_t index = static_cast<std::size_t>(std::distance(unique.begin(), it));
    if (it == unique.end()) {
      unique.push_back(&placed.pack);
      profiles_.emplace_back(placed.pack, r0, r1, grid, options);
    }
    packs_.push_back({index, placed.axial_position_m, placed.polarity});
  }
}

double LinkageModel::phase_gradient_per_amp(int phase, double displacement_m) const {
  double acc = 0.0;
  for (const auto& coil : coils_) {
    if (coil.phase != phase) continue;
    const double half = 0.5 * coil.height_m;
    double edge = 0.0;
    for (const auto& pk : packs_) {
      const auto& prof = profiles_[pk.profile];
      const double s = coil.axial_center_m - pk.position_m - displacement_m;
      edge += pk.polarity * (prof(s + half) - prof(s - half));
    }
    acc += coil.sense * coil.turns * edge / coil.height_m;
  }
  // lambda(d) depends on coil centre minus d, hence the sign.
  return -acc;
}

}  // namespace hwec
