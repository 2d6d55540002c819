// Offline fit of the free model constants of the reference design:
//   1. iron boost factor: least squares in log space against the centre,
//      peak and mean winding field targets at 179 A;
//   2. lift model (Ic_ref of the 4 mm tape, k, B0, beta): Nelder-Mead on the
//      load-line critical currents of the multi- and single-width magnets and
//      the per-turn Ic extremes at 179 A;
//   3. armature turns and phase resistance: phase EMF rms and output power.
// Prints the constants as TOML for configs/reference.toml.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "hwec/generator.hpp"
#include "hwec/superconductor.hpp"

using namespace hwec;

namespace {

constexpr double kCentreTarget = 3.14;
constexpr double kPeakTarget = 4.45;
constexpr double kMeanTarget = 1.94;
constexpr double kMultiIc = 215.2;
constexpr double kSingleIc = 215.0 / 1.433;
constexpr double kMaxIc179 = 951.0;
constexpr double kMinIc179 = 248.9;
constexpr double kEmfRms = 267.0;
constexpr double kPower = 14.1e3;

template <std::size_t N>
std::array<double, N> nelder_mead(const std::function<double(const std::array<double, N>&)>& f,
                                  std::array<double, N> x0, double step, int iterations) {
  std::array<std::array<double, N>, N + 1> s;
  std::array<double, N + 1> fs;
  for (std::size_t i = 0; i <= N; ++i) {
    s[i] = x0;
    if (i > 0) s[i][i - 1] += step;
    fs[i] = f(s[i]);
  }
  for (int it = 0; it < iterations; ++it) {
    std::array<std::size_t, N + 1> idx;
    for (std::size_t i = 0; i <= N; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return fs[a] < fs[b]; });
    const std::size_t best = idx[0], worst = idx[N], second = idx[N - 1];
    std::array<double, N> c{};
    for (std::size_t i = 0; i <= N; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < N; ++d) c[d] += s[i][d] / N;
    }
    auto along = [&](double t) {
      std::array<double, N> p;
      for (std::size_t d = 0; d < N; ++d) p[d] = c[d] + t * (s[worst][d] - c[d]);
      return p;
    };
    const auto xr = along(-1.0);
    const double fr = f(xr);
    if (fr < fs[best]) {
      const auto xe = along(-2.0);
      const double fe = f(xe);
      if (fe < fr) { s[worst] = xe; fs[worst] = fe; } else { s[worst] = xr; fs[worst] = fr; }
    } else if (fr < fs[second]) {
      s[worst] = xr;
      fs[worst] = fr;
    } else {
      const auto xc = along(fr < fs[worst] ? -0.5 : 0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, fs[worst])) {
        s[worst] = xc;
        fs[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= N; ++i) {
          if (i == best) continue;
          for (std::size_t d = 0; d < N; ++d) s[i][d] = s[best][d] + 0.5 * (s[i][d] - s[best][d]);
          fs[i] = f(s[i]);
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i <= N; ++i) if (fs[i] < fs[best]) best = i;
  return s[best];
}

MachineConfig with_ic_ref(MachineConfig m, double ic4) {
  for (auto& placed : m.assembly.packs) {
    for (auto& dp : placed.pack.pancakes) {
      dp.tape.ic_ref_A = dp.tape.name == "6mm" ? 1.5 * ic4 : ic4;
    }
  }
  return m;
}

}  // namespace

int main() {
  MachineConfig m = build_reference_design();
  m.iron_boost_factor = 1.0;
  const RZPoint centre{0.0, m.assembly.packs[1].axial_position_m};

  const WindingField unit(m.assembly, 1.0, m.numerics.field);
  const FieldMap map = unit.at_current(m.operating_current_A);
  const double bc = assembly_field(m.assembly, m.operating_current_A, centre, 1.0, m.numerics.field)
                        .magnitude();
  const double boost = std::exp((std::log(kCentreTarget / bc) + std::log(kPeakTarget / map.max_T) +
                                 std::log(kMeanTarget / map.mean_T)) / 3.0);
  std::printf("# air-core centre %.4f T, peak %.4f T, mean %.4f T\n", bc, map.max_T, map.mean_T);
  std::printf("# boosted centre %.4f T, peak %.4f T, mean %.4f T\n", boost * bc, boost * map.max_T,
              boost * map.mean_T);
  m.iron_boost_factor = boost;

  const MachineConfig single = build_single_width_variant(m);
  const WindingField multi_field(m.assembly, boost, m.numerics.field);
  const WindingField single_field(single.assembly, boost, m.numerics.field);

  struct Fit {
    double multi, single, max179, min179;
  };
  // The fields carry the template Ic_ref; every trial value scales all
  // per-turn critical currents by the same factor.
  const double template_ic4 = multi_field.tapes().front().name == "4mm"
                                  ? multi_field.tapes().front().ic_ref_A
                                  : multi_field.tapes().back().ic_ref_A;
  auto evaluate = [&](const std::array<double, 4>& x) {
    const double scale = std::exp(x[0]) / template_ic4;
    const LiftModel lift = LiftModel::kim_model(std::exp(x[1]), std::exp(x[2]), std::exp(x[3]));
    auto min_ic = [&](const WindingField& f, double current) {
      return scale * min_turn_critical_current(f, lift, current, 20.0).first;
    };
    auto solve = [&](const WindingField& f) {
      double lo = 0.0, hi = 5.0 * std::exp(x[0]);
      for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        (min_ic(f, mid) > mid ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    };
    const auto at179 = turn_critical_currents(multi_field, lift, 179.0, 20.0);
    return Fit{solve(multi_field), solve(single_field),
               scale * *std::max_element(at179.begin(), at179.end()),
               scale * *std::min_element(at179.begin(), at179.end())};
  };
  auto cost = [&](const std::array<double, 4>& x) {
    const Fit r = evaluate(x);
    auto sq = [](double a, double t) { return (a - t) * (a - t) / (t * t); };
    return sq(r.multi, kMultiIc) + sq(r.single, kSingleIc) + sq(r.max179, kMaxIc179) +
           sq(r.min179, kMinIc179);
  };
  std::array<double, 4> x{std::log(700.0), std::log(0.3), std::log(0.5), std::log(0.8)};
  for (int round = 0; round < 4; ++round) x = nelder_mead<4>(cost, x, 0.3, 600);
  const Fit fit = evaluate(x);
  const double ic4 = std::exp(x[0]);
  std::printf("# fit: multi %.3f A, single %.3f A, max@179 %.2f A, min@179 %.2f A, cost %.3e\n",
              fit.multi, fit.single, fit.max179, fit.min179, cost(x));

  m = with_ic_ref(m, ic4);
  m.lift = LiftModel::kim_model(std::exp(x[1]), std::exp(x[2]), std::exp(x[3]));

  // Armature: EMF scales with turns, so fix turns from the EMF first, then
  // bisect the phase resistance on output power (power falls with R).
  const GeneratorModel gen(m);
  const auto base = run_case(m, gen, case_for(m, m.wave.amplitude_m, m.operating_current_A));
  const double per_turn = base.metrics.vrms_in_V[0] / m.armature.turns_per_coil;
  const int turns = static_cast<int>(std::lround(kEmfRms / per_turn));
  m.armature.turns_per_coil = turns;
  const GeneratorModel gen2(m);
  double lo = 0.5, hi = 10.0;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    m.circuit.armature_resistance_ohm = mid;
    const auto r = run_case(m, gen2, case_for(m, m.wave.amplitude_m, m.operating_current_A));
    (r.metrics.power_out_W > kPower ? lo : hi) = mid;
  }
  const double resistance = std::round(0.5 * (lo + hi) * 1e3) / 1e3;
  m.circuit.armature_resistance_ohm = resistance;
  const auto fin = run_case(m, gen2, case_for(m, m.wave.amplitude_m, m.operating_current_A));
  std::printf("# armature: EMF rms %.2f V, P %.3f kW, PF %.3f, efficiency %.1f %%\n",
              fin.metrics.vrms_in_V[0], fin.metrics.power_out_W / 1e3, fin.metrics.power_factor,
              fin.metrics.efficiency_percent);
  std::printf("# geometric phase resistance would be %.4f ohm\n",
              derived_armature_resistance(m.armature, m.copper_resistivity_ohm_m));

  std::printf("iron_boost_factor = %.6f\n", boost);
  std::printf("ic_ref_4mm_A = %.4f\n", ic4);
  std::printf("lift_k = %.6f\nlift_b0_T = %.6f\nlift_beta = %.6f\n", std::exp(x[1]),
              std::exp(x[2]), std::exp(x[3]));
  std::printf("turns_per_coil = %d\narmature_resistance_ohm = %.3f\n", turns, resistance);
  return 0;
}
