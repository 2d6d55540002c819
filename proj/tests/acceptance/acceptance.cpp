// Acceptance checks for the reference design. Prints one PASS/FAIL line per
// criterion and exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <json.hpp>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hwec/analysis.hpp"
#include "hwec/cli.hpp"
#include "hwec/config.hpp"
#include "hwec/errors.hpp"
#include "hwec/io.hpp"
#include "hwec/optimizer.hpp"

using namespace hwec;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

bool within(double x, double centre, double rel_band) {
  return std::abs(x - centre) <= rel_band * std::abs(centre);
}

FieldVector biot_savart(double a, double current, RZPoint p, int n) {
  long double bx = 0, bz = 0;
  const double dphi = 2 * std::numbers::pi / n;
  for (int k = 0; k < n; ++k) {
    const double phi = (k + 0.5) * dphi;
    const double dlx = -a * std::sin(phi) * dphi, dly = a * std::cos(phi) * dphi;
    const double rx = p.r_m - a * std::cos(phi), ry = -a * std::sin(phi), rz = p.z_m;
    const double d3 = std::pow(rx * rx + ry * ry + rz * rz, 1.5);
    bx += (dly * rz) / d3;
    bz += (dlx * ry - dly * rx) / d3;
  }
  const double c = kMu0 * current / (4 * std::numbers::pi);
  return {static_cast<double>(c * bx), static_cast<double>(c * bz)};
}

// Shared results of the expensive reference runs.
struct Reference {
  MachineConfig m = build_reference_design();
  WindingField field{m.assembly, m.iron_boost_factor, m.numerics.field};
  LoadLineResult ll;
  GeneratorModel model{m};
  // (1.25 m, I_op), (1.25 m, Ic), (1.75 m, I_op), (1.75 m, Ic)
  std::vector<CaseResult> cases;
  std::optional<CaseResult> triangular;
};

Reference& reference() {
  static Reference r = [] {
    Reference x;
    x.ll = magnet_critical_current(x.field, x.m.lift, x.m.operating_temperature_K,
                                   x.m.operating_current_A, x.m.numerics.load_line);
    const double ic = x.ll.critical_current_A;
    for (double amp : {1.25, 1.75}) {
      for (double cur : {x.m.operating_current_A, ic}) {
        CaseSpec spec = case_for(x.m, amp, cur);
        spec.critical_current_A = ic;
        x.cases.push_back(run_case(x.m, x.model, spec));
      }
    }
    MachineConfig tri = x.m;
    tri.wave.form = WaveForm::triangular;
    CaseSpec spec = case_for(tri, tri.wave.amplitude_m, tri.operating_current_A);
    spec.critical_current_A = ic;
    x.triangular = run_case(tri, x.model, spec);
    return x;
  }();
  return r;
}

void criterion1(Check& c) {
  const Reference& r = reference();
  const TapeSpec& tape = r.field.tapes().front();
  const FieldVector b{0.3, 1.2};
  const double ic0 = ic_local(tape, r.m.lift, b, 20.0);
  const double half = ic_local(tape, r.m.lift, b, 56.0);
  const double zero = ic_local(tape, r.m.lift, b, 92.0);
  const double tcs = current_sharing_temperature(179.0, 215.0, 20.0, 92.0);
  c.detail << "Ic(20,56,92 K) = " << ic0 << ", " << half << ", " << zero << " A; T_cs = " << tcs << " K";
  c.require(rel(half, ic0 / 2) <= 1e-12, "Ic(56 K) = Ic0/2");
  c.require(std::abs(zero) <= 1e-12 * ic0, "Ic(92 K) = 0");
  c.require(std::abs(tcs - 32.06) <= 0.01, "T_cs 32.06 +- 0.01 K");
}

void criterion2(Check& c) {
  const Reference& r = reference();
  const CurrentMargin cm = current_margin(179.0, 215.0);
  const double i = r.ll.critical_current_A;
  const double min_ic =
      min_turn_critical_current(r.field, r.m.lift, i, r.m.operating_temperature_K).first;
  c.detail << "margin " << cm.margin_A << " A (" << cm.percent << " %); I* = " << i
           << " A, |min Ic(B(I*)) - I*| = " << std::abs(min_ic - i) << " A";
  c.require(std::abs(cm.margin_A - 36.0) <= 1e-9, "36 A");
  c.require(std::abs(cm.percent - 20.1) <= 0.05, "20.1 %");
  c.require(std::abs(min_ic - i) < 1e-3, "fixed point within 1e-3 A");
}

void criterion3(Check& c) {
  const double a = 0.08, I = 150.0;
  double worst_axis = 0.0;
  for (double z : {0.0, 0.013, -0.2, 1.5}) {
    const double exact = kMu0 * I * a * a / (2 * std::pow(a * a + z * z, 1.5));
    worst_axis = std::max(worst_axis, rel(loop_field(a, I, {0.0, z}).bz_T, exact));
  }
  double worst_bs = 0.0;
  for (const RZPoint p : {RZPoint{0.05, 0.02}, RZPoint{0.12, -0.03}, RZPoint{0.3, 0.25}}) {
    const FieldVector f = loop_field(a, I, p), g = biot_savart(a, I, p, 1'000'000);
    worst_bs = std::max(worst_bs, std::hypot(f.br_T - g.br_T, f.bz_T - g.bz_T) / g.magnitude());
  }
  // Superposition over the four magnets and linearity in current.
  const Reference& r = reference();
  const RZPoint p{0.09, 0.11};
  const FieldVector whole = assembly_field(r.m.assembly, 179.0, p, 1.0, r.m.numerics.field);
  FieldVector sum{0.0, 0.0};
  for (const auto& placed : r.m.assembly.packs) {
    MagnetAssembly one = r.m.assembly;
    one.packs = {placed};
    const FieldVector f = assembly_field(one, 179.0, p, 1.0, r.m.numerics.field);
    sum.br_T += f.br_T;
    sum.bz_T += f.bz_T;
  }
  const double sup = std::hypot(whole.br_T - sum.br_T, whole.bz_T - sum.bz_T) / whole.magnitude();
  const FieldVector twice = assembly_field(r.m.assembly, 358.0, p, 1.0, r.m.numerics.field);
  const double lin = std::hypot(twice.br_T - 2 * whole.br_T, twice.bz_T - 2 * whole.bz_T) /
                     twice.magnitude();
  c.detail << "axis " << worst_axis << ", Biot-Savart(1e6 segments) " << worst_bs
           << ", superposition " << sup << ", linearity " << lin << " (relative)";
  c.require(worst_axis <= 1e-9, "on-axis 1e-9");
  c.require(worst_bs <= 1e-8, "Biot-Savart 1e-8");
  c.require(sup <= 1e-12, "superposition 1e-12");
  c.require(lin <= 1e-12, "linearity 1e-12");
}

void criterion4(Check& c) {
  const Reference& r = reference();
  const FieldSummary f = field_summary(r.m, r.field);
  c.detail << "centre " << f.centre_T << " T (3.14 +- 15 %), winding max " << f.max_T
           << " T (4.45 +- 15 %), boost " << r.m.iron_boost_factor;
  c.require(within(f.centre_T, 3.14, 0.15), "centre field");
  c.require(within(f.max_T, 4.45, 0.15), "max field");
}

void criterion5(Check& c) {
  SimulationOptions o;
  o.t_end_s = 2.0;
  o.dt_s = 1e-5;
  CircuitSpec spec;
  spec.source_inductance_H = 0.0;
  spec.armature_resistance_ohm = 0.0;
  spec.load_resistance_ohm = 1000.0;
  spec.smoothing_inductance_H = 100.0;
  const double vm = 100.0, f = 50.0;
  const auto ts = simulate(
      [&](double t) {
        const double w = 2 * std::numbers::pi * f * t;
        return std::array<double, 3>{vm * std::sin(w), vm * std::sin(w - 2 * std::numbers::pi / 3),
                                     vm * std::sin(w + 2 * std::numbers::pi / 3)};
      },
      spec, o);
  double sum = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts.t_s[i] >= 1.0) {
      sum += ts.vout_V[i];
      ++n;
    }
  }
  const double mean = sum / n, ideal = 3 * std::sqrt(3.0) / std::numbers::pi * vm;

  std::vector<std::pair<const TransientResult*, double>> runs{{&ts, energy_residual(ts, 0.0, 2.0)}};
  const Reference& r = reference();
  for (const auto& cr : r.cases) runs.emplace_back(&cr.transient, cr.metrics.energy_residual);
  runs.emplace_back(&r.triangular->transient, r.triangular->metrics.energy_residual);
  double worst_residual = 0.0, min_diode = 0.0;
  for (const auto& [t, res] : runs) {
    worst_residual = std::max(worst_residual, std::abs(res));
    for (const auto& d : t->diode_current_A) {
      for (double i : d) min_diode = std::min(min_diode, i);
    }
  }
  c.detail << "mean DC " << mean << " V vs " << ideal << " V (" << 100 * rel(mean, ideal)
           << " %); worst energy residual " << 100 * worst_residual << " % over " << runs.size()
           << " runs; min diode current " << min_diode << " A";
  c.require(rel(mean, ideal) <= 0.01, "six-pulse mean within 1 %");
  c.require(worst_residual < 5e-3, "energy residual < 0.5 %");
  c.require(min_diode >= -1e-9, "diode currents >= -1e-9 A");
}

void criterion6(Check& c) {
  const Metrics& x = reference().cases.front().metrics;
  const double ratio = x.fundamental_out_Hz / x.fundamental_in_Hz;
  c.detail << "input fundamental " << x.fundamental_in_Hz << " Hz, output fundamental "
           << x.fundamental_out_Hz << " Hz, output/input " << ratio << " (6 +- 10 %), input/output "
           << 1.0 / ratio;
  c.require(within(ratio, 6.0, 0.10), "output fundamental = 6 x input fundamental");
}

void criterion7(Check& c) {
  const Reference& r = reference();
  const Metrics& x = r.cases[0].metrics;
  std::vector<double> p;
  for (const auto& cr : r.cases) p.push_back(cr.metrics.power_out_W * 1e-3);
  c.detail << "P(1.25 m, 179 A) = " << p[0] << " kW (14.1 +- 20 %), PF " << x.power_factor
           << " (0.84 +- 0.1); P at (1.25, Ic), (1.75, 179), (1.75, Ic) = " << p[1] << ", " << p[2]
           << ", " << p[3] << " kW with Ic = " << r.ll.critical_current_A << " A";
  c.require(within(p[0], 14.1, 0.20), "power band");
  c.require(std::abs(x.power_factor - 0.84) <= 0.1, "power factor band");
  c.require(p[1] > p[0] && p[3] > p[2], "power rises with current");
  c.require(p[2] > p[0] && p[3] > p[1], "power rises with amplitude");
}

void criterion8(Check& c) {
  const Reference& r = reference();
  const double ps = r.cases[0].metrics.power_out_W, pt = r.triangular->metrics.power_out_W;
  const double gap = 100.0 * (ps - pt) / ps;
  c.detail << "sinusoidal " << ps * 1e-3 << " kW, triangular " << pt * 1e-3 << " kW, gap " << gap
           << " % (24.77 +- 15 pp)";
  c.require(pt < ps, "triangular strictly lower");
  c.require(std::abs(gap - 24.77) <= 15.0, "gap band");
}

void criterion9(Check& c) {
  const Reference& r = reference();
  const WidthComparison w = compare_multi_width(build_single_width_variant(r.m), r.m);
  c.detail << "single-width Ic " << w.single_ic_A << " A (150 +- 10 %), multi-width Ic " << w.multi_ic_A
           << " A, delta Ic " << w.delta_ic_percent << " % (43.3 +- 15 pp); delta P "
           << w.delta_power_percent << " % at equal Ic fraction";
  c.require(std::abs(w.delta_ic_percent - 43.3) <= 15.0, "delta Ic band");
  c.require(within(w.single_ic_A, 150.0, 0.10), "single-width Ic band");
}

void criterion10(Check& c) {
  const Reference& r = reference();
  const CryoConfig& cc = r.m.cryo;
  const auto h = PropertyTable::load_csv(cc.resolve(cc.copper_enthalpy_file));
  const auto cap = PropertyTable::load_csv(cc.resolve(cc.winding_heat_capacity_file));
  const double m1 = coolant_mass(10.0, h, cc.coolant_latent_heat_J_per_kg);
  bool homogeneous = coolant_mass(0.0, h, cc.coolant_latent_heat_J_per_kg) == 0.0;
  for (double k : {2.0, 4.0, 0.5}) {
    homogeneous = homogeneous && coolant_mass(10.0 * k, h, cc.coolant_latent_heat_J_per_kg) == k * m1;
  }
  const double tcs = current_sharing_temperature(r.m.operating_current_A, r.ll.critical_current_A,
                                                 r.m.operating_temperature_K, 92.0);
  const double adaptive = stability_margin(cap, r.m.operating_temperature_K, tcs);
  const double trap = numerics::integrate_trapezoid([&](double T) { return cap(T); },
                                                    r.m.operating_temperature_K, tcs, 10000);
  const double quad = std::abs(adaptive - trap) / adaptive;
  const CryoReport rep = cryo_report(r.m, r.ll.critical_current_A);
  c.detail << "homogeneity " << (homogeneous ? "exact" : "broken") << ", quadrature vs trapezoid "
           << quad << "; coolant " << rep.coolant_mass_kg << " kg for a " << rep.magnet_mass_kg
           << " kg magnet vs 8.23 kg (" << 100 * (rep.coolant_mass_kg - 8.23) / 8.23
           << " %, flagged; 8.23 kg needs " << rep.comparison_magnet_mass_kg << " kg)";
  c.require(homogeneous, "linear homogeneity");
  c.require(quad <= 1e-6, "quadrature oracle 1e-6");
  c.require(rep.coolant_mass_kg > 0.0, "coolant mass reported");
}

void criterion11(Check& c) {
  const Reference& r = reference();
  const StressMap zero = hoop_stress_map(r.field, 0.0, r.m.mechanics);
  const StressMap a = hoop_stress_map(r.field, 179.0, r.m.mechanics);
  const StressMap b = hoop_stress_map(r.field, 2 * 179.0, r.m.mechanics);
  double scaling = 0.0;
  for (std::size_t i = 0; i < a.turns.size(); ++i) {
    if (a.turns[i].hoop_Pa != 0.0) {
      scaling = std::max(scaling, rel(b.turns[i].hoop_Pa, 4 * a.turns[i].hoop_Pa));
    }
  }
  const bool zero_ok = zero.max_hoop_Pa == 0.0 && zero.max_abs_radial_Pa == 0.0 &&
                       std::all_of(zero.turns.begin(), zero.turns.end(),
                                   [](const TurnStress& t) { return t.hoop_Pa == 0.0; });
  c.detail << "model " << to_string(a.model) << ": max " << a.max_hoop_Pa * 1e-6 << " MPa (24.2 +- 25 %), mean "
           << a.mean_hoop_Pa * 1e-6 << " MPa (11.9 +- 25 %); zero current " << (zero_ok ? "exact" : "nonzero")
           << ", I^2 scaling " << scaling;
  c.require(zero_ok, "zero current gives zero stress");
  c.require(scaling <= 1e-10, "I^2 scaling 1e-10");
  c.require(within(a.max_hoop_Pa * 1e-6, 24.2, 0.25), "max hoop band");
  c.require(within(a.mean_hoop_Pa * 1e-6, 11.9, 0.25), "mean hoop band");
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hwec");
  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

// Files of two output directories compared byte for byte; in the manifest
// only the output directory itself may differ.
bool same_outputs(const fs::path& a, const fs::path& b, std::string& why) {
  std::vector<std::string> names_a, names_b;
  for (const auto& e : fs::directory_iterator(a)) names_a.push_back(e.path().filename().string());
  for (const auto& e : fs::directory_iterator(b)) names_b.push_back(e.path().filename().string());
  std::sort(names_a.begin(), names_a.end());
  std::sort(names_b.begin(), names_b.end());
  if (names_a != names_b) {
    why = a.string() + ": different file sets";
    return false;
  }
  for (const auto& n : names_a) {
    std::string x = io::read_file(a / n), y = io::read_file(b / n);
    if (n == "manifest.json") {
      auto jx = nlohmann::ordered_json::parse(x), jy = nlohmann::ordered_json::parse(y);
      jx.erase("output_dir");
      jy.erase("output_dir");
      x = jx.dump();
      y = jy.dump();
    }
    if (x != y) {
      why = (a / n).string() + " differs";
      return false;
    }
  }
  return true;
}

void criterion12(Check& c) {
  const fs::path root = fs::temp_directory_path() / "hwec_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  ::setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  const fs::path cfg = root / "reference.toml";
  io::write_file(cfg, to_toml(build_reference_design()));
  const fs::path spec = root / "sweep.toml";
  io::write_file(spec,
                 "[sweep]\nheight_min_mm = 126\nheight_max_mm = 136\nheight_step_mm = 10\n"
                 "width_min_mm = 22.4\nwidth_max_mm = 24.4\nwidth_step_mm = 2\ntop_k = 2\n");
  struct Job {
    std::string name;
    std::vector<std::string> a, b;
  };
  const std::string cf = cfg.string();
  auto dir = [&](const std::string& n) { return (root / n).string(); };
  const std::vector<Job> jobs{
      {"simulate", {"simulate", "--config", cf, "--cycles", "1", "--out", dir("sim_a")},
       {"simulate", "--config", cf, "--cycles", "1", "--out", dir("sim_b")}},
      {"loadline", {"loadline", "--config", cf, "--out", dir("ll_a")},
       {"loadline", "--config", cf, "--out", dir("ll_b")}},
      {"cryo", {"cryo", "--config", cf, "--out", dir("cryo_a")}, {"cryo", "--config", cf, "--out", dir("cryo_b")}},
      {"stress", {"stress", "--config", cf, "--out", dir("st_a")}, {"stress", "--config", cf, "--out", dir("st_b")}},
      {"sweep --jobs 1 vs 8",
       {"sweep", "--config", cf, "--sweep-spec", spec.string(), "--jobs", "1", "--out", dir("sw_a")},
       {"sweep", "--config", cf, "--sweep-spec", spec.string(), "--jobs", "8", "--out", dir("sw_b")}},
  };
  int identical = 0;
  for (const auto& j : jobs) {
    const int ca = run_cli(j.a), cb = run_cli(j.b);
    std::string why;
    const bool ok = ca == 0 && cb == 0 && same_outputs(j.a.back(), j.b.back(), why);
    if (ok) ++identical;
    c.require(ok, j.name + (why.empty() ? " exit " + std::to_string(ca) + "/" + std::to_string(cb) : ": " + why));
  }
  ::unsetenv("SOURCE_DATE_EPOCH");
  c.detail << identical << "/" << jobs.size()
           << " commands byte-identical on rerun (simulate, loadline, cryo, stress, sweep --jobs 1 vs 8)";
  fs::remove_all(root);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"critical current temperature scaling and T_cs", criterion1},
      {"margin arithmetic and load-line fixed point", criterion2},
      {"magnetostatics oracles", criterion3},
      {"calibrated field targets", criterion4},
      {"rectifier mean, energy balance, diode currents", criterion5},
      {"output to input fundamental ratio", criterion6},
      {"operating power, power factor and trends", criterion7},
      {"triangular against sinusoidal wave", criterion8},
      {"multi-width critical current gain", criterion9},
      {"cryogenics", criterion10},
      {"mechanics", criterion11},
      {"determinism", criterion12},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail << " [exception: " << e.what() << "]";
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!c.pass) ++failed;
    std::printf("%s %2zu %s: %s (%.1f s)\n", c.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                c.detail.str().c_str(), s);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
