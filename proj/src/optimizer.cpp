#include "hwec/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "hwec/errors.hpp"
#include "hwec/generator.hpp"
#include "hwec/io.hpp"
#include "hwec/mechanics.hpp"
#include "hwec/superconductor.hpp"
#include "toml_section.hpp"

namespace hwec {

std::string to_string(SweepObjective objective) {
  return objective == SweepObjective::emf_rms ? "emf_rms" : "output_power";
}

SweepObjective sweep_objective_from_string(const std::string& name) {
  if (name == "output_power") return SweepObjective::output_power;
  if (name == "emf_rms") return SweepObjective::emf_rms;
  throw ValidationError("sweep: unknown objective '" + name + "'");
}

namespace {

std::vector<double> axis(double lo, double hi, double step) {
  std::vector<double> v;
  if (!(step > 0.0) || !(hi >= lo)) return v;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (long i = 0; i < n; ++i) v.push_back(lo + static_cast<double>(i) * step);
  return v;
}

}  // namespace

std::vector<double> SweepSpec::heights_mm() const {
  return axis(height_min_mm, height_max_mm, height_step_mm);
}
std::vector<double> SweepSpec::widths_mm() const {
  return axis(width_min_mm, width_max_mm, width_step_mm);
}

void SweepSpec::validate() const {
  if (!(height_min_mm > 0.0) || !(height_max_mm >= height_min_mm) || !(height_step_mm > 0.0)) {
    throw ValidationError("sweep: height range is empty or not positive");
  }
  if (!(width_min_mm > 0.0) || !(width_max_mm >= width_min_mm) || !(width_step_mm > 0.0)) {
    throw ValidationError("sweep: width range is empty or not positive");
  }
  for (const auto& [name, km] : tape_length_km) {
    if (!(km > 0.0)) throw ValidationError("sweep: tape length of '" + name + "' must be positive");
  }
  if (top_k < 1) throw ValidationError("sweep: top_k must be >= 1");
  const auto n = heights_mm().size() * widths_mm().size();
  if (max_evaluations < 1 || n > static_cast<std::size_t>(max_evaluations)) {
    std::ostringstream os;
    os << "sweep: grid has " << n << " points, over the evaluation budget of " << max_evaluations;
    throw ValidationError(os.str());
  }
}

SweepSpec parse_sweep_spec(std::string_view text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "sweep spec: TOML syntax error at line " << e.source().begin.line << ": "
       << e.description();
    throw ValidationError(os.str());
  }
  detail::Section top(&root, "");
  detail::Section s = top.sub("sweep");
  if (!s.present()) throw ValidationError("sweep spec: missing table 'sweep'");
  SweepSpec spec;
  spec.height_min_mm = s.number("height_min_mm");
  spec.height_max_mm = s.number("height_max_mm");
  spec.height_step_mm = s.number("height_step_mm", spec.height_step_mm);
  spec.width_min_mm = s.number("width_min_mm");
  spec.width_max_mm = s.number("width_max_mm");
  spec.width_step_mm = s.number("width_step_mm", spec.width_step_mm);
  spec.max_evaluations = s.integer("max_evaluations", spec.max_evaluations);
  spec.objective = sweep_objective_from_string(s.string("objective", to_string(spec.objective)));
  spec.top_k = s.integer("top_k", spec.top_k);
  detail::Section lengths = s.sub("tape_length_km");
  if (lengths.present()) {
    for (const auto& [k, v] : *root["sweep"]["tape_length_km"].as_table()) {
      const std::string name(k.str());
      spec.tape_length_km[name] = lengths.number(name);
    }
  }
  lengths.finish();
  s.finish();
  top.finish();
  spec.validate();
  return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw ValidationError("sweep spec not found: " + path.string());
  }
  return parse_sweep_spec(io::read_file(path));
}

MachineConfig sweep_candidate(const MachineConfig& tmpl, double height_m, double width_m,
                              const std::map<std::string, double>& tape_length_m) {
  if (!(height_m > 0.0) || !(width_m > 0.0)) {
    throw ValidationError("sweep candidate: height and width must be positive");
  }
  const auto& a = tmpl.assembly;
  const WindingPack& ref = a.packs.front().pack;
  const double n_packs = static_cast<double>(a.packs.size());
  const auto lengths = tape_length_of(a);

  std::map<std::string, int> dps_per_class;
  double tape_height = 0.0;
  for (const auto& dp : ref.pancakes) {
    ++dps_per_class[dp.tape.name];
    tape_height += dp.height_m();
  }
  const std::size_t n_dp = ref.pancakes.size();
  double plate = 0.0;
  if (n_dp > 1) {
    plate = (height_m - tape_height) / static_cast<double>(n_dp - 1);
    // Heights equal to the bare tape stack come out a rounding error short.
    if (plate < 0.0 && plate > -1e-12) plate = 0.0;
  } else if (std::abs(height_m - tape_height) > 1e-12) {
    throw ValidationError("sweep candidate: a single double pancake fixes the height");
  }
  if (plate < 0.0) {
    std::ostringstream os;
    os << "sweep candidate: height " << height_m * 1e3 << " mm is below the tape stack ("
       << tape_height * 1e3 << " mm)";
    throw ValidationError(os.str());
  }

  std::vector<DoublePancake> dps = ref.pancakes;
  for (auto& dp : dps) {
    const std::string& name = dp.tape.name;
    const auto it = tape_length_m.find(name);
    const double length = it != tape_length_m.end() ? it->second : lengths.at(name);
    const int turns = std::max(1, static_cast<int>(std::lround(width_m / dp.tape.thickness_m)));
    const double per_pancake = length / (n_packs * 2.0 * dps_per_class[name]);
    // sum over k of 2 pi (r_in + (k + 1/2) t) = 2 pi N (r_in + N t / 2)
    const double r_in = per_pancake / (2.0 * std::numbers::pi * turns) -
                        0.5 * turns * dp.tape.thickness_m;
    if (!(r_in > 0.0)) {
      std::ostringstream os;
      os << "sweep candidate: tape '" << name << "' does not reach a " << width_m * 1e3
         << " mm build";
      throw ValidationError(os.str());
    }
    dp.turns_per_pancake = turns;
    dp.inner_radius_m = r_in;
  }
  MachineConfig m = tmpl;
  const WindingPack pack = stack_pancakes(std::move(dps), plate);
  const double dh = pack.total_height_m() - ref.total_height_m();
  const double dw = pack.total_width_m() - ref.total_width_m();
  m.assembly = alternating_assembly(pack, static_cast<int>(a.packs.size()), a.pole_pitch_m,
                                    a.cryostat_height_m + dh, a.cryostat_width_m + dw);
  m.validate();
  return m;
}

double emf_rms_proxy(const MachineConfig& machine, int samples) {
  const GeneratorModel model(machine);
  const double period = machine.wave.period_s();
  std::vector<double> t(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) t[static_cast<std::size_t>(i)] = period * i / samples;
  const auto e = emf_waveforms(model, machine.wave, machine.operating_current_A, t);
  double sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    double sq = 0.0;
    for (const auto& v : e) sq += v[static_cast<std::size_t>(k)] * v[static_cast<std::size_t>(k)];
    sum += std::sqrt(sq / samples);
  }
  return sum / 3.0;
}

double output_power(const MachineConfig& machine) {
  const GeneratorModel model(machine);
  const CaseSpec spec = case_for(machine, machine.wave.amplitude_m, machine.operating_current_A);
  return run_case(machine, model, spec).metrics.power_out_W;
}

SweepRow evaluate_candidate(const MachineConfig& m) {
  SweepRow row;
  const WindingPack& pack = m.assembly.packs.front().pack;
  row.built_height_mm = pack.total_height_m() * 1e3;
  row.built_width_mm = pack.total_width_m() * 1e3;
  row.plate_mm = pack.plate_thickness_m * 1e3;

  const WindingField field(m.assembly, m.iron_boost_factor, m.numerics.field);
  const auto ll = magnet_critical_current(field, m.lift, m.operating_temperature_K,
                                          m.operating_current_A, m.numerics.load_line);
  row.critical_current_A = ll.critical_current_A;
  row.margin_A = ll.margin_A;
  row.margin_percent = ll.margin_percent;
  double bmax = 0.0;
  for (const auto& b : field.per_amp()) bmax = std::max(bmax, b.magnitude());
  row.max_field_T = bmax * m.operating_current_A;
  row.max_hoop_MPa = hoop_stress_map(field, m.operating_current_A, m.mechanics).max_hoop_Pa * 1e-6;
  row.emf_rms_V = emf_rms_proxy(m);
  row.feasible = m.operating_current_A < ll.critical_current_A;
  if (!row.feasible) row.reason = "operating current at or above the critical current";
  return row;
}

namespace {

template <class F>
void parallel_for(std::size_t n, int jobs, F&& body) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::string describe(const std::exception& e) { return e.what(); }

}  // namespace

SweepReport sweep(const SweepSpec& spec, const MachineConfig& tmpl, int jobs) {
  spec.validate();
  tmpl.validate();
  SweepReport report;
  report.objective = spec.objective;
  report.tape_length_m = tape_length_of(tmpl.assembly);
  for (const auto& [name, km] : spec.tape_length_km) {
    if (!report.tape_length_m.count(name)) {
      throw ValidationError("sweep: template has no tape named '" + name + "'");
    }
    report.tape_length_m[name] = km * 1e3;
  }

  const auto heights = spec.heights_mm();
  const auto widths = spec.widths_mm();
  report.rows.resize(heights.size() * widths.size());
  std::vector<std::optional<MachineConfig>> machines(report.rows.size());

  parallel_for(report.rows.size(), jobs, [&](std::size_t i) {
    SweepRow& row = report.rows[i];
    row.height_mm = heights[i / widths.size()];
    row.width_mm = widths[i % widths.size()];
    try {
      MachineConfig m = sweep_candidate(tmpl, row.height_mm * 1e-3, row.width_mm * 1e-3,
                                        report.tape_length_m);
      const auto built = tape_length_of(m.assembly);
      double err = 0.0;
      for (const auto& [name, len] : report.tape_length_m) {
        err = std::max(err, std::abs(built.at(name) - len) / len);
      }
      const double h = row.height_mm, w = row.width_mm;
      row = evaluate_candidate(m);
      row.height_mm = h;
      row.width_mm = w;
      row.tape_length_error = err;
      machines[i] = std::move(m);
    } catch (const ValidationError& e) {
      row.feasible = false;
      row.reason = describe(e);
    }
  });

  std::vector<std::size_t> feasible;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    if (report.rows[i].feasible) feasible.push_back(i);
  }
  auto by_emf = feasible;
  std::stable_sort(by_emf.begin(), by_emf.end(), [&](std::size_t a, std::size_t b) {
    return report.rows[a].emf_rms_V > report.rows[b].emf_rms_V;
  });
  if (!by_emf.empty()) report.argmax_emf = by_emf.front();

  const std::size_t k = std::min(by_emf.size(), static_cast<std::size_t>(spec.top_k));
  parallel_for(k, jobs, [&](std::size_t j) {
    const std::size_t i = by_emf[j];
    report.rows[i].power_out_W = output_power(*machines[i]);
  });
  std::optional<std::size_t> best_power;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t i = by_emf[j];
    if (!best_power || *report.rows[i].power_out_W > *report.rows[*best_power].power_out_W ||
        (*report.rows[i].power_out_W == *report.rows[*best_power].power_out_W && i < *best_power)) {
      best_power = i;
    }
  }
  report.argmax_power = best_power;

  if (spec.objective == SweepObjective::emf_rms) {
    report.ranking = by_emf;
  } else {
    // Rows with a power value first, by power; the rest by the proxy.
    report.ranking = by_emf;
    std::stable_sort(report.ranking.begin(), report.ranking.end(),
                     [&](std::size_t a, std::size_t b) {
                       const auto& pa = report.rows[a].power_out_W;
                       const auto& pb = report.rows[b].power_out_W;
                       if (pa && pb) return *pa > *pb;
                       return pa.has_value() && !pb.has_value();
                     });
  }
  return report;
}

const SweepRow& SweepReport::best() const {
  const auto i = argmax();
  if (!i) throw DomainError("sweep: no feasible candidate in the grid");
  return rows[*i];
}

void write_sweep_csv(std::ostream& os, const SweepReport& report) {
  os << "height_mm,width_mm,built_height_mm,built_width_mm,plate_mm,feasible,critical_current_A,"
        "margin_A,margin_percent,max_field_T,max_hoop_MPa,emf_rms_V,power_out_W,"
        "tape_length_error,reason\n";
  for (const auto& r : report.rows) {
    std::string reason = r.reason;
    std::replace(reason.begin(), reason.end(), ',', ';');
    std::replace(reason.begin(), reason.end(), '"', '\'');
    os << io::fmt(r.height_mm) << ',' << io::fmt(r.width_mm) << ',' << io::fmt(r.built_height_mm)
       << ',' << io::fmt(r.built_width_mm) << ',' << io::fmt(r.plate_mm) << ','
       << (r.feasible ? 1 : 0) << ',' << io::fmt(r.critical_current_A) << ','
       << io::fmt(r.margin_A) << ',' << io::fmt(r.margin_percent) << ','
       << io::fmt(r.max_field_T) << ',' << io::fmt(r.max_hoop_MPa) << ','
       << io::fmt(r.emf_rms_V) << ',' << (r.power_out_W ? io::fmt(*r.power_out_W) : "") << ','
       << io::fmt(r.tape_length_error) << ',' << reason << '\n';
  }
}

WidthComparison compare_multi_width(const MachineConfig& single, const MachineConfig& multi) {
  const double ls = total_tape_length_m(single.assembly);
  const double lm = total_tape_length_m(multi.assembly);
  if (std::abs(ls - lm) > 1e-6 * lm) {
    std::ostringstream os;
    os << "compare: designs use different tape lengths (" << ls << " m vs " << lm << " m)";
    throw ValidationError(os.str());
  }
  auto ic_of = [](const MachineConfig& m) {
    const WindingField field(m.assembly, m.iron_boost_factor, m.numerics.field);
    return magnet_critical_current(field, m.lift, m.operating_temperature_K,
                                   m.operating_current_A, m.numerics.load_line)
        .critical_current_A;
  };
  WidthComparison c;
  c.single_ic_A = ic_of(single);
  c.multi_ic_A = single == multi ? c.single_ic_A : ic_of(multi);
  c.delta_ic_percent = 100.0 * (c.multi_ic_A - c.single_ic_A) / c.single_ic_A;
  c.multi_current_A = multi.operating_current_A;
  c.single_current_A = multi.operating_current_A * c.single_ic_A / c.multi_ic_A;
  MachineConfig s = single;
  s.operating_current_A = c.single_current_A;
  c.single_power_W = output_power(s);
  c.multi_power_W = single == multi ? c.single_power_W : output_power(multi);
  c.delta_power_percent = 100.0 * (c.multi_power_W - c.single_power_W) / c.single_power_W;
  return c;
}

}  // namespace hwec
