#pragma once

// Fixed-tape-length sweep of the magnet height and radial width, and the
// single- against multi-width comparison.

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "hwec/machine.hpp"

namespace hwec {

enum class SweepObjective { output_power, emf_rms };

std::string to_string(SweepObjective objective);
SweepObjective sweep_objective_from_string(const std::string& name);

struct SweepSpec {
  double height_min_mm = 0.0;
  double height_max_mm = 0.0;
  double height_step_mm = 1.0;
  double width_min_mm = 0.0;
  double width_max_mm = 0.0;
  double width_step_mm = 1.0;
  /// Tape length per width class (tape name); classes left out keep the
  /// template's length.
  std::map<std::string, double> tape_length_km;
  /// Upper bound on grid points.
  int max_evaluations = 400;
  SweepObjective objective = SweepObjective::output_power;
  /// Candidates ranked by the EMF proxy that get a full circuit run.
  int top_k = 5;

  [[nodiscard]] std::vector<double> heights_mm() const;
  [[nodiscard]] std::vector<double> widths_mm() const;
  void validate() const;
};

SweepSpec parse_sweep_spec(std::string_view text);
SweepSpec load_sweep_spec(const std::filesystem::path& path);

struct SweepRow {
  double height_mm = 0.0;
  double width_mm = 0.0;
  /// Height and radial build actually realised with whole turns.
  double built_height_mm = 0.0;
  double built_width_mm = 0.0;
  double plate_mm = 0.0;
  bool feasible = false;
  std::string reason;
  double critical_current_A = 0.0;
  double margin_A = 0.0;
  double margin_percent = 0.0;
  double max_field_T = 0.0;
  double max_hoop_MPa = 0.0;
  double emf_rms_V = 0.0;
  std::optional<double> power_out_W;
  /// Largest relative tape-length mismatch over the width classes.
  double tape_length_error = 0.0;
};

struct SweepReport {
  SweepObjective objective = SweepObjective::output_power;
  std::map<std::string, double> tape_length_m;
  /// Row-major over (height, width).
  std::vector<SweepRow> rows;
  /// Feasible rows, best objective first; ties keep grid order.
  std::vector<std::size_t> ranking;
  std::optional<std::size_t> argmax_emf;
  std::optional<std::size_t> argmax_power;

  /// Row maximising the objective; throws DomainError when nothing is feasible.
  [[nodiscard]] const SweepRow& best() const;
  [[nodiscard]] std::optional<std::size_t> argmax() const {
    return objective == SweepObjective::emf_rms ? argmax_emf : argmax_power;
  }
};

/// Rebuilds the template magnet at the given height and radial width. Every
/// width class keeps its double pancakes and tape length: turns become
/// round(width / thickness) and the inner radius absorbs the remainder.
/// Height is set by the gap between double pancakes.
MachineConfig sweep_candidate(const MachineConfig& tmpl, double height_m, double width_m,
                              const std::map<std::string, double>& tape_length_m);

/// Ic, margin, peak field, stress and EMF proxy of one candidate.
SweepRow evaluate_candidate(const MachineConfig& candidate);

/// Phase EMF rms at the configured wave and operating current, averaged over
/// phases, from one sampled wave period.
double emf_rms_proxy(const MachineConfig& machine, int samples = 512);

/// Output power of the full circuit run at the configured wave and current.
double output_power(const MachineConfig& machine);

SweepReport sweep(const SweepSpec& spec, const MachineConfig& tmpl, int jobs = 1);

/// One line per row, grid order.
void write_sweep_csv(std::ostream& os, const SweepReport& report);

struct WidthComparison {
  double single_ic_A = 0.0;
  double multi_ic_A = 0.0;
  double delta_ic_percent = 0.0;
  double single_current_A = 0.0;
  double multi_current_A = 0.0;
  double single_power_W = 0.0;
  double multi_power_W = 0.0;
  double delta_power_percent = 0.0;
};

/// Both designs must share the total tape length. The single-width design
/// runs at the multi-width design's fraction of its own critical current.
WidthComparison compare_multi_width(const MachineConfig& single, const MachineConfig& multi);

}  // namespace hwec
