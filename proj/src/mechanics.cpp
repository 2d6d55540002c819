#include "hwec/mechanics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <tuple>

#include "hwec/errors.hpp"
#include "hwec/io.hpp"

namespace hwec {

std::string to_string(StressModel model) { return model == StressModel::bjr ? "bjr" : "contact"; }

StressModel stress_model_from_string(const std::string& name) {
  if (name == "bjr") return StressModel::bjr;
  if (name == "contact") return StressModel::contact;
  throw ValidationError("mechanics: unknown stress model '" + name + "' (bjr | contact)");
}

void MechanicsConfig::validate() const {
  if (!(youngs_modulus_Pa > 0.0)) throw ValidationError("mechanics: Young's modulus must be positive");
}

void StressMap::summarize() {
  max_hoop_Pa = 0.0;
  max_abs_radial_Pa = 0.0;
  double sum = 0.0;
  for (const auto& t : turns) {
    max_hoop_Pa = std::max(max_hoop_Pa, t.hoop_Pa);
    max_abs_radial_Pa = std::max(max_abs_radial_Pa, std::abs(t.radial_Pa));
    sum += std::abs(t.hoop_Pa);
  }
  mean_hoop_Pa = turns.empty() ? 0.0 : sum / static_cast<double>(turns.size());
}

namespace {

struct Ring {
  std::size_t index;  // into the winding field
  double r, area, width;
  double load;  // outward force per unit circumference, N/m
};

// Pool adjacent rings whose free displacements would make an inner ring
// overlap its outer neighbour. Returns group boundaries [begin, end).
std::vector<std::pair<std::size_t, std::size_t>> contact_groups(const std::vector<Ring>& rings) {
  struct Block {
    std::size_t begin, end;
    double load, stiffness;  // sum f, sum A / r^2
    [[nodiscard]] double u() const { return load / stiffness; }
  };
  std::vector<Block> blocks;
  for (std::size_t j = 0; j < rings.size(); ++j) {
    const Ring& g = rings[j];
    blocks.push_back({j, j + 1, g.load, g.area / (g.r * g.r)});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].u() > blocks.back().u()) {
      Block b = blocks.back();
      blocks.pop_back();
      Block& a = blocks.back();
      a.end = b.end;
      a.load += b.load;
      a.stiffness += b.stiffness;
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(blocks.size());
  for (const auto& b : blocks) out.emplace_back(b.begin, b.end);
  return out;
}

}  // namespace

StressMap hoop_stress_map(const WindingField& field, double current_A,
                          const MechanicsConfig& config) {
  config.validate();
  const auto turns = field.turns();
  const auto per_amp = field.per_amp();
  StressMap map;
  map.youngs_modulus_Pa = config.youngs_modulus_Pa;
  map.model = config.model;

  std::map<std::tuple<int, int, int>, std::vector<Ring>> pancakes;
  for (std::size_t i = 0; i < turns.size(); ++i) {
    const TurnLoop& t = turns[i];
    const TapeSpec& tape = field.tape(i);
    const double bz = current_A * per_amp[i].bz_T;
    pancakes[{t.pack, t.pancake, t.layer}].push_back(
        {i, t.radius_m, tape.width_m * tape.thickness_m, tape.width_m, t.sign * current_A * bz});
  }

  std::vector<TurnStress> out(turns.size());
  const double e = config.youngs_modulus_Pa;
  for (auto& [key, rings] : pancakes) {
    std::sort(rings.begin(), rings.end(), [&](const Ring& a, const Ring& b) {
      return turns[a.index].turn < turns[b.index].turn;
    });
    auto emit = [&](const Ring& g, double hoop, double radial) {
      const TurnLoop& t = turns[g.index];
      out[g.index] = {t.pack, t.pancake, t.layer, t.turn, t.radius_m, t.z_m, hoop, radial, hoop / e};
    };
    if (config.model == StressModel::bjr) {
      double pressure = 0.0;
      for (const Ring& g : rings) {
        pressure += g.load;
        emit(g, g.load * g.r / g.area, -pressure / g.width);
      }
      continue;
    }
    for (const auto& [begin, end] : contact_groups(rings)) {
      double load = 0.0;
      double stiffness = 0.0;
      for (std::size_t j = begin; j < end; ++j) {
        load += rings[j].load;
        stiffness += rings[j].area / (rings[j].r * rings[j].r);
      }
      // Common displacement times E.
      const double eu = load / stiffness;
      double pressure = 0.0;
      for (std::size_t j = begin; j < end; ++j) {
        const Ring& g = rings[j];
        pressure += g.load - eu * g.area / (g.r * g.r);
        // The last ring of a group has no contact outside it.
        emit(g, eu / g.r, j + 1 == end ? 0.0 : -pressure / g.width);
      }
    }
  }
  map.turns = std::move(out);
  map.summarize();
  return map;
}

void write_stress_csv(std::ostream& os, const StressMap& map) {
  os << "pack,pancake,layer,turn,r_mm,z_mm,sigma_hoop_MPa,sigma_radial_MPa\n";
  for (const auto& t : map.turns) {
    os << t.pack << ',' << t.pancake << ',' << t.layer << ',' << t.turn << ',' << io::fmt(t.r_m * 1e3)
       << ',' << io::fmt(t.z_m * 1e3) << ',' << io::fmt(t.hoop_Pa * 1e-6) << ','
       << io::fmt(t.radial_Pa * 1e-6) << '\n';
  }
}

}  // namespace hwec
