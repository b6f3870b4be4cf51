#include "kmslab/interaction.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "kmslab/errors.hpp"
#include "kmslab/hash.hpp"

namespace kmslab {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Hartree1D: return "Hartree1D";
    case Variant::WickHartree: return "WickHartree";
    case Variant::NLS1D: return "NLS1D";
    case Variant::WickNLS2D: return "WickNLS2D";
    case Variant::WickWave: return "WickWave";
  }
  return "unknown";
}

Variant parse_variant(const std::string& name) {
  for (Variant v : {Variant::Hartree1D, Variant::WickHartree, Variant::NLS1D, Variant::WickNLS2D, Variant::WickWave})
    if (to_string(v) == name) return v;
  throw ConfigError("interaction.variant", "unknown variant '" + name + "'");
}

Potential Potential::power_law(double C, double gamma) {
  Potential p;
  p.kind = Kind::PowerLaw;
  p.C = C;
  p.gamma = gamma;
  return p;
}

Potential Potential::from_table(std::map<Mode, double> table) {
  Potential p;
  p.kind = Kind::Table;
  p.table = std::move(table);
  return p;
}

double Potential::operator()(const Mode& k) const {
  if (kind == Kind::PowerLaw) return C * std::pow(1.0 + mode_norm2(k), -0.5 * gamma);
  auto it = table.find(k);
  return it == table.end() ? 0.0 : it->second;
}

Potential load_potential_csv(const std::string& path, int dimension) {
  std::ifstream in(path);
  if (!in) throw ConfigError("interaction.potential.file", "cannot open '" + path + "'");
  std::map<Mode, double> table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric && first) {
      first = false;
      continue;
    }
    first = false;
    if (!numeric || static_cast<int>(vals.size()) != dimension + 1) {
      throw ConfigError("interaction.potential.file", "malformed row '" + line + "'");
    }
    Mode k{0, 0, 0};
    for (int i = 0; i < dimension; ++i) k[i] = static_cast<int>(std::lround(vals[i]));
    table[k] = vals[dimension];
  }
  return Potential::from_table(std::move(table));
}

int InteractionSpec::degree() const {
  switch (variant) {
    case Variant::Hartree1D:
    case Variant::WickHartree: return 4;
    case Variant::NLS1D: return power;
    case Variant::WickNLS2D: return 2 * power;
    case Variant::WickWave: return power;
  }
  return power;
}

void InteractionSpec::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("interaction.beta", "must be positive");
  if (cutoff < 0) throw ConfigError("interaction.cutoff", "must be >= 0");
  switch (variant) {
    case Variant::Hartree1D:
      if (dimension != 1) throw ConfigError("interaction.dimension", "Hartree1D requires d = 1");
      break;
    case Variant::WickHartree:
      if (dimension != 2 && dimension != 3) throw ConfigError("interaction.dimension", "WickHartree requires d = 2 or 3");
      break;
    case Variant::NLS1D:
      if (dimension != 1) throw ConfigError("interaction.dimension", "NLS1D requires d = 1");
      if (power < 4 || power % 2 != 0) throw ConfigError("interaction.power", "NLS1D needs an even power q >= 4");
      break;
    case Variant::WickNLS2D:
      if (dimension != 2) throw ConfigError("interaction.dimension", "WickNLS2D requires d = 2");
      if (power < 1) throw ConfigError("interaction.power", "WickNLS2D needs r >= 1");
      break;
    case Variant::WickWave:
      if (dimension < 1 || dimension > 3) throw ConfigError("interaction.dimension", "WickWave requires d in {1,2,3}");
      if (power < 2 || power % 2 != 0) throw ConfigError("interaction.power", "WickWave needs an even power m >= 2");
      break;
  }
  if (focusing) {
    if (variant != Variant::NLS1D) throw ConfigError("interaction.focusing", "only NLS1D supports focusing");
    if (power != 4 && power != 6) throw ConfigError("interaction.power", "focusing presets are q = 4 or 6");
  }
  if (mass_cutoff && !(*mass_cutoff > 0.0)) throw ConfigError("interaction.mass_cutoff", "must be positive");

  if (!is_hartree()) return;
  const Potential& p = potential;
  if (p.kind == Potential::Kind::PowerLaw) {
    if (!(p.C >= 0.0)) throw ConfigError("interaction.potential.C", "must be >= 0");
    if (variant == Variant::WickHartree && dimension == 3 && !(p.gamma > 2.0)) {
      throw ConfigError("interaction.potential.gamma", "d = 3 requires gamma > 2");
    }
    return;
  }
  for (const auto& [k, v] : p.table) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("interaction.potential", "table values must be >= 0");
    Mode mk{-k[0], -k[1], -k[2]};
    auto it = p.table.find(mk);
    if (it == p.table.end() || it->second != v) throw ConfigError("interaction.potential", "table must be even in k");
  }
  if (variant == Variant::WickHartree && dimension == 3) {
    if (!p.bound_C || !p.bound_eps || !(*p.bound_eps > 0.0)) {
      throw ConfigError("interaction.potential.bound", "d = 3 tables need a declared bound (C, eps > 0)");
    }
    for (const auto& [k, v] : p.table) {
      const double cap = *p.bound_C * std::pow(1.0 + mode_norm2(k), -0.5 * (2.0 + *p.bound_eps));
      if (v > cap * (1.0 + 1e-12)) throw ConfigError("interaction.potential", "table violates the declared decay bound");
    }
  }
}

std::string InteractionSpec::hash() const {
  std::ostringstream s;
  s.precision(17);
  s << to_string(variant) << '|' << dimension << '|' << cutoff << '|' << beta << '|' << power << '|' << focusing << '|'
    << (mass_cutoff ? *mass_cutoff : -1.0) << '|';
  if (is_hartree()) {
    if (potential.kind == Potential::Kind::PowerLaw) {
      s << "pow|" << potential.C << '|' << potential.gamma;
    } else {
      s << "table";
      for (const auto& [k, v] : potential.table) s << '|' << k[0] << ',' << k[1] << ',' << k[2] << '=' << v;
    }
  }
  return fnv1a_hex(s.str());
}

}  // namespace kmslab
