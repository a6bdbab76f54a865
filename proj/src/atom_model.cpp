#include <cmath>
#include <cstdlib>
#include <filesystem>

#include <json.hpp>

#include "borromean/atom.hpp"
#include "borromean/io.hpp"

namespace borromean {

using nlohmann::json;

const QuantumDefect& AtomModel::defect(int l, int twice_j) const {
  auto it = defects.find({l, twice_j});
  if (it == defects.end())
    throw ConfigError("no quantum defect for l=" + std::to_string(l) + " 2j=" + std::to_string(twice_j));
  return it->second;
}

const ModelPotential& AtomModel::potential(int l) const {
  if (potentials.empty()) throw ConfigError("atom model has no model potential");
  auto it = potentials.upper_bound(l);
  return std::prev(it)->second;
}

namespace {

int twice(double x) {
  const double t = 2.0 * x;
  const int r = static_cast<int>(std::lround(t));
  if (std::abs(t - r) > 1e-9) throw ConfigError("angular momentum must be a multiple of 1/2");
  return r;
}

}  // namespace

AtomModel atom_model_from_json_text(const std::string& text, const std::string& source) {
  AtomModel m;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("atom data " + source + ": " + e.what());
  }
  try {
    m.name = doc.at("name").get<std::string>();
    m.version = doc.at("version").get<std::string>();
    m.rydberg_mhz = doc.at("rydberg_constant_mhz").get<double>();
    m.temperature_k = doc.value("temperature_k", 300.0);
    m.core_polarizability = doc.at("core_polarizability_au").get<double>();
    m.nuclear_charge = doc.value("nuclear_charge", 37);
    for (const auto& d : doc.at("quantum_defects"))
      m.defects[{d.at("l").get<int>(), twice(d.at("j").get<double>())}] =
          QuantumDefect{d.at("delta0").get<double>(), d.value("delta2", 0.0)};
    for (const auto& p : doc.at("model_potential"))
      m.potentials[p.at("l").get<int>()] =
          ModelPotential{p.at("a1").get<double>(), p.at("a2").get<double>(), p.at("a3").get<double>(),
                         p.at("a4").get<double>(), p.at("rc").get<double>()};
    const auto& lt = doc.at("lifetime");
    for (const auto& r : lt.at("radiative"))
      m.lifetimes[r.at("l").get<int>()] =
          RadiativeLifetime{r.at("tau0_ns").get<double>(), r.at("exponent").get<double>()};
    m.blackbody_scale = lt.value("blackbody_scale", 1.0);
    if (doc.contains("constants")) {
      const auto& c = doc["constants"];
      auto& k = m.constants;
      k.hartree_mhz = c.value("hartree_mhz", k.hartree_mhz);
      k.bohr_um = c.value("bohr_um", k.bohr_um);
      k.field_au_v_per_cm = c.value("field_au_v_per_cm", k.field_au_v_per_cm);
      k.bohr_magneton_mhz_per_g = c.value("bohr_magneton_mhz_per_g", k.bohr_magneton_mhz_per_g);
      k.fine_structure = c.value("fine_structure", k.fine_structure);
      k.boltzmann_hartree_per_k = c.value("boltzmann_hartree_per_k", k.boltzmann_hartree_per_k);
      k.time_au_s = c.value("time_au_s", k.time_au_s);
    }
  } catch (const json::exception& e) {
    throw ConfigError("atom data " + source + ": " + e.what());
  }
  if (m.rydberg_mhz <= 0) throw ConfigError("atom data: Rydberg constant must be positive");
  if (m.temperature_k < 0) throw ConfigError("atom data: temperature must be >= 0");
  for (auto [key, d] : m.defects)
    if (key.first <= 1 && d.delta0 <= 0) throw ConfigError("atom data: S/P quantum defects must be positive");
  m.source = source;
  m.checksum = fnv1a_hex(text);
  return m;
}

AtomModel load_atom_model(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  return atom_model_from_json_text(text, path);
}

std::string default_atom_data_path() {
  if (const char* env = std::getenv("BORROMEAN_ATOM_DATA"); env && *env) return env;
  return BORROMEAN_DEFAULT_DATA;
}

}  // namespace borromean
