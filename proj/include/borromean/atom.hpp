#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "borromean/angular.hpp"

namespace borromean {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// |n l j m_j>, j and m_j doubled.
struct RydbergLevel {
  int n = 0;
  int l = 0;
  int twice_j = 1;
  int twice_mj = 1;

  bool valid() const;
  std::string label() const;  // e.g. 80P3/2(-3/2)

  auto key() const { return std::tie(n, l, twice_j, twice_mj); }
  bool operator==(const RydbergLevel& o) const { return key() == o.key(); }
  bool operator<(const RydbergLevel& o) const { return key() < o.key(); }
};

RydbergLevel make_level(int n, char l, int twice_j, int twice_mj);

// (n, l, j) without projection
struct Manifold {
  int n = 0;
  int l = 0;
  int twice_j = 1;

  auto key() const { return std::tie(n, l, twice_j); }
  bool operator==(const Manifold& o) const { return key() == o.key(); }
  bool operator<(const Manifold& o) const { return key() < o.key(); }
  bool contains(const RydbergLevel& lv) const {
    return lv.n == n && lv.l == l && lv.twice_j == twice_j;
  }
};

struct QuantumDefect {
  double delta0 = 0.0;
  double delta2 = 0.0;
};

// Marinescu-type l-dependent core potential parameters
struct ModelPotential {
  double a1, a2, a3, a4, rc;
};

struct RadiativeLifetime {
  double tau0_ns = 1.0;
  double exponent = 3.0;
};

struct PhysicalConstants {
  double hartree_mhz = 6579683920.502;
  double bohr_um = 5.29177210903e-5;
  double field_au_v_per_cm = 5.14220674763e9;
  double bohr_magneton_mhz_per_g = 1.39962449361;
  double fine_structure = 7.2973525693e-3;
  double boltzmann_hartree_per_k = 3.166811563e-6;
  double time_au_s = 2.4188843265857e-17;
};

struct AtomModel {
  std::string name;
  std::string version;
  std::string checksum;  // FNV-1a of the source file bytes, empty for built-in
  std::string source;
  double rydberg_mhz = 0.0;
  double temperature_k = 300.0;
  double core_polarizability = 0.0;
  int nuclear_charge = 37;
  std::map<std::pair<int, int>, QuantumDefect> defects;  // key (l, 2j)
  std::map<int, ModelPotential> potentials;              // l, last entry used for higher l
  std::map<int, RadiativeLifetime> lifetimes;
  double blackbody_scale = 1.0;
  PhysicalConstants constants;

  const QuantumDefect& defect(int l, int twice_j) const;
  const ModelPotential& potential(int l) const;
};

AtomModel load_atom_model(const std::string& path);
AtomModel atom_model_from_json_text(const std::string& text, const std::string& source = "<memory>");

// Default lookup: BORROMEAN_ATOM_DATA env var, else the data file shipped with the build.
std::string default_atom_data_path();

double quantum_defect(const RydbergLevel& lv, const AtomModel& model);
double effective_n(const RydbergLevel& lv, const AtomModel& model);
double effective_n(int n, int l, int twice_j, const AtomModel& model);

// Energy relative to the ionization limit, MHz (negative).
double level_energy(const RydbergLevel& lv, const AtomModel& model);
double level_energy(int n, int l, int twice_j, const AtomModel& model);

// Quasiclassical radial integral <a|r|b> in Bohr radii. Zero unless |l_a - l_b| = 1.
double radial_matrix_element(const RydbergLevel& a, const RydbergLevel& b, const AtomModel& model);
double radial_quasiclassical(double nu1, int l1, double nu2, int l2);

// Anger function J_nu(z) = (1/pi) int_0^pi cos(nu t - z sin t) dt
double anger_j(double nu, double z);

// Numerov integration of the model-potential radial equation.
struct RadialWavefunction {
  double step = 0.01;
  int k_min = 0;      // grid index of y.front(); x_k = k * step, r = x^2
  std::vector<double> y;  // y = x^{-1/2} u, normalised: sum 2 x^2 y^2 dx = 1
};

RadialWavefunction numerov_wavefunction(int n, int l, int twice_j, const AtomModel& model,
                                        double step = 0.01);
double radial_overlap_r(const RadialWavefunction& a, const RadialWavefunction& b);
double radial_numerov(const RydbergLevel& a, const RydbergLevel& b, const AtomModel& model);

// Thread-safe memo of Numerov wavefunctions and radial integrals.
class RadialCache {
 public:
  explicit RadialCache(const AtomModel& model) : model_(model) {}
  double numerov(const Manifold& a, const Manifold& b);
  double quasiclassical(const Manifold& a, const Manifold& b);

 private:
  std::shared_ptr<const RadialWavefunction> wavefunction(const Manifold& m);

  const AtomModel& model_;
  std::mutex mutex_;
  std::map<Manifold, std::shared_ptr<const RadialWavefunction>> waves_;
  std::map<std::pair<Manifold, Manifold>, double> numerov_;
  std::map<std::pair<Manifold, Manifold>, double> quasi_;
};

// Angular part of <b| r_q |a> (everything except the radial integral).
double dipole_angular_factor(const RydbergLevel& bra, const RydbergLevel& ket, int q);

// <bra| r_q |ket> in atomic units using the quasiclassical radial element.
double dipole_matrix_element(const RydbergLevel& bra, const RydbergLevel& ket, int q,
                             const AtomModel& model);

double zeeman_slope(const RydbergLevel& lv, const AtomModel& model);  // MHz per G along +z
double zeeman_shift(const RydbergLevel& lv, double bz_gauss, const AtomModel& model);

// Effective decay rate 1/us: radiative scaling law plus blackbody term at model temperature.
double decay_rate(const RydbergLevel& lv, const AtomModel& model);
double decay_rate(const RydbergLevel& lv, const AtomModel& model, double temperature_k);

struct StarkOptions {
  int delta_n = 4;
  int l_max = 4;
  double probe_field_v_cm = 0.1;
  bool check_convergence = true;
  double convergence_tolerance = 0.01;
};

// Quadratic Stark coefficient alpha, E(F) = E0 - alpha F^2 / 2, MHz/(V/cm)^2.
double polarizability(const RydbergLevel& lv, const AtomModel& model, const StarkOptions& opt = {});
double polarizability(const RydbergLevel& lv, RadialCache& cache, const AtomModel& model,
                      const StarkOptions& opt);

struct LevelProperties {
  double energy_mhz;
  double polarizability;
  double decay_rate;
  double zeeman_slope;
};

// Per-level properties with memoised polarizabilities, keyed by (n, l, 2j, |2m_j|).
class AtomicPhysics {
 public:
  explicit AtomicPhysics(AtomModel model, StarkOptions stark = {});
  AtomicPhysics(const AtomicPhysics&) = delete;
  AtomicPhysics& operator=(const AtomicPhysics&) = delete;

  const AtomModel& model() const { return model_; }
  const StarkOptions& stark_options() const { return stark_; }

  double polarizability(const RydbergLevel& lv) const;
  double decay_rate(const RydbergLevel& lv) const;
  double energy(const RydbergLevel& lv) const { return level_energy(lv, model_); }
  LevelProperties properties(const RydbergLevel& lv) const;

  // E0 - alpha F^2/2 + Zeeman, MHz. bz_gauss is the field along +z.
  double energy_in_fields(const RydbergLevel& lv, double field_v_cm, double bz_gauss) const;

  // radial element used for the dipole-dipole coupling
  double coupling_radial(const RydbergLevel& a, const RydbergLevel& b) const;

  RadialCache& radial_cache() const { return *cache_; }

 private:
  AtomModel model_;
  StarkOptions stark_;
  std::unique_ptr<RadialCache> cache_;
  mutable std::mutex mutex_;
  mutable std::map<std::tuple<int, int, int, int>, double> alpha_;
};

}  // namespace borromean
