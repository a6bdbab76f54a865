#include <cmath>
#include <cstdlib>
#include <sstream>

#include "borromean/atom.hpp"

namespace borromean {

bool RydbergLevel::valid() const {
  if (n < 1 || l < 0 || l >= n) return false;
  if (twice_j != 2 * l + 1 && twice_j != 2 * l - 1) return false;
  if (twice_j < 1) return false;
  return AngularMomentum{twice_j, twice_mj}.valid();
}

namespace {

std::string half(int twice) {
  if (twice % 2 == 0) return std::to_string(twice / 2);
  return std::to_string(twice) + "/2";
}

constexpr char kLetters[] = "SPDFGHIK";

}  // namespace

std::string RydbergLevel::label() const {
  std::ostringstream s;
  s << n << (l < 8 ? kLetters[l] : '?') << half(twice_j) << "(" << half(twice_mj) << ")";
  return s.str();
}

RydbergLevel make_level(int n, char l, int twice_j, int twice_mj) {
  int ll = -1;
  for (int i = 0; i < 8; ++i)
    if (kLetters[i] == l) ll = i;
  RydbergLevel lv{n, ll, twice_j, twice_mj};
  if (!lv.valid()) throw ConfigError("invalid Rydberg level");
  return lv;
}

double quantum_defect(const RydbergLevel& lv, const AtomModel& model) {
  const auto& d = model.defect(lv.l, lv.twice_j);
  const double x = lv.n - d.delta0;
  return d.delta0 + d.delta2 / (x * x);
}

double effective_n(int n, int l, int twice_j, const AtomModel& model) {
  // Series without tabulated defects (high l) are hydrogenic.
  auto it = model.defects.find({l, twice_j});
  if (it == model.defects.end()) return n;
  const double x = n - it->second.delta0;
  return n - (it->second.delta0 + it->second.delta2 / (x * x));
}

double effective_n(const RydbergLevel& lv, const AtomModel& model) {
  return effective_n(lv.n, lv.l, lv.twice_j, model);
}

double level_energy(int n, int l, int twice_j, const AtomModel& model) {
  if (l <= 1) (void)model.defect(l, twice_j);  // unknown S/P series is a configuration error
  const double nu = effective_n(n, l, twice_j, model);
  return -model.rydberg_mhz / (nu * nu);
}

double level_energy(const RydbergLevel& lv, const AtomModel& model) {
  return level_energy(lv.n, lv.l, lv.twice_j, model);
}

double dipole_angular_factor(const RydbergLevel& bra, const RydbergLevel& ket, int q) {
  if (bra.twice_mj != ket.twice_mj + 2 * q) return 0.0;
  if (std::abs(bra.l - ket.l) != 1) return 0.0;
  const int lb = bra.l, lk = ket.l;
  const double red_l = parity_sign(lb) * std::sqrt((2.0 * lb + 1) * (2.0 * lk + 1)) *
                       wigner_3j(2 * lb, 2, 2 * lk, 0, 0, 0);
  // (-1)^(l_b + s + j_k + 1)
  const int ph = (2 * lb + 1 + ket.twice_j + 2) / 2;
  const double red_j = parity_sign(ph) * std::sqrt((bra.twice_j + 1.0) * (ket.twice_j + 1.0)) *
                       wigner_6j(2 * lb, bra.twice_j, 1, ket.twice_j, 2 * lk, 2) * red_l;
  return parity_sign((bra.twice_j - bra.twice_mj) / 2) *
         wigner_3j(bra.twice_j, 2, ket.twice_j, -bra.twice_mj, 2 * q, ket.twice_mj) * red_j;
}

double dipole_matrix_element(const RydbergLevel& bra, const RydbergLevel& ket, int q, const AtomModel& model) {
  const double ang = dipole_angular_factor(bra, ket, q);
  if (ang == 0.0) return 0.0;
  return ang * radial_matrix_element(bra, ket, model);
}

double zeeman_slope(const RydbergLevel& lv, const AtomModel& model) {
  return model.constants.bohr_magneton_mhz_per_g * lande_g(lv.l, 1, lv.twice_j) * 0.5 * lv.twice_mj;
}

double zeeman_shift(const RydbergLevel& lv, double bz_gauss, const AtomModel& model) {
  return zeeman_slope(lv, model) * bz_gauss;
}

double decay_rate(const RydbergLevel& lv, const AtomModel& model, double temperature_k) {
  const double nu = effective_n(lv, model);
  auto it = model.lifetimes.upper_bound(lv.l);
  if (it == model.lifetimes.begin()) throw ConfigError("no lifetime parameters for l=" + std::to_string(lv.l));
  const auto& p = std::prev(it)->second;
  const double tau_rad_us = p.tau0_ns * 1e-3 * std::pow(nu, p.exponent);
  const auto& c = model.constants;
  const double a3 = c.fine_structure * c.fine_structure * c.fine_structure;
  const double kt = temperature_k * c.boltzmann_hartree_per_k;
  const double bbr_au = 4.0 * a3 * kt / (3.0 * nu * nu);
  const double bbr_per_us = model.blackbody_scale * bbr_au / c.time_au_s * 1e-6;
  return 1.0 / tau_rad_us + bbr_per_us;
}

double decay_rate(const RydbergLevel& lv, const AtomModel& model) {
  return decay_rate(lv, model, model.temperature_k);
}

AtomicPhysics::AtomicPhysics(AtomModel model, StarkOptions stark)
    : model_(std::move(model)), stark_(stark), cache_(std::make_unique<RadialCache>(model_)) {}

double AtomicPhysics::polarizability(const RydbergLevel& lv) const {
  const auto key = std::make_tuple(lv.n, lv.l, lv.twice_j, std::abs(lv.twice_mj));
  {
    std::lock_guard lock(mutex_);
    if (auto it = alpha_.find(key); it != alpha_.end()) return it->second;
  }
  RydbergLevel probe = lv;
  probe.twice_mj = std::abs(lv.twice_mj);
  const double a = borromean::polarizability(probe, *cache_, model_, stark_);
  std::lock_guard lock(mutex_);
  alpha_.emplace(key, a);
  return a;
}

double AtomicPhysics::decay_rate(const RydbergLevel& lv) const { return borromean::decay_rate(lv, model_); }

LevelProperties AtomicPhysics::properties(const RydbergLevel& lv) const {
  return {energy(lv), polarizability(lv), decay_rate(lv), zeeman_slope(lv, model_)};
}

double AtomicPhysics::energy_in_fields(const RydbergLevel& lv, double field_v_cm, double bz_gauss) const {
  double e = energy(lv);
  if (field_v_cm != 0.0) e -= 0.5 * polarizability(lv) * field_v_cm * field_v_cm;
  return e + zeeman_shift(lv, bz_gauss, model_);
}

double AtomicPhysics::coupling_radial(const RydbergLevel& a, const RydbergLevel& b) const {
  return cache_->quasiclassical({a.n, a.l, a.twice_j}, {b.n, b.l, b.twice_j});
}

}  // namespace borromean
