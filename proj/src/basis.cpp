#include "borromean/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "borromean/io.hpp"

namespace borromean {

std::string CollectiveState::label() const {
  std::string s = "|";
  for (std::size_t i = 0; i < atoms.size(); ++i) s += (i ? " " : "") + atoms[i].label();
  return s + ">";
}

long CollectiveBasis::index_of(const std::vector<RydbergLevel>& atoms) const {
  auto it = lookup_.find(atoms);
  return it == lookup_.end() ? -1 : it->second;
}

std::string CollectiveBasis::hash() const {
  std::ostringstream s;
  for (const auto& st : states) {
    for (const auto& a : st.atoms) s << a.n << ',' << a.l << ',' << a.twice_j << ',' << a.twice_mj << ';';
    s << '\n';
  }
  return fnv1a_hex(s.str());
}

namespace {

double zero_field_sum(const std::vector<RydbergLevel>& atoms, const AtomModel& model) {
  double e = 0.0;
  for (const auto& a : atoms) e += level_energy(a, model);
  return e;
}

}  // namespace

CollectiveBasis build_basis(const std::vector<RydbergLevel>& initial, const std::vector<Manifold>& manifolds,
                            double cutoff_mhz, const AtomModel& model) {
  if (initial.empty()) throw ConfigError("initial state has no atoms");
  if (!(cutoff_mhz > 0)) throw ConfigError("defect cutoff must be positive");
  for (const auto& a : initial) {
    if (!a.valid()) throw ConfigError("invalid level in initial state");
    if (std::none_of(manifolds.begin(), manifolds.end(), [&](const Manifold& m) { return m.contains(a); }))
      throw ConfigError("initial level " + a.label() + " is not in the manifold set");
  }

  std::vector<RydbergLevel> sublevels;
  for (const auto& m : manifolds)
    for (int tm = -m.twice_j; tm <= m.twice_j; tm += 2) sublevels.push_back({m.n, m.l, m.twice_j, tm});
  std::sort(sublevels.begin(), sublevels.end());
  sublevels.erase(std::unique(sublevels.begin(), sublevels.end()), sublevels.end());

  const int twice_M = std::accumulate(initial.begin(), initial.end(), 0,
                                      [](int s, const RydbergLevel& a) { return s + a.twice_mj; });
  const double e_init = zero_field_sum(initial, model);
  const std::size_t natoms = initial.size();

  CollectiveBasis basis;
  basis.manifolds = manifolds;

  std::vector<std::size_t> idx(natoms, 0);
  std::vector<CollectiveState> found;
  bool have_initial = false;
  bool done = false;
  while (!done) {
    std::vector<RydbergLevel> atoms(natoms);
    int tm = 0;
    for (std::size_t k = 0; k < natoms; ++k) {
      atoms[k] = sublevels[idx[k]];
      tm += atoms[k].twice_mj;
    }
    if (tm == twice_M) {
      const bool is_init = atoms == initial;
      const double d = is_init ? 0.0 : zero_field_sum(atoms, model) - e_init;
      if (is_init || std::abs(d) <= cutoff_mhz) {
        found.push_back({atoms, twice_M, d});
        have_initial |= is_init;
      }
    }
    // odometer step
    std::size_t k = natoms;
    while (true) {
      if (k == 0) {
        done = true;
        break;
      }
      --k;
      if (++idx[k] < sublevels.size()) break;
      idx[k] = 0;
    }
  }
  if (!have_initial) throw ConfigError("initial state missing from enumeration");

  std::stable_sort(found.begin(), found.end(), [&](const CollectiveState& a, const CollectiveState& b) {
    const bool ai = a.atoms == initial, bi = b.atoms == initial;
    if (ai != bi) return ai;
    if (a.defect0_mhz != b.defect0_mhz) return a.defect0_mhz < b.defect0_mhz;
    return a.atoms < b.atoms;
  });
  basis.states = std::move(found);
  basis.initial_index = 0;
  for (std::size_t i = 0; i < basis.states.size(); ++i) basis.lookup_[basis.states[i].atoms] = static_cast<long>(i);
  return basis;
}

double forster_defect(const std::vector<RydbergLevel>& state, const std::vector<RydbergLevel>& initial,
                      const FieldConfiguration& fields, const AtomicPhysics& physics) {
  double d = 0.0;
  const double f = fields.electric_v_cm, bz = fields.bz_gauss();
  for (const auto& a : state) d += physics.energy_in_fields(a, f, bz);
  for (const auto& a : initial) d -= physics.energy_in_fields(a, f, bz);
  return d;
}

double forster_defect(const CollectiveState& state, const CollectiveState& initial,
                      const FieldConfiguration& fields, const AtomicPhysics& physics) {
  if (state.atoms == initial.atoms) return 0.0;
  return forster_defect(state.atoms, initial.atoms, fields, physics);
}

std::vector<Manifold> scheme_manifolds() {
  return {{80, 0, 1}, {81, 0, 1}, {82, 0, 1}, {80, 1, 1}, {80, 1, 3}, {81, 1, 1}, {81, 1, 3}};
}

RydbergLevel level_r() { return {80, 1, 3, 3}; }
RydbergLevel level_r1() { return {81, 1, 3, 3}; }
RydbergLevel level_r2() { return {81, 1, 3, -3}; }

std::string basis_csv(const CollectiveBasis& basis) {
  std::ostringstream s;
  s << "index";
  for (std::size_t k = 0; k < basis.atom_count(); ++k)
    s << ",n" << k + 1 << ",l" << k + 1 << ",twice_j" << k + 1 << ",twice_mj" << k + 1;
  s << ",twice_M,defect0_MHz,label\n";
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& st = basis.states[i];
    s << i;
    for (const auto& a : st.atoms) s << ',' << a.n << ',' << a.l << ',' << a.twice_j << ',' << a.twice_mj;
    s << ',' << st.twice_M << ',' << format_double(st.defect0_mhz, 12) << ',' << st.label() << '\n';
  }
  return s.str();
}

}  // namespace borromean
