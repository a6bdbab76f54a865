#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "borromean/atom.hpp"

namespace borromean {

// Lab fields and geometry. magnetic_field_g is signed: positive means B points
// opposite to the dc electric field (which defines +z), so B_z = -magnetic_field_g.
struct FieldConfiguration {
  double electric_v_cm = 0.0;
  double magnetic_field_g = 0.0;
  double spacing_um = 12.5;
  double time_us = 0.0;

  double bz_gauss() const { return -magnetic_field_g; }
};

struct CollectiveState {
  std::vector<RydbergLevel> atoms;  // position order along z
  int twice_M = 0;
  double defect0_mhz = 0.0;

  std::string label() const;
};

struct CollectiveBasis {
  std::vector<CollectiveState> states;
  std::size_t initial_index = 0;
  std::vector<Manifold> manifolds;

  std::size_t size() const { return states.size(); }
  std::size_t atom_count() const { return states.empty() ? 0 : states.front().atoms.size(); }
  const CollectiveState& initial() const { return states.at(initial_index); }
  // -1 when absent
  long index_of(const std::vector<RydbergLevel>& atoms) const;
  std::string hash() const;  // FNV-1a of the canonical state list

 private:
  friend CollectiveBasis build_basis(const std::vector<RydbergLevel>&, const std::vector<Manifold>&,
                                     double, const AtomModel&);
  std::map<std::vector<RydbergLevel>, long> lookup_;
};

// All product states over the manifolds (every m_j sublevel at every position)
// with the initial state's total projection and |zero-field defect| <= cutoff.
// The initial state is placed first; the rest are sorted by defect, then by
// quantum numbers.
CollectiveBasis build_basis(const std::vector<RydbergLevel>& initial, const std::vector<Manifold>& manifolds,
                            double cutoff_mhz, const AtomModel& model);

double forster_defect(const CollectiveState& state, const CollectiveState& initial,
                      const FieldConfiguration& fields, const AtomicPhysics& physics);
double forster_defect(const std::vector<RydbergLevel>& state, const std::vector<RydbergLevel>& initial,
                      const FieldConfiguration& fields, const AtomicPhysics& physics);

// The seven single-atom manifolds of the Toffoli scheme.
std::vector<Manifold> scheme_manifolds();

// |r>, |r'>, |r''>
RydbergLevel level_r();
RydbergLevel level_r1();
RydbergLevel level_r2();

std::string basis_csv(const CollectiveBasis& basis);

}  // namespace borromean
