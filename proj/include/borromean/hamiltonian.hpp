#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "borromean/basis.hpp"

namespace borromean {

// Atom positions on the z axis, micrometres.
struct Geometry {
  std::vector<double> positions_um;

  static Geometry chain(int atoms, double spacing_um);  // -R, 0, +R for three atoms
  static Geometry pair(double distance_um);
  double distance(std::size_t i, std::size_t j) const;
  std::size_t size() const { return positions_um.size(); }
};

// <a' b'| V_dd |a b> for two atoms on the z axis a distance r apart, MHz.
double pair_coupling(const RydbergLevel& a_out, const RydbergLevel& b_out, const RydbergLevel& a_in,
                     const RydbergLevel& b_in, double r_um, const AtomicPhysics& physics);

// Field-independent dipole-dipole part over a basis (real symmetric, MHz).
Eigen::MatrixXd coupling_matrix(const CollectiveBasis& basis, const Geometry& geometry,
                                const AtomicPhysics& physics);

// Energies in ordinary frequency (MHz); exp(-i 2 pi H t) with t in microseconds.
// The diagonal is measured from the non-interacting energy of the initial state
// at the same fields, and carries -i gamma/(4 pi) so that amplitudes decay as exp(-gamma t / 2).
struct InteractionHamiltonian {
  Eigen::MatrixXcd matrix;
  Eigen::VectorXd half_decay;  // gamma_total / 2 per state, 1/us
  Eigen::VectorXd defects;     // real diagonal, MHz
  FieldConfiguration fields;

  Eigen::Index size() const { return matrix.rows(); }
};

constexpr std::size_t kMaxBasisSize = 10000;

InteractionHamiltonian assemble(const CollectiveBasis& basis, const Eigen::MatrixXd& couplings,
                                const FieldConfiguration& fields, const AtomicPhysics& physics, bool with_decay);
InteractionHamiltonian assemble(const CollectiveBasis& basis, const Geometry& geometry,
                                const FieldConfiguration& fields, const AtomicPhysics& physics, bool with_decay);

// Nonzero entries with state labels.
std::string hamiltonian_csv(const InteractionHamiltonian& h, const CollectiveBasis& basis);

}  // namespace borromean
