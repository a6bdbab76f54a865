#include "borromean/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "borromean/io.hpp"

namespace borromean {

Geometry Geometry::chain(int atoms, double spacing_um) {
  if (!(spacing_um > 0)) throw ConfigError("spacing must be positive");
  Geometry g;
  const double centre = 0.5 * (atoms - 1);
  for (int i = 0; i < atoms; ++i) g.positions_um.push_back((i - centre) * spacing_um);
  return g;
}

Geometry Geometry::pair(double distance_um) {
  if (!(distance_um > 0)) throw ConfigError("distance must be positive");
  return Geometry{{0.0, distance_um}};
}

double Geometry::distance(std::size_t i, std::size_t j) const {
  return std::abs(positions_um.at(i) - positions_um.at(j));
}

double pair_coupling(const RydbergLevel& a_out, const RydbergLevel& b_out, const RydbergLevel& a_in,
                     const RydbergLevel& b_in, double r_um, const AtomicPhysics& physics) {
  if (!(r_um > 0)) throw ConfigError("pair distance must be positive");
  if (a_out.twice_mj + b_out.twice_mj != a_in.twice_mj + b_in.twice_mj) return 0.0;
  if (std::abs(a_out.l - a_in.l) != 1 || std::abs(b_out.l - b_in.l) != 1) return 0.0;

  const int q = (a_out.twice_mj - a_in.twice_mj) / 2;
  if (std::abs(q) > 1) return 0.0;
  // C(1 q; 1 -q | 2 0)
  const double cg = clebsch_gordan(2, 2 * q, 2, -2 * q, 4, 0);
  const double da = dipole_angular_factor(a_out, a_in, q) * physics.coupling_radial(a_out, a_in);
  const double db = dipole_angular_factor(b_out, b_in, -q) * physics.coupling_radial(b_out, b_in);
  const auto& c = physics.model().constants;
  const double r_au = r_um / c.bohr_um;
  return -std::sqrt(6.0) * cg * da * db / (r_au * r_au * r_au) * c.hartree_mhz;
}

Eigen::MatrixXd coupling_matrix(const CollectiveBasis& basis, const Geometry& geometry,
                                const AtomicPhysics& physics) {
  const std::size_t n = basis.size();
  if (n == 0) throw ConfigError("empty basis");
  if (n > kMaxBasisSize) throw ConfigError("basis too large: " + std::to_string(n) + " states");
  const std::size_t natoms = basis.atom_count();
  if (geometry.size() != natoms) throw ConfigError("geometry and basis atom counts differ");

  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& si = basis.states[i].atoms;
    for (std::size_t k = i + 1; k < n; ++k) {
      const auto& sk = basis.states[k].atoms;
      std::size_t diff = 0;
      std::size_t p1 = natoms, p2 = natoms;
      for (std::size_t a = 0; a < natoms; ++a)
        if (!(si[a] == sk[a])) {
          ++diff;
          (p1 == natoms ? p1 : p2) = a;
        }
      // a pair operator changes exactly two atoms; the spectator must match
      if (diff != 2) continue;
      const double val = pair_coupling(si[p1], si[p2], sk[p1], sk[p2], geometry.distance(p1, p2), physics);
      v(i, k) = v(k, i) = val;
    }
  }
  return v;
}

InteractionHamiltonian assemble(const CollectiveBasis& basis, const Eigen::MatrixXd& couplings,
                                const FieldConfiguration& fields, const AtomicPhysics& physics, bool with_decay) {
  const Eigen::Index n = static_cast<Eigen::Index>(basis.size());
  if (couplings.rows() != n || couplings.cols() != n) throw ConfigError("coupling matrix does not match basis");

  InteractionHamiltonian h;
  h.fields = fields;
  h.defects.resize(n);
  h.half_decay = Eigen::VectorXd::Zero(n);
  const auto& init = basis.initial();
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& st = basis.states[i];
    h.defects(i) = forster_defect(st, init, fields, physics);
    if (with_decay) {
      double g = 0.0;
      for (const auto& a : st.atoms) g += physics.decay_rate(a);
      h.half_decay(i) = 0.5 * g;
    }
  }
  h.matrix = couplings.cast<std::complex<double>>();
  const double to_mhz = 1.0 / (2.0 * std::numbers::pi);
  for (Eigen::Index i = 0; i < n; ++i) h.matrix(i, i) = {h.defects(i), -h.half_decay(i) * to_mhz};
  return h;
}

InteractionHamiltonian assemble(const CollectiveBasis& basis, const Geometry& geometry,
                                const FieldConfiguration& fields, const AtomicPhysics& physics, bool with_decay) {
  return assemble(basis, coupling_matrix(basis, geometry, physics), fields, physics, with_decay);
}

std::string hamiltonian_csv(const InteractionHamiltonian& h, const CollectiveBasis& basis) {
  std::ostringstream s;
  s << "row,col,re_MHz,im_MHz,row_label,col_label\n";
  for (Eigen::Index i = 0; i < h.size(); ++i)
    for (Eigen::Index k = 0; k < h.size(); ++k) {
      const auto v = h.matrix(i, k);
      if (v == std::complex<double>(0.0, 0.0)) continue;
      s << i << ',' << k << ',' << format_double(v.real(), 12) << ',' << format_double(v.imag(), 12) << ','
        << basis.states[i].label() << ',' << basis.states[k].label() << '\n';
    }
  return s.str();
}

}  // namespace borromean
