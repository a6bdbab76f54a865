#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "borromean/atom.hpp"

namespace borromean {

namespace {

// Shift of the level that adiabatically connects to lv, from exact diagonalisation
// of the single-atom Stark matrix in a truncated |n l j m_j> basis.
double stark_shift(const RydbergLevel& lv, RadialCache& cache, const AtomModel& model, int delta_n,
                   int l_max, double field_v_cm) {
  std::vector<RydbergLevel> basis;
  int target = -1;
  for (int n = std::max(1, lv.n - delta_n); n <= lv.n + delta_n; ++n)
    for (int l = 0; l <= std::min(l_max, n - 1); ++l)
      for (int tj : {2 * l - 1, 2 * l + 1}) {
        if (tj < 1 || std::abs(lv.twice_mj) > tj) continue;
        RydbergLevel b{n, l, tj, lv.twice_mj};
        if (b == lv) target = static_cast<int>(basis.size());
        basis.push_back(b);
      }
  if (target < 0) throw ConfigError("Stark basis does not contain " + lv.label());

  const auto& c = model.constants;
  const double f_au = field_v_cm / c.field_au_v_per_cm;
  const int dim = static_cast<int>(basis.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    h(i, i) = level_energy(basis[i].n, basis[i].l, basis[i].twice_j, model);
    for (int k = 0; k < i; ++k) {
      const double ang = dipole_angular_factor(basis[i], basis[k], 0);
      if (ang == 0.0) continue;
      const double r = cache.numerov({basis[i].n, basis[i].l, basis[i].twice_j},
                                     {basis[k].n, basis[k].l, basis[k].twice_j});
      h(i, k) = h(k, i) = ang * r * f_au * c.hartree_mhz;
    }
  }
  // Subtract the target energy so the eigenvalues are small numbers.
  const double e0 = h(target, target);
  h.diagonal().array() -= e0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  Eigen::Index best;
  es.eigenvectors().row(target).cwiseAbs().maxCoeff(&best);
  return es.eigenvalues()(best);
}

}  // namespace

double polarizability(const RydbergLevel& lv, RadialCache& cache, const AtomModel& model,
                      const StarkOptions& opt) {
  if (!lv.valid()) throw ConfigError("invalid level for polarizability");
  const double f = opt.probe_field_v_cm;
  const double alpha = -2.0 * stark_shift(lv, cache, model, opt.delta_n, opt.l_max, f) / (f * f);
  if (!std::isfinite(alpha)) throw ConvergenceError("non-finite polarizability for " + lv.label());
  if (opt.check_convergence) {
    const double wider = -2.0 * stark_shift(lv, cache, model, opt.delta_n + 1, opt.l_max, f) / (f * f);
    if (std::abs(wider - alpha) > opt.convergence_tolerance * std::abs(alpha))
      throw ConvergenceError("polarizability of " + lv.label() + " not converged in basis size: " +
                             std::to_string(alpha) + " vs " + std::to_string(wider));
  }
  return alpha;
}

double polarizability(const RydbergLevel& lv, const AtomModel& model, const StarkOptions& opt) {
  RadialCache cache(model);
  return polarizability(lv, cache, model, opt);
}

}  // namespace borromean
