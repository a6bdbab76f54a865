#include <algorithm>
#include <cmath>
#include <numbers>

#include "borromean/atom.hpp"

namespace borromean {

double anger_j(double nu, double z) {
  // Composite Simpson; the integrand is smooth and the orders used here are small.
  const int n = 2048;
  const double h = std::numbers::pi / n;
  double s = std::cos(0.0) + std::cos(nu * std::numbers::pi);
  for (int i = 1; i < n; ++i) {
    const double t = i * h;
    s += (i % 2 ? 4.0 : 2.0) * std::cos(nu * t - z * std::sin(t));
  }
  return s * h / 3.0 / std::numbers::pi;
}

// Kaulakys' quasiclassical dipole radial integral.
double radial_quasiclassical(double nu1, int l1, double nu2, int l2) {
  if (std::abs(l1 - l2) != 1) return 0.0;
  const double dl = l2 - l1;
  double s = nu2 - nu1;
  if (std::abs(s) < 1e-8) s = 1e-8;
  const double lc = 0.5 * (l1 + l2 + 1);
  const double nuc = std::sqrt(nu1 * nu2);
  const double e = std::sqrt(std::max(0.0, 1.0 - (lc / nuc) * (lc / nuc)));
  const double g = dl * lc / nuc;
  return nuc * nuc / (2.0 * s) *
         ((1.0 - g) * anger_j(s - 1.0, -e * s) - (1.0 + g) * anger_j(s + 1.0, -e * s) +
          2.0 / std::numbers::pi * std::sin(std::numbers::pi * s) * (1.0 - e));
}

double radial_matrix_element(const RydbergLevel& a, const RydbergLevel& b, const AtomModel& model) {
  if (std::abs(a.l - b.l) != 1) return 0.0;
  return radial_quasiclassical(effective_n(a, model), a.l, effective_n(b, model), b.l);
}

namespace {

double model_potential(double r, int l, int twice_j, const AtomModel& m) {
  const auto& p = m.potential(l);
  const double z = m.nuclear_charge;
  const double zl = 1.0 + (z - 1.0) * std::exp(-p.a1 * r) - r * (p.a3 + p.a4 * r) * std::exp(-p.a2 * r);
  const double r4 = r * r * r * r;
  double v = -zl / r - m.core_polarizability / (2.0 * r4) * (1.0 - std::exp(-std::pow(r / p.rc, 6)));
  if (l > 0) {
    const double j = 0.5 * twice_j;
    const double ls = 0.5 * (j * (j + 1.0) - l * (l + 1.0) - 0.75);
    const double a = m.constants.fine_structure;
    v += a * a / (2.0 * r * r * r) * ls;
  }
  return v;
}

}  // namespace

RadialWavefunction numerov_wavefunction(int n, int l, int twice_j, const AtomModel& model, double step) {
  const double nu = effective_n(n, l, twice_j, model);
  const double energy = -0.5 / (nu * nu);
  const double r_out = 2.0 * nu * (nu + 15.0);
  const double r_in = std::max(0.05, l > 0 ? 0.125 * l * (l + 1) : 0.05);

  const int k_max = static_cast<int>(std::floor(std::sqrt(r_out) / step));
  const int k_min = static_cast<int>(std::ceil(std::sqrt(r_in) / step));
  const int count = k_max - k_min + 1;

  // Index i runs inward: i = 0 is the outer boundary, x_i = (k_max - i) h.
  std::vector<double> g(count), y(count, 0.0);
  for (int i = 0; i < count; ++i) {
    const double x = (k_max - i) * step;
    const double r = x * x;
    g[i] = 8.0 * r * (model_potential(r, l, twice_j, model) - energy) + (2 * l + 0.5) * (2 * l + 1.5) / r;
  }
  const double h2 = step * step;
  y[0] = 1e-10;
  y[1] = y[0] * (1.0 + step * std::sqrt(std::max(g[0], 0.0)));
  for (int i = 1; i + 1 < count; ++i) {
    const double wm = 1.0 - h2 * g[i - 1] / 12.0;
    const double w0 = 1.0 - h2 * g[i] / 12.0;
    const double wp = 1.0 - h2 * g[i + 1] / 12.0;
    y[i + 1] = ((12.0 - 10.0 * w0) * y[i] - wm * y[i - 1]) / wp;
  }

  // Inside the inner turning point the inward solution eventually picks up the
  // irregular branch; cut where it starts to blow up.
  const double r_turn = nu * nu - nu * std::sqrt(std::max(nu * nu - l * (l + 1.0), 0.0));
  int cut = count;
  int first_inside = -1;
  for (int i = 0; i < count; ++i) {
    const double x = (k_max - i) * step;
    const double r = x * x;
    if (r >= r_turn) continue;
    if (first_inside < 0) {
      first_inside = i;
      continue;
    }
    if (std::abs(y[i]) > std::abs(y[i - 1]) && r < 0.5 * r_turn &&
        std::abs(y[i]) > 10.0 * std::abs(y[first_inside])) {
      cut = i;
      break;
    }
  }

  RadialWavefunction wf;
  wf.step = step;
  wf.k_min = k_max - (cut - 1);
  wf.y.resize(cut);
  for (int i = 0; i < cut; ++i) wf.y[cut - 1 - i] = y[i];

  // trapezoid normalisation of int 2 x^2 y^2 dx
  double norm = 0.0;
  for (std::size_t i = 0; i < wf.y.size(); ++i) {
    const double x = (wf.k_min + static_cast<int>(i)) * step;
    const double w = (i == 0 || i + 1 == wf.y.size()) ? 0.5 : 1.0;
    norm += w * 2.0 * x * x * wf.y[i] * wf.y[i];
  }
  norm = std::sqrt(norm * step);
  for (double& v : wf.y) v /= norm;
  return wf;
}

double radial_overlap_r(const RadialWavefunction& a, const RadialWavefunction& b) {
  if (a.step != b.step) throw std::invalid_argument("radial grids differ");
  const int lo = std::max(a.k_min, b.k_min);
  const int hi = std::min(a.k_min + static_cast<int>(a.y.size()), b.k_min + static_cast<int>(b.y.size())) - 1;
  if (hi <= lo) return 0.0;
  double s = 0.0;
  for (int k = lo; k <= hi; ++k) {
    const double x = k * a.step;
    const double w = (k == lo || k == hi) ? 0.5 : 1.0;
    s += w * 2.0 * x * x * x * x * a.y[k - a.k_min] * b.y[k - b.k_min];
  }
  return s * a.step;
}

double radial_numerov(const RydbergLevel& a, const RydbergLevel& b, const AtomModel& model) {
  const auto wa = numerov_wavefunction(a.n, a.l, a.twice_j, model);
  const auto wb = numerov_wavefunction(b.n, b.l, b.twice_j, model);
  return radial_overlap_r(wa, wb);
}

std::shared_ptr<const RadialWavefunction> RadialCache::wavefunction(const Manifold& m) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = waves_.find(m); it != waves_.end()) return it->second;
  }
  auto wf = std::make_shared<const RadialWavefunction>(numerov_wavefunction(m.n, m.l, m.twice_j, model_));
  std::lock_guard lock(mutex_);
  return waves_.emplace(m, std::move(wf)).first->second;
}

double RadialCache::numerov(const Manifold& a, const Manifold& b) {
  if (std::abs(a.l - b.l) != 1) return 0.0;
  const auto key = std::minmax(a, b);
  {
    std::lock_guard lock(mutex_);
    if (auto it = numerov_.find(key); it != numerov_.end()) return it->second;
  }
  const double v = radial_overlap_r(*wavefunction(key.first), *wavefunction(key.second));
  std::lock_guard lock(mutex_);
  numerov_.emplace(key, v);
  return v;
}

double RadialCache::quasiclassical(const Manifold& a, const Manifold& b) {
  if (std::abs(a.l - b.l) != 1) return 0.0;
  {
    std::lock_guard lock(mutex_);
    if (auto it = quasi_.find({a, b}); it != quasi_.end()) return it->second;
  }
  const double v = radial_quasiclassical(effective_n(a.n, a.l, a.twice_j, model_), a.l,
                                         effective_n(b.n, b.l, b.twice_j, model_), b.l);
  std::lock_guard lock(mutex_);
  quasi_.emplace(std::make_pair(a, b), v);
  return v;
}

}  // namespace borromean
