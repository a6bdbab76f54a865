#include "borromean/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>

namespace borromean {

PeakInfo find_peak(const std::vector<double>& x, const std::vector<double>& y) {
  PeakInfo pk;
  if (x.empty() || x.size() != y.size()) return pk;
  std::size_t best = 0;
  for (std::size_t i = 1; i < y.size(); ++i)
    if (y[i] > y[best]) best = i;
  pk.height = y[best];
  // parabolic refinement of the centre
  pk.center = x[best];
  if (best > 0 && best + 1 < y.size()) {
    const double a = y[best - 1], b = y[best], c = y[best + 1];
    const double den = a - 2 * b + c;
    if (den < 0) pk.center = x[best] + 0.5 * (a - c) / den * (x[best + 1] - x[best]);
  }
  const double half = 0.5 * pk.height;
  double lo = x.front(), hi = x.back();
  for (std::size_t i = best; i > 0; --i)
    if (y[i - 1] < half) {
      lo = x[i - 1] + (half - y[i - 1]) / (y[i] - y[i - 1]) * (x[i] - x[i - 1]);
      break;
    }
  for (std::size_t i = best; i + 1 < y.size(); ++i)
    if (y[i + 1] < half) {
      hi = x[i] + (y[i] - half) / (y[i] - y[i + 1]) * (x[i + 1] - x[i]);
      break;
    }
  pk.fwhm = hi - lo;
  return pk;
}

double three_body_transfer(const Eigen::VectorXcd& psi, const CollectiveBasis& basis) {
  const auto& init = basis.initial().atoms;
  double s = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& a = basis.states[i].atoms;
    bool all = true;
    for (std::size_t k = 0; k < a.size(); ++k) all &= !(a[k] == init[k]);
    if (all) s += std::norm(psi(static_cast<Eigen::Index>(i)));
  }
  return s;
}

namespace {

const ExcitationPattern kThree = ExcitationPattern::parse("rrr");
const ExcitationPattern kTwo = ExcitationPattern::parse("rgr");
const ExcitationPattern kExchange = ExcitationPattern::parse("grr");
constexpr double kPi = std::numbers::pi;

double residual_exchange(const GateModel& m, const OperatingPoint& op) { return m.return_phase(kExchange, op); }
double residual_two_body(const GateModel& m, const OperatingPoint& op) {
  return wrap_phase(m.return_phase(kTwo, op) - kPi);
}
double residual_three_body(const GateModel& m, const OperatingPoint& op) { return m.return_phase(kThree, op); }

// Root of a wrapped residual near x0: grid bracket, then bisection. Brackets
// across a 2 pi wrap are rejected.
std::optional<double> wrapped_root(const std::function<double(double)>& r, double x0, double half_width,
                                   double step, std::optional<double> prefer = std::nullopt) {
  const double near = prefer.value_or(x0);
  const int n = std::max(2, static_cast<int>(std::ceil(2 * half_width / step)));
  std::vector<double> xs(n + 1), rs(n + 1);
  for (int i = 0; i <= n; ++i) {
    xs[i] = x0 - half_width + 2 * half_width * i / n;
    rs[i] = r(xs[i]);
  }
  std::optional<std::pair<double, double>> best;
  double best_d = INFINITY;
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(rs[i]) || !std::isfinite(rs[i + 1])) continue;
    const bool change = (rs[i] <= 0) != (rs[i + 1] <= 0);
    if (!change || std::abs(rs[i] - rs[i + 1]) > kPi) continue;
    const double d = std::abs(0.5 * (xs[i] + xs[i + 1]) - near);
    if (d < best_d) {
      best_d = d;
      best = {xs[i], xs[i + 1]};
    }
  }
  if (!best) return std::nullopt;
  double a = best->first, b = best->second, ra = r(a);
  for (int it = 0; it < 50 && b - a > 1e-12 * std::max(1.0, std::abs(a)); ++it) {
    const double m = 0.5 * (a + b), rm = r(m);
    if ((rm <= 0) == (ra <= 0)) {
      a = m;
      ra = rm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// First time at which the exchange pattern has accumulated a full 2 pi turn.
std::optional<double> solve_tau(const GateModel& m, const OperatingPoint& op, const OptimizerConfig& cfg) {
  std::vector<double> times;
  for (double t = cfg.tau_grid_us; t <= cfg.tau_max_us + 1e-12; t += cfg.tau_grid_us) times.push_back(t);
  const auto tr = m.pattern_trace(kExchange, op, times);
  const double target = 2 * kPi;
  double prev_t = 0.0, prev_a = 0.0;
  for (const auto& pt : tr.points) {
    if (!std::isfinite(pt.phase)) continue;
    const double a = std::abs(pt.phase);
    if (pt.t_us >= cfg.tau_min_us && a >= target) {
      const double guess = prev_t + (target - prev_a) / (a - prev_a) * (pt.t_us - prev_t);
      auto r = [&](double t) {
        OperatingPoint o = op;
        o.tau_us = t;
        return residual_exchange(m, o);
      };
      auto root = wrapped_root(r, guess, 2 * cfg.tau_grid_us, cfg.tau_grid_us / 4);
      return root ? root : std::optional<double>(guess);
    }
    prev_t = pt.t_us;
    prev_a = a;
  }
  return std::nullopt;
}

}  // namespace

OptimizerResult optimize_operating_point(const GateModel& model, const OptimizerConfig& cfg) {
  if (!(cfg.r_um > 0)) throw ConfigError("R must be positive");
  OptimizerResult res;
  const auto& physics = model.physics();

  // Two-body resonance of atoms 1 and 3 alone, independent of B.
  OperatingPoint probe{0.0, 0.0, cfg.r_um, cfg.scan_tau_us};
  {
    const auto sys = model.system(kTwo, probe);
    const auto grid = linspace(0.100, 0.135, 701);
    const auto rows = field_scan(grid, sys.fields, cfg.scan_tau_us, *sys.basis, sys.couplings, physics,
                                 model.with_decay(), cfg.workers);
    std::vector<double> f;
    for (const auto& r : rows) f.push_back(r.f);
    res.two_body_peak_v_cm = find_peak(grid, f).center;
  }

  // (I) smallest B whose three-body peak is clear of the two-body peak.
  std::optional<double> b_sel;
  PeakInfo three{};
  const double e2 = res.two_body_peak_v_cm;
  const int ne = static_cast<int>(std::round((cfg.scan_below_v_cm + cfg.scan_above_v_cm) / cfg.scan_step_v_cm)) + 1;
  const auto egrid = linspace(e2 - cfg.scan_below_v_cm, e2 + cfg.scan_above_v_cm, ne);
  for (double b = cfg.b_min; b <= cfg.b_max + 1e-9; b += cfg.b_step) {
    OperatingPoint o{0.0, b, cfg.r_um, cfg.scan_tau_us};
    const auto sys = model.system(kThree, o);
    for (const auto& st : sys.basis->states)
      for (const auto& a : st.atoms) physics.polarizability(a);
    std::vector<double> p3(egrid.size());
    const auto psi0 = initial_amplitudes(*sys.basis).amps;
    parallel_for(egrid.size(), cfg.workers, [&](std::size_t i) {
      FieldConfiguration fc = sys.fields;
      fc.electric_v_cm = egrid[i];
      const auto h = assemble(*sys.basis, sys.couplings, fc, physics, model.with_decay());
      p3[i] = three_body_transfer(Propagator(h.matrix).apply(psi0, cfg.scan_tau_us), *sys.basis);
    });
    const auto pk = find_peak(egrid, p3);
    res.log.push_back({0, "I", {pk.center, b, cfg.r_um, cfg.scan_tau_us}, NAN, NAN, NAN, NAN});
    if (std::abs(pk.center - e2) >= cfg.separation_widths * pk.fwhm) {
      b_sel = b;
      three = pk;
      break;
    }
  }
  if (!b_sel) {
    res.message = "no magnetic field in the search range separates the three-body peak from the two-body peak";
    return res;
  }
  res.three_body_peak_v_cm = three.center;
  res.three_body_width_v_cm = three.fwhm;

  OperatingPoint op{three.center, *b_sel, cfg.r_um, cfg.scan_tau_us};
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    // (II)
    auto tau = solve_tau(model, op, cfg);
    if (!tau) {
      res.op = op;
      res.message = "exchange phase does not reach 2 pi within the lifetime guard of " +
                    std::to_string(cfg.tau_max_us) + " us; a different interatomic distance should be selected";
      return res;
    }
    op.tau_us = *tau;
    // (III)
    auto e = wrapped_root(
        [&](double x) {
          OperatingPoint o = op;
          o.e_v_cm = x;
          return residual_two_body(model, o);
        },
        op.e_v_cm, cfg.e_window_v_cm, cfg.e_grid_v_cm);
    if (!e) {
      res.op = op;
      res.message = "no electric field gives a pi two-body phase near the three-body resonance";
      return res;
    }
    op.e_v_cm = *e;
    // (IV)
    auto b = wrapped_root(
        [&](double x) {
          OperatingPoint o = op;
          o.b_gauss = x;
          return residual_three_body(model, o);
        },
        0.5 * (cfg.b_min + cfg.b_max), 0.5 * (cfg.b_max - cfg.b_min), cfg.b_grid_g, op.b_gauss);
    if (!b) {
      res.op = op;
      res.message = "no magnetic field returns the three-atom state with zero phase";
      return res;
    }
    op.b_gauss = *b;

    IterationLog lg{it, "II-IV", op, residual_exchange(model, op), residual_two_body(model, op),
                    residual_three_body(model, op), average_fidelity(model.amplitude_table(op)).average};
    res.log.push_back(lg);
    if (std::abs(lg.residual_exchange) < cfg.phase_tolerance && std::abs(lg.residual_two_body) < cfg.phase_tolerance &&
        std::abs(lg.residual_three_body) < cfg.phase_tolerance) {
      res.converged = true;
      res.op = op;
      res.fidelity = lg.fidelity;
      res.message = "converged";
      return res;
    }
  }
  res.op = op;
  res.message = "phase residuals did not converge within the iteration limit";
  return res;
}

}  // namespace borromean
