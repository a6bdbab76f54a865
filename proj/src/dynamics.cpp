#include "borromean/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include <unsupported/Eigen/MatrixFunctions>

namespace borromean {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const std::complex<double> kI(0.0, 1.0);
}  // namespace

AmplitudeVector initial_amplitudes(const CollectiveBasis& basis) {
  AmplitudeVector a;
  a.amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
  a.amps(static_cast<Eigen::Index>(basis.initial_index)) = 1.0;
  return a;
}

Propagator::Propagator(const Eigen::MatrixXcd& h_mhz, double max_condition) : h_(h_mhz) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(h_mhz);
  if (es.info() != Eigen::Success) return;
  vecs_ = es.eigenvectors();
  vals_ = es.eigenvalues();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(vecs_);
  inv_ = lu.inverse();
  condition_ = vecs_.cwiseAbs().colwise().sum().maxCoeff() * inv_.cwiseAbs().colwise().sum().maxCoeff();
  const double scale = std::max(1.0, h_mhz.cwiseAbs().maxCoeff());
  const double resid = (h_mhz * vecs_ - vecs_ * vals_.asDiagonal()).cwiseAbs().maxCoeff() / scale;
  eigen_ok_ = std::isfinite(condition_) && condition_ < max_condition && resid < 1e-10;
}

Eigen::VectorXcd Propagator::apply(const Eigen::VectorXcd& psi, double t_us) const {
  if (psi.size() != h_.rows()) throw std::invalid_argument("state dimension does not match Hamiltonian");
  Eigen::VectorXcd out;
  if (eigen_ok_) {
    Eigen::VectorXcd c = inv_ * psi;
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::exp(-kI * kTwoPi * vals_(k) * t_us);
    out = vecs_ * c;
  } else {
    const Eigen::MatrixXcd gen = (-kI * kTwoPi * t_us) * h_;
    out = gen.exp() * psi;
  }
  if (!out.allFinite()) throw IntegrationError("non-finite amplitudes in propagation");
  return out;
}

AmplitudeVector propagate(const AmplitudeVector& psi0, const InteractionHamiltonian& h, double t_us) {
  Propagator prop(h.matrix);
  return {prop.apply(psi0.amps, t_us), psi0.time_us + t_us};
}

AmplitudeVector propagate_stepped(const AmplitudeVector& psi0, const InteractionHamiltonian& h, double t_us,
                                  double tolerance) {
  if (psi0.amps.size() != h.size()) throw std::invalid_argument("state dimension does not match Hamiltonian");
  const Eigen::MatrixXcd gen = (-kI * kTwoPi) * h.matrix;
  const double norm1 = gen.cwiseAbs().colwise().sum().maxCoeff();
  const int steps = std::max(1, static_cast<int>(std::ceil(norm1 * std::abs(t_us))));
  const double dt = t_us / steps;
  Eigen::VectorXcd psi = psi0.amps;
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXcd term = psi, acc = psi;
    for (int k = 1; k < 60; ++k) {
      term = (gen * term) * (dt / k);
      acc += term;
      if (term.norm() <= tolerance * acc.norm()) break;
    }
    psi = acc;
    if (!psi.allFinite()) throw IntegrationError("non-finite amplitudes in stepped propagation");
  }
  return {psi, psi0.time_us + t_us};
}

double observable_f(const Eigen::VectorXcd& psi, const CollectiveBasis& basis, const Manifold& target) {
  const std::size_t natoms = basis.atom_count();
  double f = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    int count = 0;
    for (const auto& a : basis.states[i].atoms) count += target.contains(a);
    if (count) f += std::norm(psi(static_cast<Eigen::Index>(i))) * count;
  }
  return f / static_cast<double>(natoms);
}

double wrap_phase(double x) {
  double y = std::remainder(x, kTwoPi);
  if (y <= -std::numbers::pi) y += kTwoPi;
  return y;
}

std::optional<double> phase_of_initial(const Eigen::VectorXcd& psi, const CollectiveBasis& basis,
                                       const InteractionHamiltonian& h, double t_us) {
  const auto i0 = static_cast<Eigen::Index>(basis.initial_index);
  const auto c = psi(i0);
  if (std::abs(c) < 1e-6) return std::nullopt;
  // free evolution of the non-interacting product state is exp(-i 2 pi Re H00 t)
  return wrap_phase(std::arg(c) + kTwoPi * h.matrix(i0, i0).real() * t_us);
}

Trace trace(const CollectiveBasis& basis, const InteractionHamiltonian& h, const std::vector<double>& times,
            const Manifold& target) {
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw ConfigError("trace times must be strictly increasing");
  Propagator prop(h.matrix);
  const auto psi0 = initial_amplitudes(basis).amps;
  Trace tr;
  double last = NAN;
  for (double t : times) {
    const Eigen::VectorXcd psi = prop.apply(psi0, t);
    TracePoint pt{t, std::norm(psi(static_cast<Eigen::Index>(basis.initial_index))), NAN,
                  observable_f(psi, basis, target), psi.squaredNorm()};
    if (auto ph = phase_of_initial(psi, basis, h, t)) {
      double v = *ph;
      if (std::isfinite(last)) v = last + wrap_phase(v - last);
      pt.phase = v;
      last = v;
    }
    tr.points.push_back(pt);
  }
  return tr;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
  const std::size_t w = std::max<std::size_t>(1, std::min<std::size_t>(workers > 0 ? workers : 1, n));
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mutex;
  for (std::size_t k = 0; k < w; ++k)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(err_mutex);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

std::vector<ScanRow> field_scan(const std::vector<double>& fields_v_cm, const FieldConfiguration& fixed,
                                double tau_us, const CollectiveBasis& basis, const Eigen::MatrixXd& couplings,
                                const AtomicPhysics& physics, bool with_decay, int workers, const Manifold& target) {
  if (!(tau_us > 0)) throw ConfigError("scan interaction time must be positive");
  // polarizabilities are memoised lazily; fill them before going parallel
  for (const auto& st : basis.states)
    for (const auto& a : st.atoms) physics.polarizability(a);

  std::vector<ScanRow> rows(fields_v_cm.size());
  const auto psi0 = initial_amplitudes(basis).amps;
  parallel_for(rows.size(), workers, [&](std::size_t i) {
    ScanRow& row = rows[i];
    row.e_v_cm = fields_v_cm[i];
    try {
      FieldConfiguration fc = fixed;
      fc.electric_v_cm = fields_v_cm[i];
      const auto h = assemble(basis, couplings, fc, physics, with_decay);
      const Eigen::VectorXcd psi = Propagator(h.matrix).apply(psi0, tau_us);
      row.f = observable_f(psi, basis, target);
      row.p = std::norm(psi(static_cast<Eigen::Index>(basis.initial_index)));
      row.norm = psi.squaredNorm();
    } catch (const std::exception& e) {
      row.f = row.p = row.norm = NAN;
      row.error = e.what();
    }
  });
  return rows;
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v;
  if (count <= 0) return v;
  if (count == 1) return {lo};
  for (int i = 0; i < count; ++i) v.push_back(lo + (hi - lo) * i / (count - 1));
  return v;
}

}  // namespace borromean
