#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "borromean/dynamics.hpp"
#include "support.hpp"

using namespace borromean;
using Catch::Approx;
using test_support::model;
using test_support::physics;

namespace {

constexpr double kPi = std::numbers::pi;

const CollectiveBasis& basis3() {
  static const CollectiveBasis b =
      build_basis({level_r(), level_r1(), level_r2()}, scheme_manifolds(), 1000.0, model());
  return b;
}

const Eigen::MatrixXd& couplings3() {
  static const Eigen::MatrixXd v = coupling_matrix(basis3(), Geometry::chain(3, 12.5), physics());
  return v;
}

InteractionHamiltonian hamiltonian3(double e, double b, bool decay) {
  return assemble(basis3(), couplings3(), {e, b, 12.5, 0.0}, physics(), decay);
}

InteractionHamiltonian diagonal(std::vector<double> defects, std::vector<double> gammas) {
  InteractionHamiltonian h;
  const auto n = static_cast<Eigen::Index>(defects.size());
  h.matrix = Eigen::MatrixXcd::Zero(n, n);
  h.defects.resize(n);
  h.half_decay.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    h.defects(i) = defects[i];
    h.half_decay(i) = 0.5 * gammas[i];
    h.matrix(i, i) = {defects[i], -gammas[i] / (4 * kPi)};
  }
  return h;
}

}  // namespace

TEST_CASE("free evolution of a single level", "[dynamics]") {
  const double d = 3.7;
  const auto h = diagonal({d}, {0.0});
  AmplitudeVector psi{Eigen::VectorXcd::Ones(1), 0.0};
  for (double t : {0.0, 0.1, 0.37, 2.0}) {
    const auto out = propagate(psi, h, t);
    CHECK(std::norm(out.amps(0)) == Approx(1.0).epsilon(1e-13));
    CHECK(std::arg(out.amps(0)) == Approx(wrap_phase(-2 * kPi * d * t)).margin(1e-12));
    CHECK(out.time_us == t);
  }
}

TEST_CASE("pure decay", "[dynamics]") {
  const auto h = diagonal({0.0, 12.0}, {0.004, 0.01});
  AmplitudeVector psi{Eigen::VectorXcd::Zero(2), 0.0};
  psi.amps(0) = std::sqrt(0.3);
  psi.amps(1) = std::sqrt(0.7);
  for (double t : {0.5, 3.0, 40.0}) {
    const auto out = propagate(psi, h, t);
    CHECK(std::norm(out.amps(0)) == Approx(0.3 * std::exp(-0.004 * t)).epsilon(1e-12));
    CHECK(std::norm(out.amps(1)) == Approx(0.7 * std::exp(-0.01 * t)).epsilon(1e-12));
  }
}

TEST_CASE("norm conservation without decay", "[dynamics]") {
  const auto h = hamiltonian3(0.11905, 3.5, false);
  Propagator prop(h.matrix);
  const auto psi0 = initial_amplitudes(basis3()).amps;
  double worst = 0.0;
  for (double t = 0.0; t <= 10.0; t += 0.25) worst = std::max(worst, std::abs(prop.apply(psi0, t).squaredNorm() - 1.0));
  CHECK(worst < 1e-9);
}

TEST_CASE("norm decreases monotonically with decay", "[dynamics]") {
  const auto h = hamiltonian3(0.11905, 3.5, true);
  Propagator prop(h.matrix);
  const auto psi0 = initial_amplitudes(basis3()).amps;
  double last = 1.0;
  for (double t = 0.1; t <= 5.0; t += 0.1) {
    const double n = prop.apply(psi0, t).squaredNorm();
    CHECK(n <= last + 1e-12);
    last = n;
  }
  CHECK(last < 1.0);
}

TEST_CASE("eigendecomposition, Pade and stepped propagation agree", "[dynamics]") {
  const auto h = hamiltonian3(0.11905, 3.5, true);
  const auto psi0 = initial_amplitudes(basis3());
  const double t = 0.6;
  Propagator eig(h.matrix);
  REQUIRE(eig.uses_eigenbasis());
  Propagator pade(h.matrix, 0.0);  // condition bound 0 forces the matrix exponential
  REQUIRE_FALSE(pade.uses_eigenbasis());
  const Eigen::VectorXcd a = eig.apply(psi0.amps, t);
  const Eigen::VectorXcd b = pade.apply(psi0.amps, t);
  const Eigen::VectorXcd c = propagate_stepped(psi0, h, t).amps;
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((a - c).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("time reversal without decay", "[dynamics]") {
  const auto h = hamiltonian3(0.1192, 2.0, false);
  Propagator prop(h.matrix);
  const auto psi0 = initial_amplitudes(basis3()).amps;
  for (double t : {0.3, 1.8, 4.0}) {
    const Eigen::VectorXcd back = prop.apply(prop.apply(psi0, t), -t);
    CHECK((back - psi0).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("observable f", "[dynamics]") {
  const auto& b = basis3();
  const Manifold s80{80, 0, 1};
  CHECK(observable_f(initial_amplitudes(b).amps, b, s80) == 0.0);
  const long fin = b.index_of({make_level(80, 'S', 1, 1), make_level(82, 'S', 1, 1), make_level(81, 'P', 3, 1)});
  REQUIRE(fin > 0);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(b.size()));
  psi(fin) = 1.0;
  CHECK(observable_f(psi, b, s80) == Approx(1.0 / 3.0));
  psi(0) = 1.0;
  psi /= std::sqrt(2.0);
  CHECK(observable_f(psi, b, s80) == Approx(1.0 / 6.0));
  CHECK(observable_f(psi, b, Manifold{81, 1, 3}) == Approx((0.5 * 2 + 0.5 * 1) / 3.0));
}

TEST_CASE("non-interacting phase reference", "[dynamics]") {
  // with the couplings switched off the initial state only picks up its own
  // (removed) diagonal phase, so the reported phase stays at zero
  const auto& b = basis3();
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(b.size()),
                                                      static_cast<Eigen::Index>(b.size()));
  const auto h = assemble(b, zero, {0.119, 3.5, 12.5, 0.0}, physics(), true);
  std::vector<double> times;
  for (double t = 0.0; t <= 3.0; t += 0.1) times.push_back(t);
  const auto tr = trace(b, h, times);
  for (const auto& pt : tr.points) {
    CHECK(std::abs(pt.phase) < 1e-12);
    CHECK(pt.f == 0.0);
  }
  // an arbitrary frame offset on the diagonal is removed as well
  auto shifted = h;
  for (Eigen::Index i = 0; i < shifted.size(); ++i) shifted.matrix(i, i) += 5.0;
  for (const auto& pt : trace(b, shifted, times).points) CHECK(std::abs(pt.phase) < 1e-9);
}

TEST_CASE("phase is undefined when the initial amplitude vanishes", "[dynamics]") {
  const auto& b = basis3();
  const auto h = hamiltonian3(0.119, 3.5, false);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(b.size()));
  psi(1) = 1.0;
  CHECK_FALSE(phase_of_initial(psi, b, h, 1.0).has_value());
  psi(0) = 1e-3;
  CHECK(phase_of_initial(psi, b, h, 1.0).has_value());
}

TEST_CASE("trace inputs", "[dynamics]") {
  const auto& b = basis3();
  const auto h = hamiltonian3(0.119, 3.5, true);
  CHECK_THROWS_AS(trace(b, h, {0.0, 1.0, 0.5}), ConfigError);
  CHECK(trace(b, h, {}).points.empty());
  const auto one = trace(b, h, {0.0});
  REQUIRE(one.points.size() == 1);
  CHECK(one.points[0].p == Approx(1.0).epsilon(1e-13));
  CHECK(one.points[0].norm == Approx(1.0).epsilon(1e-13));
}

TEST_CASE("field scan", "[dynamics]") {
  const auto& b = basis3();
  const auto grid = linspace(0.118, 0.120, 5);
  const auto rows = field_scan(grid, {0.0, 3.5, 12.5, 0.0}, 1.8, b, couplings3(), physics(), true, 2);
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].error.empty());
    CHECK(rows[i].e_v_cm == grid[i]);
    CHECK(rows[i].norm <= 1.0);
    CHECK(rows[i].p <= rows[i].norm);
  }
  // worker count does not change results
  const auto serial = field_scan(grid, {0.0, 3.5, 12.5, 0.0}, 1.8, b, couplings3(), physics(), true, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].f == serial[i].f);
  CHECK_THROWS_AS(field_scan(grid, {}, 0.0, b, couplings3(), physics(), true), ConfigError);
}

TEST_CASE("helpers", "[dynamics]") {
  CHECK(linspace(0.0, 1.0, 1) == std::vector<double>{0.0});
  CHECK(linspace(0.0, 1.0, 3) == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(linspace(0.0, 1.0, 0).empty());
  CHECK(wrap_phase(kPi) == Approx(kPi));
  CHECK(wrap_phase(-kPi) == Approx(kPi));
  CHECK(wrap_phase(3 * kPi / 2) == Approx(-kPi / 2));
  CHECK(wrap_phase(-7.0) == Approx(-7.0 + 2 * kPi));
}
