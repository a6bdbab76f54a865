#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "borromean/basis.hpp"
#include "support.hpp"

using namespace borromean;
using Catch::Approx;
using test_support::model;
using test_support::physics;

namespace {

std::vector<RydbergLevel> initial3() { return {level_r(), level_r1(), level_r2()}; }

std::vector<RydbergLevel> all_sublevels(const std::vector<Manifold>& ms) {
  std::vector<RydbergLevel> v;
  for (const auto& m : ms)
    for (int mj = -m.twice_j; mj <= m.twice_j; mj += 2) v.push_back({m.n, m.l, m.twice_j, mj});
  return v;
}

double zero_field(const std::vector<RydbergLevel>& atoms) {
  double s = 0.0;
  for (const auto& a : atoms) s += level_energy(a, model());
  return s;
}

// root of the field-dependent defect of `state` by bisection on [lo, hi]
double crossing(const std::vector<RydbergLevel>& state, const std::vector<RydbergLevel>& init, double lo, double hi,
                double b = 0.0) {
  auto d = [&](double e) { return forster_defect(state, init, {e, b, 12.5, 0.0}, physics()); };
  double dl = d(lo);
  REQUIRE(dl * d(hi) < 0.0);
  for (int i = 0; i < 80; ++i) {
    const double m = 0.5 * (lo + hi), dm = d(m);
    if ((dm < 0) == (dl < 0)) {
      lo = m;
      dl = dm;
    } else {
      hi = m;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("three-atom basis has 165 states", "[basis]") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto b = build_basis(initial3(), scheme_manifolds(), 1000.0, model());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(b.size() == 165);
  CHECK(secs < 1.0);
  CHECK(b.initial_index == 0);
  CHECK(b.initial().atoms == initial3());
  CHECK(b.initial().defect0_mhz == 0.0);

  std::set<std::vector<RydbergLevel>> seen;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto& s = b.states[i];
    CHECK(s.twice_M == 3);
    CHECK(std::abs(s.defect0_mhz) <= 1000.0);
    // no state sits near the cutoff, so the count is robust
    CHECK(std::abs(std::abs(s.defect0_mhz) - 1000.0) > 100.0);
    CHECK(seen.insert(s.atoms).second);
    CHECK(b.index_of(s.atoms) == static_cast<long>(i));
    if (i > 1) CHECK(s.defect0_mhz >= b.states[i - 1].defect0_mhz);
  }
}

TEST_CASE("basis is closed under exchange of atoms 2 and 3", "[basis]") {
  const auto b = build_basis(initial3(), scheme_manifolds(), 1000.0, model());
  for (const auto& s : b.states) {
    auto swapped = s.atoms;
    std::swap(swapped[1], swapped[2]);
    CHECK(b.index_of(swapped) >= 0);
  }
}

TEST_CASE("two-atom basis matches exhaustive enumeration", "[basis]") {
  const std::vector<RydbergLevel> init{level_r(), level_r2()};
  const auto b = build_basis(init, scheme_manifolds(), 1000.0, model());
  const auto subs = all_sublevels(scheme_manifolds());
  const double e0 = zero_field(init);
  std::set<std::vector<RydbergLevel>> expected;
  for (const auto& x : subs)
    for (const auto& y : subs)
      if (x.twice_mj + y.twice_mj == 0 && std::abs(zero_field({x, y}) - e0) <= 1000.0) expected.insert({x, y});
  CHECK(b.size() == expected.size());
  for (const auto& s : b.states) CHECK(expected.count(s.atoms) == 1);
  CHECK(b.index_of({make_level(80, 'S', 1, 1), make_level(82, 'S', 1, -1)}) >= 0);
}

TEST_CASE("cutoff limits", "[basis]") {
  const auto tiny = build_basis(initial3(), scheme_manifolds(), 1e-6, model());
  for (const auto& s : tiny.states) CHECK(std::abs(s.defect0_mhz) <= 1e-6);
  CHECK(tiny.index_of(initial3()) == 0);
  // every M-conserving product of the seven manifolds lies inside 1 GHz, so
  // only a cutoff below the largest defect removes states
  const auto full = build_basis(initial3(), scheme_manifolds(), 1000.0, model());
  double dmax = 0.0;
  for (const auto& s : full.states) dmax = std::max(dmax, std::abs(s.defect0_mhz));
  CHECK(build_basis(initial3(), scheme_manifolds(), 3000.0, model()).size() == full.size());
  CHECK(build_basis(initial3(), scheme_manifolds(), 0.99 * dmax, model()).size() < full.size());
}

TEST_CASE("basis is deterministic", "[basis]") {
  const auto a = build_basis(initial3(), scheme_manifolds(), 1000.0, model());
  const auto b = build_basis(initial3(), scheme_manifolds(), 1000.0, model());
  CHECK(a.hash() == b.hash());
  CHECK(basis_csv(a) == basis_csv(b));
  const auto c = build_basis(initial3(), scheme_manifolds(), 200.0, model());
  CHECK(c.hash() != a.hash());
}

TEST_CASE("initial state must belong to the manifold set", "[basis]") {
  std::vector<Manifold> ms = scheme_manifolds();
  ms.erase(ms.begin());
  const auto r = level_r();
  bool r_missing = true;
  for (const auto& m : ms) r_missing &= !m.contains(r);
  if (r_missing) CHECK_THROWS_AS(build_basis(initial3(), ms, 1000.0, model()), ConfigError);
  CHECK_THROWS_AS(build_basis({make_level(90, 'S', 1, 1), level_r1()}, scheme_manifolds(), 1000.0, model()),
                  ConfigError);
  CHECK_THROWS_AS(build_basis({}, scheme_manifolds(), 1000.0, model()), ConfigError);
}

TEST_CASE("Forster defects", "[basis]") {
  const auto& p = physics();
  const std::vector<RydbergLevel> pp80{level_r(), level_r2()};
  const std::vector<RydbergLevel> ss80{make_level(80, 'S', 1, 1), make_level(82, 'S', 1, -1)};
  const double d1 = forster_defect(ss80, pp80, {}, p);
  CHECK(std::abs(d1) == Approx(110.0).margin(10.0));
  CHECK(d1 < 0.0);

  const std::vector<RydbergLevel> pp81{level_r1(), level_r2()};
  const std::vector<RydbergLevel> ss81{make_level(81, 'S', 1, 1), make_level(82, 'S', 1, -1)};
  CHECK(std::abs(forster_defect(ss81, pp81, {}, p)) == Approx(157.0).margin(10.0));
  CHECK(std::abs(forster_defect(ss81, pp81, {0.123, 0.0, 12.5, 0.0}, p)) == Approx(283.0).margin(15.0));

  // the initial state defines the zero of every frame
  CHECK(forster_defect(initial3(), initial3(), {0.119, 3.5, 12.5, 0.0}, p) == Approx(0.0).margin(1e-6));
  const CollectiveState init_state{initial3(), 3, 0.0};
  CHECK(forster_defect(init_state, init_state, {0.119, 3.5, 12.5, 0.0}, p) == 0.0);

  // two-body channel of atoms 1 and 3 and the three-body final state cross zero
  const auto init = initial3();
  const std::vector<RydbergLevel> two{make_level(80, 'S', 1, 1), level_r1(), make_level(82, 'S', 1, -1)};
  const std::vector<RydbergLevel> three{make_level(80, 'S', 1, 1), make_level(82, 'S', 1, 1),
                                        make_level(81, 'P', 3, 1)};
  CHECK(crossing(two, init, 0.05, 0.2) == Approx(0.117).epsilon(0.05));
  CHECK(crossing(three, init, 0.05, 0.2) == Approx(0.123).epsilon(0.05));
  // the two-body channel only involves m-symmetric Zeeman shifts
  CHECK(crossing(two, init, 0.05, 0.2, 3.5) == Approx(crossing(two, init, 0.05, 0.2)).margin(1e-4));
}
