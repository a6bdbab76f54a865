#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "borromean/angular.hpp"

using namespace borromean;
using Catch::Approx;

namespace {

double fact(int n) { return std::tgamma(n + 1.0); }

// Direct Racah closed form for CG coefficients, written independently of the
// library (no 3j detour). Doubled arguments, small j only.
double cg_reference(int j1, int m1, int j2, int m2, int J, int M) {
  if (m1 + m2 != M) return 0.0;
  if (J < std::abs(j1 - j2) || J > j1 + j2 || (j1 + j2 + J) % 2) return 0.0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(M) > J) return 0.0;
  const int a = (j1 + j2 - J) / 2, b = (j1 - j2 + J) / 2, c = (-j1 + j2 + J) / 2;
  double pre = std::sqrt((J + 1) * fact(a) * fact(b) * fact(c) / fact((j1 + j2 + J) / 2 + 1));
  pre *= std::sqrt(fact((J + M) / 2) * fact((J - M) / 2) * fact((j1 - m1) / 2) * fact((j1 + m1) / 2) *
                   fact((j2 - m2) / 2) * fact((j2 + m2) / 2));
  double s = 0.0;
  for (int k = 0; k <= 40; ++k) {
    const int d[5] = {a - k, (j1 - m1) / 2 - k, (j2 + m2) / 2 - k, (J - j2 + m1) / 2 + k, (J - j1 - m2) / 2 + k};
    bool ok = true;
    for (int x : d) ok &= x >= 0;
    if (!ok) continue;
    double den = fact(k);
    for (int x : d) den *= fact(x);
    s += ((k % 2) ? -1.0 : 1.0) / den;
  }
  return pre * s;
}

}  // namespace

TEST_CASE("tabulated Clebsch-Gordan values", "[angular]") {
  CHECK(clebsch_gordan(2, 2, 2, -2, 4, 0) == Approx(1.0 / std::sqrt(6.0)).epsilon(1e-14));
  CHECK(clebsch_gordan(2, 0, 1, 1, 3, 1) == Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
  CHECK(clebsch_gordan(2, 2, 1, -1, 3, 1) == Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-14));
  CHECK(clebsch_gordan(2, 0, 1, 1, 1, 1) == Approx(-std::sqrt(1.0 / 3.0)).epsilon(1e-14));
  CHECK(clebsch_gordan(1, 1, 1, -1, 0, 0) == Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(clebsch_gordan(1, -1, 1, 1, 0, 0) == Approx(-std::sqrt(0.5)).epsilon(1e-14));
  CHECK(clebsch_gordan(AngularMomentum{2, 2}, AngularMomentum{2, -2}, AngularMomentum{4, 0}) ==
        Approx(1.0 / std::sqrt(6.0)));
}

TEST_CASE("3j symbols", "[angular]") {
  CHECK(wigner_3j(2, 2, 4, 0, 0, 0) == Approx(std::sqrt(2.0 / 15.0)).epsilon(1e-14));
  CHECK(wigner_3j(2, 2, 2, 0, 0, 0) == 0.0);  // odd j sum
  CHECK(wigner_3j(2, 2, 6, 0, 0, 0) == 0.0);  // triangle
  CHECK(wigner_3j(2, 2, 2, 2, 0, 0) == 0.0);  // m sum

  // permutation symmetries
  for (int j1 = 0; j1 <= 6; ++j1)
    for (int j2 = 0; j2 <= 6; ++j2)
      for (int j3 = std::abs(j1 - j2); j3 <= j1 + j2; j3 += 2)
        for (int m1 = -j1; m1 <= j1; m1 += 2)
          for (int m2 = -j2; m2 <= j2; m2 += 2) {
            const int m3 = -m1 - m2;
            if (std::abs(m3) > j3) continue;
            const double v = wigner_3j(j1, j2, j3, m1, m2, m3);
            const double odd = ((j1 + j2 + j3) / 2 % 2) ? -1.0 : 1.0;
            CHECK(wigner_3j(j2, j3, j1, m2, m3, m1) == Approx(v).margin(1e-14));
            CHECK(wigner_3j(j2, j1, j3, m2, m1, m3) == Approx(odd * v).margin(1e-14));
            CHECK(wigner_3j(j1, j2, j3, -m1, -m2, -m3) == Approx(odd * v).margin(1e-14));
          }
}

TEST_CASE("CG agrees with an independent closed form and with 3j", "[angular]") {
  for (int j1 = 0; j1 <= 7; ++j1)
    for (int j2 = 0; j2 <= 5; ++j2)
      for (int J = std::abs(j1 - j2); J <= j1 + j2; J += 2)
        for (int m1 = -j1; m1 <= j1; m1 += 2)
          for (int m2 = -j2; m2 <= j2; m2 += 2) {
            const int M = m1 + m2;
            if (std::abs(M) > J) continue;
            const double cg = clebsch_gordan(j1, m1, j2, m2, J, M);
            CHECK(cg == Approx(cg_reference(j1, m1, j2, m2, J, M)).margin(1e-12));
            const double sign = (((j1 - j2 + M) / 2) % 2) ? -1.0 : 1.0;
            CHECK(cg == Approx(sign * std::sqrt(J + 1.0) * wigner_3j(j1, j2, J, m1, m2, -M)).margin(1e-13));
          }
}

TEST_CASE("CG orthogonality for j up to 9/2", "[angular]") {
  double worst = 0.0;
  for (int j1 = 0; j1 <= 9; ++j1)
    for (int j2 = 0; j2 <= 9; ++j2)
      for (int J = std::abs(j1 - j2); J <= j1 + j2; J += 2)
        for (int Jp = std::abs(j1 - j2); Jp <= j1 + j2; Jp += 2)
          for (int M = -std::min(J, Jp); M <= std::min(J, Jp); M += 2) {
            double s = 0.0;
            for (int m1 = -j1; m1 <= j1; m1 += 2) {
              const int m2 = M - m1;
              if (std::abs(m2) > j2) continue;
              s += clebsch_gordan(j1, m1, j2, m2, J, M) * clebsch_gordan(j1, m1, j2, m2, Jp, M);
            }
            worst = std::max(worst, std::abs(s - (J == Jp ? 1.0 : 0.0)));
          }
  CHECK(worst < 1e-12);

  // the other completeness relation
  worst = 0.0;
  for (int j1 = 0; j1 <= 9; ++j1)
    for (int j2 = 0; j2 <= 9; ++j2)
      for (int m1 = -j1; m1 <= j1; m1 += 2)
        for (int m1p = -j1; m1p <= j1; m1p += 2)
          for (int m2 = -j2; m2 <= j2; m2 += 2) {
            const int m2p = m1 + m2 - m1p;
            if (std::abs(m2p) > j2) continue;
            double s = 0.0;
            for (int J = std::abs(j1 - j2); J <= j1 + j2; J += 2)
              s += clebsch_gordan(j1, m1, j2, m2, J, m1 + m2) * clebsch_gordan(j1, m1p, j2, m2p, J, m1 + m2);
            worst = std::max(worst, std::abs(s - (m1 == m1p ? 1.0 : 0.0)));
          }
  CHECK(worst < 1e-12);
}

TEST_CASE("6j symbols", "[angular]") {
  CHECK(wigner_6j(2, 2, 2, 2, 2, 2) == Approx(1.0 / 6.0).epsilon(1e-13));
  CHECK(wigner_6j(4, 4, 4, 4, 4, 4) == Approx(-3.0 / 70.0).epsilon(1e-13));
  // {a b c; b a 0} = (-1)^(a+b+c) / sqrt((2a+1)(2b+1))
  CHECK(wigner_6j(1, 1, 2, 1, 1, 0) == Approx(1.0 / 2.0).epsilon(1e-13));
  CHECK(wigner_6j(2, 4, 4, 4, 2, 0) == Approx(-1.0 / std::sqrt(15.0)).epsilon(1e-13));
  // triangle violations give exactly zero
  CHECK(wigner_6j(2, 2, 8, 2, 2, 2) == 0.0);
  CHECK(wigner_6j(1, 1, 1, 1, 1, 1) == 0.0);
  // orthogonality: sum_x (2x+1)(2j+1) {a b x; c d j}{a b x; c d j'} = delta
  const int a = 3, b = 2, c = 3, d = 2;
  for (int j = 1; j <= 5; j += 2)
    for (int jp = 1; jp <= 5; jp += 2) {
      double s = 0.0;
      for (int x = 1; x <= 5; x += 2) s += (x + 1.0) * (j + 1.0) * wigner_6j(a, b, x, c, d, j) * wigner_6j(a, b, x, c, d, jp);
      CHECK(s == Approx(j == jp ? 1.0 : 0.0).margin(1e-12));
    }
}

TEST_CASE("large j stays finite", "[angular]") {
  for (int tj = 150; tj <= 200; tj += 10) {
    const double v3 = wigner_3j(tj, tj, 2, 2, -2, 0);
    const double v6 = wigner_6j(tj, tj, 2, tj, tj, 2);
    const double cg = clebsch_gordan(tj, tj, 2, 0, tj, tj);
    CHECK(std::isfinite(v3));
    CHECK(std::isfinite(v6));
    CHECK(std::isfinite(cg));
    CHECK(std::abs(v3) <= 1.0);
    CHECK(cg == Approx(std::sqrt(tj / (tj + 2.0))).epsilon(1e-10));
  }
  // stretched 3j has a closed form: (j j 1; j -j 0) = j / sqrt(j(j+1)(2j+1)) up to sign
  const int tj = 200;
  const double j = 100.0;
  CHECK(std::abs(wigner_3j(tj, tj, 2, tj, -tj, 0)) == Approx(j / std::sqrt(j * (j + 1) * (2 * j + 1))).epsilon(1e-10));
}

TEST_CASE("Lande factors", "[angular]") {
  CHECK(lande_g(0, 1, 1) == Approx(2.0));
  CHECK(lande_g(1, 1, 3) == Approx(4.0 / 3.0));
  CHECK(lande_g(1, 1, 1) == Approx(2.0 / 3.0));
  CHECK(lande_g(2, 1, 5) == Approx(6.0 / 5.0));
}

TEST_CASE("AngularMomentum validity", "[angular]") {
  CHECK(AngularMomentum{3, 1}.valid());
  CHECK_FALSE(AngularMomentum{3, 5}.valid());
  CHECK_FALSE(AngularMomentum{3, 2}.valid());
  CHECK_FALSE(AngularMomentum{-1, 1}.valid());
}
