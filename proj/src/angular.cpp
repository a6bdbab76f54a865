#include "borromean/angular.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace borromean {

namespace {

// log(n!) from a table built by summing logs; lgamma beyond.
double log_factorial(int n) {
  static const std::vector<double> table = [] {
    std::vector<double> t(1024);
    t[0] = 0.0;
    for (int k = 1; k < 1024; ++k) t[k] = t[k - 1] + std::log(static_cast<double>(k));
    return t;
  }();
  if (n < 0) return NAN;
  if (n < static_cast<int>(table.size())) return table[n];
  return std::lgamma(n + 1.0);
}

bool triangle(int ta, int tb, int tc) {
  if ((ta + tb + tc) % 2 != 0) return false;
  return tc <= ta + tb && tc >= std::abs(ta - tb);
}

// log of the triangle coefficient Delta(abc), doubled arguments.
double log_delta(int ta, int tb, int tc) {
  return 0.5 * (log_factorial((ta + tb - tc) / 2) + log_factorial((ta - tb + tc) / 2) +
                log_factorial((-ta + tb + tc) / 2) - log_factorial((ta + tb + tc) / 2 + 1));
}

bool projection_ok(int tj, int tm) { return tj >= 0 && std::abs(tm) <= tj && (tj + tm) % 2 == 0; }

}  // namespace

bool AngularMomentum::valid() const { return projection_ok(twice_j, twice_m); }

double wigner_3j(int tj1, int tj2, int tj3, int tm1, int tm2, int tm3) {
  if (tm1 + tm2 + tm3 != 0) return 0.0;
  if (!projection_ok(tj1, tm1) || !projection_ok(tj2, tm2) || !projection_ok(tj3, tm3)) return 0.0;
  if (!triangle(tj1, tj2, tj3)) return 0.0;

  // Racah formula; all quantities below are integers.
  const int a = (tj1 + tj2 - tj3) / 2;
  const int b = (tj1 - tm1) / 2;
  const int c = (tj2 + tm2) / 2;
  const int d = (tj3 - tj2 + tm1) / 2;
  const int e = (tj3 - tj1 - tm2) / 2;

  const int kmin = std::max({0, -d, -e});
  const int kmax = std::min({a, b, c});
  if (kmin > kmax) return 0.0;

  const double pre = log_delta(tj1, tj2, tj3) +
                     0.5 * (log_factorial((tj1 + tm1) / 2) + log_factorial((tj1 - tm1) / 2) +
                            log_factorial((tj2 + tm2) / 2) + log_factorial((tj2 - tm2) / 2) +
                            log_factorial((tj3 + tm3) / 2) + log_factorial((tj3 - tm3) / 2));

  double sum = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    const double lt = pre - (log_factorial(k) + log_factorial(a - k) + log_factorial(b - k) +
                             log_factorial(c - k) + log_factorial(d + k) + log_factorial(e + k));
    sum += parity_sign(k) * std::exp(lt);
  }
  return parity_sign((tj1 - tj2 - tm3) / 2) * sum;
}

double clebsch_gordan(int tj1, int tm1, int tj2, int tm2, int tJ, int tM) {
  if (tm1 + tm2 != tM) return 0.0;
  const double w = wigner_3j(tj1, tj2, tJ, tm1, tm2, -tM);
  if (w == 0.0) return 0.0;
  return parity_sign((tj1 - tj2 + tM) / 2) * std::sqrt(tJ + 1.0) * w;
}

double clebsch_gordan(const AngularMomentum& a, const AngularMomentum& b, const AngularMomentum& c) {
  return clebsch_gordan(a.twice_j, a.twice_m, b.twice_j, b.twice_m, c.twice_j, c.twice_m);
}

double wigner_6j(int tj1, int tj2, int tj3, int tj4, int tj5, int tj6) {
  for (int t : {tj1, tj2, tj3, tj4, tj5, tj6})
    if (t < 0) return 0.0;
  if (!triangle(tj1, tj2, tj3) || !triangle(tj1, tj5, tj6) || !triangle(tj4, tj2, tj6) ||
      !triangle(tj4, tj5, tj3))
    return 0.0;

  const int a1 = (tj1 + tj2 + tj3) / 2;
  const int a2 = (tj1 + tj5 + tj6) / 2;
  const int a3 = (tj4 + tj2 + tj6) / 2;
  const int a4 = (tj4 + tj5 + tj3) / 2;
  const int b1 = (tj1 + tj2 + tj4 + tj5) / 2;
  const int b2 = (tj2 + tj3 + tj5 + tj6) / 2;
  const int b3 = (tj3 + tj1 + tj6 + tj4) / 2;

  const int kmin = std::max({a1, a2, a3, a4});
  const int kmax = std::min({b1, b2, b3});
  if (kmin > kmax) return 0.0;

  const double pre = log_delta(tj1, tj2, tj3) + log_delta(tj1, tj5, tj6) +
                     log_delta(tj4, tj2, tj6) + log_delta(tj4, tj5, tj3);
  double sum = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    const double lt = pre + log_factorial(k + 1) -
                      (log_factorial(k - a1) + log_factorial(k - a2) + log_factorial(k - a3) +
                       log_factorial(k - a4) + log_factorial(b1 - k) + log_factorial(b2 - k) +
                       log_factorial(b3 - k));
    sum += parity_sign(k) * std::exp(lt);
  }
  return sum;
}

double lande_g(int l, int twice_s, int twice_j) {
  const double s = 0.5 * twice_s;
  const double j = 0.5 * twice_j;
  return 1.5 + (s * (s + 1.0) - l * (l + 1.0)) / (2.0 * j * (j + 1.0));
}

}  // namespace borromean
