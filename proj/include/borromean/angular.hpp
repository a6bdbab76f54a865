#pragma once

// Angular momentum algebra. All j and m are stored doubled (2j, 2m) so that
// half-integers compare exactly. Condon-Shortley phase convention throughout.

namespace borromean {

struct AngularMomentum {
  int twice_j = 0;
  int twice_m = 0;

  bool valid() const;
  double j() const { return 0.5 * twice_j; }
  double m() const { return 0.5 * twice_m; }
};

// <j1 m1; j2 m2 | J M>, arguments doubled. Returns 0 outside the physical domain.
double clebsch_gordan(int tj1, int tm1, int tj2, int tm2, int tJ, int tM);
double clebsch_gordan(const AngularMomentum& a, const AngularMomentum& b, const AngularMomentum& c);

// (j1 j2 j3; m1 m2 m3), doubled arguments.
double wigner_3j(int tj1, int tj2, int tj3, int tm1, int tm2, int tm3);

// {j1 j2 j3; j4 j5 j6}, doubled arguments.
double wigner_6j(int tj1, int tj2, int tj3, int tj4, int tj5, int tj6);

// Lande factor with g_s = 2: g = 3/2 + [s(s+1) - l(l+1)] / [2 j(j+1)].
double lande_g(int l, int twice_s, int twice_j);

// (-1)^k for integer k (k may be negative).
inline int parity_sign(int k) { return (k % 2 == 0) ? 1 : -1; }

}  // namespace borromean
