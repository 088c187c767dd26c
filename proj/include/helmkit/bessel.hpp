#pragma once

#include <vector>

#include "helmkit/types.hpp"

namespace helmkit::bessel {

/// J_n(z) and Y_n(z) for n = 0..n_max and real z > 0.
struct Table {
  double z = 0.0;
  std::vector<double> J;
  std::vector<double> Y;

  cplx H(int n) const { return {J[n], Y[n]}; }
  /// Derivatives from J_n' = J_{n-1} - (n/z) J_n (n >= 1) and J_0' = -J_1; likewise for Y.
  double dJ(int n) const;
  double dY(int n) const;
  cplx dH(int n) const { return {dJ(n), dY(n)}; }
};

/// Miller backward recurrence for J, Neumann series or Hankel asymptotics for
/// Y_0 and Y_1, forward recurrence for Y_n. Y_n overflows for n far beyond z;
/// use hankel_ratio when only H_n'/H_n is needed.
Table cylinder(int n_max, double z);

double J(int n, double z);
double Y(int n, double z);
cplx hankel1(int n, double z);

/// H_n^(1)'(z) / H_n^(1)(z) for integer n (even in n) and z > 0. Throws
/// NumericalError for |n| > 2z + 200.
cplx hankel_ratio(int n, double z);

/// hankel_ratio(n, z) for n = 0..n_max in one pass.
std::vector<cplx> hankel_ratios(int n_max, double z);

}  // namespace helmkit::bessel
