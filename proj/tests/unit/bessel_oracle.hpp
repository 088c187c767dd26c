#pragma once

// Ascending-series Bessel functions in 100-digit arithmetic, used as an
// independent reference for the double-precision recurrences.

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <complex>

namespace oracle {

using big = boost::multiprecision::cpp_bin_float_100;

inline big factorial(int n) {
  big f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline big digamma_int(int m) {  // psi(m) for integer m >= 1
  big s = -boost::math::constants::euler<big>();
  for (int j = 1; j < m; ++j) s += big(1) / j;
  return s;
}

inline big besselj(int n, const big& z) {
  const big q = -z * z / 4;
  big term = pow(z / 2, n) / factorial(n);
  big sum = term;
  for (int k = 1; k < 2000; ++k) {
    term *= q / (big(k) * big(n + k));
    sum += term;
    if (abs(term) < abs(sum) * big("1e-80") && k > z) break;
  }
  return sum;
}

inline big bessely(int n, const big& z) {
  const big pi = boost::math::constants::pi<big>();
  const big half = z / 2;
  big finite = 0;
  for (int k = 0; k < n; ++k) finite += factorial(n - k - 1) / factorial(k) * pow(z * z / 4, k);
  finite *= -pow(half, -n) / pi;

  const big q = -z * z / 4;
  big term = big(1) / factorial(n);  // (-z^2/4)^k / (k! (n+k)!)
  big series = 0;
  for (int k = 0; k < 4000; ++k) {
    if (k > 0) term *= q / (big(k) * big(n + k));
    const big add = (digamma_int(k + 1) + digamma_int(n + k + 1)) * term;
    series += add;
    if (k > z && abs(add) < big("1e-80") * (abs(series) + 1)) break;
  }
  series *= -pow(half, n) / pi;
  return finite + 2 / pi * log(half) * besselj(n, z) + series;
}

inline double J(int n, double z) { return static_cast<double>(besselj(n, big(z))); }
inline double Y(int n, double z) { return static_cast<double>(bessely(n, big(z))); }

/// H_n'(z)/H_n(z) with H' = H_{n-1} - (n/z) H_n (n >= 1) or -H_1 (n = 0).
inline std::complex<double> hankel_ratio(int n, double zd) {
  const big z(zd);
  const big Jn = besselj(n, z), Yn = bessely(n, z);
  big dJ, dY;
  if (n == 0) {
    dJ = -besselj(1, z);
    dY = -bessely(1, z);
  } else {
    dJ = besselj(n - 1, z) - n / z * Jn;
    dY = bessely(n - 1, z) - n / z * Yn;
  }
  // (dJ + i dY) / (Jn + i Yn)
  const big den = Jn * Jn + Yn * Yn;
  const big re = (dJ * Jn + dY * Yn) / den;
  const big im = (dY * Jn - dJ * Yn) / den;
  return {static_cast<double>(re), static_cast<double>(im)};
}

}  // namespace oracle
