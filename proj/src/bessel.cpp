#include "helmkit/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace helmkit::bessel {

namespace {

constexpr double euler_gamma = 0.57721566490153286060651209008240243;
constexpr double asymptotic_switch = 25.0;

struct Pair {
  double J;
  double Y;
};

// Hankel's large-argument expansion for orders 0 and 1.
Pair asymptotic(int order, double z) {
  const double mu = 4.0 * order * order;
  double P = 1.0;
  double Q = 0.0;
  double term = 1.0;
  double previous = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * z);
    const double size = std::abs(term);
    if (size > previous) break;  // the series is asymptotic: stop at its smallest term
    const int sign = ((k / 2) % 2 == 0) ? 1 : -1;
    if (k % 2 == 0) P += sign * term;
    else Q += sign * term;
    if (size < 1e-17) break;
    previous = size;
  }
  const double w = z - (0.5 * order + 0.25) * pi;
  const double amp = std::sqrt(2.0 / (pi * z));
  return {amp * (P * std::cos(w) - Q * std::sin(w)), amp * (P * std::sin(w) + Q * std::cos(w))};
}

// Unnormalized backward recurrence; returns j_0..j_top with j_top the start index.
std::vector<double> miller(int top, double z) {
  std::vector<double> j(top + 2, 0.0);
  j[top + 1] = 0.0;
  j[top] = 1e-30;
  for (int n = top; n >= 1; --n) {
    j[n - 1] = (2.0 * n / z) * j[n] - j[n + 1];
    if (std::abs(j[n - 1]) > 1e250) {
      for (int m = n - 1; m <= top + 1; ++m) j[m] *= 1e-250;
    }
  }
  j.pop_back();
  return j;
}

int miller_start(int n_max, double z) {
  const int base = std::max(n_max, static_cast<int>(std::ceil(z)));
  int top = base + 20 + static_cast<int>(std::sqrt(40.0 * base));
  return top + (top % 2);
}

}  // namespace

double Table::dJ(int n) const {
  return n == 0 ? -J[1] : J[n - 1] - (n / z) * J[n];
}

double Table::dY(int n) const {
  return n == 0 ? -Y[1] : Y[n - 1] - (n / z) * Y[n];
}

Table cylinder(int n_max, double z) {
  if (!(z > 0.0)) throw NumericalError("Bessel functions need z > 0");
  if (n_max < 0) throw NumericalError("Bessel table order must be nonnegative");
  const int need = std::max(n_max, 1) + 1;  // one extra order for derivatives
  const int top = miller_start(need, z);
  std::vector<double> j = miller(top, z);

  Table t;
  t.z = z;
  t.J.assign(need + 1, 0.0);
  t.Y.assign(need + 1, 0.0);

  if (z <= asymptotic_switch) {
    double norm = j[0];
    for (int k = 2; k <= top; k += 2) norm += 2.0 * j[k];
    for (auto& v : j) v /= norm;
    const double lg = std::log(0.5 * z) + euler_gamma;
    double s0 = 0.0;
    double s1 = 0.0;
    for (int k = 1; 2 * k + 1 <= top; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      s0 += sign * j[2 * k] / k;
      s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k;
    }
    t.Y[0] = (2.0 / pi) * (lg * j[0] - 2.0 * s0);
    t.Y[1] = (2.0 / pi) * (-j[0] / z + lg * j[1] + s1);
  } else {
    const Pair a0 = asymptotic(0, z);
    const Pair a1 = asymptotic(1, z);
    const double scale = std::abs(a0.J) > std::abs(a1.J) ? a0.J / j[0] : a1.J / j[1];
    for (auto& v : j) v *= scale;
    j[0] = a0.J;
    j[1] = a1.J;
    t.Y[0] = a0.Y;
    t.Y[1] = a1.Y;
  }
  for (int n = 0; n <= need; ++n) t.J[n] = j[n];
  for (int n = 1; n < need; ++n) t.Y[n + 1] = (2.0 * n / z) * t.Y[n] - t.Y[n - 1];
  return t;
}

double J(int n, double z) {
  const int m = std::abs(n);
  const double v = cylinder(m, z).J[m];
  return (n < 0 && m % 2 == 1) ? -v : v;
}

double Y(int n, double z) {
  const int m = std::abs(n);
  const double v = cylinder(m, z).Y[m];
  return (n < 0 && m % 2 == 1) ? -v : v;
}

cplx hankel1(int n, double z) { return {J(n, z), Y(n, z)}; }

std::vector<cplx> hankel_ratios(int n_max, double z) {
  if (!(z > 0.0)) throw NumericalError("hankel_ratio needs z > 0");
  if (n_max > 2.0 * z + 200.0) {
    std::ostringstream msg;
    msg << "hankel_ratio: order " << n_max << " exceeds the stable range 2z + 200 = " << 2.0 * z + 200.0;
    throw NumericalError(msg.str());
  }
  const Table t = cylinder(1, z);
  const cplx H0 = t.H(0);
  const cplx H1 = t.H(1);
  std::vector<cplx> out(n_max + 1);
  out[0] = -H1 / H0;
  cplx q = H0 / H1;  // H_{n-1} / H_n at n = 1
  for (int n = 1; n <= n_max; ++n) {
    out[n] = q - n / z;
    q = 1.0 / (2.0 * n / z - q);
  }
  return out;
}

cplx hankel_ratio(int n, double z) {
  const int m = std::abs(n);
  return hankel_ratios(m, z)[m];
}

}  // namespace helmkit::bessel
