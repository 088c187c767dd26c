#pragma once

#include <vector>

#include "helmkit/types.hpp"

namespace helmkit {

/// Exterior Dirichlet-to-Neumann map on the circle r = R for
/// Delta u + k^2 u = 0 with the outgoing radiation condition:
/// (T_R g)^_n = t_n g^_n with t_n = k H_n'(kR) / H_n(kR).
struct DtnOperator {
  double k = 0.0;
  double R = 0.0;
  int n_max = 0;
  std::vector<cplx> t;  // t[|n|], n = 0..n_max

  cplx coefficient(int n) const { return t.at(n < 0 ? -n : n); }
  int modes() const { return 2 * n_max + 1; }
};

/// ceil(kR) + max(16, ceil(4 (kR)^(1/3))).
int default_nmax(double k, double R);

/// n_max < 0 selects default_nmax.
DtnOperator build_dtn(double k, double R, int n_max = -1);

/// g(theta) = sum_{|n| <= n_max} c_n e^{i n theta} on the circle of radius R.
struct FourierTrace {
  double R = 1.0;
  int n_max = 0;
  std::vector<cplx> c;  // c[n + n_max]

  FourierTrace() = default;
  FourierTrace(double radius, int nmax) : R(radius), n_max(nmax), c(2 * nmax + 1, cplx(0.0)) {}

  cplx& operator[](int n) { return c.at(n + n_max); }
  const cplx& operator[](int n) const { return c.at(n + n_max); }

  cplx evaluate(double theta) const;
  /// Trapezoid-rule coefficients from m >= 2 n_max + 1 equispaced samples g(2 pi j / m + offset).
  static FourierTrace from_samples(double R, int n_max, const std::vector<cplx>& values, double offset = 0.0);
  /// Values at m equispaced angles starting at offset.
  std::vector<cplx> sample(int m, double offset = 0.0) const;
  /// 2 pi R sum |c_n|^2 = ||g||^2_{L^2(Gamma_R)}.
  double l2_norm_squared() const;
  /// 2 pi R sum (k^2 + n^2/R^2)^{1/2} |c_n|^2, the k-weighted H^{1/2} trace norm.
  double energy_norm_squared(double k) const;
  /// Trace of conj(g): c_n -> conj(c_{-n}).
  FourierTrace conjugate() const;
};

FourierTrace apply_dtn(const DtnOperator& op, const FourierTrace& g);

/// <T_R g, h> = 2 pi R sum t_n g_n conj(h_n), linear in g and antilinear in h.
cplx dtn_pairing(const DtnOperator& op, const FourierTrace& g, const FourierTrace& h);

/// sup over traces of |<T_R g, h>| / (|g|_k |h|_k) in the energy_norm_squared trace
/// norm, which is max_n |t_n| / (k^2 + n^2/R^2)^{1/2}.
double dtn_continuity_constant(const DtnOperator& op);

/// Plane wave u^I(x) = exp(i k (cos a, sin a) . x).
struct PlaneWave {
  double k = 1.0;
  double angle = 0.0;

  Vec2 direction() const;
  cplx value(const Vec2& x) const;
  Eigen::Vector2cd gradient(const Vec2& x) const;
};

/// Modal coefficients of u^I on Gamma_R (Jacobi-Anger: i^|n| J_|n|(kR) e^{-i n a}).
FourierTrace incident_trace(const DtnOperator& op, const PlaneWave& wave);

/// Modal coefficients of du^I/dr - T_R u^I on Gamma_R, written through the
/// Wronskian as -2i i^|n| e^{-i n a} / (pi R H_|n|(kR)).
FourierTrace incident_wave_data(const DtnOperator& op, const PlaneWave& wave);

}  // namespace helmkit
