#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "helmkit/fem.hpp"
#include "helmkit/geometry.hpp"
#include "helmkit/parallel.hpp"

namespace helmkit {

/// Every explicit constant entering the mesh threshold, with a provenance
/// label per entry ("supplied", "formula", "empirical_lower", "estimate").
struct ConstantsLedger {
  double C_int_tilde = 1.0;
  double C_int = 1.0;
  double C_DtN_tilde = 1.0;
  double C_DtN = 1.0;
  double C_H2 = 1.0;
  double C_cont = 2.0;
  double A_min = 1.0, A_max = 1.0, nu_min = 1.0, nu_max = 1.0;
  double k0 = 1.0;
  double L_ray = 2.0;  // L(nu A^-1, Omega, R + 2)
  double s = 0.0;
  std::map<std::string, std::string> provenance;

  /// Fills C_int, C_DtN and C_cont = 1 + C_DtN from the tilde constants and bounds.
  void derive();
  /// Throws ConfigError on C_cont > 1 + C_DtN, L_ray < 2 or nonpositive entries.
  void validate() const;
  std::string to_json() const;
  static ConstantsLedger from_json(const std::string& text);
};

double compute_C_int(double C_int_tilde, double A_max, double nu_max);
double compute_C_DtN(double C_DtN_tilde, double A_min, double nu_min);

/// 2^{s/2+1} L k^{s-1} / pi for 0 <= s <= 2.
double resolvent_upper_bound(double L_ray, double k, double s);

/// Norm 2L/pi of cumulative integration on L^2([0, L]).
double volterra_norm(double L);

struct VolterraEstimate {
  double sigma = 0.0;
  int iterations = 0;
  bool converged = false;
};
/// Largest singular value of the n-point rectangle-rule matrix (L/n on and
/// below the diagonal), by power iteration with O(n) products.
VolterraEstimate volterra_discrete(double L, int n, double tolerance = 1e-13);

struct ThresholdReport {
  double k = 0.0;
  double h_query = 0.0;
  double h_max = 0.0;
  double lhs = 1.0;
  double rhs = 0.0;  // at h_query
  bool admissible = false;
  double quasioptimality_constant = 0.0;
  std::string C_H2_provenance;
};

/// Right-hand side of the mesh-threshold inequality at (k, h).
double mesh_threshold_rhs(const ConstantsLedger& ledger, double k, double h);
ThresholdReport mesh_threshold(const ConstantsLedger& ledger, double k, double h_query);

/// eta <= 1 / (2 C_cont nu_max^1/2 k).
bool schatz_condition(const ConstantsLedger& ledger, double k, double eta);
double schatz_bound(const ConstantsLedger& ledger, double k);

/// Coefficient of |f| in the H^2 bound of the exterior Dirichlet problem.
double h2_bound_rhs(const ConstantsLedger& ledger, double k);

/// Sup over k in [k0, k_max] and modes n of |<T_R g, g>| / |u|^2 over
/// minimal-energy extensions u of e^{i n theta} into the annulus
/// inner_radius < r < R (natural condition at the inner circle), A = I, nu = 1.
struct DtnConstantEstimate {
  double value = 0.0;
  double k_at_max = 0.0;
  int n_at_max = 0;
};
DtnConstantEstimate estimate_C_DtN_tilde(double R, double inner_radius, double k0, double k_max, int k_samples = 33);

/// Max over test functions and meshes of (|v - I_h v| + h |grad(v - I_h v)|) / (h^2 |v|_H2), A = I, nu = 1.
struct InterpolationConstantEstimate {
  double value = 0.0;
  std::vector<double> h;
  std::vector<double> ratio;
};
InterpolationConstantEstimate estimate_C_int_tilde(const Obstacle& obstacle, double R, const std::vector<double>& h_list);

struct H2ConstantEstimate {
  double value = 0.0;               // running maximum (a lower bound for C_H2)
  std::vector<double> ratios;       // per sample
  std::vector<double> running_max;
};
/// Solves div(A grad v) = f on Omega_{R+b} with v = 0 on both boundaries for
/// `samples` seeded smooth loads (sample 0 is f = 1) and reports
/// |v|_{H^2(Omega_R)} / (|A^1/2 grad v| + |v| + |f|) over Omega_{R+b}.
H2ConstantEstimate estimate_C_H2(const CoefficientField& coeffs, const Obstacle& obstacle, double R, double b,
                                 double h, int samples, std::uint64_t seed, const Executor& exec = Executor{});

}  // namespace helmkit
