#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "helmkit/bounds.hpp"
#include "helmkit/fem.hpp"
#include "helmkit/geometry.hpp"
#include "helmkit/parallel.hpp"

namespace helmkit {

/// Coefficients, obstacle and truncation radius of one study.
struct Scene {
  CoefficientField coeffs = CoefficientField::identity();
  Obstacle obstacle;
  double R = 1.0;

  /// A = I, nu radial, obstacle empty or a disk centred at the origin.
  bool rotationally_symmetric() const;
  /// Obstacle is empty or a centred disk and A = I, nu = 1 (series reference available).
  bool has_series_reference() const;
};

/// chi(r) = scale on r <= inner, smooth C-infinity decay to 0 at r = outer.
struct Cutoff {
  double inner = 0.8;
  double outer = 1.0;
  double scale = 1.0;
  double operator()(double r) const;
};

/// C-infinity step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t);

struct PowerIterationResult {
  double sigma = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;
};

/// Largest singular value of T from the normal operator N = T* T (self-adjoint
/// for `inner`). Stops when successive estimates differ by less than
/// `tolerance` relative.
PowerIterationResult power_iteration(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& normal,
                                     const std::function<cplx(const Eigen::VectorXcd&, const Eigen::VectorXcd&)>& inner,
                                     Eigen::VectorXcd x0, double tolerance, int max_iterations);

enum class OutputNorm { l2, energy };
enum class ResolventMethod { automatic, radial, mesh };

struct ResolventOptions {
  OutputNorm norm = OutputNorm::l2;
  ResolventMethod method = ResolventMethod::automatic;
  double resolution = 0.0;  // mesh width; 0 picks h = 0.5 / k^2
  double tolerance = 1e-4;
  int max_iterations = 2000;
  std::uint64_t seed = 1;
};

struct ResolventEstimate {
  double k = 0.0;
  double norm = 0.0;
  double resolution = 0.0;
  int iterations = 0;
  bool converged = false;
  int dominant_mode = -1;  // radial method only
  std::string method;
};

/// Largest singular value of f -> chi S_k (chi f), L^2 -> L^2 or L^2 -> H^1_k,
/// by power iteration in the mass inner product. Rotationally symmetric
/// scenes use the Fourier-mode (radial) discretization unless the mesh
/// method is requested. Throws NumericalError when iterations do not converge.
ResolventEstimate estimate_resolvent_norm(const Scene& scene, double k, const Cutoff& cutoff,
                                          const ResolventOptions& options = {}, const Executor& exec = Executor{});

/// Power iteration against a dense singular value decomposition for the 1-D
/// outgoing kernel e^{ik|x-y|}/(2ik) cut off near [-1, 1] (midpoint Nystrom).
struct FreeResolventCheck {
  double power = 0.0;
  double dense = 0.0;
  int points = 0;
  int iterations = 0;
};
FreeResolventCheck free_resolvent_1d_check(double k, int points, double tolerance = 1e-8);

struct ResolventScanRow {
  double k = 0.0;
  double resolution = 0.0;
  double norm = 0.0;
  double scaled = 0.0;     // k * norm for s = 0, norm for s = 1
  double upper_ref = 0.0;  // 2^{s/2+1} L / pi
  double lower_ref = 0.0;  // 2 R' / pi for s = 0 without obstacle, else 0
  int iterations = 0;
  bool converged = false;
  int dominant_mode = -1;
};

struct ResolventScan {
  int s = 0;
  Cutoff cutoff;
  double L = 0.0;
  std::string method;
  std::vector<ResolventScanRow> rows;
};

ResolventScan resolvent_scan(const Scene& scene, const std::vector<double>& k_list, const Cutoff& cutoff, int s, double L,
                             const ResolventOptions& options = {}, const Executor& exec = Executor{});

struct QuasimodeResult {
  double L = 0.0, delta = 0.0, h = 0.0;
  double mu = 0.0;
  double f_norm_squared = 0.0;
  double f_norm_identity = 0.0;  // pi / (4 mu)
  double u_norm = 0.0;
  double ratio = 0.0;
  double bound = 0.0;  // 2 (L - 2 delta) / (pi h)
  std::vector<double> x, f, u;
};

/// 1-D transport model: h u' = f with f = cos(mu (x - delta)) on [delta, L - delta],
/// u the cut-off primitive. Throws ConfigError unless 0 < 2 delta < L and h > 0.
QuasimodeResult quasimode_lower_bound(double L, double delta, double h, int profile_points = 201);

struct EtaEstimate {
  double k = 0.0;
  double h = 0.0;
  double h_reference = 0.0;
  int samples = 0;
  double eta = 0.0;
  std::vector<double> ratios;
  std::vector<double> running;
};

/// Running sup over seeded white-noise loads of min_{v_h} |S* f - v_h|_{H^1_k} / |f|,
/// with S* f computed on a mesh refined `refinements` times.
EtaEstimate estimate_eta(const Scene& scene, double k, double h, int samples, std::uint64_t seed, int refinements = 2,
                         const Executor& exec = Executor{});

struct ConvergenceRow {
  double k = 0.0;
  double h_target = 0.0;
  double h = 0.0;
  int dofs = 0;
  double energy_error = 0.0;
  double l2_error = 0.0;
  double best_error = 0.0;           // energy-norm projection
  double interpolation_error = 0.0;  // nodal interpolant of the reference
  double relative_l2_error = 0.0;
  double ratio = 0.0;                // energy_error / best_error
  double threshold_rhs = 0.0;
  bool admissible = false;
  bool failed = false;
  std::string reference;
  std::string note;
};

struct ConvergenceTable {
  double quasioptimality_constant = 0.0;
  std::vector<ConvergenceRow> rows;  // k ascending, then h descending
};

/// Scattering of a plane wave at `angle`; the series solution is the
/// reference when available, otherwise a twice-refined mesh.
ConvergenceTable quasioptimality_study(const Scene& scene, const std::vector<double>& k_list,
                                       const std::vector<double>& h_list, const ConstantsLedger& ledger,
                                       double angle = 0.0, const Executor& exec = Executor{});

struct H2ScalingRow {
  double k = 0.0;
  double h = 0.0;
  double f_norm = 0.0;
  double h2_norm = 0.0;
  double ratio = 0.0;  // h2_norm / (k f_norm)
  double bound_coefficient = 0.0;
};

struct H2Scaling {
  std::vector<H2ScalingRow> rows;
  double exponent = 0.0;  // least-squares slope of log(h2/f) against log k
};

/// For each k: h = h_factor / k^2, a seeded load sharpened by `power_steps`
/// resolvent power iterations, and the discrete H^2 norm of the solution on Omega_R.
H2Scaling h2_scaling_study(const Scene& scene, const std::vector<double>& k_list, const ConstantsLedger& ledger,
                           double h_factor, int power_steps, std::uint64_t seed, const Executor& exec = Executor{});

/// Least-squares slope of log y against log x.
double fitted_exponent(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace helmkit
