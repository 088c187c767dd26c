#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "helmkit/types.hpp"

namespace helmkit {

/// Quadratic-form bounds A_min <= A(x) <= A_max and nu_min <= nu(x) <= nu_max.
struct CoefficientBounds {
  double A_min = 1.0;
  double A_max = 1.0;
  double nu_min = 1.0;
  double nu_max = 1.0;
};

/// Coefficients of  div(A grad u) + k^2 nu u = -f.  Outside the support
/// radius the medium is Euclidean: A = I and nu = 1.
class CoefficientField {
 public:
  struct Sample {
    Mat2 A = Mat2::Identity();
    double nu = 1.0;
    std::array<Mat2, 2> dA{Mat2::Zero(), Mat2::Zero()};  // dA/dx1, dA/dx2
    Vec2 dnu = Vec2::Zero();
  };
  using Evaluator = std::function<Sample(const Vec2&)>;

  CoefficientField(std::string name, Evaluator eval, double support_radius, CoefficientBounds bounds,
                   bool radial = false);

  /// A = I, nu = 1. The support radius is only used as R1 by validation.
  static CoefficientField identity(double support_radius = 1.0);

  /// nu(x) = 1 + (peak - 1) b(|x - c| / radius) with the C-infinity bump
  /// b(t) = exp(1 - 1/(1 - t^2)) on |t| < 1.
  static CoefficientField nu_bump(double peak, double radius, Vec2 center = Vec2::Zero());

  /// A(x) = I + b(|x - c| / radius) (Q diag(a1, a2) Q^T - I), Q a rotation by `angle`.
  static CoefficientField anisotropic_bump(double a1, double a2, double angle, double radius,
                                           Vec2 center = Vec2::Zero());

  const std::string& name() const { return name_; }
  Sample sample(const Vec2& x) const { return eval_(x); }
  Mat2 A(const Vec2& x) const { return eval_(x).A; }
  double nu(const Vec2& x) const { return eval_(x).nu; }
  std::array<Mat2, 2> grad_A(const Vec2& x) const { return eval_(x).dA; }
  Vec2 grad_nu(const Vec2& x) const { return eval_(x).dnu; }

  double support_radius() const { return support_radius_; }
  const CoefficientBounds& bounds() const { return bounds_; }
  bool is_identity() const { return identity_; }
  /// A = I and nu depends on |x| only (enables the axisymmetric solvers).
  bool is_radial() const { return radial_; }

 private:
  std::string name_;
  Evaluator eval_;
  double support_radius_;
  CoefficientBounds bounds_;
  bool identity_ = false;
  bool radial_ = false;
};

/// Smooth bump exp(1 - 1/(1 - t^2)) and its derivative in t.
double bump_profile(double t);
double bump_profile_derivative(double t);

/// Star-shaped curve r = rho(theta) about `center`, with
/// rho(theta) = c0 + sum_m (a_m cos(m theta) + b_m sin(m theta)).
/// Coefficients are stored as [c0, a1, b1, a2, b2, ...].
class StarShape {
 public:
  StarShape(Vec2 center, std::vector<double> coefficients);
  static StarShape disk(double radius, Vec2 center = Vec2::Zero()) { return {center, {radius}}; }

  double radius(double theta) const;
  double radius_derivative(double theta) const;
  double radius_second_derivative(double theta) const;
  Vec2 point(double theta) const;
  Vec2 tangent(double theta) const;  // d point / d theta

  const Vec2& center() const { return center_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  bool is_circle() const { return circle_; }
  double min_radius() const { return min_radius_; }
  double max_radius() const { return max_radius_; }

  /// (r - rho(theta)) scaled by rho/sqrt(rho^2 + rho'^2): the Euclidean
  /// distance to first order near the curve, exact for circles.
  double signed_distance(const Vec2& x) const;
  /// Outward unit normal at the boundary point nearest in angle to x.
  Vec2 normal(const Vec2& x) const;

 private:
  Vec2 center_;
  std::vector<double> coefficients_;
  bool circle_ = false;
  double min_radius_ = 0.0;
  double max_radius_ = 0.0;
};

/// Dirichlet obstacle: empty or a union of disjoint star-shaped components.
class Obstacle {
 public:
  Obstacle() = default;
  explicit Obstacle(std::vector<StarShape> parts) : parts_(std::move(parts)) {}
  static Obstacle none() { return {}; }
  static Obstacle disk(double radius, Vec2 center = Vec2::Zero()) { return Obstacle({StarShape::disk(radius, center)}); }
  static Obstacle star(std::vector<double> coefficients, Vec2 center = Vec2::Zero()) {
    return Obstacle({StarShape(center, std::move(coefficients))});
  }

  bool empty() const { return parts_.empty(); }
  const std::vector<StarShape>& parts() const { return parts_; }
  /// Largest |x| over the boundary.
  double extent() const;

  /// Negative inside, positive outside, zero on the boundary. Requires a
  /// non-empty obstacle.
  double signed_distance(const Vec2& x) const;
  /// Outward unit normal; throws if |signed_distance(x)| exceeds tolerance.
  Vec2 boundary_normal(const Vec2& x, double tolerance = 1e-6) const;
  /// Index of the component closest to x.
  std::size_t nearest_part(const Vec2& x) const;

 private:
  std::vector<StarShape> parts_;
};

double signed_distance(const Obstacle& obstacle, const Vec2& x);
Vec2 boundary_normal(const Obstacle& obstacle, const Vec2& x_on_boundary, double tolerance = 1e-6);

/// Radii R1 < R < R_ray: coefficient support, FEM truncation circle, and
/// the ball used for the longest-ray constant (typically R + 2).
struct TruncationGeometry {
  double R1 = 1.0;
  double R = 2.0;
  double R_ray = 4.0;
};

struct WaveContext {
  double k = 1.0;
  double k0 = 1.0;
};

struct Violation {
  std::string invariant;
  Vec2 point = Vec2::Zero();
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::size_t samples_checked = 0;

  bool passed() const { return violations.empty(); }
  /// Name of the first violated invariant, empty when everything passed.
  std::string first_failure() const { return violations.empty() ? std::string{} : violations.front().invariant; }
};

struct ValidationOptions {
  int radial_samples = 48;
  int angular_samples = 96;
  double bound_tolerance = 1e-12;
  double gradient_step = 1e-5;
  double gradient_tolerance = 1e-6;
  int boundary_samples = 720;
};

/// Dense-sampling check of the structural hypotheses: Euclidean exterior,
/// A symmetric with eigenvalues in [A_min, A_max], nu in [nu_min, nu_max],
/// gradients consistent with finite differences, obstacle star-shaped and
/// inside B(0, R1), and R1 < R < R_ray.
ValidationReport validate_configuration(const CoefficientField& coeffs, const Obstacle& obstacle,
                                        const TruncationGeometry& geom, const ValidationOptions& options = {});

void validate_wave(const WaveContext& wave);

}  // namespace helmkit
