#include "helmkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace helmkit {

double bump_profile(double t) {
  const double s = 1.0 - t * t;
  if (s <= 0.0) return 0.0;
  return std::exp(1.0 - 1.0 / s);
}

double bump_profile_derivative(double t) {
  const double s = 1.0 - t * t;
  if (s <= 0.0) return 0.0;
  return bump_profile(t) * (-2.0 * t / (s * s));
}

CoefficientField::CoefficientField(std::string name, Evaluator eval, double support_radius,
                                   CoefficientBounds bounds, bool radial)
    : name_(std::move(name)), eval_(std::move(eval)), support_radius_(support_radius), bounds_(bounds),
      radial_(radial) {
  if (!eval_) throw ConfigError("coefficient evaluator is empty");
  if (!(support_radius_ > 0.0)) throw ConfigError("support radius must be positive");
}

CoefficientField CoefficientField::identity(double support_radius) {
  CoefficientField field("identity", [](const Vec2&) { return Sample{}; }, support_radius, CoefficientBounds{}, true);
  field.identity_ = true;
  return field;
}

CoefficientField CoefficientField::nu_bump(double peak, double radius, Vec2 center) {
  if (!(peak > 0.0)) throw ConfigError("nu_bump: peak must be positive");
  if (!(radius > 0.0)) throw ConfigError("nu_bump: radius must be positive");
  auto eval = [peak, radius, center](const Vec2& x) {
    Sample s;
    const Vec2 y = x - center;
    const double t2 = y.squaredNorm() / (radius * radius);
    if (t2 >= 1.0) return s;
    const double q = 1.0 - t2;
    const double b = std::exp(1.0 - 1.0 / q);
    s.nu = 1.0 + (peak - 1.0) * b;
    // grad b = b * (-2 / q^2) * y / radius^2
    s.dnu = (peak - 1.0) * b * (-2.0 / (q * q)) * y / (radius * radius);
    return s;
  };
  CoefficientBounds bounds;
  bounds.nu_min = std::min(1.0, peak);
  bounds.nu_max = std::max(1.0, peak);
  const bool centered = center.norm() == 0.0;
  return CoefficientField("nu_bump", eval, center.norm() + radius, bounds, centered);
}

CoefficientField CoefficientField::anisotropic_bump(double a1, double a2, double angle, double radius,
                                                    Vec2 center) {
  if (!(a1 > 0.0 && a2 > 0.0)) throw ConfigError("anisotropic_bump: eigenvalues must be positive");
  if (!(radius > 0.0)) throw ConfigError("anisotropic_bump: radius must be positive");
  Mat2 Q;
  Q << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  const Mat2 target = Q * Eigen::Vector2d(a1, a2).asDiagonal() * Q.transpose();
  const Mat2 delta = target - Mat2::Identity();
  auto eval = [delta, radius, center](const Vec2& x) {
    Sample s;
    const Vec2 y = x - center;
    const double t2 = y.squaredNorm() / (radius * radius);
    if (t2 >= 1.0) return s;
    const double q = 1.0 - t2;
    const double b = std::exp(1.0 - 1.0 / q);
    const Vec2 grad_b = b * (-2.0 / (q * q)) * y / (radius * radius);
    s.A = Mat2::Identity() + b * delta;
    s.dA[0] = grad_b.x() * delta;
    s.dA[1] = grad_b.y() * delta;
    return s;
  };
  CoefficientBounds bounds;
  bounds.A_min = std::min({1.0, a1, a2});
  bounds.A_max = std::max({1.0, a1, a2});
  return CoefficientField("anisotropic_bump", eval, center.norm() + radius, bounds, false);
}

StarShape::StarShape(Vec2 center, std::vector<double> coefficients)
    : center_(center), coefficients_(std::move(coefficients)) {
  if (coefficients_.empty()) throw ConfigError("star-shaped obstacle needs at least the mean radius");
  if (coefficients_.size() % 2 == 0) coefficients_.push_back(0.0);
  circle_ = std::all_of(coefficients_.begin() + 1, coefficients_.end(), [](double c) { return c == 0.0; });
  constexpr int n = 2048;
  min_radius_ = radius(0.0);
  max_radius_ = min_radius_;
  for (int i = 1; i < n; ++i) {
    const double r = radius(2.0 * pi * i / n);
    min_radius_ = std::min(min_radius_, r);
    max_radius_ = std::max(max_radius_, r);
  }
  if (!(min_radius_ > 0.0)) throw ConfigError("star-shaped obstacle radius must stay positive");
}

double StarShape::radius(double theta) const {
  double r = coefficients_[0];
  for (std::size_t m = 1; 2 * m < coefficients_.size(); ++m) {
    r += coefficients_[2 * m - 1] * std::cos(m * theta) + coefficients_[2 * m] * std::sin(m * theta);
  }
  return r;
}

double StarShape::radius_derivative(double theta) const {
  double d = 0.0;
  for (std::size_t m = 1; 2 * m < coefficients_.size(); ++m) {
    d += m * (-coefficients_[2 * m - 1] * std::sin(m * theta) + coefficients_[2 * m] * std::cos(m * theta));
  }
  return d;
}

double StarShape::radius_second_derivative(double theta) const {
  double d = 0.0;
  for (std::size_t m = 1; 2 * m < coefficients_.size(); ++m) {
    const double mm = static_cast<double>(m * m);
    d -= mm * (coefficients_[2 * m - 1] * std::cos(m * theta) + coefficients_[2 * m] * std::sin(m * theta));
  }
  return d;
}

Vec2 StarShape::point(double theta) const {
  return center_ + radius(theta) * Vec2(std::cos(theta), std::sin(theta));
}

Vec2 StarShape::tangent(double theta) const {
  const double r = radius(theta);
  const double dr = radius_derivative(theta);
  return dr * Vec2(std::cos(theta), std::sin(theta)) + r * Vec2(-std::sin(theta), std::cos(theta));
}

double StarShape::signed_distance(const Vec2& x) const {
  const Vec2 y = x - center_;
  const double r = y.norm();
  const double theta = std::atan2(y.y(), y.x());
  const double rho = radius(theta);
  if (circle_) return r - rho;
  const double drho = radius_derivative(theta);
  return (r - rho) * rho / std::sqrt(rho * rho + drho * drho);
}

Vec2 StarShape::normal(const Vec2& x) const {
  const Vec2 y = x - center_;
  const double r = y.norm();
  if (circle_) return r > 0.0 ? Vec2(y / r) : Vec2(1.0, 0.0);
  const Vec2 t = tangent(std::atan2(y.y(), y.x()));
  return Vec2(t.y(), -t.x()).normalized();
}

double Obstacle::extent() const {
  double e = 0.0;
  for (const auto& p : parts_) e = std::max(e, p.center().norm() + p.max_radius());
  return e;
}

std::size_t Obstacle::nearest_part(const Vec2& x) const {
  std::size_t best = 0;
  double best_d = std::abs(parts_.at(0).signed_distance(x));
  for (std::size_t i = 1; i < parts_.size(); ++i) {
    const double d = std::abs(parts_[i].signed_distance(x));
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

double Obstacle::signed_distance(const Vec2& x) const {
  if (parts_.empty()) throw ConfigError("signed_distance requires a non-empty obstacle");
  double d = parts_[0].signed_distance(x);
  for (std::size_t i = 1; i < parts_.size(); ++i) d = std::min(d, parts_[i].signed_distance(x));
  return d;
}

Vec2 Obstacle::boundary_normal(const Vec2& x, double tolerance) const {
  if (parts_.empty()) throw ConfigError("boundary_normal requires a non-empty obstacle");
  const auto& part = parts_[nearest_part(x)];
  const double d = part.signed_distance(x);
  if (std::abs(d) > tolerance) {
    std::ostringstream msg;
    msg << "boundary_normal called at distance " << d << " from the obstacle boundary";
    throw ConfigError(msg.str());
  }
  return part.normal(x);
}

double signed_distance(const Obstacle& obstacle, const Vec2& x) { return obstacle.signed_distance(x); }

Vec2 boundary_normal(const Obstacle& obstacle, const Vec2& x_on_boundary, double tolerance) {
  return obstacle.boundary_normal(x_on_boundary, tolerance);
}

ValidationReport validate_configuration(const CoefficientField& coeffs, const Obstacle& obstacle,
                                        const TruncationGeometry& geom, const ValidationOptions& options) {
  ValidationReport report;
  auto fail = [&](std::string invariant, Vec2 x, std::string detail) {
    report.violations.push_back({std::move(invariant), x, std::move(detail)});
  };

  if (!(geom.R1 > 0.0 && geom.R1 < geom.R && geom.R < geom.R_ray)) {
    std::ostringstream s;
    s << "need 0 < R1 < R < R_ray, got R1=" << geom.R1 << " R=" << geom.R << " R_ray=" << geom.R_ray;
    fail("geometry_ordering", Vec2::Zero(), s.str());
  }

  const auto& b = coeffs.bounds();
  if (!(b.A_min > 0.0 && b.A_min <= b.A_max && b.nu_min > 0.0 && b.nu_min <= b.nu_max)) {
    fail("coefficient_bounds", Vec2::Zero(), "bounds must satisfy 0 < min <= max");
  }

  // Obstacle: positive star radius and strictly inside B(0, R1).
  for (const auto& part : obstacle.parts()) {
    for (int i = 0; i < options.boundary_samples; ++i) {
      const double theta = 2.0 * pi * i / options.boundary_samples;
      const Vec2 p = part.point(theta);
      if (part.radius(theta) <= 0.0) {
        fail("obstacle_star_shaped", p, "non-positive radius");
        break;
      }
      if (p.norm() >= geom.R1) {
        fail("obstacle_inside_R1", p, "obstacle boundary point at |x| = " + std::to_string(p.norm()));
        break;
      }
    }
  }

  // Dense polar sampling of B(0, max(R_ray, 2 R1)).
  const double outer = std::max(geom.R_ray, 2.0 * geom.R1);
  const double h = options.gradient_step;
  bool support_reported = false;
  bool bounds_reported = false;
  bool symmetry_reported = false;
  bool gradient_reported = false;
  for (int i = 0; i <= options.radial_samples; ++i) {
    const double r = outer * i / options.radial_samples;
    const int nang = i == 0 ? 1 : options.angular_samples;
    for (int j = 0; j < nang; ++j) {
      const double theta = 2.0 * pi * (j + 0.5 * (i % 2)) / options.angular_samples;
      const Vec2 x = r * Vec2(std::cos(theta), std::sin(theta));
      const auto s = coeffs.sample(x);
      ++report.samples_checked;

      if (!symmetry_reported && std::abs(s.A(0, 1) - s.A(1, 0)) > 1e-14 * (1.0 + s.A.norm())) {
        fail("A_symmetric", x, "A(x) is not symmetric");
        symmetry_reported = true;
      }
      if (!support_reported && x.norm() > geom.R1) {
        const double dA = (s.A - Mat2::Identity()).norm();
        const double dnu = std::abs(s.nu - 1.0);
        if (dA != 0.0 || dnu != 0.0) {
          std::ostringstream d;
          d << "|A - I| = " << dA << ", |nu - 1| = " << dnu << " at |x| = " << x.norm() << " > R1";
          fail("support_within_R1", x, d.str());
          support_reported = true;
        }
      }
      if (!bounds_reported) {
        Eigen::SelfAdjointEigenSolver<Mat2> eig(0.5 * (s.A + s.A.transpose()), Eigen::EigenvaluesOnly);
        const double lo = eig.eigenvalues()(0);
        const double hi = eig.eigenvalues()(1);
        const double tol = options.bound_tolerance;
        if (lo < b.A_min - tol || hi > b.A_max + tol) {
          fail("A_bounds", x, "eigenvalues of A outside [A_min, A_max]");
          bounds_reported = true;
        } else if (s.nu < b.nu_min - tol || s.nu > b.nu_max + tol) {
          fail("nu_bounds", x, "nu outside [nu_min, nu_max]");
          bounds_reported = true;
        }
      }
      if (!gradient_reported) {
        for (int axis = 0; axis < 2; ++axis) {
          const Vec2 e = axis == 0 ? Vec2(h, 0.0) : Vec2(0.0, h);
          const auto plus = coeffs.sample(x + e);
          const auto minus = coeffs.sample(x - e);
          const Mat2 fdA = (plus.A - minus.A) / (2.0 * h);
          const double fdnu = (plus.nu - minus.nu) / (2.0 * h);
          const double errA = (fdA - s.dA[axis]).norm();
          const double errnu = std::abs(fdnu - s.dnu(axis));
          if (errA > options.gradient_tolerance * (1.0 + s.dA[axis].norm()) ||
              errnu > options.gradient_tolerance * (1.0 + std::abs(s.dnu(axis)))) {
            fail("gradient_consistency", x, "analytic gradient disagrees with central differences");
            gradient_reported = true;
            break;
          }
        }
      }
    }
  }
  return report;
}

void validate_wave(const WaveContext& wave) {
  if (!(wave.k0 > 0.0)) throw ConfigError("k0 must be positive");
  if (!(wave.k >= wave.k0)) throw ConfigError("wavenumber k must satisfy k >= k0");
}

}  // namespace helmkit
