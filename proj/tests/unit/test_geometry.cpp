#include "doctest.h"

#include <cmath>

#include "helmkit/geometry.hpp"
#include "helmkit/rng.hpp"

using namespace helmkit;

TEST_CASE("signed distance to a unit disk") {
  const auto disk = Obstacle::disk(1.0);
  CHECK(signed_distance(disk, Vec2(2.0, 0.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(signed_distance(disk, Vec2(0.0, 0.0)) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(signed_distance(disk, Vec2(0.0, 0.5)) < 0.0);
}

TEST_CASE("signed distance vanishes on a star-shaped boundary") {
  const auto star = Obstacle::star({1.0, 0.0, 0.0, 0.3, 0.0});  // 1 + 0.3 cos 2 theta
  for (int i = 0; i < 360; ++i) {
    const double theta = 2.0 * pi * i / 360.0;
    const double rho = 1.0 + 0.3 * std::cos(2.0 * theta);
    const Vec2 x = rho * Vec2(std::cos(theta), std::sin(theta));
    CHECK(std::abs(signed_distance(star, x)) <= 1e-12);
    CHECK(signed_distance(star, 1.1 * x) > 0.0);
    CHECK(signed_distance(star, 0.9 * x) < 0.0);
  }
}

TEST_CASE("signed distance approximates the Euclidean distance near the curve") {
  const auto star = Obstacle::star({1.0, 0.0, 0.0, 0.3, 0.0});
  const auto& part = star.parts()[0];
  for (double theta : {0.1, 0.7, 2.0, 4.0}) {
    const Vec2 p = part.point(theta);
    const Vec2 t = part.tangent(theta);
    const Vec2 n = Vec2(t.y(), -t.x()).normalized();
    const double eps = 1e-4;
    CHECK(signed_distance(star, p + eps * n) == doctest::Approx(eps).epsilon(1e-3));
    CHECK(signed_distance(star, p - eps * n) == doctest::Approx(-eps).epsilon(1e-3));
  }
}

TEST_CASE("boundary normal of the unit disk") {
  const auto disk = Obstacle::disk(1.0);
  const Vec2 n1 = boundary_normal(disk, Vec2(1.0, 0.0));
  CHECK(n1.x() == doctest::Approx(1.0));
  CHECK(n1.y() == doctest::Approx(0.0));
  const Vec2 n2 = boundary_normal(disk, Vec2(0.0, 1.0));
  CHECK(n2.x() == doctest::Approx(0.0));
  CHECK(n2.y() == doctest::Approx(1.0));
  CHECK_THROWS_AS(boundary_normal(disk, Vec2(2.0, 0.0)), ConfigError);
}

TEST_CASE("boundary normal of a star shape is orthogonal to the analytic tangent") {
  const auto star = Obstacle::star({1.0, 0.0, 0.0, 0.3, 0.0});
  for (double theta : {pi / 4, 0.3, 1.9, 5.5}) {
    const double rho = 1.0 + 0.3 * std::cos(2.0 * theta);
    const double drho = -0.6 * std::sin(2.0 * theta);
    const Vec2 x = rho * Vec2(std::cos(theta), std::sin(theta));
    const Vec2 tangent = drho * Vec2(std::cos(theta), std::sin(theta)) + rho * Vec2(-std::sin(theta), std::cos(theta));
    const Vec2 n = boundary_normal(star, x);
    CHECK(std::abs(n.dot(tangent)) <= 1e-10);
    CHECK(n.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(n.dot(x) > 0.0);  // outward
  }
}

TEST_CASE("star shape derivatives agree with finite differences") {
  const StarShape s(Vec2(0.1, -0.2), {0.6, 0.05, -0.02, 0.03, 0.01});
  const double h = 1e-5;
  for (double theta : {0.0, 1.0, 2.5, 4.0}) {
    const double fd1 = (s.radius(theta + h) - s.radius(theta - h)) / (2 * h);
    const double fd2 = (s.radius_derivative(theta + h) - s.radius_derivative(theta - h)) / (2 * h);
    CHECK(s.radius_derivative(theta) == doctest::Approx(fd1).epsilon(1e-8));
    CHECK(s.radius_second_derivative(theta) == doctest::Approx(fd2).epsilon(1e-8));
  }
}

TEST_CASE("validation accepts the Euclidean configuration") {
  const auto report = validate_configuration(CoefficientField::identity(1.0), Obstacle::none(), {1.0, 2.0, 4.0});
  CHECK(report.passed());
  CHECK(report.samples_checked > 1000);
}

TEST_CASE("validation accepts the catalog presets") {
  CHECK(validate_configuration(CoefficientField::nu_bump(2.0, 0.5), Obstacle::none(), {1.0, 2.0, 4.0}).passed());
  CHECK(validate_configuration(CoefficientField::anisotropic_bump(2.0, 0.5, 0.4, 0.8), Obstacle::disk(0.3),
                               {1.0, 2.0, 4.0})
            .passed());
}

TEST_CASE("validation names a support violation") {
  auto wide = CoefficientField::nu_bump(2.0, 3.0);
  const auto report = validate_configuration(wide, Obstacle::none(), {1.0, 2.0, 4.0});
  REQUIRE_FALSE(report.passed());
  CHECK(report.first_failure() == "support_within_R1");
  CHECK(report.violations.front().point.norm() > 1.0);
}

TEST_CASE("validation rejects an obstacle outside B(0, R1)") {
  const auto report = validate_configuration(CoefficientField::identity(), Obstacle::disk(1.5), {1.0, 2.0, 4.0});
  REQUIRE_FALSE(report.passed());
  CHECK(report.first_failure() == "obstacle_inside_R1");
}

TEST_CASE("validation rejects misordered radii and inconsistent gradients") {
  CHECK(validate_configuration(CoefficientField::identity(), Obstacle::none(), {1.0, 3.0, 2.0}).first_failure() ==
        "geometry_ordering");

  // nu has a bump but the declared gradient is zero.
  auto base = CoefficientField::nu_bump(2.0, 0.5);
  CoefficientField broken(
      "broken",
      [base](const Vec2& x) {
        auto s = base.sample(x);
        s.dnu = Vec2::Zero();
        return s;
      },
      1.0, base.bounds());
  CHECK(validate_configuration(broken, Obstacle::none(), {1.0, 2.0, 4.0}).first_failure() ==
        "gradient_consistency");
}

TEST_CASE("validation flags bounds that the field exceeds") {
  auto base = CoefficientField::nu_bump(3.0, 0.5);
  CoefficientBounds tight = base.bounds();
  tight.nu_max = 2.0;
  CoefficientField lying("lying", [base](const Vec2& x) { return base.sample(x); }, 1.0, tight);
  CHECK(validate_configuration(lying, Obstacle::none(), {1.0, 2.0, 4.0}).first_failure() == "nu_bounds");
}

TEST_CASE("preset gradients match central differences") {
  const auto fields = {CoefficientField::nu_bump(2.0, 0.5), CoefficientField::anisotropic_bump(3.0, 0.5, 0.7, 0.9)};
  CounterRng rng(7, 0);
  const double h = 1e-5;
  for (const auto& f : fields) {
    for (int i = 0; i < 200; ++i) {
      const Vec2 x(rng.uniform(-1, 1), rng.uniform(-1, 1));
      const auto s = f.sample(x);
      for (int a = 0; a < 2; ++a) {
        const Vec2 e = a == 0 ? Vec2(h, 0) : Vec2(0, h);
        const double fdnu = (f.nu(x + e) - f.nu(x - e)) / (2 * h);
        const Mat2 fdA = (f.A(x + e) - f.A(x - e)) / (2 * h);
        CHECK(std::abs(fdnu - s.dnu(a)) <= 1e-6 * std::max(1.0, std::abs(s.dnu(a))));
        CHECK((fdA - s.dA[a]).norm() <= 1e-6 * std::max(1.0, s.dA[a].norm()));
      }
    }
  }
}

TEST_CASE("bump profile") {
  CHECK(bump_profile(0.0) == doctest::Approx(1.0));
  CHECK(bump_profile(1.0) == 0.0);
  CHECK(bump_profile(-1.2) == 0.0);
  const double h = 1e-6;
  CHECK(bump_profile_derivative(0.5) ==
        doctest::Approx((bump_profile(0.5 + h) - bump_profile(0.5 - h)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("wave context") {
  CHECK_NOTHROW(validate_wave({5.0, 1.0}));
  CHECK_THROWS_AS(validate_wave({0.5, 1.0}), ConfigError);
  CHECK_THROWS_AS(validate_wave({1.0, 0.0}), ConfigError);
}
