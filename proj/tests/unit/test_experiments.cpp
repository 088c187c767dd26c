#include "doctest.h"

#include <cmath>
#include <vector>

#include "helmkit/experiments.hpp"
#include "helmkit/radial.hpp"

using namespace helmkit;

namespace {

Scene euclid(double R) { return {CoefficientField::identity(R), Obstacle::none(), R}; }
Scene disk_scene() { return {CoefficientField::identity(), Obstacle::disk(1.0), 2.0}; }

ConstantsLedger disk_ledger() {
  ConstantsLedger l;
  l.C_int_tilde = 0.26;
  l.C_DtN_tilde = 1.21;
  l.C_H2 = 0.61;
  l.k0 = 2.0;
  l.L_ray = std::sqrt(15.0);
  l.derive();
  return l;
}

}  // namespace

TEST_CASE("smooth step and cutoff") {
  CHECK(smooth_step(-1.0) == 0.0);
  CHECK(smooth_step(2.0) == 1.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
  for (double t = 0.05; t < 1.0; t += 0.05) CHECK(smooth_step(t) + smooth_step(1.0 - t) == doctest::Approx(1.0));
  const Cutoff chi{0.8, 1.0, 2.0};
  CHECK(chi(0.3) == 2.0);
  CHECK(chi(0.8) == 2.0);
  CHECK(chi(1.0) == 0.0);
  CHECK(chi(0.9) == doctest::Approx(1.0));
  double prev = chi(0.8);
  for (double r = 0.81; r <= 1.0; r += 0.01) {
    CHECK(chi(r) <= prev);
    prev = chi(r);
  }
}

TEST_CASE("power iteration on a diagonal operator") {
  Eigen::VectorXd d(5);
  d << 1.0, 9.0, 4.0, 0.25, 8.0;
  auto normal = [&](const CVec& x) { return CVec(d.cast<cplx>().cwiseProduct(x)); };
  auto inner = [](const CVec& a, const CVec& b) { return b.dot(a); };
  const auto r = power_iteration(normal, inner, CVec::Ones(5), 1e-12, 10000);
  CHECK(r.converged);
  CHECK(r.sigma == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(static_cast<int>(r.history.size()) == r.iterations);
  CHECK_THROWS_AS(power_iteration(normal, inner, CVec::Zero(5), 1e-12, 10), ConfigError);
  const auto capped = power_iteration(normal, inner, CVec::Ones(5), 1e-15, 3);
  CHECK_FALSE(capped.converged);
}

TEST_CASE("power iteration matches a dense SVD for the 1-D outgoing kernel") {
  const auto c = free_resolvent_1d_check(10.0, 400, 1e-10);
  CHECK(c.power == doctest::Approx(c.dense).epsilon(1e-4));
  CHECK(c.power <= c.dense * (1.0 + 1e-12));
}

TEST_CASE("resolvent norm: trivial cutoff, scaling, seeds") {
  const auto scene = euclid(1.0);
  const Cutoff chi{0.8, 1.0, 1.0};
  ResolventOptions opt;
  opt.tolerance = 1e-8;
  opt.resolution = 0.01;
  CHECK(estimate_resolvent_norm(scene, 5.0, {0.8, 1.0, 0.0}, opt).norm == 0.0);

  const auto full = estimate_resolvent_norm(scene, 5.0, chi, opt);
  CHECK(full.method == "radial");
  CHECK(full.converged);
  const auto half = estimate_resolvent_norm(scene, 5.0, {0.8, 1.0, 0.5}, opt);
  CHECK(half.norm == doctest::Approx(0.25 * full.norm).epsilon(1e-8));

  auto other = opt;
  other.seed = 99;
  CHECK(estimate_resolvent_norm(scene, 5.0, chi, other).norm == doctest::Approx(full.norm).epsilon(1e-2));
  CHECK(estimate_resolvent_norm(scene, 5.0, chi, opt, Executor(3)).norm == full.norm);

  CHECK_THROWS_AS(estimate_resolvent_norm(scene, 5.0, {0.8, 1.5, 1.0}, opt), ConfigError);
  CHECK_THROWS_AS(estimate_resolvent_norm(scene, 0.0, chi, opt), ConfigError);
  auto few = opt;
  few.max_iterations = 2;
  CHECK_THROWS_AS(estimate_resolvent_norm(scene, 5.0, chi, few), NumericalError);
}

TEST_CASE("radial and mesh resolvent agree") {
  const auto scene = euclid(1.0);
  const Cutoff chi{0.6, 1.0, 1.0};
  ResolventOptions opt;
  opt.tolerance = 1e-7;
  opt.resolution = 0.03;
  opt.method = ResolventMethod::mesh;
  const auto mesh = estimate_resolvent_norm(scene, 3.0, chi, opt);
  opt.method = ResolventMethod::radial;
  opt.resolution = 0.002;
  const auto radial = estimate_resolvent_norm(scene, 3.0, chi, opt);
  CHECK(mesh.method == "mesh");
  CHECK(mesh.norm == doctest::Approx(radial.norm).epsilon(0.02));

  const Scene star{CoefficientField::identity(), Obstacle::star({0.4, 0.05}), 1.0};
  CHECK_THROWS_AS(estimate_resolvent_norm(star, 3.0, chi, opt), ConfigError);
}

TEST_CASE("resolvent scan reference columns") {
  const Cutoff chi{0.8, 1.0, 1.0};
  ResolventOptions opt;
  opt.resolution = 0.005;
  const auto scan = resolvent_scan(euclid(1.0), {4.0, 6.0}, chi, 0, 1.0, opt);
  REQUIRE(scan.rows.size() == 2);
  for (const auto& row : scan.rows) {
    CHECK(row.scaled == doctest::Approx(row.k * row.norm));
    CHECK(row.upper_ref == doctest::Approx(2.0 / M_PI));
    CHECK(row.lower_ref == doctest::Approx(1.6 / M_PI));
    CHECK(row.converged);
  }
  const auto s1 = resolvent_scan(euclid(1.0), {4.0}, chi, 1, 1.0, opt);
  CHECK(s1.rows[0].upper_ref == doctest::Approx(2.0 * std::sqrt(2.0) / M_PI));
  CHECK(s1.rows[0].lower_ref == 0.0);
  CHECK_THROWS_AS(resolvent_scan(euclid(1.0), {4.0}, chi, 2, 1.0, opt), ConfigError);
}

TEST_CASE("quasimode ratio") {
  const auto q = quasimode_lower_bound(1.0, 0.1, 0.01);
  CHECK(q.bound == doctest::Approx(2.0 * 0.8 / (0.01 * M_PI)));
  CHECK(q.ratio >= 50.9);
  CHECK(std::abs(q.f_norm_squared - M_PI / (4.0 * q.mu)) <= 1e-8);
  CHECK(q.f_norm_identity == doctest::Approx(M_PI / (4.0 * q.mu)));
  const auto q2 = quasimode_lower_bound(1.0, 0.1, 0.005);
  CHECK(std::abs(q2.ratio / q.ratio - 2.0) <= 2e-10);
  CHECK(q.x.size() == 201);
  CHECK(q.u.front() == 0.0);
  CHECK(q.u.back() == 0.0);
  CHECK_THROWS_AS(quasimode_lower_bound(1.0, 0.5, 0.01), ConfigError);
  CHECK_THROWS_AS(quasimode_lower_bound(1.0, 0.1, 0.0), ConfigError);
}

TEST_CASE("eta decreases under refinement") {
  const auto coarse = estimate_eta(disk_scene(), 2.0, 0.4, 3, 5);
  const auto fine = estimate_eta(disk_scene(), 2.0, 0.2, 3, 5);
  REQUIRE(coarse.ratios.size() == 3);
  CHECK(fine.eta <= coarse.eta * 1.05);
  CHECK(fine.eta > 0.0);
  for (std::size_t i = 1; i < coarse.running.size(); ++i) CHECK(coarse.running[i] >= coarse.running[i - 1]);
  const auto again = estimate_eta(disk_scene(), 2.0, 0.4, 3, 5);
  CHECK(again.ratios == coarse.ratios);
  CHECK_THROWS_AS(estimate_eta(disk_scene(), 2.0, 0.4, 0, 5), ConfigError);
}

TEST_CASE("quasioptimality rows") {
  const auto ledger = disk_ledger();
  const auto table = quasioptimality_study(disk_scene(), {3.0, 2.0}, {0.1, 0.2}, ledger, 0.0, Executor(2));
  REQUIRE(table.rows.size() == 4);
  CHECK(table.quasioptimality_constant == doctest::Approx(2.0 * (1.0 + ledger.C_DtN)));
  CHECK(table.rows[0].k == 2.0);
  CHECK(table.rows[0].h_target == 0.2);
  CHECK(table.rows[3].k == 3.0);
  for (const auto& row : table.rows) {
    CHECK_FALSE(row.failed);
    CHECK(row.reference == "series");
    CHECK(row.ratio >= 1.0 - 1e-9);
    CHECK(row.best_error <= row.interpolation_error * (1.0 + 1e-9));
    CHECK(row.admissible == (mesh_threshold_rhs(ledger, row.k, row.h) <= 1.0));
  }
  // Serial and parallel runs agree exactly.
  const auto serial = quasioptimality_study(disk_scene(), {3.0, 2.0}, {0.1, 0.2}, ledger);
  for (std::size_t i = 0; i < table.rows.size(); ++i) CHECK(serial.rows[i].energy_error == table.rows[i].energy_error);
}

TEST_CASE("quasioptimality with a refined-mesh reference") {
  const Scene bump{CoefficientField::nu_bump(0.5, 0.5), Obstacle::none(), 1.0};
  const auto table = quasioptimality_study(bump, {2.0}, {0.2}, disk_ledger());
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0].reference == "refined");
  CHECK(table.rows[0].ratio >= 1.0 - 1e-9);
  CHECK(table.rows[0].energy_error > 0.0);
}

TEST_CASE("fitted exponent and H2 scaling rows") {
  CHECK(fitted_exponent({1.0, 2.0, 4.0}, {3.0, 6.0, 12.0}) == doctest::Approx(1.0));
  CHECK(fitted_exponent({2.0, 3.0, 5.0}, {4.0, 9.0, 25.0}) == doctest::Approx(2.0));
  const Scene scene{CoefficientField::identity(), Obstacle::disk(0.5), 1.5};
  const auto a = h2_scaling_study(scene, {2.0, 3.0}, disk_ledger(), 1.0, 2, 3);
  const auto b = h2_scaling_study(scene, {2.0, 3.0}, disk_ledger(), 1.0, 2, 3, Executor(2));
  REQUIRE(a.rows.size() == 2);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].ratio == doctest::Approx(a.rows[i].h2_norm / (a.rows[i].k * a.rows[i].f_norm)));
    CHECK(a.rows[i].ratio > 0.0);
    CHECK(a.rows[i].h2_norm == b.rows[i].h2_norm);
  }
}
