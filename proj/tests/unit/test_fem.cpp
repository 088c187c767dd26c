#include "doctest.h"

#include <cmath>
#include <memory>

#include <Eigen/Geometry>

#include "helmkit/fem.hpp"
#include "helmkit/mie.hpp"
#include "helmkit/rng.hpp"

using namespace helmkit;

namespace {

std::shared_ptr<const FeSpace> make_space(const Obstacle& obstacle, double R, double h) {
  return std::make_shared<FeSpace>(std::make_shared<Mesh>(generate_mesh(obstacle, R, h)));
}

CVec random_vector(CounterRng& rng, int n) {
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.complex_normal();
  return v;
}

}  // namespace

TEST_CASE("quadrature rule integrates degree-4 polynomials") {
  const auto& rule = quadrature_rule();
  double wsum = 0.0;
  for (double w : rule.weight) wsum += w;
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
  // int over the unit right triangle of x^a y^b = a! b! / (a + b + 2)!
  auto fact = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  for (int a = 0; a <= 4; ++a) {
    for (int b = 0; a + b <= 4; ++b) {
      double q = 0.0;
      for (int i = 0; i < 6; ++i) {
        const double x = rule.barycentric[i][1], y = rule.barycentric[i][2];
        q += 0.5 * rule.weight[i] * std::pow(x, a) * std::pow(y, b);
      }
      CHECK(q == doctest::Approx(fact(a) * fact(b) / fact(a + b + 2)).epsilon(1e-12));
    }
  }
}

TEST_CASE("single-triangle matrices match the closed forms") {
  auto mesh = std::make_shared<Mesh>();
  mesh->R = 10.0;
  mesh->vertices = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
  mesh->tags.assign(3, VertexTag::truncation_boundary);
  mesh->triangles = {{0, 1, 2}};
  mesh->update_statistics();
  auto space = std::make_shared<FeSpace>(mesh);
  const auto sys = assemble(CoefficientField::identity(), space, build_dtn(1.0, 10.0, 0));
  const Eigen::MatrixXd S(sys.stiffness), M(sys.mass), P(sys.plain_mass);
  Eigen::Matrix3d S_ref, M_ref;
  S_ref << 1.0, -0.5, -0.5, -0.5, 0.5, 0.0, -0.5, 0.0, 0.5;
  M_ref << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  M_ref /= 24.0;
  CHECK((S - S_ref).norm() <= 1e-14);
  CHECK((M - M_ref).norm() <= 1e-15);
  CHECK((P - M_ref).norm() <= 1e-15);
}

TEST_CASE("matrix identities on a disk without obstacle") {
  auto space = make_space(Obstacle{}, 1.0, 0.15);
  const auto sys = assemble(CoefficientField::identity(), space, build_dtn(2.0, 1.0));
  const CVec ones = CVec::Ones(space->ndofs());
  CVec x(space->ndofs());
  for (int d = 0; d < space->ndofs(); ++d) x(d) = space->mesh().vertices[space->vertex(d)].x();
  CHECK(Eigen::VectorXd(sys.stiffness * ones.real()).norm() <= 1e-12);
  CHECK(ones.dot(sys.mass.cast<cplx>() * ones).real() == doctest::Approx(space->mesh().area()).epsilon(1e-12));
  // |grad x|^2 integrates to the area
  CHECK(x.real().dot(sys.stiffness * x.real()) == doctest::Approx(space->mesh().area()).epsilon(1e-12));
  CHECK(sys.energy_norm(x) == doctest::Approx(energy_norm(CoefficientField::identity(), *space, x, 2.0)).epsilon(1e-12));
}

TEST_CASE("DtN modes are capped by the boundary resolution") {
  auto space = make_space(Obstacle::disk(0.5), 1.0, 0.4);
  const auto sys = assemble(CoefficientField::identity(), space, build_dtn(3.0, 1.0, 200));
  const int nb = static_cast<int>(space->boundary_dofs().size());
  CHECK(sys.dtn.n_max == (nb - 1) / 2);
  CHECK(sys.modal.rows() == nb - (nb % 2 == 0 ? 1 : 0));
  CHECK_THROWS_AS(assemble(CoefficientField::identity(), space, build_dtn(3.0, 1.2)), ConfigError);
}

TEST_CASE("sesquilinear form: symmetry, DtN sign, Garding inequality") {
  const double k = 3.0;
  const auto coeffs = CoefficientField::nu_bump(2.0, 0.5);
  auto space = make_space(Obstacle::disk(0.3), 1.5, 0.12);
  const auto sys = assemble(coeffs, space, build_dtn(k, 1.5));
  CounterRng rng(5, 0);
  const double nu_max = coeffs.bounds().nu_max;
  for (int i = 0; i < 100; ++i) {
    const CVec u = random_vector(rng, sys.ndofs());
    const CVec v = random_vector(rng, sys.ndofs());
    // complex symmetric: a(u, v) = a(conj v, conj u)
    const cplx a = sys.form(u, v);
    const cplx b = sys.form(v.conjugate(), u.conjugate());
    CHECK(std::abs(a - b) <= 1e-10 * std::abs(a));
    CHECK(-u.dot(sys.dtn_apply(u)).real() >= -1e-10 * u.squaredNorm());
    const double E = sys.energy_norm(u);
    const double w = sys.weighted_l2_norm(u);
    CHECK(sys.form(u, u).real() >= E * E - 2.0 * k * k * w * w - 1e-9 * E * E);
    CHECK(w * w <= nu_max * sys.l2_norm(u) * sys.l2_norm(u) * (1 + 1e-12));
  }
  const auto B = sys.dtn_block();
  const CVec u = random_vector(rng, sys.ndofs());
  CVec ub(B.rows());
  const auto& bd = space->boundary_dofs();
  for (int j = 0; j < ub.size(); ++j) ub(j) = u(bd[j]);
  const CVec full = sys.dtn_apply(u);
  const CVec direct = B * ub;
  for (int j = 0; j < ub.size(); ++j) CHECK(std::abs(full(bd[j]) - direct(j)) <= 1e-12 * (1 + std::abs(direct(j))));
  CHECK((B - B.transpose()).norm() <= 1e-12 * B.norm());
}

TEST_CASE("loads are antilinear in the test function and linear in the data") {
  auto space = make_space(Obstacle{}, 1.0, 0.2);
  const auto F1 = assemble_load_source(*space, [](const Vec2&) { return cplx(1.0); });
  const auto sys = assemble(CoefficientField::identity(), space, build_dtn(2.0, 1.0));
  // F(1) reproduces the P1 mass applied to the constant function
  const Eigen::VectorXd Pone = sys.plain_mass * Eigen::VectorXd::Ones(sys.ndofs());
  CHECK((F1.real() - Pone).norm() <= 1e-12);
  const auto Fi = assemble_load_source(*space, [](const Vec2& x) { return cplx(0.0, 2.0) * x.x(); });
  const auto Fx = assemble_load_source(*space, [](const Vec2& x) { return cplx(x.x()); });
  CHECK((Fi - cplx(0.0, 2.0) * Fx).norm() <= 1e-14);
}

TEST_CASE("solver: zero data, residual, adjoint relations") {
  const double k = 4.0;
  const auto coeffs = CoefficientField::nu_bump(2.0, 0.5);
  auto space = make_space(Obstacle::disk(0.3), 1.5, 0.1);
  auto sys = assemble(coeffs, space, build_dtn(k, 1.5));
  GalerkinSolver solver(sys);
  CHECK(solver.solve(CVec::Zero(sys.ndofs())).norm() == 0.0);

  CounterRng rng(9, 0);
  const CVec f = random_vector(rng, sys.ndofs());
  const CVec g = random_vector(rng, sys.ndofs());
  const CVec Mf = sys.plain_mass.cast<cplx>() * f;
  const CVec Mg = sys.plain_mass.cast<cplx>() * g;
  const CVec u = solver.solve(Mf);
  CHECK(solver.residual(u, Mf) <= 1e-10);
  const CVec w = solver.solve_hermitian(Mg);
  CHECK((sys.apply(w.conjugate()).conjugate() - Mg).norm() <= 1e-10 * Mg.norm());
  // <S f, g> = <f, S* g> in L2
  const cplx lhs = (sys.plain_mass.cast<cplx>() * g).dot(u);
  const cplx rhs = w.dot(Mf);
  CHECK(std::abs(lhs - rhs) <= 1e-9 * std::abs(lhs));

  // a real load: the adjoint solution is the conjugate of the forward one
  const CVec real_load = Mf.real().cast<cplx>();
  sys.rhs = real_load;
  const auto fwd = solve(sys);
  const auto adj = solve_adjoint(sys, real_load);
  CHECK(fwd.residual <= 1e-10);
  CHECK((adj.dofs - fwd.dofs.conjugate()).norm() <= 1e-10 * fwd.dofs.norm());
}

TEST_CASE("reference disk solution") {
  const SoundSoftDisk mie(3.0, 0.5, 0.4);
  for (double th : {0.0, 1.0, 2.5}) CHECK(std::abs(mie.value(0.5 * Vec2(std::cos(th), std::sin(th)))) <= 1e-12);
  // Helmholtz equation and gradient by finite differences
  const Vec2 x(0.9, -0.7);
  const double d = 1e-4;
  const Vec2 ex(d, 0.0), ey(0.0, d);
  const cplx lap = (mie.value(x + ex) + mie.value(x - ex) + mie.value(x + ey) + mie.value(x - ey) - 4.0 * mie.value(x)) / (d * d);
  CHECK(std::abs(lap + 9.0 * mie.value(x)) <= 1e-5);
  const auto g = mie.gradient(x);
  CHECK(std::abs(g(0) - (mie.value(x + ex) - mie.value(x - ex)) / (2 * d)) <= 1e-7);
  CHECK(std::abs(g(1) - (mie.value(x + ey) - mie.value(x - ey)) / (2 * d)) <= 1e-7);
  // outgoing: r^1/2 (d/dr - i k) u^s -> 0
  for (double r : {50.0, 200.0}) {
    const Vec2 y = r * Vec2(std::cos(0.3), std::sin(0.3));
    const double h = 1e-3;
    const cplx dr = (mie.scattered(y * (1 + h / r)) - mie.scattered(y * (1 - h / r))) / (2 * h);
    const double sommerfeld = std::sqrt(r) * std::abs(dr - cplx(0.0, 3.0) * mie.scattered(y));
    CHECK(sommerfeld <= 2.0 / r);
  }
}

TEST_CASE("sound-soft scattering converges to the reference solution") {
  const double k = 3.0, a = 0.5, R = 1.5;
  const SoundSoftDisk mie(k, a, 0.4);
  const auto exact = [&](const Vec2& x) { return mie.value(x); };
  const auto grad = [&](const Vec2& x) { return CGrad(mie.gradient(x)); };
  const auto obstacle = Obstacle::disk(a);
  double prev_l2 = 0.0, prev_e = 0.0;
  for (double h : {0.08, 0.04}) {
    auto space = make_space(obstacle, R, h);
    auto sys = assemble(CoefficientField::identity(), space, build_dtn(k, R));
    sys.rhs = assemble_load_scattering(sys, PlaneWave{k, 0.4});
    const auto sol = solve(sys);
    const auto err = field_errors(CoefficientField::identity(), *space, sol.dofs, k, exact, grad);
    const CVec best = energy_projection(sys, CoefficientField::identity(), exact, grad);
    const auto best_err = field_errors(CoefficientField::identity(), *space, best, k, exact, grad);
    CHECK(best_err.energy_error <= err.energy_error * (1 + 1e-9));
    CHECK(err.l2_error / err.l2_exact <= 0.05);
    if (prev_l2 > 0.0) {
      CHECK(prev_l2 / err.l2_error >= 3.0);
      CHECK(prev_e / err.energy_error >= 1.7);
    }
    prev_l2 = err.l2_error;
    prev_e = err.energy_error;
  }
}

TEST_CASE("without an obstacle the total field is the incident wave") {
  const double k = 2.0, R = 1.0;
  const PlaneWave wave{k, 1.1};
  auto space = make_space(Obstacle{}, R, 0.05);
  auto sys = assemble(CoefficientField::identity(), space, build_dtn(k, R));
  sys.rhs = assemble_load_scattering(sys, wave);
  const auto sol = solve(sys);
  const auto err = field_errors(CoefficientField::identity(), *space, sol.dofs, k,
                                [&](const Vec2& x) { return wave.value(x); },
                                [&](const Vec2& x) { return CGrad(wave.gradient(x)); });
  CHECK(err.l2_error / err.l2_exact <= 5e-3);
}

TEST_CASE("nodal interpolation error") {
  const auto coeffs = CoefficientField::identity();
  const SmoothFunction lin{[](const Vec2& x) { return 1.0 + 2.0 * x.x() - x.y(); },
                           [](const Vec2&) { return Vec2(2.0, -1.0); }, [](const Vec2&) { return Mat2::Zero().eval(); }};
  const auto mesh = generate_mesh(Obstacle::disk(0.5), 1.5, 0.1);
  const auto e0 = nodal_interpolation_error(coeffs, mesh, lin);
  CHECK(e0.l2 <= 1e-13);
  CHECK(e0.energy <= 1e-12);

  const SmoothFunction quad{[](const Vec2& x) { return x.x() * x.x(); }, [](const Vec2& x) { return Vec2(2.0 * x.x(), 0.0); },
                            [](const Vec2&) {
                              Mat2 H = Mat2::Zero();
                              H(0, 0) = 2.0;
                              return H;
                            }};
  const Mesh m1 = generate_mesh(Obstacle{}, 1.0, 0.1);
  const auto c1 = nodal_interpolation_error(coeffs, m1, quad);
  const auto c2 = nodal_interpolation_error(coeffs, refine_uniform(m1, Obstacle{}).mesh, quad);
  CHECK(c1.l2 / c2.l2 >= 3.4);
  CHECK(c1.l2 / c2.l2 <= 4.6);
  CHECK(std::log(c1.l2 / c2.l2) / std::log(c1.h / c2.h) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(std::log(c1.energy / c2.energy) / std::log(c1.h / c2.h) == doctest::Approx(1.0).epsilon(0.1));
  CHECK(c1.ratio <= 1.0);
  // full H^2 norm of x^2 on the unit disk: int x^4 + 4 x^2 + 4 = pi/8 + pi + 4 pi
  CHECK(c1.h2_norm == doctest::Approx(std::sqrt(pi / 8 + 5 * pi)).epsilon(0.01));
}

TEST_CASE("discrete H2 norm by gradient recovery") {
  const auto mesh = generate_mesh(Obstacle{}, 1.0, 0.03);
  CVec v(static_cast<int>(mesh.vertices.size()));
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec2& x = mesh.vertices[i];
    v(static_cast<int>(i)) = x.x() * x.x() + x.x() * x.y();
  }
  const auto n = discrete_h2_norm(mesh, v, 0.8);
  const double area = pi * 0.64;
  // v_xx = 2, v_xy = 1, v_yy = 0
  CHECK(n.hessian == doctest::Approx(std::sqrt(5.0 * area)).epsilon(0.03));
  // |grad v|^2 = (2x + y)^2 + x^2 integrates to (5 + 1) pi r^4 / 4
  CHECK(n.gradient == doctest::Approx(std::sqrt(6.0 * pi * std::pow(0.8, 4) / 4.0)).epsilon(0.03));
  CHECK(n.full() > n.hessian);
}

TEST_CASE("assembled action matches direct quadrature of the form") {
  const double k = 2.5, R = 1.2;
  const auto coeffs = CoefficientField::anisotropic_bump(1.5, 0.8, 0.3, 0.6);
  auto space = make_space(Obstacle::disk(0.3), R, 0.15);
  const auto sys = assemble(coeffs, space, build_dtn(k, R));
  const auto& mesh = space->mesh();
  const auto& rule = quadrature_rule();
  CounterRng rng(17, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const CVec u = random_vector(rng, sys.ndofs());
    const CVec v = random_vector(rng, sys.ndofs());
    const CVec uv = space->to_vertices(u), vv = space->to_vertices(v);
    cplx volume = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      const auto& T = mesh.triangles[t];
      const Vec2 p0 = mesh.vertices[T[0]], p1 = mesh.vertices[T[1]], p2 = mesh.vertices[T[2]];
      Eigen::Matrix2d J;
      J << p1.x() - p0.x(), p2.x() - p0.x(), p1.y() - p0.y(), p2.y() - p0.y();
      const Eigen::Matrix2d Jit = J.inverse().transpose();
      const CGrad gu = Jit.cast<cplx>() * CGrad(uv(T[1]) - uv(T[0]), uv(T[2]) - uv(T[0]));
      const CGrad gv = Jit.cast<cplx>() * CGrad(vv(T[1]) - vv(T[0]), vv(T[2]) - vv(T[0]));
      for (int q = 0; q < 6; ++q) {
        const auto& l = rule.barycentric[q];
        const Vec2 x = l[0] * p0 + l[1] * p1 + l[2] * p2;
        const cplx ux = l[0] * uv(T[0]) + l[1] * uv(T[1]) + l[2] * uv(T[2]);
        const cplx vx = l[0] * vv(T[0]) + l[1] * vv(T[1]) + l[2] * vv(T[2]);
        const CGrad Agu = coeffs.A(x).cast<cplx>() * gu;
        volume += rule.weight[q] * 0.5 * J.determinant() *
                  (Agu(0) * std::conj(gv(0)) + Agu(1) * std::conj(gv(1)) - k * k * coeffs.nu(x) * ux * std::conj(vx));
      }
    }
    std::vector<cplx> ub, vb;
    for (int d : space->boundary_dofs()) {
      ub.push_back(u(d));
      vb.push_back(v(d));
    }
    const auto gu = FourierTrace::from_samples(R, sys.dtn.n_max, ub);
    const auto gv = FourierTrace::from_samples(R, sys.dtn.n_max, vb);
    const cplx direct = volume - dtn_pairing(sys.dtn, gu, gv);
    CHECK(std::abs(sys.form(u, v) - direct) <= 1e-10 * std::abs(direct));
  }
}

TEST_CASE("stiffness coercivity and norms of simple functions") {
  const auto coeffs = CoefficientField::anisotropic_bump(1.5, 0.6, 0.2, 0.5);
  auto space = make_space(Obstacle{}, 1.0, 0.12);
  const auto sys = assemble(coeffs, space, build_dtn(3.0, 1.0));
  CounterRng rng(3, 0);
  const double A_min = coeffs.bounds().A_min;
  const CoefficientField identity = CoefficientField::identity();
  const auto plain = assemble(identity, space, build_dtn(3.0, 1.0));
  for (int i = 0; i < 20; ++i) {
    Eigen::VectorXd v(sys.ndofs());
    for (int d = 0; d < v.size(); ++d) v(d) = rng.normal();
    CHECK(v.dot(sys.stiffness * v) >= A_min * v.dot(plain.stiffness * v) * (1 - 1e-12));
    const CVec c = random_vector(rng, sys.ndofs());
    CHECK(sys.energy_norm(c) == doctest::Approx(energy_norm(coeffs, *space, c, 3.0)).epsilon(1e-10));
  }
  const CVec c = CVec::Constant(plain.ndofs(), cplx(0.6, 0.8));
  CHECK(energy_norm(identity, *space, c, 3.0) == doctest::Approx(3.0 * std::sqrt(space->mesh().area())).epsilon(1e-12));
}

TEST_CASE("rotating incidence and mesh together leaves the discrete solution norm unchanged") {
  const double k = 3.0, R = 1.5, phi = 0.37;
  const auto base = generate_mesh(Obstacle::disk(0.5), R, 0.1);
  auto rotated = std::make_shared<Mesh>(base);
  const Eigen::Rotation2Dd rot(phi);
  for (auto& x : rotated->vertices) x = rot * x;
  double norms[2];
  int i = 0;
  for (auto mesh : {std::make_shared<Mesh>(base), rotated}) {
    auto space = std::make_shared<FeSpace>(mesh);
    auto sys = assemble(CoefficientField::identity(), space, build_dtn(k, R));
    sys.rhs = assemble_load_scattering(sys, PlaneWave{k, 0.2 + (i == 1 ? phi : 0.0)});
    norms[i++] = sys.energy_norm(solve(sys).dofs);
  }
  CHECK(std::abs(norms[0] - norms[1]) <= 1e-10 * norms[0]);
}

TEST_CASE("manufactured compactly supported field converges at second order") {
  const double k = 4.0, rho = 0.8;
  const auto u = [&](const Vec2& x) -> cplx {
    const double s = x.squaredNorm() / (rho * rho);
    return s < 1.0 ? std::pow(1.0 - s, 4) : 0.0;
  };
  const auto grad = [&](const Vec2& x) -> CGrad {
    const double s = x.squaredNorm() / (rho * rho);
    if (s >= 1.0) return CGrad::Zero();
    const Vec2 g = -8.0 / (rho * rho) * std::pow(1.0 - s, 3) * x;
    return g.cast<cplx>();
  };
  // f = -Laplace u - k^2 u for the radial profile (1 - r^2/rho^2)^4
  const auto f = [&](const Vec2& x) -> cplx {
    const double s = x.squaredNorm() / (rho * rho);
    if (s >= 1.0) return 0.0;
    const double lap = -16.0 / (rho * rho) * std::pow(1.0 - s, 3) + 48.0 * x.squaredNorm() / std::pow(rho, 4) * std::pow(1.0 - s, 2);
    return -lap - k * k * std::pow(1.0 - s, 4);
  };
  std::vector<double> hs, errs;
  for (double h : {0.1, 0.05, 0.025}) {
    auto space = make_space(Obstacle{}, 1.0, h);
    auto sys = assemble(CoefficientField::identity(), space, build_dtn(k, 1.0));
    sys.rhs = assemble_load_source(*space, f);
    const auto sol = solve(sys);
    const auto e = field_errors(CoefficientField::identity(), *space, sol.dofs, k, u, grad);
    hs.push_back(space->mesh().h_fem);
    errs.push_back(e.l2_error);
  }
  const double order = std::log(errs[1] / errs[2]) / std::log(hs[1] / hs[2]);
  CHECK(order >= 1.8);
  CHECK(order <= 2.3);
}

TEST_CASE("Galerkin orthogonality against a refined reference") {
  const double k = 3.0;
  const auto coeffs = CoefficientField::nu_bump(2.0, 0.5);
  const auto obstacle = Obstacle{};
  auto coarse_mesh = std::make_shared<Mesh>(generate_mesh(obstacle, 1.0, 0.2));
  auto refined = refine_uniform(*coarse_mesh, obstacle);
  auto coarse = std::make_shared<FeSpace>(coarse_mesh);
  auto fine = std::make_shared<FeSpace>(std::make_shared<Mesh>(refined.mesh));
  const auto source = [](const Vec2& x) { return cplx(std::exp(-8.0 * (x - Vec2(0.2, 0.1)).squaredNorm())); };
  auto sc = assemble(coeffs, coarse, build_dtn(k, 1.0));
  sc.rhs = assemble_load_source(*coarse, source);
  // the coarse DtN truncation is shared so the two forms agree on coarse functions
  auto sf = assemble(coeffs, fine, sc.dtn);
  sf.rhs = assemble_load_source(*fine, source);
  const CVec uc = solve(sc).dofs;
  const CVec uf = solve(sf).dofs;
  const Eigen::MatrixXd P = Eigen::MatrixXd(refined.prolongation);
  auto lift = [&](const CVec& c) {
    const CVec vert = coarse->to_vertices(c);
    CVec out(static_cast<int>(P.rows()));
    out.real() = P * vert.real();
    out.imag() = P * vert.imag();
    return fine->from_vertices(out);
  };
  const CVec e = uf - lift(uc);
  CounterRng rng(23, 0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const CVec v = lift(random_vector(rng, coarse->ndofs()));
    worst = std::max(worst, std::abs(sf.form(e, v)) / (sf.energy_norm(e) * sf.energy_norm(v)));
  }
  // boundary snapping makes the spaces only nearly nested
  CHECK(worst <= 0.05);
}

TEST_CASE("unit-disk scattering at kR = 8 against the series solution") {
  const double k = 4.0, a = 1.0, R = 2.0;
  const double h = 0.5 / (k * k);
  const SoundSoftDisk mie(k, a, 0.0);
  auto space = make_space(Obstacle::disk(a), R, h);
  auto sys = assemble(CoefficientField::identity(), space, build_dtn(k, R));
  sys.rhs = assemble_load_scattering(sys, PlaneWave{k, 0.0});
  const auto sol = solve(sys);
  const auto err = field_errors(CoefficientField::identity(), *space, sol.dofs, k,
                                [&](const Vec2& x) { return mie.value(x); },
                                [&](const Vec2& x) { return CGrad(mie.gradient(x)); });
  MESSAGE("relative L2 error " << err.l2_error / err.l2_exact);
  CHECK(err.l2_error / err.l2_exact <= 0.05);
}
