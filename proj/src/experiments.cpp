#include "helmkit/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include <Eigen/SVD>
#include <Eigen/SparseCholesky>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "helmkit/mie.hpp"
#include "helmkit/radial.hpp"
#include "helmkit/rng.hpp"

namespace helmkit {

namespace {

bool centred_disk(const Obstacle& obstacle) {
  if (obstacle.empty()) return true;
  if (obstacle.parts().size() != 1) return false;
  const auto& p = obstacle.parts()[0];
  return p.is_circle() && p.center().norm() == 0.0;
}

double disk_radius(const Obstacle& obstacle) { return obstacle.empty() ? 0.0 : obstacle.parts()[0].radius(0.0); }

CVec real_times(const RealSparse& A, const CVec& u) {
  CVec out(A.rows());
  out.real() = A * u.real();
  out.imag() = A * u.imag();
  return out;
}

CVec ldlt_solve(const Eigen::SimplicialLDLT<RealSparse>& ldlt, const CVec& b) {
  CVec out(b.size());
  out.real() = ldlt.solve(b.real().eval());
  out.imag() = ldlt.solve(b.imag().eval());
  return out;
}

CVec random_complex(std::uint64_t seed, std::uint64_t stream, int n) {
  CounterRng rng(seed, stream);
  CVec x(n);
  for (int i = 0; i < n; ++i) x(i) = rng.complex_normal();
  return x;
}

// Coarse dofs -> fine dofs through nested refinement.
RealSparse embedding(const FeSpace& coarse, const FeSpace& fine, const RealSparse& prolongation) {
  std::vector<Eigen::Triplet<double>> trip;
  for (int c = 0; c < prolongation.outerSize(); ++c) {
    for (RealSparse::InnerIterator it(prolongation, c); it; ++it) {
      const int fd = fine.dof(static_cast<int>(it.row()));
      const int cd = coarse.dof(static_cast<int>(it.col()));
      if (fd >= 0 && cd >= 0) trip.emplace_back(fd, cd, it.value());
    }
  }
  RealSparse Q(fine.ndofs(), coarse.ndofs());
  Q.setFromTriplets(trip.begin(), trip.end());
  return Q;
}

struct Refined {
  std::shared_ptr<const FeSpace> space;
  RealSparse prolongation;  // fine vertices x coarse vertices
};

Refined refine_times(const Mesh& coarse, const Obstacle& obstacle, int times) {
  Mesh current = coarse;
  RealSparse P(static_cast<int>(coarse.vertices.size()), static_cast<int>(coarse.vertices.size()));
  P.setIdentity();
  for (int i = 0; i < times; ++i) {
    auto r = refine_uniform(current, obstacle);
    P = (r.prolongation * P).pruned();
    current = std::move(r.mesh);
  }
  return {std::make_shared<FeSpace>(std::make_shared<Mesh>(std::move(current))), P};
}

// Energy-norm projection onto the range of Q with Gram matrix E.
struct SubspaceProjector {
  const RealSparse& Q;
  const RealSparse& E;
  Eigen::SimplicialLDLT<RealSparse> ldlt;
  SubspaceProjector(const RealSparse& q, const RealSparse& e) : Q(q), E(e) {
    const RealSparse G = (RealSparse(Q.transpose()) * E * Q).pruned();
    ldlt.compute(G);
    if (ldlt.info() != Eigen::Success) throw NumericalError("projection Gram matrix factorization failed");
  }
  // |w - Q c| in the E norm for the best c.
  double distance(const CVec& w) const {
    const CVec rhs = real_times(RealSparse(Q.transpose()), real_times(E, w));
    const CVec c = ldlt_solve(ldlt, rhs);
    const CVec e = w - real_times(Q, c);
    return std::sqrt(std::max(0.0, e.dot(real_times(E, e)).real()));
  }
};

}  // namespace

bool Scene::rotationally_symmetric() const { return coeffs.is_radial() && centred_disk(obstacle); }

bool Scene::has_series_reference() const { return coeffs.is_identity() && centred_disk(obstacle); }

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double Cutoff::operator()(double r) const {
  if (r <= inner) return scale;
  if (r >= outer) return 0.0;
  return scale * smooth_step((outer - r) / (outer - inner));
}

PowerIterationResult power_iteration(const std::function<CVec(const CVec&)>& normal,
                                     const std::function<cplx(const CVec&, const CVec&)>& inner, CVec x,
                                     double tolerance, int max_iterations) {
  PowerIterationResult out;
  double nx = std::sqrt(std::max(0.0, inner(x, x).real()));
  if (!(nx > 0.0)) throw ConfigError("power_iteration: zero starting vector");
  x /= nx;
  double prev = -1.0;
  for (int it = 1; it <= max_iterations; ++it) {
    const CVec y = normal(x);
    const double lambda = std::max(0.0, inner(y, x).real());
    out.sigma = std::sqrt(lambda);
    out.iterations = it;
    out.history.push_back(out.sigma);
    const double ny = std::sqrt(std::max(0.0, inner(y, y).real()));
    if (ny == 0.0) {
      out.converged = true;
      out.sigma = 0.0;
      return out;
    }
    if (prev >= 0.0 && std::abs(out.sigma - prev) <= tolerance * out.sigma) {
      out.converged = true;
      return out;
    }
    prev = out.sigma;
    x = y / ny;
  }
  return out;
}

namespace {

ResolventEstimate radial_resolvent(const Scene& scene, double k, const Cutoff& cutoff, const ResolventOptions& opt,
                                   const Executor& exec) {
  RadialSetup setup;
  setup.a = disk_radius(scene.obstacle);
  setup.R = scene.R;
  setup.k = k;
  const CoefficientField coeffs = scene.coeffs;
  setup.nu = [coeffs](double r) { return coeffs.nu(Vec2(r, 0.0)); };
  const double h = opt.resolution > 0.0 ? opt.resolution : 0.5 / (k * k);
  setup.elements = std::max(8, static_cast<int>(std::ceil((scene.R - setup.a) / h)));
  const int n_cap = default_nmax(k, scene.R);
  const auto results = exec.map<PowerIterationResult>(static_cast<std::size_t>(n_cap + 1), [&](std::size_t n) {
    const RadialMode mode(setup, static_cast<int>(n));
    Eigen::VectorXd D(mode.size());
    for (int i = 0; i < mode.size(); ++i) D(i) = cutoff(mode.radii()(i));
    const RealSparse& M = mode.mass();
    const RealSparse& G = opt.norm == OutputNorm::l2 ? mode.mass() : mode.energy();
    auto normal = [&](const CVec& x) {
      const CVec t3 = mode.solve(real_times(M, D.cast<cplx>().cwiseProduct(x)));
      const CVec t6 = D.cast<cplx>().cwiseProduct(real_times(G, D.cast<cplx>().cwiseProduct(t3)));
      const CVec t9 = D.cast<cplx>().cwiseProduct(real_times(M, mode.solve_hermitian(t6)));
      return CVec(mode.mass_solve(t9));
    };
    auto inner = [&](const CVec& a, const CVec& b) { return b.dot(real_times(M, a)); };
    return power_iteration(normal, inner, random_complex(opt.seed, n, mode.size()), opt.tolerance, opt.max_iterations);
  });
  ResolventEstimate est;
  est.k = k;
  est.resolution = (scene.R - setup.a) / setup.elements;
  est.method = "radial";
  est.converged = true;
  for (std::size_t n = 0; n < results.size(); ++n) {
    est.iterations = std::max(est.iterations, results[n].iterations);
    est.converged = est.converged && results[n].converged;
    if (results[n].sigma > est.norm) {
      est.norm = results[n].sigma;
      est.dominant_mode = static_cast<int>(n);
    }
  }
  return est;
}

ResolventEstimate mesh_resolvent(const Scene& scene, double k, const Cutoff& cutoff, const ResolventOptions& opt,
                                 const Executor& exec) {
  const double h = opt.resolution > 0.0 ? opt.resolution : 0.5 / (k * k);
  auto mesh = std::make_shared<Mesh>(generate_mesh(scene.obstacle, scene.R, h));
  auto space = std::make_shared<FeSpace>(mesh);
  const auto sys = assemble(scene.coeffs, space, build_dtn(k, scene.R), exec);
  const GalerkinSolver solver(sys);
  Eigen::SimplicialLDLT<RealSparse> mass_ldlt(sys.plain_mass);
  if (mass_ldlt.info() != Eigen::Success) throw NumericalError("mass matrix factorization failed");
  const RealSparse G = opt.norm == OutputNorm::l2 ? sys.plain_mass : RealSparse(sys.stiffness + k * k * sys.mass);
  CVec D(space->ndofs());
  for (int d = 0; d < D.size(); ++d) D(d) = cutoff(mesh->vertices[space->vertex(d)].norm());
  const RealSparse& M = sys.plain_mass;
  auto normal = [&](const CVec& x) {
    const CVec t3 = solver.solve(real_times(M, D.cwiseProduct(x)));
    const CVec t6 = D.cwiseProduct(real_times(G, D.cwiseProduct(t3)));
    const CVec t9 = D.cwiseProduct(real_times(M, solver.solve_hermitian(t6)));
    return ldlt_solve(mass_ldlt, t9);
  };
  auto inner = [&](const CVec& a, const CVec& b) { return b.dot(real_times(M, a)); };
  const auto r = power_iteration(normal, inner, random_complex(opt.seed, 0, space->ndofs()), opt.tolerance, opt.max_iterations);
  ResolventEstimate est;
  est.k = k;
  est.norm = r.sigma;
  est.iterations = r.iterations;
  est.converged = r.converged;
  est.resolution = mesh->h_fem;
  est.method = "mesh";
  return est;
}

}  // namespace

ResolventEstimate estimate_resolvent_norm(const Scene& scene, double k, const Cutoff& cutoff,
                                          const ResolventOptions& options, const Executor& exec) {
  if (!(k > 0.0)) throw ConfigError("estimate_resolvent_norm: k must be positive");
  if (!(cutoff.inner < cutoff.outer) || cutoff.outer > scene.R * (1.0 + 1e-12)) {
    throw ConfigError("estimate_resolvent_norm: cutoff must satisfy inner < outer <= R");
  }
  ResolventEstimate est;
  if (cutoff.scale == 0.0) {
    est.k = k;
    est.converged = true;
    est.method = "trivial";
    return est;
  }
  bool radial = false;
  switch (options.method) {
    case ResolventMethod::radial:
      if (!scene.rotationally_symmetric()) throw ConfigError("radial resolvent method needs a rotationally symmetric scene");
      radial = true;
      break;
    case ResolventMethod::mesh:
      break;
    case ResolventMethod::automatic:
      radial = scene.rotationally_symmetric();
      break;
  }
  est = radial ? radial_resolvent(scene, k, cutoff, options, exec) : mesh_resolvent(scene, k, cutoff, options, exec);
  if (!est.converged) {
    std::ostringstream msg;
    msg << "resolvent power iteration did not converge at k = " << k << " within " << options.max_iterations
        << " iterations";
    throw NumericalError(msg.str());
  }
  return est;
}

FreeResolventCheck free_resolvent_1d_check(double k, int points, double tolerance) {
  if (!(k > 0.0) || points < 2) throw ConfigError("free_resolvent_1d_check: need k > 0 and points >= 2");
  const Cutoff chi{0.9, 1.0, 1.0};
  const double w = 2.0 / points;
  Eigen::MatrixXcd A(points, points);
  std::vector<double> x(points), c(points);
  for (int i = 0; i < points; ++i) {
    x[i] = -1.0 + (i + 0.5) * w;
    c[i] = chi(std::abs(x[i]));
  }
  const cplx g = 1.0 / cplx(0.0, 2.0 * k);
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < points; ++j) A(i, j) = c[i] * c[j] * w * g * std::polar(1.0, k * std::abs(x[i] - x[j]));
  }
  FreeResolventCheck out;
  out.points = points;
  out.dense = Eigen::BDCSVD<Eigen::MatrixXcd>(A).singularValues()(0);
  auto normal = [&](const CVec& v) { return CVec(A.adjoint() * (A * v)); };
  auto inner = [](const CVec& a, const CVec& b) { return b.dot(a); };
  const auto r = power_iteration(normal, inner, random_complex(7, 0, points), tolerance, 100000);
  out.power = r.sigma;
  out.iterations = r.iterations;
  return out;
}

ResolventScan resolvent_scan(const Scene& scene, const std::vector<double>& k_list, const Cutoff& cutoff, int s, double L,
                             const ResolventOptions& options, const Executor& exec) {
  if (s != 0 && s != 1) throw ConfigError("resolvent_scan: s must be 0 or 1");
  ResolventScan scan;
  scan.s = s;
  scan.cutoff = cutoff;
  scan.L = L;
  ResolventOptions opt = options;
  opt.norm = s == 0 ? OutputNorm::l2 : OutputNorm::energy;
  for (double k : k_list) {
    const auto est = estimate_resolvent_norm(scene, k, cutoff, opt, exec);
    ResolventScanRow row;
    row.k = k;
    row.resolution = est.resolution;
    row.norm = est.norm;
    row.scaled = s == 0 ? k * est.norm : est.norm;
    row.upper_ref = std::pow(2.0, s / 2.0 + 1.0) * L / pi;
    row.lower_ref = (s == 0 && scene.obstacle.empty()) ? 2.0 * cutoff.inner / pi : 0.0;
    row.iterations = est.iterations;
    row.converged = est.converged;
    row.dominant_mode = est.dominant_mode;
    scan.method = est.method;
    scan.rows.push_back(row);
  }
  return scan;
}

QuasimodeResult quasimode_lower_bound(double L, double delta, double h, int profile_points) {
  if (!(delta > 0.0) || !(2.0 * delta < L) || !(h > 0.0)) throw ConfigError("quasimode: need 0 < 2 delta < L and h > 0");
  if (profile_points < 2) throw ConfigError("quasimode: profile_points must be at least 2");
  QuasimodeResult q;
  q.L = L;
  q.delta = delta;
  q.h = h;
  q.mu = pi / (2.0 * (L - 2.0 * delta));
  const double amp = 1.0 / (h * q.mu);  // h^-1 2 (L - 2 delta) / pi
  auto f0 = [&](double x) { return (x >= delta && x <= L - delta) ? std::cos(q.mu * (x - delta)) : 0.0; };
  auto v0 = [&](double x) {
    if (x < delta) return 0.0;
    if (x <= L - delta) return amp * std::sin(q.mu * (x - delta));
    return amp;
  };
  auto psi = [&](double x) {
    if (x <= 0.0 || x >= L - delta / 4.0) return 0.0;
    if (x < delta) return smooth_step(x / delta);
    if (x <= L - delta / 2.0) return 1.0;
    return smooth_step((L - delta / 4.0 - x) / (delta / 4.0));
  };
  auto u0 = [&](double x) { return psi(x) * v0(x); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  auto integrate = [](auto fn, double a, double b) { return GK::integrate(fn, a, b, 15, 1e-14); };
  q.f_norm_squared = integrate([&](double x) { return f0(x) * f0(x); }, delta, L - delta);
  q.f_norm_identity = pi / (4.0 * q.mu);
  const double u2 = integrate([&](double x) { return u0(x) * u0(x); }, delta, L - delta) +
                    integrate([&](double x) { return u0(x) * u0(x); }, L - delta, L - delta / 2.0) +
                    integrate([&](double x) { return u0(x) * u0(x); }, L - delta / 2.0, L - delta / 4.0);
  q.u_norm = std::sqrt(u2);
  q.ratio = q.u_norm / std::sqrt(q.f_norm_squared);
  q.bound = 2.0 * (L - 2.0 * delta) / (pi * h);
  for (int i = 0; i < profile_points; ++i) {
    const double x = L * i / (profile_points - 1);
    q.x.push_back(x);
    q.f.push_back(f0(x));
    q.u.push_back(u0(x));
  }
  if (q.ratio < q.bound * (1.0 - 1e-12)) throw NumericalError("quasimode ratio fell below the transport bound");
  return q;
}

EtaEstimate estimate_eta(const Scene& scene, double k, double h, int samples, std::uint64_t seed, int refinements,
                         const Executor& exec) {
  if (samples < 1 || refinements < 2) throw ConfigError("estimate_eta: need samples >= 1 and at least 2 refinements");
  auto coarse_mesh = std::make_shared<Mesh>(generate_mesh(scene.obstacle, scene.R, h));
  const FeSpace coarse(coarse_mesh);
  const auto fine = refine_times(*coarse_mesh, scene.obstacle, refinements);
  const auto sys = assemble(scene.coeffs, fine.space, build_dtn(k, scene.R), exec);
  const GalerkinSolver solver(sys);
  const RealSparse Q = embedding(coarse, *fine.space, fine.prolongation);
  const RealSparse E = sys.stiffness + k * k * sys.mass;
  const SubspaceProjector projector(Q, E);
  EtaEstimate out;
  out.k = k;
  out.h = coarse_mesh->h_fem;
  out.h_reference = fine.space->mesh().h_fem;
  out.samples = samples;
  for (int i = 0; i < samples; ++i) {
    CVec f = random_complex(seed, static_cast<std::uint64_t>(i), sys.ndofs());
    const double fn = sys.l2_norm(f);
    if (fn == 0.0) continue;  // zero load carries no information
    f /= fn;
    const CVec w = solver.solve_hermitian(real_times(sys.plain_mass, f));
    const double ratio = projector.distance(w);
    out.ratios.push_back(ratio);
    out.eta = std::max(out.eta, ratio);
    out.running.push_back(out.eta);
  }
  return out;
}

ConvergenceTable quasioptimality_study(const Scene& scene, const std::vector<double>& k_list,
                                       const std::vector<double>& h_list, const ConstantsLedger& ledger, double angle,
                                       const Executor& exec) {
  ConvergenceTable table;
  table.quasioptimality_constant = 2.0 * (1.0 + ledger.C_DtN);
  std::vector<std::pair<double, double>> cells;
  for (double k : k_list) {
    for (double h : h_list) cells.emplace_back(k, h);
  }
  std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  });
  const bool series = scene.has_series_reference();
  table.rows = exec.map<ConvergenceRow>(cells.size(), [&](std::size_t c) {
    const auto [k, h] = cells[c];
    ConvergenceRow row;
    row.k = k;
    row.h_target = h;
    row.reference = series ? "series" : "refined";
    try {
      auto mesh = std::make_shared<Mesh>(generate_mesh(scene.obstacle, scene.R, h));
      auto space = std::make_shared<FeSpace>(mesh);
      row.h = mesh->h_fem;
      row.dofs = space->ndofs();
      row.threshold_rhs = mesh_threshold_rhs(ledger, k, row.h);
      row.admissible = row.threshold_rhs <= 1.0;
      const PlaneWave wave{k, angle};
      auto sys = assemble(scene.coeffs, space, build_dtn(k, scene.R));
      sys.rhs = assemble_load_scattering(sys, wave);
      const auto sol = solve(sys);
      if (series) {
        std::function<cplx(const Vec2&)> exact;
        std::function<CGrad(const Vec2&)> grad;
        std::shared_ptr<SoundSoftDisk> mie;
        if (scene.obstacle.empty()) {
          exact = [wave](const Vec2& x) { return wave.value(x); };
          grad = [wave](const Vec2& x) { return CGrad(wave.gradient(x)); };
        } else {
          mie = std::make_shared<SoundSoftDisk>(k, disk_radius(scene.obstacle), angle);
          exact = [mie](const Vec2& x) { return mie->value(x); };
          grad = [mie](const Vec2& x) { return CGrad(mie->gradient(x)); };
        }
        const auto err = field_errors(scene.coeffs, *space, sol.dofs, k, exact, grad);
        const auto best = field_errors(scene.coeffs, *space, energy_projection(sys, scene.coeffs, exact, grad), k, exact, grad);
        const auto interp = field_errors(scene.coeffs, *space, space->interpolate(exact), k, exact, grad);
        row.energy_error = err.energy_error;
        row.l2_error = err.l2_error;
        row.relative_l2_error = err.l2_error / err.l2_exact;
        row.best_error = best.energy_error;
        row.interpolation_error = interp.energy_error;
      } else {
        const auto fine = refine_times(*mesh, scene.obstacle, 2);
        auto fsys = assemble(scene.coeffs, fine.space, build_dtn(k, scene.R));
        fsys.rhs = assemble_load_scattering(fsys, wave);
        const CVec uf = solve(fsys).dofs;
        const RealSparse Q = embedding(*space, *fine.space, fine.prolongation);
        const RealSparse E = fsys.stiffness + k * k * fsys.mass;
        const CVec e = uf - real_times(Q, sol.dofs);
        row.energy_error = fsys.energy_norm(e);
        row.l2_error = fsys.l2_norm(e);
        row.relative_l2_error = row.l2_error / fsys.l2_norm(uf);
        row.best_error = SubspaceProjector(Q, E).distance(uf);
        // coarse vertices keep their indices under refinement
        CVec nodal(space->ndofs());
        for (int d = 0; d < space->ndofs(); ++d) nodal(d) = uf(fine.space->dof(space->vertex(d)));
        row.interpolation_error = fsys.energy_norm(uf - real_times(Q, nodal));
      }
      row.ratio = row.best_error > 0.0 ? row.energy_error / row.best_error : 0.0;
    } catch (const NumericalError& e) {
      row.failed = true;
      row.note = e.what();
    }
    return row;
  });
  return table;
}

double fitted_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("fitted_exponent: need at least two matching points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

H2Scaling h2_scaling_study(const Scene& scene, const std::vector<double>& k_list, const ConstantsLedger& ledger,
                           double h_factor, int power_steps, std::uint64_t seed, const Executor& exec) {
  H2Scaling out;
  out.rows = exec.map<H2ScalingRow>(k_list.size(), [&](std::size_t i) {
    const double k = k_list[i];
    H2ScalingRow row;
    row.k = k;
    auto mesh = std::make_shared<Mesh>(generate_mesh(scene.obstacle, scene.R, h_factor / (k * k)));
    auto space = std::make_shared<FeSpace>(mesh);
    row.h = mesh->h_fem;
    const auto sys = assemble(scene.coeffs, space, build_dtn(k, scene.R));
    const GalerkinSolver solver(sys);
    Eigen::SimplicialLDLT<RealSparse> mass_ldlt(sys.plain_mass);
    CVec f = random_complex(seed, i, sys.ndofs());
    for (int step = 0; step < power_steps; ++step) {
      const CVec u = solver.solve(real_times(sys.plain_mass, f));
      f = ldlt_solve(mass_ldlt, real_times(sys.plain_mass, solver.solve_hermitian(real_times(sys.plain_mass, u))));
      f /= sys.l2_norm(f);
    }
    const CVec u = solver.solve(real_times(sys.plain_mass, f));
    row.f_norm = sys.l2_norm(f);
    row.h2_norm = discrete_h2_norm(*mesh, space->to_vertices(u), 2.0 * scene.R).full();
    row.ratio = row.h2_norm / (k * row.f_norm);
    row.bound_coefficient = h2_bound_rhs(ledger, k);
    return row;
  });
  std::vector<double> ks, ys;
  for (const auto& r : out.rows) {
    if (r.f_norm == 0.0) continue;
    ks.push_back(r.k);
    ys.push_back(r.h2_norm / r.f_norm);
  }
  if (ks.size() >= 2) out.exponent = fitted_exponent(ks, ys);
  return out;
}

}  // namespace helmkit
