#include "helmkit/fem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SparseCholesky>
#include <Eigen/UmfPackSupport>

namespace helmkit {

const TriangleRule& quadrature_rule() {
  static const TriangleRule rule = [] {
    TriangleRule r;
    const double a1 = 0.108103018168070, b1 = 0.445948490915965, w1 = 0.223381589678011;
    const double a2 = 0.816847572980459, b2 = 0.091576213509771, w2 = 0.109951743655322;
    r.barycentric = {{{a1, b1, b1}, {b1, a1, b1}, {b1, b1, a1}, {a2, b2, b2}, {b2, a2, b2}, {b2, b2, a2}}};
    r.weight = {w1, w1, w1, w2, w2, w2};
    return r;
  }();
  return rule;
}

namespace {

CVec real_times(const RealSparse& A, const CVec& u) {
  const Eigen::VectorXd re = A * u.real();
  const Eigen::VectorXd im = A * u.imag();
  CVec out(re.size());
  out.real() = re;
  out.imag() = im;
  return out;
}

std::array<Vec2, 3> hat_gradients(const Vec2& p0, const Vec2& p1, const Vec2& p2, double& area) {
  const double det = (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p1.y() - p0.y()) * (p2.x() - p0.x());
  area = 0.5 * det;
  return {Vec2(p1.y() - p2.y(), p2.x() - p1.x()) / det, Vec2(p2.y() - p0.y(), p0.x() - p2.x()) / det,
          Vec2(p0.y() - p1.y(), p1.x() - p0.x()) / det};
}

Vec2 map_point(const Mesh& mesh, const std::array<int, 3>& T, const std::array<double, 3>& lam) {
  return lam[0] * mesh.vertices[T[0]] + lam[1] * mesh.vertices[T[1]] + lam[2] * mesh.vertices[T[2]];
}

// Deterministic blocked reduction over triangles.
template <class Acc, class Fn>
Acc reduce_triangles(const Executor& exec, std::size_t n, Fn&& per_block) {
  constexpr std::size_t block = 4096;
  const std::size_t nb = (n + block - 1) / block;
  auto parts = exec.map<Acc>(nb, [&](std::size_t b) {
    Acc acc{};
    per_block(acc, b * block, std::min(n, (b + 1) * block));
    return acc;
  });
  Acc total{};
  for (const auto& p : parts) total += p;
  return total;
}

}  // namespace

FeSpace::FeSpace(std::shared_ptr<const Mesh> mesh, bool dirichlet_on_truncation) : mesh_(std::move(mesh)) {
  if (!mesh_) throw ConfigError("FeSpace needs a mesh");
  const auto& m = *mesh_;
  dof_of_vertex_.assign(m.vertices.size(), -1);
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    if (m.tags[i] == VertexTag::obstacle_boundary) continue;
    if (dirichlet_on_truncation && m.tags[i] == VertexTag::truncation_boundary) continue;
    dof_of_vertex_[i] = static_cast<int>(vertex_of_dof_.size());
    vertex_of_dof_.push_back(static_cast<int>(i));
  }
  for (int v : m.truncation_vertices()) {
    if (dof_of_vertex_[v] < 0) continue;
    boundary_dofs_.push_back(dof_of_vertex_[v]);
    const double a = std::atan2(m.vertices[v].y(), m.vertices[v].x());
    boundary_angles_.push_back(a < 0.0 ? a + 2.0 * pi : a);
  }
  grads_.resize(m.triangles.size());
  areas_.resize(m.triangles.size());
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const auto& T = m.triangles[t];
    grads_[t] = hat_gradients(m.vertices[T[0]], m.vertices[T[1]], m.vertices[T[2]], areas_[t]);
    if (!(areas_[t] > 0.0)) throw ConfigError("FeSpace: triangle " + std::to_string(t) + " is not positively oriented");
  }
}

CVec FeSpace::to_vertices(const CVec& dofs) const {
  CVec out = CVec::Zero(static_cast<int>(dof_of_vertex_.size()));
  for (int d = 0; d < ndofs(); ++d) out(vertex_of_dof_[d]) = dofs(d);
  return out;
}

CVec FeSpace::from_vertices(const CVec& vertex_values) const {
  CVec out(ndofs());
  for (int d = 0; d < ndofs(); ++d) out(d) = vertex_values(vertex_of_dof_[d]);
  return out;
}

CVec FeSpace::interpolate(const ScalarField& f) const {
  CVec out(ndofs());
  for (int d = 0; d < ndofs(); ++d) out(d) = f(mesh_->vertices[vertex_of_dof_[d]]);
  return out;
}

FourierTrace GalerkinSystem::trace(const CVec& u) const {
  const auto& bd = space->boundary_dofs();
  CVec ub(static_cast<int>(bd.size()));
  for (std::size_t j = 0; j < bd.size(); ++j) ub(static_cast<int>(j)) = u(bd[j]);
  const CVec w = modal * ub;
  FourierTrace g(dtn.R, dtn.n_max);
  for (int i = 0; i < w.size(); ++i) g.c[i] = w(i);
  return g;
}

CVec GalerkinSystem::dtn_apply(const CVec& u) const {
  const auto g = trace(u);
  CVec tw(static_cast<int>(g.c.size()));
  for (int n = -dtn.n_max; n <= dtn.n_max; ++n) tw(n + dtn.n_max) = dtn.coefficient(n) * g[n];
  const CVec yb = (2.0 * pi * dtn.R) * (modal.adjoint() * tw);
  CVec out = CVec::Zero(u.size());
  const auto& bd = space->boundary_dofs();
  for (std::size_t j = 0; j < bd.size(); ++j) out(bd[j]) = yb(static_cast<int>(j));
  return out;
}

CVec GalerkinSystem::apply(const CVec& u) const {
  return real_times(stiffness, u) - (k * k) * real_times(mass, u) - dtn_apply(u);
}

double GalerkinSystem::energy_norm(const CVec& u) const {
  const double s = u.dot(real_times(stiffness, u)).real() + k * k * u.dot(real_times(mass, u)).real();
  return std::sqrt(std::max(0.0, s));
}

double GalerkinSystem::l2_norm(const CVec& u) const {
  return std::sqrt(std::max(0.0, u.dot(real_times(plain_mass, u)).real()));
}

double GalerkinSystem::weighted_l2_norm(const CVec& u) const {
  return std::sqrt(std::max(0.0, u.dot(real_times(mass, u)).real()));
}

Eigen::MatrixXcd GalerkinSystem::dtn_block() const {
  Eigen::VectorXcd t(modal.rows());
  for (int n = -dtn.n_max; n <= dtn.n_max; ++n) t(n + dtn.n_max) = dtn.coefficient(n);
  return (2.0 * pi * dtn.R) * modal.adjoint() * t.asDiagonal() * modal;
}

VolumeMatrices assemble_volume(const CoefficientField& coeffs, const FeSpace& fe, const Executor& exec) {
  const FeSpace* space = &fe;
  const Mesh& mesh = fe.mesh();
  const auto& rule = quadrature_rule();
  const std::size_t nt = mesh.triangles.size();

  struct Local {
    double S[3][3];
    double M[3][3];
  };
  std::vector<Eigen::Triplet<double>> tS, tM, tP;
  tS.reserve(9 * nt);
  tM.reserve(9 * nt);
  tP.reserve(9 * nt);
  constexpr std::size_t chunk = 1 << 16;
  for (std::size_t start = 0; start < nt; start += chunk) {
    const std::size_t count = std::min(chunk, nt - start);
    const auto locals = exec.map<Local>(count, [&](std::size_t i) {
      const std::size_t t = start + i;
      const auto& T = mesh.triangles[t];
      const auto& g = space->gradients(t);
      const double area = space->area(t);
      Local L{};
      for (int q = 0; q < 6; ++q) {
        const auto& lam = rule.barycentric[q];
        const auto s = coeffs.sample(map_point(mesh, T, lam));
        const double w = rule.weight[q] * area;
        for (int a = 0; a < 3; ++a) {
          const Vec2 Ag = s.A * g[a];
          for (int b = 0; b < 3; ++b) {
            L.S[b][a] += w * Ag.dot(g[b]);
            L.M[b][a] += w * s.nu * lam[a] * lam[b];
          }
        }
      }
      return L;
    });
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t t = start + i;
      const auto& T = mesh.triangles[t];
      const double area = space->area(t);
      for (int a = 0; a < 3; ++a) {
        const int da = space->dof(T[a]);
        if (da < 0) continue;
        for (int b = 0; b < 3; ++b) {
          const int db = space->dof(T[b]);
          if (db < 0) continue;
          tS.emplace_back(da, db, locals[i].S[a][b]);
          tM.emplace_back(da, db, locals[i].M[a][b]);
          tP.emplace_back(da, db, area / 12.0 * (a == b ? 2.0 : 1.0));
        }
      }
    }
  }
  const int n = space->ndofs();
  VolumeMatrices out;
  out.stiffness.resize(n, n);
  out.mass.resize(n, n);
  out.plain_mass.resize(n, n);
  out.stiffness.setFromTriplets(tS.begin(), tS.end());
  out.mass.setFromTriplets(tM.begin(), tM.end());
  out.plain_mass.setFromTriplets(tP.begin(), tP.end());
  return out;
}


GalerkinSystem assemble(const CoefficientField& coeffs, std::shared_ptr<const FeSpace> space, const DtnOperator& dtn,
                        const Executor& exec) {
  if (!space) throw ConfigError("assemble needs a finite-element space");
  const Mesh& mesh = space->mesh();
  if (std::abs(dtn.R - mesh.R) > 1e-12 * mesh.R) throw ConfigError("DtN radius differs from the mesh truncation radius");

  GalerkinSystem sys;
  sys.space = space;
  sys.k = dtn.k;
  auto volume = assemble_volume(coeffs, *space, exec);
  sys.stiffness = std::move(volume.stiffness);
  sys.mass = std::move(volume.mass);
  sys.plain_mass = std::move(volume.plain_mass);
  const int n = space->ndofs();

  const auto& angles = space->boundary_angles();
  const int nb = static_cast<int>(angles.size());
  if (nb < 3) throw ConfigError("assemble: too few vertices on Gamma_R");
  sys.dtn = dtn;
  const int cap = (nb - 1) / 2;
  if (sys.dtn.n_max > cap) {
    sys.dtn.n_max = cap;
    sys.dtn.t.resize(cap + 1);
  }
  const int m = 2 * sys.dtn.n_max + 1;
  sys.modal.resize(m, nb);
  for (int r = 0; r < m; ++r) {
    const int mode = r - sys.dtn.n_max;
    for (int j = 0; j < nb; ++j) sys.modal(r, j) = std::polar(1.0 / nb, -mode * angles[j]);
  }
  sys.rhs = CVec::Zero(n);
  return sys;
}

CVec assemble_load_source(const FeSpace& space, const ScalarField& f) {
  const Mesh& mesh = space.mesh();
  const auto& rule = quadrature_rule();
  CVec F = CVec::Zero(space.ndofs());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& T = mesh.triangles[t];
    const double area = space.area(t);
    for (int q = 0; q < 6; ++q) {
      const auto& lam = rule.barycentric[q];
      const cplx fx = f(map_point(mesh, T, lam));
      if (fx == cplx(0.0)) continue;
      for (int a = 0; a < 3; ++a) {
        const int d = space.dof(T[a]);
        if (d >= 0) F(d) += rule.weight[q] * area * lam[a] * fx;
      }
    }
  }
  return F;
}

CVec assemble_load_scattering(const GalerkinSystem& system, const PlaneWave& wave) {
  const auto data = incident_wave_data(system.dtn, wave);
  CVec w(static_cast<int>(data.c.size()));
  for (std::size_t i = 0; i < data.c.size(); ++i) w(static_cast<int>(i)) = data.c[i];
  const CVec Fb = (2.0 * pi * system.dtn.R) * (system.modal.adjoint() * w);
  CVec F = CVec::Zero(system.ndofs());
  const auto& bd = system.space->boundary_dofs();
  for (std::size_t j = 0; j < bd.size(); ++j) F(bd[j]) = Fb(static_cast<int>(j));
  return F;
}

struct GalerkinSolver::Impl {
  ComplexSparse K;  // UmfPackLU keeps a reference to the factored matrix
  Eigen::UmfPackLU<ComplexSparse> lu;
  int n = 0;
  int m = 0;
};

GalerkinSolver::GalerkinSolver(const GalerkinSystem& system) : system_(system), impl_(std::make_unique<Impl>()) {
  const int n = system.ndofs();
  const int m = static_cast<int>(system.modal.rows());
  const double k2 = system.k * system.k;
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(system.stiffness.nonZeros() + 2 * system.modal.size() + m);
  for (int c = 0; c < system.stiffness.outerSize(); ++c) {
    for (RealSparse::InnerIterator it(system.stiffness, c); it; ++it) trip.emplace_back(it.row(), it.col(), it.value());
  }
  for (int c = 0; c < system.mass.outerSize(); ++c) {
    for (RealSparse::InnerIterator it(system.mass, c); it; ++it) trip.emplace_back(it.row(), it.col(), -k2 * it.value());
  }
  // [[S - k^2 M, -2 pi R modal^H diag(t)], [modal, -I]]
  const auto& bd = system.space->boundary_dofs();
  const double scale = 2.0 * pi * system.dtn.R;
  for (int r = 0; r < m; ++r) {
    const cplx t = system.dtn.coefficient(r - system.dtn.n_max);
    for (std::size_t j = 0; j < bd.size(); ++j) {
      const cplx phi = system.modal(r, static_cast<int>(j));
      trip.emplace_back(bd[j], n + r, -scale * std::conj(phi) * t);
      trip.emplace_back(n + r, bd[j], phi);
    }
    trip.emplace_back(n + r, n + r, -1.0);
  }
  ComplexSparse& K = impl_->K;
  K.resize(n + m, n + m);
  K.setFromTriplets(trip.begin(), trip.end());
  K.makeCompressed();
  impl_->n = n;
  impl_->m = m;
  impl_->lu.compute(K);
  if (impl_->lu.info() != Eigen::Success) {
    throw NumericalError("Galerkin matrix factorization failed (singular discrete system)");
  }
}

GalerkinSolver::~GalerkinSolver() = default;

double GalerkinSolver::residual(const CVec& u, const CVec& b) const {
  const double nb = b.norm();
  const double nr = (system_.apply(u) - b).norm();
  return nb > 0.0 ? nr / nb : nr;
}

CVec GalerkinSolver::solve(const CVec& b) const {
  if (b.size() != impl_->n) throw ConfigError("right-hand side has the wrong length");
  if (b.norm() == 0.0) return CVec::Zero(impl_->n);
  auto raw = [&](const CVec& rhs) {
    CVec ext = CVec::Zero(impl_->n + impl_->m);
    ext.head(impl_->n) = rhs;
    const CVec x = impl_->lu.solve(ext);
    return CVec(x.head(impl_->n));
  };
  CVec u = raw(b);
  for (int it = 0; it < 3; ++it) {
    const CVec r = b - system_.apply(u);
    if (r.norm() <= 1e-12 * b.norm()) break;
    u += raw(r);
  }
  if (!u.allFinite()) throw NumericalError("Galerkin solve produced non-finite values (singular discrete system)");
  return u;
}

CVec GalerkinSolver::solve_hermitian(const CVec& b) const { return solve(b.conjugate()).conjugate(); }

DiscreteSolution solve(const GalerkinSystem& system) {
  GalerkinSolver solver(system);
  DiscreteSolution s;
  s.space = system.space;
  s.k = system.k;
  s.dofs = solver.solve(system.rhs);
  s.residual = solver.residual(s.dofs, system.rhs);
  if (s.residual > 1e-10) {
    std::ostringstream msg;
    msg << "Galerkin solve residual " << s.residual << " exceeds 1e-10";
    throw NumericalError(msg.str());
  }
  return s;
}

DiscreteSolution solve_adjoint(const GalerkinSystem& system, const CVec& load) {
  GalerkinSolver solver(system);
  DiscreteSolution s;
  s.space = system.space;
  s.k = system.k;
  const CVec conj_load = load.conjugate();
  const CVec w = solver.solve(conj_load);
  s.residual = solver.residual(w, conj_load);
  s.dofs = w.conjugate();
  return s;
}

double energy_norm(const CoefficientField& coeffs, const FeSpace& space, const CVec& u, double k) {
  const Mesh& mesh = space.mesh();
  const auto& rule = quadrature_rule();
  const CVec uv = space.to_vertices(u);
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& T = mesh.triangles[t];
    const auto& g = space.gradients(t);
    const CGrad grad = uv(T[0]) * g[0].cast<cplx>() + uv(T[1]) * g[1].cast<cplx>() + uv(T[2]) * g[2].cast<cplx>();
    for (int q = 0; q < 6; ++q) {
      const auto& lam = rule.barycentric[q];
      const auto s = coeffs.sample(map_point(mesh, T, lam));
      const cplx val = lam[0] * uv(T[0]) + lam[1] * uv(T[1]) + lam[2] * uv(T[2]);
      const double a = (grad.dot(s.A.cast<cplx>() * grad)).real();
      total += rule.weight[q] * space.area(t) * (a + k * k * s.nu * std::norm(val));
    }
  }
  return std::sqrt(std::max(0.0, total));
}

InterpolationError nodal_interpolation_error(const CoefficientField& coeffs, const Mesh& mesh, const SmoothFunction& v) {
  const auto& rule = quadrature_rule();
  double e0 = 0.0, e1 = 0.0, h2 = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& T = mesh.triangles[t];
    double area = 0.0;
    const auto g = hat_gradients(mesh.vertices[T[0]], mesh.vertices[T[1]], mesh.vertices[T[2]], area);
    const double v0 = v.value(mesh.vertices[T[0]]), v1 = v.value(mesh.vertices[T[1]]), v2 = v.value(mesh.vertices[T[2]]);
    const Vec2 gi = v0 * g[0] + v1 * g[1] + v2 * g[2];
    for (int q = 0; q < 6; ++q) {
      const auto& lam = rule.barycentric[q];
      const Vec2 x = map_point(mesh, T, lam);
      const auto s = coeffs.sample(x);
      const double w = rule.weight[q] * area;
      const double e = v.value(x) - (lam[0] * v0 + lam[1] * v1 + lam[2] * v2);
      const Vec2 de = v.gradient(x) - gi;
      const Mat2 H = v.hessian(x);
      e0 += w * s.nu * e * e;
      e1 += w * de.dot(s.A * de);
      const double val = v.value(x);
      h2 += w * (val * val + v.gradient(x).squaredNorm() + H(0, 0) * H(0, 0) + H(0, 1) * H(0, 1) + H(1, 1) * H(1, 1));
    }
  }
  InterpolationError r;
  r.l2 = std::sqrt(e0);
  r.energy = std::sqrt(e1);
  r.h2_norm = std::sqrt(h2);
  r.h = mesh.h_fem;
  const double denom = r.h * r.h * r.h2_norm;
  r.ratio = denom > 0.0 ? (r.l2 + r.h * r.energy) / denom : 0.0;
  r.l2_ratio = denom > 0.0 ? r.l2 / denom : 0.0;
  return r;
}

namespace {

struct ErrAcc {
  double l2e = 0.0, ene = 0.0, l2x = 0.0, enx = 0.0;
  ErrAcc& operator+=(const ErrAcc& o) {
    l2e += o.l2e;
    ene += o.ene;
    l2x += o.l2x;
    enx += o.enx;
    return *this;
  }
};

}  // namespace

FieldErrors field_errors(const CoefficientField& coeffs, const FeSpace& space, const CVec& u, double k,
                         const ScalarField& exact, const GradientField& exact_gradient, const Executor& exec) {
  const Mesh& mesh = space.mesh();
  const auto& rule = quadrature_rule();
  const CVec uv = space.to_vertices(u);
  const auto acc = reduce_triangles<ErrAcc>(exec, mesh.triangles.size(), [&](ErrAcc& a, std::size_t b, std::size_t e) {
    for (std::size_t t = b; t < e; ++t) {
      const auto& T = mesh.triangles[t];
      const auto& g = space.gradients(t);
      const CGrad gh = uv(T[0]) * g[0].cast<cplx>() + uv(T[1]) * g[1].cast<cplx>() + uv(T[2]) * g[2].cast<cplx>();
      for (int q = 0; q < 6; ++q) {
        const auto& lam = rule.barycentric[q];
        const Vec2 x = map_point(mesh, T, lam);
        const auto s = coeffs.sample(x);
        const double w = rule.weight[q] * space.area(t);
        const cplx ue = exact(x);
        const CGrad ge = exact_gradient(x);
        const cplx diff = ue - (lam[0] * uv(T[0]) + lam[1] * uv(T[1]) + lam[2] * uv(T[2]));
        const CGrad gd = ge - gh;
        const Eigen::Matrix2cd Ac = s.A.cast<cplx>();
        a.l2e += w * std::norm(diff);
        a.ene += w * ((gd.dot(Ac * gd)).real() + k * k * s.nu * std::norm(diff));
        a.l2x += w * std::norm(ue);
        a.enx += w * ((ge.dot(Ac * ge)).real() + k * k * s.nu * std::norm(ue));
      }
    }
  });
  return {std::sqrt(acc.l2e), std::sqrt(acc.ene), std::sqrt(acc.l2x), std::sqrt(acc.enx)};
}

CVec energy_projection(const GalerkinSystem& system, const CoefficientField& coeffs, const ScalarField& exact,
                       const GradientField& exact_gradient) {
  const FeSpace& space = *system.space;
  const Mesh& mesh = space.mesh();
  const auto& rule = quadrature_rule();
  const double k2 = system.k * system.k;
  CVec F = CVec::Zero(space.ndofs());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& T = mesh.triangles[t];
    const auto& g = space.gradients(t);
    for (int q = 0; q < 6; ++q) {
      const auto& lam = rule.barycentric[q];
      const Vec2 x = map_point(mesh, T, lam);
      const auto s = coeffs.sample(x);
      const double w = rule.weight[q] * space.area(t);
      const cplx ue = exact(x);
      const CGrad Ag = s.A.cast<cplx>() * exact_gradient(x);
      for (int a = 0; a < 3; ++a) {
        const int d = space.dof(T[a]);
        if (d < 0) continue;
        F(d) += w * (Ag(0) * g[a].x() + Ag(1) * g[a].y() + k2 * s.nu * ue * lam[a]);
      }
    }
  }
  const RealSparse E = system.stiffness + k2 * system.mass;
  Eigen::SimplicialLDLT<RealSparse> ldlt(E);
  if (ldlt.info() != Eigen::Success) throw NumericalError("energy projection: factorization failed");
  const Eigen::VectorXd re = ldlt.solve(F.real().eval());
  const Eigen::VectorXd im = ldlt.solve(F.imag().eval());
  CVec c(re.size());
  c.real() = re;
  c.imag() = im;
  return c;
}

H2Norms discrete_h2_norm(const Mesh& mesh, const CVec& values, double radius) {
  const std::size_t nv = mesh.vertices.size();
  const std::size_t nt = mesh.triangles.size();
  std::vector<CGrad> grad(nt);
  std::vector<std::array<Vec2, 3>> hats(nt);
  std::vector<double> areas(nt);
  Eigen::MatrixXcd rec = Eigen::MatrixXcd::Zero(static_cast<int>(nv), 2);
  Eigen::VectorXd weight = Eigen::VectorXd::Zero(static_cast<int>(nv));
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& T = mesh.triangles[t];
    hats[t] = hat_gradients(mesh.vertices[T[0]], mesh.vertices[T[1]], mesh.vertices[T[2]], areas[t]);
    grad[t] = values(T[0]) * hats[t][0].cast<cplx>() + values(T[1]) * hats[t][1].cast<cplx>() +
              values(T[2]) * hats[t][2].cast<cplx>();
    for (int a = 0; a < 3; ++a) {
      rec.row(T[a]) += areas[t] * grad[t].transpose();
      weight(T[a]) += areas[t];
    }
  }
  for (std::size_t i = 0; i < nv; ++i) {
    if (weight(static_cast<int>(i)) > 0.0) rec.row(static_cast<int>(i)) /= weight(static_cast<int>(i));
  }
  H2Norms out;
  double l2 = 0.0, g2 = 0.0, h2 = 0.0;
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& T = mesh.triangles[t];
    const Vec2 c = (mesh.vertices[T[0]] + mesh.vertices[T[1]] + mesh.vertices[T[2]]) / 3.0;
    if (c.norm() >= radius) continue;
    const double A = areas[t];
    // exact P1 mass form
    const cplx u0 = values(T[0]), u1 = values(T[1]), u2 = values(T[2]);
    l2 += A / 6.0 * (std::norm(u0) + std::norm(u1) + std::norm(u2) + (std::conj(u0) * u1).real() +
                     (std::conj(u1) * u2).real() + (std::conj(u2) * u0).real());
    g2 += A * grad[t].squaredNorm();
    Eigen::Matrix2cd H;
    for (int comp = 0; comp < 2; ++comp) {
      const CGrad gc = rec(T[0], comp) * hats[t][0].cast<cplx>() + rec(T[1], comp) * hats[t][1].cast<cplx>() +
                       rec(T[2], comp) * hats[t][2].cast<cplx>();
      H(comp, 0) = gc(0);
      H(comp, 1) = gc(1);
    }
    const cplx hxy = 0.5 * (H(0, 1) + H(1, 0));
    h2 += A * (std::norm(H(0, 0)) + std::norm(hxy) + std::norm(H(1, 1)));
  }
  out.l2 = std::sqrt(l2);
  out.gradient = std::sqrt(g2);
  out.hessian = std::sqrt(h2);
  return out;
}

}  // namespace helmkit
