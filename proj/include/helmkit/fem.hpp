#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "helmkit/dtn.hpp"
#include "helmkit/geometry.hpp"
#include "helmkit/mesh.hpp"
#include "helmkit/parallel.hpp"

namespace helmkit {

using RealSparse = Eigen::SparseMatrix<double>;
using ComplexSparse = Eigen::SparseMatrix<cplx>;
using CVec = Eigen::VectorXcd;
using CGrad = Eigen::Vector2cd;

using ScalarField = std::function<cplx(const Vec2&)>;
using GradientField = std::function<CGrad(const Vec2&)>;

/// Degree-4 symmetric rule on the reference triangle (6 points).
struct TriangleRule {
  std::array<std::array<double, 3>, 6> barycentric;
  std::array<double, 6> weight;  // sums to 1
};
const TriangleRule& quadrature_rule();

/// P1 space on a mesh with zero Dirichlet trace on the obstacle boundary
/// (and, on request, on Gamma_R as well).
class FeSpace {
 public:
  explicit FeSpace(std::shared_ptr<const Mesh> mesh, bool dirichlet_on_truncation = false);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  int ndofs() const { return static_cast<int>(vertex_of_dof_.size()); }
  int dof(int vertex) const { return dof_of_vertex_[vertex]; }  // -1 on the obstacle boundary
  int vertex(int dof) const { return vertex_of_dof_[dof]; }
  /// Dofs on Gamma_R in angular order, with their angles.
  const std::vector<int>& boundary_dofs() const { return boundary_dofs_; }
  const std::vector<double>& boundary_angles() const { return boundary_angles_; }

  /// Per-triangle constant gradients of the three hat functions and area.
  const std::array<Vec2, 3>& gradients(std::size_t t) const { return grads_[t]; }
  double area(std::size_t t) const { return areas_[t]; }

  CVec to_vertices(const CVec& dofs) const;
  CVec from_vertices(const CVec& vertex_values) const;
  /// Nodal interpolant (Dirichlet vertices dropped).
  CVec interpolate(const ScalarField& f) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  std::vector<int> dof_of_vertex_;
  std::vector<int> vertex_of_dof_;
  std::vector<int> boundary_dofs_;
  std::vector<double> boundary_angles_;
  std::vector<std::array<Vec2, 3>> grads_;
  std::vector<double> areas_;
};

/// Matrices of a(u, v) = int (A grad u . grad conj v - k^2 nu u conj v) - <T_R u, v>.
/// Entry (i, j) of every block is the form evaluated at (phi_j, phi_i), so
/// a(u, v) = v^H K u with K = stiffness - k^2 mass - dtn_block.
struct GalerkinSystem {
  std::shared_ptr<const FeSpace> space;
  double k = 0.0;
  RealSparse stiffness;   // A-weighted
  RealSparse mass;        // nu-weighted
  RealSparse plain_mass;  // unweighted L2 Gram matrix
  DtnOperator dtn;
  /// Trapezoid map from boundary dof values to Fourier coefficients,
  /// rows n = -n_max..n_max: modal(n, j) = exp(-i n theta_j) / N_b.
  Eigen::MatrixXcd modal;
  CVec rhs;

  int ndofs() const { return space->ndofs(); }
  FourierTrace trace(const CVec& u) const;
  CVec dtn_apply(const CVec& u) const;  // dtn_block * u
  CVec apply(const CVec& u) const;      // K u
  cplx form(const CVec& u, const CVec& v) const { return v.dot(apply(u)); }
  /// a*(u, v) = conj(a(v, u)).
  cplx adjoint_form(const CVec& u, const CVec& v) const { return std::conj(form(v, u)); }
  double energy_norm(const CVec& u) const;  // (|A^1/2 grad u|^2 + k^2 |nu^1/2 u|^2)^1/2
  double l2_norm(const CVec& u) const;
  double weighted_l2_norm(const CVec& u) const;  // |nu^1/2 u|
  /// Dense DtN block on the boundary dofs (N_b x N_b), for diagnostics.
  Eigen::MatrixXcd dtn_block() const;
};

struct VolumeMatrices {
  RealSparse stiffness;
  RealSparse mass;
  RealSparse plain_mass;
};
VolumeMatrices assemble_volume(const CoefficientField& coeffs, const FeSpace& space, const Executor& exec = Executor{});

/// Assembles stiffness, mass and the modal DtN coupling. The number of DtN
/// modes is capped at (N_b - 1) / 2 so the trapezoid projection stays
/// unaliased; the cap is visible in system.dtn.n_max.
GalerkinSystem assemble(const CoefficientField& coeffs, std::shared_ptr<const FeSpace> space, const DtnOperator& dtn,
                        const Executor& exec = Executor{});

/// F_i = int f phi_i.
CVec assemble_load_source(const FeSpace& space, const ScalarField& f);
/// F_i = int_{Gamma_R} (du^I/dr - T_R u^I) phi_i via the modal data.
CVec assemble_load_scattering(const GalerkinSystem& system, const PlaneWave& wave);

/// Bordered sparse LU (UMFPACK) of K, reused for many right-hand sides.
class GalerkinSolver {
 public:
  explicit GalerkinSolver(const GalerkinSystem& system);
  ~GalerkinSolver();
  GalerkinSolver(const GalerkinSolver&) = delete;
  GalerkinSolver& operator=(const GalerkinSolver&) = delete;

  /// K u = b with iterative refinement to relative residual 1e-12.
  CVec solve(const CVec& b) const;
  /// K^H u = b; K is complex symmetric, so this is conj(K^-1 conj(b)).
  CVec solve_hermitian(const CVec& b) const;
  double residual(const CVec& u, const CVec& b) const;

 private:
  struct Impl;
  const GalerkinSystem& system_;
  std::unique_ptr<Impl> impl_;
};

struct DiscreteSolution {
  CVec dofs;
  std::shared_ptr<const FeSpace> space;
  double k = 0.0;
  double residual = 0.0;  // |K u - b| / |b|
};

DiscreteSolution solve(const GalerkinSystem& system);
/// S* f through conj(solve(load of conj f)); `load` is the load vector of f.
DiscreteSolution solve_adjoint(const GalerkinSystem& system, const CVec& load);

/// Quadrature evaluation of (|A^1/2 grad u|^2 + k^2 |nu^1/2 u|^2)^1/2.
double energy_norm(const CoefficientField& coeffs, const FeSpace& space, const CVec& u, double k);

/// A function with value, gradient and Hessian, for interpolation studies.
struct SmoothFunction {
  std::function<double(const Vec2&)> value;
  std::function<Vec2(const Vec2&)> gradient;
  std::function<Mat2(const Vec2&)> hessian;
};

struct InterpolationError {
  double l2 = 0.0;        // |nu^1/2 (v - I_h v)|
  double energy = 0.0;    // |A^1/2 grad (v - I_h v)|
  double h2_norm = 0.0;   // |v|_{H^2} full norm
  double h = 0.0;
  double ratio = 0.0;     // (l2 + h energy) / (h^2 |v|_{H^2})
  double l2_ratio = 0.0;  // l2 / (h^2 |v|_{H^2})
};

/// Nodal interpolation over all mesh vertices (including the obstacle boundary).
InterpolationError nodal_interpolation_error(const CoefficientField& coeffs, const Mesh& mesh, const SmoothFunction& v);

struct FieldErrors {
  double l2_error = 0.0;
  double energy_error = 0.0;
  double l2_exact = 0.0;
  double energy_exact = 0.0;
};

/// Errors of a discrete field (dof vector) against an exact field by quadrature.
FieldErrors field_errors(const CoefficientField& coeffs, const FeSpace& space, const CVec& u, double k,
                         const ScalarField& exact, const GradientField& exact_gradient, const Executor& exec = Executor{});

/// Best approximation from the space in the energy inner product:
/// (S + k^2 M) c = E(exact, phi_i).
CVec energy_projection(const GalerkinSystem& system, const CoefficientField& coeffs, const ScalarField& exact,
                       const GradientField& exact_gradient);

struct H2Norms {
  double l2 = 0.0;
  double gradient = 0.0;
  double hessian = 0.0;  // (v_xx^2 + v_xy^2 + v_yy^2) integrated, square-rooted
  double full() const { return std::sqrt(l2 * l2 + gradient * gradient + hessian * hessian); }
};

/// Discrete H^2 norm over triangles inside B(0, radius) from area-weighted
/// gradient recovery: the Hessian is the elementwise gradient of the
/// recovered (P1) gradient field.
H2Norms discrete_h2_norm(const Mesh& mesh, const CVec& vertex_values, double radius);

}  // namespace helmkit
