#pragma once

#include <functional>
#include <memory>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "helmkit/types.hpp"

namespace helmkit {

/// Rotationally symmetric setting: A = I, nu = nu(r), optional sound-soft
/// disk of radius a centred at the origin, DtN on r = R. Fields of the form
/// u(r) e^{i n theta} decouple; each mode is a P1 problem on [a, R].
struct RadialSetup {
  double a = 0.0;  // 0: no obstacle
  double R = 1.0;
  double k = 1.0;
  std::function<double(double)> nu = [](double) { return 1.0; };
  int elements = 1000;
};

/// One Fourier mode. Matrices act on nodal values at r_i = a + (R - a) i / N
/// with Dirichlet nodes removed (r = a when a > 0; r = 0 when n != 0).
/// Inner products carry the 2 pi r weight, so norms agree with the plane.
class RadialMode {
 public:
  RadialMode(const RadialSetup& setup, int n);
  ~RadialMode();
  RadialMode(RadialMode&&) noexcept;

  int size() const { return static_cast<int>(radius_.size()); }
  int mode() const { return n_; }
  const Eigen::VectorXd& radii() const { return radius_; }

  const Eigen::SparseMatrix<double>& mass() const { return mass_; }      // plain L2
  const Eigen::SparseMatrix<double>& energy() const { return energy_; }  // |grad|^2 + k^2 nu |.|^2
  /// a(u, v) = v^H K u.
  const Eigen::SparseMatrix<cplx>& system() const { return K_; }

  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const;            // K^-1 b
  Eigen::VectorXcd solve_hermitian(const Eigen::VectorXcd& b) const;  // K^-H b
  Eigen::VectorXcd mass_solve(const Eigen::VectorXcd& b) const;       // M^-1 b

 private:
  struct Impl;
  int n_;
  Eigen::VectorXd radius_;
  Eigen::SparseMatrix<double> mass_, energy_;
  Eigen::SparseMatrix<cplx> K_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace helmkit
