#include "helmkit/radial.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "helmkit/bessel.hpp"

namespace helmkit {

struct RadialMode::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> mass_ldlt;
};

RadialMode::RadialMode(RadialMode&&) noexcept = default;
RadialMode::~RadialMode() = default;

RadialMode::RadialMode(const RadialSetup& s, int n) : n_(n), impl_(std::make_unique<Impl>()) {
  if (!(s.R > s.a) || s.a < 0.0 || !(s.k > 0.0) || s.elements < 2) throw ConfigError("RadialMode: bad setup");
  const int N = s.elements;
  const double h = (s.R - s.a) / N;
  const bool pin_inner = s.a > 0.0 || n != 0;
  const int first = pin_inner ? 1 : 0;
  const int m = N + 1 - first;
  radius_.resize(m);
  for (int i = 0; i < m; ++i) radius_(i) = s.a + h * (i + first);

  // 3-point Gauss-Legendre on each element
  const double gx[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  std::vector<Eigen::Triplet<double>> tm, te, tk;
  const double k2 = s.k * s.k;
  const double n2 = static_cast<double>(n) * n;
  for (int e = 0; e < N; ++e) {
    const double r0 = s.a + h * e;
    double lm[2][2] = {}, ls[2][2] = {}, lnu[2][2] = {};
    for (int q = 0; q < 3; ++q) {
      const double r = r0 + 0.5 * h * (1.0 + gx[q]);
      const double w = 0.5 * h * gw[q] * 2.0 * pi;
      const double phi[2] = {(r0 + h - r) / h, (r - r0) / h};
      const double dphi[2] = {-1.0 / h, 1.0 / h};
      const double nu = s.nu(r);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          lm[i][j] += w * r * phi[i] * phi[j];
          lnu[i][j] += w * r * nu * phi[i] * phi[j];
          ls[i][j] += w * (r * dphi[i] * dphi[j] + (r > 0.0 ? n2 / r : 0.0) * phi[i] * phi[j]);
        }
      }
    }
    for (int i = 0; i < 2; ++i) {
      const int di = e + i - first;
      if (di < 0) continue;
      for (int j = 0; j < 2; ++j) {
        const int dj = e + j - first;
        if (dj < 0) continue;
        tm.emplace_back(di, dj, lm[i][j]);
        te.emplace_back(di, dj, ls[i][j] + k2 * lnu[i][j]);
        tk.emplace_back(di, dj, ls[i][j] - k2 * lnu[i][j]);
      }
    }
  }
  mass_.resize(m, m);
  energy_.resize(m, m);
  mass_.setFromTriplets(tm.begin(), tm.end());
  energy_.setFromTriplets(te.begin(), te.end());
  Eigen::SparseMatrix<double> kr(m, m);
  kr.setFromTriplets(tk.begin(), tk.end());
  K_ = kr.cast<cplx>();
  const cplx t = s.k * bessel::hankel_ratio(n, s.k * s.R);
  K_.coeffRef(m - 1, m - 1) -= 2.0 * pi * s.R * t;
  K_.makeCompressed();
  impl_->lu.compute(K_);
  if (impl_->lu.info() != Eigen::Success) throw NumericalError("RadialMode: singular system");
  impl_->mass_ldlt.compute(mass_);
  if (impl_->mass_ldlt.info() != Eigen::Success) throw NumericalError("RadialMode: mass factorization failed");
}

Eigen::VectorXcd RadialMode::solve(const Eigen::VectorXcd& b) const { return impl_->lu.solve(b); }

Eigen::VectorXcd RadialMode::solve_hermitian(const Eigen::VectorXcd& b) const {
  // K is complex symmetric
  return Eigen::VectorXcd(impl_->lu.solve(b.conjugate())).conjugate();
}

Eigen::VectorXcd RadialMode::mass_solve(const Eigen::VectorXcd& b) const {
  Eigen::VectorXcd out(b.size());
  out.real() = impl_->mass_ldlt.solve(b.real().eval());
  out.imag() = impl_->mass_ldlt.solve(b.imag().eval());
  return out;
}

}  // namespace helmkit
