#include "helmkit/mie.hpp"

#include <cmath>

#include "helmkit/bessel.hpp"

namespace helmkit {

SoundSoftDisk::SoundSoftDisk(double k, double a, double alpha, int n_terms) : k_(k), a_(a), alpha_(alpha) {
  if (!(k > 0.0) || !(a > 0.0)) throw ConfigError("SoundSoftDisk needs k > 0 and a > 0");
  n_terms_ = n_terms > 0 ? n_terms : static_cast<int>(std::ceil(k * a)) + 40;
  const auto tab = bessel::cylinder(n_terms_, k * a);
  coeff_.resize(n_terms_ + 1);
  for (int n = 0; n <= n_terms_; ++n) coeff_[n] = tab.J[n] / tab.H(n);
}

namespace {

cplx ipow(int n) {
  static const cplx p[4] = {1.0, {0.0, 1.0}, -1.0, {0.0, -1.0}};
  return p[n % 4];
}

}  // namespace

cplx SoundSoftDisk::value(const Vec2& x) const {
  if (x.norm() < a_) return 0.0;
  return std::polar(1.0, k_ * (x.x() * std::cos(alpha_) + x.y() * std::sin(alpha_))) + scattered(x);
}

// Only the scattered series is summed; the incident part needs ~kr terms.
cplx SoundSoftDisk::scattered(const Vec2& x) const {
  const double r = x.norm();
  if (r < a_) return 0.0;
  const double th = std::atan2(x.y(), x.x()) - alpha_;
  const auto tab = bessel::cylinder(n_terms_, k_ * r);
  cplx u = 0.0;
  for (int n = 0; n <= n_terms_; ++n) {
    const double eps = n == 0 ? 1.0 : 2.0;
    u -= eps * ipow(n) * std::cos(n * th) * coeff_[n] * tab.H(n);
  }
  return u;
}

Eigen::Vector2cd SoundSoftDisk::gradient(const Vec2& x) const {
  const double r = x.norm();
  if (r < a_ || r == 0.0) return Eigen::Vector2cd::Zero();
  const double phi = std::atan2(x.y(), x.x());
  const double th = phi - alpha_;
  const auto tab = bessel::cylinder(n_terms_, k_ * r);
  cplx ur = 0.0, ut = 0.0;
  for (int n = 0; n <= n_terms_; ++n) {
    const double eps = n == 0 ? 1.0 : 2.0;
    const cplx c = eps * ipow(n);
    ur -= c * std::cos(n * th) * k_ * coeff_[n] * tab.dH(n);
    ut += c * static_cast<double>(n) * std::sin(n * th) * coeff_[n] * tab.H(n) / r;
  }
  const double cs = std::cos(phi), sn = std::sin(phi);
  const Vec2 d(std::cos(alpha_), std::sin(alpha_));
  const cplx inc = cplx(0.0, k_) * std::polar(1.0, k_ * x.dot(d));
  return {inc * d.x() + ur * cs - ut * sn, inc * d.y() + ur * sn + ut * cs};
}

}  // namespace helmkit
