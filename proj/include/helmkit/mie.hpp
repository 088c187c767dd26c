#pragma once

#include <vector>

#include <Eigen/Core>

#include "helmkit/types.hpp"

namespace helmkit {

/// Total field of a plane wave exp(i k x.d), d = (cos alpha, sin alpha),
/// scattered by a sound-soft disk of radius a centred at the origin, in a
/// homogeneous medium (A = I, nu = 1).
class SoundSoftDisk {
 public:
  SoundSoftDisk(double k, double a, double alpha, int n_terms = -1);

  cplx value(const Vec2& x) const;
  Eigen::Vector2cd gradient(const Vec2& x) const;
  /// Scattered part u - u^I.
  cplx scattered(const Vec2& x) const;

  int terms() const { return n_terms_; }

 private:
  double k_, a_, alpha_;
  int n_terms_;
  std::vector<cplx> coeff_;  // J_n(ka) / H_n(ka)
};

}  // namespace helmkit
