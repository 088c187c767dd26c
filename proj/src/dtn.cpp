#include "helmkit/dtn.hpp"

#include <algorithm>
#include <cmath>

#include "helmkit/bessel.hpp"

namespace helmkit {

namespace {

cplx i_power(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void require_compatible(const FourierTrace& a, const FourierTrace& b) {
  if (a.n_max != b.n_max || a.R != b.R) throw ConfigError("Fourier traces have different radius or mode count");
}

void require_compatible(const DtnOperator& op, const FourierTrace& g) {
  if (g.R != op.R) throw ConfigError("trace radius does not match the DtN radius");
  if (g.n_max > op.n_max) throw ConfigError("trace has more Fourier modes than the DtN operator");
}

}  // namespace

int default_nmax(double k, double R) {
  const double kR = k * R;
  return static_cast<int>(std::ceil(kR)) + std::max(16, static_cast<int>(std::ceil(4.0 * std::cbrt(kR))));
}

DtnOperator build_dtn(double k, double R, int n_max) {
  if (!(k > 0.0 && R > 0.0)) throw ConfigError("build_dtn needs k > 0 and R > 0");
  DtnOperator op;
  op.k = k;
  op.R = R;
  op.n_max = n_max < 0 ? default_nmax(k, R) : n_max;
  op.t = bessel::hankel_ratios(op.n_max, k * R);
  for (auto& v : op.t) v *= k;
  return op;
}

cplx FourierTrace::evaluate(double theta) const {
  cplx s = 0.0;
  for (int n = -n_max; n <= n_max; ++n) s += (*this)[n] * std::polar(1.0, n * theta);
  return s;
}

FourierTrace FourierTrace::from_samples(double R, int n_max, const std::vector<cplx>& values, double offset) {
  const int m = static_cast<int>(values.size());
  if (m < 2 * n_max + 1) throw ConfigError("too few samples for the requested Fourier modes");
  FourierTrace g(R, n_max);
  for (int n = -n_max; n <= n_max; ++n) {
    cplx s = 0.0;
    for (int j = 0; j < m; ++j) s += values[j] * std::polar(1.0, -n * (2.0 * pi * j / m + offset));
    g[n] = s / static_cast<double>(m);
  }
  return g;
}

std::vector<cplx> FourierTrace::sample(int m, double offset) const {
  std::vector<cplx> out(m);
  for (int j = 0; j < m; ++j) out[j] = evaluate(2.0 * pi * j / m + offset);
  return out;
}

double FourierTrace::l2_norm_squared() const {
  double s = 0.0;
  for (const auto& v : c) s += std::norm(v);
  return 2.0 * pi * R * s;
}

double FourierTrace::energy_norm_squared(double k) const {
  double s = 0.0;
  for (int n = -n_max; n <= n_max; ++n) s += std::sqrt(k * k + n * n / (R * R)) * std::norm((*this)[n]);
  return 2.0 * pi * R * s;
}

FourierTrace FourierTrace::conjugate() const {
  FourierTrace out(R, n_max);
  for (int n = -n_max; n <= n_max; ++n) out[n] = std::conj((*this)[-n]);
  return out;
}

FourierTrace apply_dtn(const DtnOperator& op, const FourierTrace& g) {
  require_compatible(op, g);
  FourierTrace out(g.R, g.n_max);
  for (int n = -g.n_max; n <= g.n_max; ++n) out[n] = op.coefficient(n) * g[n];
  return out;
}

cplx dtn_pairing(const DtnOperator& op, const FourierTrace& g, const FourierTrace& h) {
  require_compatible(g, h);
  require_compatible(op, g);
  cplx s = 0.0;
  for (int n = -g.n_max; n <= g.n_max; ++n) s += op.coefficient(n) * g[n] * std::conj(h[n]);
  return 2.0 * pi * op.R * s;
}

double dtn_continuity_constant(const DtnOperator& op) {
  double c = 0.0;
  for (int n = 0; n <= op.n_max; ++n) {
    c = std::max(c, std::abs(op.t[n]) / std::sqrt(op.k * op.k + n * n / (op.R * op.R)));
  }
  return c;
}

Vec2 PlaneWave::direction() const { return {std::cos(angle), std::sin(angle)}; }

cplx PlaneWave::value(const Vec2& x) const { return std::polar(1.0, k * direction().dot(x)); }

Eigen::Vector2cd PlaneWave::gradient(const Vec2& x) const {
  const cplx u = value(x);
  const Vec2 d = direction();
  return Eigen::Vector2cd(cplx(0.0, k * d.x()) * u, cplx(0.0, k * d.y()) * u);
}

FourierTrace incident_trace(const DtnOperator& op, const PlaneWave& wave) {
  if (std::abs(wave.k - op.k) > 1e-12 * op.k) throw ConfigError("incident wavenumber differs from the DtN wavenumber");
  const auto tab = bessel::cylinder(op.n_max, op.k * op.R);
  FourierTrace g(op.R, op.n_max);
  for (int n = -op.n_max; n <= op.n_max; ++n) {
    const int m = std::abs(n);
    g[n] = i_power(m) * tab.J[m] * std::polar(1.0, -n * wave.angle);
  }
  return g;
}

FourierTrace incident_wave_data(const DtnOperator& op, const PlaneWave& wave) {
  if (std::abs(wave.k - op.k) > 1e-12 * op.k) throw ConfigError("incident wavenumber differs from the DtN wavenumber");
  const auto tab = bessel::cylinder(op.n_max, op.k * op.R);
  FourierTrace g(op.R, op.n_max);
  for (int n = -op.n_max; n <= op.n_max; ++n) {
    const int m = std::abs(n);
    g[n] = cplx(0.0, -2.0) * i_power(m) * std::polar(1.0, -n * wave.angle) / (pi * op.R * tab.H(m));
  }
  return g;
}

}  // namespace helmkit
