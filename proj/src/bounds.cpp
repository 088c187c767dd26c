#include "helmkit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <Eigen/SparseCholesky>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>
#include <nlohmann/json.hpp>

#include "helmkit/bessel.hpp"
#include "helmkit/dtn.hpp"
#include "helmkit/rng.hpp"

namespace helmkit {

namespace {

const std::vector<std::string>& ledger_keys() {
  static const std::vector<std::string> keys = {"C_int_tilde", "C_int", "C_DtN_tilde", "C_DtN", "C_H2", "C_cont",
                                                "A_min", "A_max", "nu_min", "nu_max", "k0", "L_ray", "s"};
  return keys;
}

double* ledger_field(ConstantsLedger& l, const std::string& key) {
  if (key == "C_int_tilde") return &l.C_int_tilde;
  if (key == "C_int") return &l.C_int;
  if (key == "C_DtN_tilde") return &l.C_DtN_tilde;
  if (key == "C_DtN") return &l.C_DtN;
  if (key == "C_H2") return &l.C_H2;
  if (key == "C_cont") return &l.C_cont;
  if (key == "A_min") return &l.A_min;
  if (key == "A_max") return &l.A_max;
  if (key == "nu_min") return &l.nu_min;
  if (key == "nu_max") return &l.nu_max;
  if (key == "k0") return &l.k0;
  if (key == "L_ray") return &l.L_ray;
  if (key == "s") return &l.s;
  return nullptr;
}

}  // namespace

void ConstantsLedger::derive() {
  C_int = compute_C_int(C_int_tilde, A_max, nu_max);
  C_DtN = compute_C_DtN(C_DtN_tilde, A_min, nu_min);
  C_cont = 1.0 + C_DtN;
  provenance["C_int"] = "formula";
  provenance["C_DtN"] = "formula";
  provenance["C_cont"] = "formula";
}

void ConstantsLedger::validate() const {
  auto copy = *this;
  for (const auto& key : ledger_keys()) {
    const double v = *ledger_field(copy, key);
    if (!std::isfinite(v)) throw ConfigError("ledger entry " + key + " is not finite");
    if (key != "s" && !(v > 0.0)) throw ConfigError("ledger entry " + key + " must be positive");
  }
  if (C_cont > (1.0 + C_DtN) * (1.0 + 1e-12)) throw ConfigError("ledger: C_cont exceeds 1 + C_DtN");
  if (L_ray < 2.0) throw ConfigError("ledger: L_ray must be at least 2");
  if (A_min > A_max || nu_min > nu_max) throw ConfigError("ledger: coefficient bounds are inverted");
  if (s < 0.0 || s > 2.0) throw ConfigError("ledger: s must lie in [0, 2]");
}

std::string ConstantsLedger::to_json() const {
  nlohmann::ordered_json j;
  auto copy = *this;
  for (const auto& key : ledger_keys()) j[key] = *ledger_field(copy, key);
  nlohmann::ordered_json prov = nlohmann::ordered_json::object();
  for (const auto& [k, v] : provenance) prov[k] = v;
  j["provenance"] = prov;
  return j.dump(2);
}

ConstantsLedger ConstantsLedger::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("ledger JSON: ") + e.what());
  }
  ConstantsLedger l;
  for (const auto& key : ledger_keys()) {
    if (!j.contains(key) || !j[key].is_number()) throw ConfigError("ledger JSON: missing number '" + key + "'");
    *ledger_field(l, key) = j[key].get<double>();
  }
  if (j.contains("provenance")) {
    for (const auto& [k, v] : j["provenance"].items()) l.provenance[k] = v.get<std::string>();
  }
  l.validate();
  return l;
}

double compute_C_int(double C_int_tilde, double A_max, double nu_max) {
  return C_int_tilde * std::max(std::sqrt(A_max), std::sqrt(nu_max));
}

double compute_C_DtN(double C_DtN_tilde, double A_min, double nu_min) {
  return C_DtN_tilde * std::max(1.0 / std::sqrt(A_min), 1.0 / std::sqrt(nu_min));
}

double resolvent_upper_bound(double L_ray, double k, double s) {
  if (!(s >= 0.0 && s <= 2.0)) throw ConfigError("resolvent_upper_bound: s must lie in [0, 2]");
  if (!(k > 0.0)) throw ConfigError("resolvent_upper_bound: k must be positive");
  return std::pow(2.0, s / 2.0 + 1.0) * L_ray * std::pow(k, s - 1.0) / pi;
}

double volterra_norm(double L) {
  if (!(L > 0.0)) throw ConfigError("volterra_norm: L must be positive");
  return 2.0 * L / pi;
}

VolterraEstimate volterra_discrete(double L, int n, double tolerance) {
  if (!(L > 0.0) || n < 1) throw ConfigError("volterra_discrete: need L > 0 and n >= 1");
  const double w = L / n;
  std::vector<double> x(n, 1.0), y(n), z(n);
  VolterraEstimate out;
  double prev = 0.0;
  for (int it = 1; it <= 10000; ++it) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) y[i] = (acc += w * x[i]);
    acc = 0.0;
    for (int i = n - 1; i >= 0; --i) z[i] = (acc += w * y[i]);
    double zx = 0.0, xx = 0.0, zz = 0.0;
    for (int i = 0; i < n; ++i) {
      zx += z[i] * x[i];
      xx += x[i] * x[i];
      zz += z[i] * z[i];
    }
    out.sigma = std::sqrt(zx / xx);
    out.iterations = it;
    const double scale = 1.0 / std::sqrt(zz);
    for (int i = 0; i < n; ++i) x[i] = z[i] * scale;
    if (it > 1 && std::abs(out.sigma - prev) <= tolerance * out.sigma) {
      out.converged = true;
      break;
    }
    prev = out.sigma;
  }
  return out;
}

double mesh_threshold_rhs(const ConstantsLedger& l, double k, double h) {
  const double bracket = std::sqrt(l.nu_max) + (1.0 + std::sqrt(l.nu_min)) / l.k0 + 1.0 / (l.k0 * l.k0 * std::sqrt(l.nu_min));
  return h * k * k * std::sqrt(1.0 + (h * k) * (h * k)) * l.L_ray * l.C_int * l.C_H2 * (1.0 + l.C_DtN) *
         std::sqrt(l.nu_max / l.nu_min) * 4.0 * std::sqrt(2.0) / pi * bracket;
}

ThresholdReport mesh_threshold(const ConstantsLedger& ledger, double k, double h_query) {
  ledger.validate();
  if (!(k > 0.0) || !(h_query > 0.0)) throw ConfigError("mesh_threshold: k and h must be positive");
  ThresholdReport r;
  r.k = k;
  r.h_query = h_query;
  r.rhs = mesh_threshold_rhs(ledger, k, h_query);
  r.admissible = r.rhs <= 1.0;
  r.quasioptimality_constant = 2.0 * (1.0 + ledger.C_DtN);
  auto it = ledger.provenance.find("C_H2");
  r.C_H2_provenance = it == ledger.provenance.end() ? "unspecified" : it->second;
  double lo = 0.0, hi = 1.0 / (k * k);
  while (mesh_threshold_rhs(ledger, k, hi) <= 1.0) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mesh_threshold_rhs(ledger, k, mid) <= 1.0 ? lo : hi) = mid;
  }
  r.h_max = lo;
  return r;
}

double schatz_bound(const ConstantsLedger& l, double k) { return 1.0 / (2.0 * l.C_cont * std::sqrt(l.nu_max) * k); }

bool schatz_condition(const ConstantsLedger& l, double k, double eta) {
  if (eta < 0.0) throw ConfigError("schatz_condition: eta must be nonnegative");
  return eta <= schatz_bound(l, k);
}

double h2_bound_rhs(const ConstantsLedger& l, double k) {
  const double bracket = std::sqrt(l.nu_max) + (1.0 + std::sqrt(l.nu_min)) / l.k0 + 1.0 / (l.k0 * l.k0 * std::sqrt(l.nu_min));
  return k * l.C_H2 * 2.0 * std::sqrt(2.0) / (pi * std::sqrt(l.nu_min)) * l.L_ray * bracket;
}

namespace {

using quiet = boost::math::policies::policy<boost::math::policies::overflow_error<boost::math::policies::ignore_error>,
                                            boost::math::policies::underflow_error<boost::math::policies::ignore_error>>;

// I_{n+1}(z) / I_n(z) by backward continued fraction.
double modified_ratio(int n, double z) {
  const int top = n + 60 + static_cast<int>(2.0 * z);
  double r = 0.0;
  for (int m = top; m > n; --m) r = 1.0 / (2.0 * m / z + r);
  return r;
}

// u'(R) / k for the minimal H^1_k extension of e^{i n theta}, u(R) = 1, u'(a) = 0.
double extension_log_derivative(int n, double k, double R, double a) {
  const double z = k * R;
  const double ip_over_i = modified_ratio(n, z) + n / z;  // I_n'(z) / I_n(z)
  if (a <= 0.0) return ip_over_i;
  const double za = k * a;
  const double Ia = boost::math::cyl_bessel_i_prime(n, za, quiet());
  const double Ka = boost::math::cyl_bessel_k_prime(n, za, quiet());
  const double IR = boost::math::cyl_bessel_i(n, z, quiet());
  const double KR = boost::math::cyl_bessel_k(n, z, quiet());
  const double KpR = boost::math::cyl_bessel_k_prime(n, z, quiet());
  const double beta = -Ia / Ka;
  const double c = beta * KR / IR;
  const double cp = beta * KpR / IR;
  if (!std::isfinite(c) || !std::isfinite(cp)) return ip_over_i;
  return (ip_over_i + cp) / (1.0 + c);
}

}  // namespace

DtnConstantEstimate estimate_C_DtN_tilde(double R, double inner_radius, double k0, double k_max, int k_samples) {
  if (!(R > 0.0) || inner_radius < 0.0 || inner_radius >= R) throw ConfigError("estimate_C_DtN_tilde: bad radii");
  if (!(k0 > 0.0) || k_max < k0 || k_samples < 1) throw ConfigError("estimate_C_DtN_tilde: bad k range");
  DtnConstantEstimate best;
  for (int i = 0; i < k_samples; ++i) {
    const double k = k_samples == 1 ? k0 : k0 * std::pow(k_max / k0, static_cast<double>(i) / (k_samples - 1));
    const int n_max = 2 * default_nmax(k, R);
    const auto t = bessel::hankel_ratios(n_max, k * R);
    for (int n = 0; n <= n_max; ++n) {
      const double ratio = std::abs(k * t[n]) / (k * extension_log_derivative(n, k, R, inner_radius));
      if (ratio > best.value) best = {ratio, k, n};
    }
  }
  return best;
}

InterpolationConstantEstimate estimate_C_int_tilde(const Obstacle& obstacle, double R, const std::vector<double>& h_list) {
  const auto identity = CoefficientField::identity(R);
  std::vector<SmoothFunction> tests;
  tests.push_back({[](const Vec2& x) { return x.x() * x.x(); }, [](const Vec2& x) { return Vec2(2.0 * x.x(), 0.0); },
                   [](const Vec2&) { return Mat2(Eigen::Vector2d(2.0, 0.0).asDiagonal()); }});
  for (const Vec2& w : {Vec2(3.0, 1.0), Vec2(-2.0, 5.0)}) {
    tests.push_back({[w](const Vec2& x) { return std::sin(w.dot(x)); }, [w](const Vec2& x) { return Vec2(std::cos(w.dot(x)) * w); },
                     [w](const Vec2& x) { return Mat2(-std::sin(w.dot(x)) * w * w.transpose()); }});
  }
  const Vec2 c(0.3, -0.2);
  tests.push_back({[c](const Vec2& x) { return std::exp(-2.0 * (x - c).squaredNorm()); },
                   [c](const Vec2& x) { return Vec2(-4.0 * (x - c) * std::exp(-2.0 * (x - c).squaredNorm())); },
                   [c](const Vec2& x) {
                     const Vec2 d = x - c;
                     return Mat2((16.0 * d * d.transpose() - 4.0 * Mat2::Identity()) * std::exp(-2.0 * d.squaredNorm()));
                   }});
  InterpolationConstantEstimate out;
  for (double h : h_list) {
    const auto mesh = generate_mesh(obstacle, R, h);
    double worst = 0.0;
    for (const auto& v : tests) worst = std::max(worst, nodal_interpolation_error(identity, mesh, v).ratio);
    out.h.push_back(mesh.h_fem);
    out.ratio.push_back(worst);
    out.value = std::max(out.value, worst);
  }
  return out;
}

H2ConstantEstimate estimate_C_H2(const CoefficientField& coeffs, const Obstacle& obstacle, double R, double b, double h,
                                 int samples, std::uint64_t seed, const Executor& exec) {
  if (!(b > 0.0) || samples < 1) throw ConfigError("estimate_C_H2: need b > 0 and samples >= 1");
  const double Rb = R + b;
  auto mesh = std::make_shared<Mesh>(generate_mesh(obstacle, Rb, h));
  const FeSpace space(mesh, true);
  const auto vol = assemble_volume(coeffs, space, exec);
  Eigen::SimplicialLDLT<RealSparse> ldlt(vol.stiffness);
  if (ldlt.info() != Eigen::Success) throw NumericalError("estimate_C_H2: stiffness factorization failed");

  auto ratios = exec.map<double>(static_cast<std::size_t>(samples), [&](std::size_t i) {
    ScalarField f;
    if (i == 0) {
      f = [](const Vec2&) { return cplx(1.0); };
    } else {
      CounterRng rng(seed, i);
      struct Bump {
        Vec2 c;
        double w, a;
      };
      std::vector<Bump> bumps(4);
      for (auto& bump : bumps) {
        const double r = Rb * std::sqrt(rng.uniform());
        const double t = rng.uniform(0.0, 2.0 * pi);
        bump = {r * Vec2(std::cos(t), std::sin(t)), rng.uniform(0.2, 0.6) * Rb, rng.normal()};
      }
      f = [bumps](const Vec2& x) {
        double s = 0.0;
        for (const auto& bump : bumps) s += bump.a * std::exp(-(x - bump.c).squaredNorm() / (bump.w * bump.w));
        return cplx(s);
      };
    }
    const CVec F = assemble_load_source(space, f);
    const Eigen::VectorXd v = -ldlt.solve(F.real().eval());
    const double grad = std::sqrt(std::max(0.0, v.dot(vol.stiffness * v)));
    const double l2 = std::sqrt(std::max(0.0, v.dot(vol.plain_mass * v)));
    const double f_norm =
        field_errors(coeffs, space, CVec::Zero(space.ndofs()), 0.0, f, [](const Vec2&) { return CGrad::Zero().eval(); })
            .l2_exact;
    const CVec vv = space.to_vertices(v.cast<cplx>());
    const double h2 = discrete_h2_norm(*mesh, vv, R).full();
    return h2 / (grad + l2 + f_norm);
  });
  H2ConstantEstimate out;
  out.ratios = ratios;
  for (double r : ratios) {
    out.value = std::max(out.value, r);
    out.running_max.push_back(out.value);
  }
  return out;
}

}  // namespace helmkit
