#include "helmkit/raytrace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace helmkit {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::escaped: return "escaped";
    case Termination::trapped_budget_exceeded: return "trapped_budget_exceeded";
    case Termination::glancing_flagged: return "glancing_flagged";
  }
  return "unknown";
}

void RayConfig::validate() const {
  if (!(step_size > 0.0)) throw ConfigError("ray step_size must be positive");
  if (!(max_time_budget > 0.0)) throw ConfigError("ray max_time_budget must be positive");
  if (!(glancing_threshold > 0.0)) throw ConfigError("glancing_threshold must be positive");
  if (grid_positions < 2) throw ConfigError("grid_positions must be at least 2");
  if (grid_directions < 1) throw ConfigError("grid_directions must be positive");
  if (refinement_rounds < 0) throw ConfigError("refinement_rounds must be nonnegative");
  if (refinement_points < 3) throw ConfigError("refinement_points must be at least 3");
  if (!(boundary_hit_tolerance > 0.0)) throw ConfigError("boundary_hit_tolerance must be positive");
}

double hamiltonian(const CoefficientField& coeffs, const PhasePoint& p) {
  const auto s = coeffs.sample(p.x);
  return p.xi.dot(s.A * p.xi) / s.nu - 1.0;
}

PhaseVelocity hamiltonian_vector_field(const CoefficientField& coeffs, const PhasePoint& p) {
  const auto s = coeffs.sample(p.x);
  const double q = p.xi.dot(s.A * p.xi);
  PhaseVelocity v;
  v.dx = 2.0 * (s.A * p.xi) / s.nu;
  for (int i = 0; i < 2; ++i) {
    v.dxi(i) = -(p.xi.dot(s.dA[i] * p.xi) / s.nu - q * s.dnu(i) / (s.nu * s.nu));
  }
  return v;
}

double metric_pairing(const CoefficientField& coeffs, const Vec2& x, const Vec2& a, const Vec2& b) {
  const auto s = coeffs.sample(x);
  return a.dot(s.A * b) / s.nu;
}

double normal_momentum(const CoefficientField& coeffs, const Vec2& x, const Vec2& xi, const Vec2& n) {
  const auto s = coeffs.sample(x);
  return xi.dot(s.A * n) / std::sqrt(n.dot(s.A * n) * s.nu);
}

std::optional<PhasePoint> reflect(const CoefficientField& coeffs, const Obstacle& obstacle,
                                  const PhasePoint& p, double glancing_threshold, double boundary_tolerance) {
  const Vec2 n = obstacle.boundary_normal(p.x, boundary_tolerance);
  const auto s = coeffs.sample(p.x);
  const double xn = p.xi.dot(s.A * n);
  const double nn = n.dot(s.A * n);
  if (std::abs(xn / std::sqrt(nn * s.nu)) <= glancing_threshold) return std::nullopt;
  PhasePoint out = p;
  out.xi = p.xi - (2.0 * xn / nn) * n;
  return out;
}

namespace {

struct State {
  Vec2 x;
  Vec2 xi;
};

State rk4_step(const CoefficientField& coeffs, const State& y, double h) {
  auto f = [&](const State& z) {
    const auto v = hamiltonian_vector_field(coeffs, PhasePoint{z.x, z.xi});
    return State{v.dx, v.dxi};
  };
  const State k1 = f(y);
  const State k2 = f({y.x + 0.5 * h * k1.x, y.xi + 0.5 * h * k1.xi});
  const State k3 = f({y.x + 0.5 * h * k2.x, y.xi + 0.5 * h * k2.xi});
  const State k4 = f({y.x + h * k3.x, y.xi + h * k3.xi});
  return {y.x + (h / 6.0) * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
          y.xi + (h / 6.0) * (k1.xi + 2.0 * k2.xi + 2.0 * k3.xi + k4.xi)};
}

TrajectorySample make_sample(const CoefficientField& coeffs, double s, const State& y) {
  TrajectorySample t;
  t.s = s;
  t.p = {y.x, y.xi};
  t.velocity = hamiltonian_vector_field(coeffs, t.p).dx;
  return t;
}

}  // namespace

Trajectory integrate_ray(const CoefficientField& coeffs, const Obstacle& obstacle, const TruncationGeometry& geom,
                         const PhasePoint& p0, const RayConfig& cfg) {
  cfg.validate();
  const double H0 = hamiltonian(coeffs, p0);
  if (std::abs(H0) > cfg.shell_tolerance) {
    std::ostringstream msg;
    msg << "initial phase point is off the characteristic set: H = " << H0;
    throw ConfigError(msg.str());
  }
  const bool has_obstacle = !obstacle.empty();
  if (has_obstacle && obstacle.signed_distance(p0.x) < -cfg.boundary_hit_tolerance) {
    throw ConfigError("initial point lies inside the obstacle");
  }

  Trajectory traj;
  State y{p0.x, p0.xi};
  double s = 0.0;
  traj.samples.push_back(make_sample(coeffs, s, y));
  const double Rsq = geom.R_ray * geom.R_ray;

  while (true) {
    if (y.x.squaredNorm() > Rsq && y.x.dot(traj.samples.back().velocity) > 0.0) {
      traj.termination = Termination::escaped;
      return traj;
    }
    if (s >= cfg.max_time_budget) {
      traj.termination = Termination::trapped_budget_exceeded;
      return traj;
    }
    const double h = std::min(cfg.step_size, cfg.max_time_budget - s);
    State next = rk4_step(coeffs, y, h);
    if (has_obstacle && obstacle.signed_distance(next.x) < 0.0) {
      // Bisect the step length so that the impact point sits just outside.
      double lo = 0.0;
      double hi = h;
      State hit = y;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const State trial = rk4_step(coeffs, y, mid);
        const double d = obstacle.signed_distance(trial.x);
        if (d >= 0.0) {
          lo = mid;
          hit = trial;
          if (d <= cfg.boundary_hit_tolerance) break;
        } else {
          hi = mid;
        }
        if (hi - lo <= 1e-16 * std::max(1.0, s)) break;
      }
      s += lo;
      y = hit;
      traj.samples.push_back(make_sample(coeffs, s, y));
      const auto out = reflect(coeffs, obstacle, {y.x, y.xi}, cfg.glancing_threshold,
                               std::max(1e-6, 1e3 * cfg.boundary_hit_tolerance));
      if (!out) {
        traj.termination = Termination::glancing_flagged;
        return traj;
      }
      traj.reflections.push_back({s, y.x, y.xi, out->xi});
      y.xi = out->xi;
      traj.samples.push_back(make_sample(coeffs, s, y));
      continue;
    }
    s += h;
    y = next;
    traj.samples.push_back(make_sample(coeffs, s, y));
  }
}

double time_in_ball(const Trajectory& traj, double R) {
  if (traj.termination != Termination::escaped) {
    throw NumericalError("time_in_ball is undefined for a ray that did not escape (" +
                         to_string(traj.termination) + ")");
  }
  const auto& S = traj.samples;
  const double Rsq = R * R;
  std::ptrdiff_t last = -1;
  for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(S.size()) - 1; i >= 0; --i) {
    if (S[i].p.x.squaredNorm() <= Rsq) {
      last = i;
      break;
    }
  }
  if (last < 0) return 0.0;
  if (last + 1 == static_cast<std::ptrdiff_t>(S.size())) return S[last].s;

  const auto& a = S[last];
  const auto& b = S[last + 1];
  const double h = b.s - a.s;
  if (h <= 0.0) return a.s;
  auto hermite = [&](double t) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    return Vec2((2 * t3 - 3 * t2 + 1) * a.p.x + (t3 - 2 * t2 + t) * h * a.velocity +
                (-2 * t3 + 3 * t2) * b.p.x + (t3 - t2) * h * b.velocity);
  };
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hermite(mid).squaredNorm() <= Rsq) lo = mid;
    else hi = mid;
  }
  return a.s + 0.5 * (lo + hi) * h;
}

Vec2 cosphere_covector(const CoefficientField& coeffs, const Vec2& x, double phi) {
  const auto s = coeffs.sample(x);
  const Vec2 e(std::cos(phi), std::sin(phi));
  return e * std::sqrt(s.nu / e.dot(s.A * e));
}

namespace {

struct Candidate {
  double r;
  double theta;
  double phi;
};

struct Outcome {
  Termination termination = Termination::escaped;
  double value = -1.0;
  PhasePoint p0;
};

PhasePoint initial_point(const CoefficientField& coeffs, const Candidate& c) {
  const Vec2 x = c.r * Vec2(std::cos(c.theta), std::sin(c.theta));
  return {x, cosphere_covector(coeffs, x, c.phi)};
}

bool admissible_base(const Obstacle& obstacle, const Vec2& x, double tol) {
  return obstacle.empty() || obstacle.signed_distance(x) > tol;
}

std::vector<Candidate> base_grid(const Obstacle& obstacle, double R, const RayConfig& cfg) {
  std::vector<Candidate> out;
  const int nr = cfg.grid_positions;
  const int nt = 2 * (cfg.grid_positions - 1);
  for (int i = 0; i < nr; ++i) {
    const double r = R * i / (nr - 1);
    const int count = i == 0 ? 1 : nt;
    for (int j = 0; j < count; ++j) {
      const double theta = cfg.frame_rotation + 2.0 * pi * j / nt;
      const Vec2 x = r * Vec2(std::cos(theta), std::sin(theta));
      if (!admissible_base(obstacle, x, cfg.boundary_hit_tolerance)) continue;
      for (int l = 0; l < cfg.grid_directions; ++l) {
        out.push_back({r, theta, cfg.frame_rotation + 2.0 * pi * l / cfg.grid_directions});
      }
    }
  }
  return out;
}

std::vector<Outcome> run_candidates(const CoefficientField& coeffs, const Obstacle& obstacle,
                                    const TruncationGeometry& ray_geom, double R, const RayConfig& cfg,
                                    const std::vector<Candidate>& cands, const Executor& exec,
                                    bool measure) {
  return exec.map<Outcome>(cands.size(), [&](std::size_t i) {
    Outcome o;
    o.p0 = initial_point(coeffs, cands[i]);
    const Trajectory t = integrate_ray(coeffs, obstacle, ray_geom, o.p0, cfg);
    o.termination = t.termination;
    if (measure && t.termination == Termination::escaped) o.value = time_in_ball(t, R);
    return o;
  });
}

}  // namespace

LongestRayResult longest_ray_length(const CoefficientField& coeffs, const Obstacle& obstacle,
                                    const TruncationGeometry& geom, double R, const RayConfig& cfg,
                                    const Executor& exec) {
  cfg.validate();
  if (!(R > 0.0)) throw ConfigError("longest_ray_length: R must be positive");
  // Outside B(0, R_eff) the metric is Euclidean and the ball contains B(0, R),
  // so an outgoing ray there never returns to B(0, R).
  TruncationGeometry ray_geom = geom;
  ray_geom.R_ray = std::max({R, coeffs.support_radius(), obstacle.empty() ? 0.0 : obstacle.extent()});

  LongestRayResult result;
  Candidate best{};
  bool have_best = false;

  auto absorb = [&](const std::vector<Candidate>& cands, const std::vector<Outcome>& outs) {
    for (std::size_t i = 0; i < cands.size(); ++i) {
      ++result.stats.samples;
      switch (outs[i].termination) {
        case Termination::glancing_flagged: ++result.stats.glancing; break;
        case Termination::trapped_budget_exceeded:
          ++result.stats.budget_exceeded;
          result.censored.push_back(outs[i].p0);
          break;
        case Termination::escaped:
          if (!have_best || outs[i].value > result.L) {
            result.L = outs[i].value;
            result.maximizer = outs[i].p0;
            best = cands[i];
            have_best = true;
          }
          break;
      }
    }
  };

  const auto grid = base_grid(obstacle, R, cfg);
  if (grid.empty()) throw ConfigError("no admissible base points: the obstacle covers B(0, R)");
  absorb(grid, run_candidates(coeffs, obstacle, ray_geom, R, cfg, grid, exec, true));
  result.history.push_back(result.L);

  double dr = R / (cfg.grid_positions - 1);
  double dtheta = 2.0 * pi / (2 * (cfg.grid_positions - 1));
  double dphi = 2.0 * pi / cfg.grid_directions;
  const int m = cfg.refinement_points;
  for (int round = 0; round < cfg.refinement_rounds && have_best; ++round) {
    std::vector<Candidate> local;
    const Candidate centre = best;
    for (int a = 0; a < m; ++a) {
      const double r = centre.r + dr * (2.0 * a / (m - 1) - 1.0);
      if (r < 0.0 || r > R) continue;
      for (int b = 0; b < m; ++b) {
        const double theta = centre.theta + dtheta * (2.0 * b / (m - 1) - 1.0);
        const Vec2 x = r * Vec2(std::cos(theta), std::sin(theta));
        if (!admissible_base(obstacle, x, cfg.boundary_hit_tolerance)) continue;
        for (int c = 0; c < m; ++c) {
          local.push_back({r, theta, centre.phi + dphi * (2.0 * c / (m - 1) - 1.0)});
        }
      }
    }
    absorb(local, run_candidates(coeffs, obstacle, ray_geom, R, cfg, local, exec, true));
    result.history.push_back(result.L);
    const double shrink = 2.0 / (m - 1);
    dr *= shrink;
    dtheta *= shrink;
    dphi *= shrink;
  }

  if (result.stats.budget_exceeded > 0 && !cfg.allow_censored) {
    std::ostringstream msg;
    msg << result.stats.budget_exceeded << " of " << result.stats.samples
        << " ray samples exceeded the time budget (possible trapping); rerun with allow_censored to report anyway";
    throw NumericalError(msg.str());
  }
  return result;
}

TrappingReport classify_trapping(const CoefficientField& coeffs, const Obstacle& obstacle,
                                 const TruncationGeometry& geom, const RayConfig& cfg, const Executor& exec) {
  cfg.validate();
  TrappingReport report;
  const auto grid = base_grid(obstacle, geom.R, cfg);
  const auto outs = run_candidates(coeffs, obstacle, geom, geom.R, cfg, grid, exec, false);
  for (const auto& o : outs) {
    ++report.stats.samples;
    if (o.termination == Termination::glancing_flagged) ++report.stats.glancing;
    if (o.termination == Termination::trapped_budget_exceeded) {
      ++report.stats.budget_exceeded;
      report.censored.push_back(o.p0);
    }
  }
  report.nontrapping = report.stats.budget_exceeded == 0;
  return report;
}

}  // namespace helmkit
