#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "helmkit/geometry.hpp"
#include "helmkit/parallel.hpp"

namespace helmkit {

struct PhasePoint {
  Vec2 x = Vec2::Zero();
  Vec2 xi = Vec2::Zero();
};

enum class Termination { escaped, trapped_budget_exceeded, glancing_flagged };

std::string to_string(Termination t);

struct TrajectorySample {
  double s = 0.0;
  PhasePoint p;
  Vec2 velocity = Vec2::Zero();  // dx/ds at this sample
};

struct Reflection {
  double s = 0.0;
  Vec2 point = Vec2::Zero();
  Vec2 xi_in = Vec2::Zero();
  Vec2 xi_out = Vec2::Zero();
};

/// Samples are stored once per integration step. At an impact two samples
/// share the same time: the incoming state and the reflected one, so every
/// interval between samples with distinct times is a smooth flow segment.
struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<Reflection> reflections;
  Termination termination = Termination::escaped;

  double final_time() const { return samples.empty() ? 0.0 : samples.back().s; }
};

struct RayConfig {
  double step_size = 1e-2;
  double max_time_budget = 20.0;
  double glancing_threshold = 1e-3;
  int grid_positions = 16;   // radial rings (including r = 0 and r = R)
  // Each ring carries 2 (grid_positions - 1) angles, so grid_positions -> 2 grid_positions - 1
  // gives a nested grid.
  int grid_directions = 64;  // directions per base point
  int refinement_rounds = 2;
  int refinement_points = 17;  // local grid points per axis in a refinement round
  double boundary_hit_tolerance = 1e-12;
  double shell_tolerance = 1e-8;  // admissible |H(p0)|
  bool allow_censored = false;
  double frame_rotation = 0.0;  // offsets every sampled angle

  void validate() const;
};

/// H(x, xi) = xi^T A(x) xi / nu(x) - 1.
double hamiltonian(const CoefficientField& coeffs, const PhasePoint& p);

struct PhaseVelocity {
  Vec2 dx = Vec2::Zero();
  Vec2 dxi = Vec2::Zero();
};

/// (dH/dxi, -dH/dx). On the unit cosphere of a Euclidean metric the speed is 2.
PhaseVelocity hamiltonian_vector_field(const CoefficientField& coeffs, const PhasePoint& p);

/// <a, b>_G = a^T A(x) b / nu(x), the inner product that H is built from.
double metric_pairing(const CoefficientField& coeffs, const Vec2& x, const Vec2& a, const Vec2& b);

/// Normal momentum <xi, n>_G / |n|_G at a boundary point with unit normal n.
double normal_momentum(const CoefficientField& coeffs, const Vec2& x, const Vec2& xi, const Vec2& n);

/// Specular reflection in the G inner product. Returns nothing when the
/// impact is glancing (|normal momentum| <= glancing_threshold).
std::optional<PhasePoint> reflect(const CoefficientField& coeffs, const Obstacle& obstacle,
                                  const PhasePoint& p_at_boundary, double glancing_threshold = 1e-3,
                                  double boundary_tolerance = 1e-6);

/// Fixed-step RK4 with bisection location of obstacle impacts. Stops once
/// |x| > geom.R_ray with x . dx/ds > 0, or when the time budget runs out.
Trajectory integrate_ray(const CoefficientField& coeffs, const Obstacle& obstacle, const TruncationGeometry& geom,
                         const PhasePoint& p0, const RayConfig& cfg);

/// Time of the last visit to the closed ball B(0, R), located inside the
/// final step by cubic Hermite interpolation; 0 if the ray never enters.
double time_in_ball(const Trajectory& traj, double R);

/// xi of the cosphere direction with Euclidean angle phi at x.
Vec2 cosphere_covector(const CoefficientField& coeffs, const Vec2& x, double phi);

struct RaySampleStats {
  std::size_t samples = 0;
  std::size_t glancing = 0;
  std::size_t budget_exceeded = 0;

  double censored_fraction() const {
    return samples == 0 ? 0.0 : static_cast<double>(glancing + budget_exceeded) / static_cast<double>(samples);
  }
};

struct LongestRayResult {
  double L = 0.0;
  PhasePoint maximizer;
  RaySampleStats stats;
  std::vector<double> history;  // best value after the base grid and after each round
  std::vector<PhasePoint> censored;  // budget-exceeded initial conditions
};

/// Sampled maximization of time_in_ball over the cosphere bundle of
/// B(0, R) minus the obstacle, followed by local refinement rounds around
/// the maximizer. Censored samples do not contribute to L.
LongestRayResult longest_ray_length(const CoefficientField& coeffs, const Obstacle& obstacle,
                                    const TruncationGeometry& geom, double R, const RayConfig& cfg,
                                    const Executor& exec = Executor{});

struct TrappingReport {
  bool nontrapping = true;
  RaySampleStats stats;
  std::vector<PhasePoint> censored;
};

/// Base-grid sweep of B(0, geom.R) at the configured budget; any sample
/// still inside the ray ball when the budget runs out is censored.
TrappingReport classify_trapping(const CoefficientField& coeffs, const Obstacle& obstacle,
                                 const TruncationGeometry& geom, const RayConfig& cfg,
                                 const Executor& exec = Executor{});

}  // namespace helmkit
