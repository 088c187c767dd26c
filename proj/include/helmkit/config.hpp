#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "helmkit/bounds.hpp"
#include "helmkit/experiments.hpp"
#include "helmkit/geometry.hpp"
#include "helmkit/raytrace.hpp"

namespace helmkit {

struct CoefficientSpec {
  std::string preset = "identity";  // identity | nu_bump | anisotropic_bump
  double peak = 2.0;                // nu_bump
  double radius = 0.5;              // bump support radius
  Vec2 center = Vec2::Zero();
  double a1 = 2.0, a2 = 0.5, angle = 0.0;  // anisotropic_bump
};

struct ObstacleSpec {
  /// One Fourier coefficient list per part ([c0, a1, b1, ...]); empty means no obstacle.
  std::vector<std::vector<double>> parts;
  std::vector<Vec2> centers;
};

/// Constants supplied in the configuration. Zero means "estimate".
struct LedgerSpec {
  double C_int_tilde = 0.0;
  double C_DtN_tilde = 0.0;
  double C_H2 = 0.0;
  double L_ray = 0.0;
  std::string file;  // ledger JSON written by `constants`; overrides the values above
};

struct RayOptions {
  double step = 1e-2;
  double budget = 20.0;
  int grid_pos = 16;
  int grid_dir = 64;
  int refine = 2;
  int refine_points = 17;
  double glancing_threshold = 1e-3;
  bool allow_censored = false;
};

struct FemOptions {
  double h = 0.05;
  std::string problem = "scattering";  // scattering | source
  int n_max = -1;
  Vec2 source_center = Vec2(0.0, 0.0);
  double source_width = 0.2;
};

struct ExperimentOptions {
  std::vector<double> k_list = {2.0, 4.0, 8.0};
  std::vector<double> h_list = {0.1, 0.05, 0.025, 0.0125};
  double cutoff_inner = 0.8;
  double cutoff_outer = 1.0;
  int s = 0;
  double L = 0.0;  // 0: compute the longest ray in B(0, R)
  std::string method = "automatic";  // automatic | radial | mesh
  double resolution = 0.0;
  double tolerance = 1e-4;
  int max_iterations = 2000;
  double quasimode_L = 1.0;
  double quasimode_delta = 0.1;
  double quasimode_h = 0.01;
  int samples = 8;
  int refinements = 2;
  double h_factor = 0.5;
  int power_steps = 8;
  double b = 1.0;               // C_H2 collar width
  double h_constants = 0.05;    // mesh width for the C_H2 estimator
  std::vector<double> h_interp = {0.2, 0.1, 0.05};
  double k_max = 32.0;          // top of the k range for the DtN constant
};

/// Everything a run needs. Parsed from an INI file; serialize() is canonical
/// (fixed key order, round-trip precision), so parse(serialize(c)) == c.
struct RunConfig {
  CoefficientSpec coefficients;
  ObstacleSpec obstacle;
  TruncationGeometry geometry{1.0, 2.0, 4.0};
  WaveContext wave{2.0, 2.0};
  double incident_angle = 0.0;
  RayOptions rays;
  FemOptions fem;
  ExperimentOptions experiments;
  LedgerSpec ledger;
  std::uint64_t seed = 1;

  CoefficientField coefficient_field() const;
  Obstacle obstacle_shape() const;
  RayConfig ray_config() const;
  Scene scene() const;
  ResolventOptions resolvent_options() const;

  std::string serialize() const;
  /// FNV-1a of serialize(), as 16 hex digits.
  std::string hash() const;
  bool operator==(const RunConfig& other) const { return serialize() == other.serialize(); }
};

/// Throws ConfigError with the offending key on unknown sections/keys, bad
/// numbers or unknown presets.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

std::vector<double> parse_list(const std::string& text);

}  // namespace helmkit
