#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "helmkit/geometry.hpp"

namespace helmkit {

enum class VertexTag : std::uint8_t { interior = 0, obstacle_boundary = 1, truncation_boundary = 2 };

/// P1 triangulation of Omega_R = B(0, R) minus the obstacle. Triangles are
/// counter-clockwise. h_fem is the longest edge; shape_regularity is the
/// largest circumradius / inradius ratio (2 for an equilateral triangle).
struct Mesh {
  double R = 1.0;
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<VertexTag> tags;
  double h_fem = 0.0;
  double shape_regularity = 0.0;

  std::size_t count(VertexTag tag) const;
  double area() const;
  double triangle_area(std::size_t t) const;  // signed
  /// Vertices on Gamma_R sorted by angle in [0, 2 pi).
  std::vector<int> truncation_vertices() const;
  void update_statistics();
};

struct MeshOptions {
  double h_floor = 2e-3;           // refuse finer targets (memory guard)
  std::size_t max_vertices = 4000000;
};

/// Structured polar triangulation: rings r_i(theta) = rho(theta) + (R - rho(theta)) i / N
/// stitched by advancing-front zipping, uniform in angle on every ring. With
/// no obstacle the innermost ring is a single centre vertex. The obstacle
/// must be empty or a single star-shaped part centred at the origin.
Mesh generate_mesh(const Obstacle& obstacle, double R, double h_target, const MeshOptions& options = {});

struct RefinedMesh {
  Mesh mesh;
  /// Fine-vertex values of the coarse P1 interpolant: fine = P * coarse.
  Eigen::SparseMatrix<double> prolongation;
};

/// Red refinement (every triangle into four). Midpoints of boundary edges
/// are snapped onto the obstacle curve or onto Gamma_R.
RefinedMesh refine_uniform(const Mesh& coarse, const Obstacle& obstacle);

struct MeshCheck {
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

/// Orientation, degeneracy, boundary placement and (optionally) a bound on
/// shape_regularity.
MeshCheck check_mesh(const Mesh& mesh, const Obstacle& obstacle, double tolerance = 1e-10,
                     double shape_bound = 0.0);

/// Plain-text exchange format; see docs/mesh_format.md.
void write_mesh(const Mesh& mesh, std::ostream& out);
Mesh read_mesh(std::istream& in);

}  // namespace helmkit
