#include "helmkit/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace helmkit {

std::size_t Mesh::count(VertexTag tag) const { return static_cast<std::size_t>(std::count(tags.begin(), tags.end(), tag)); }

double Mesh::triangle_area(std::size_t t) const {
  const auto& T = triangles[t];
  const Vec2 e1 = vertices[T[1]] - vertices[T[0]];
  const Vec2 e2 = vertices[T[2]] - vertices[T[0]];
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

double Mesh::area() const {
  double a = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) a += triangle_area(t);
  return a;
}

std::vector<int> Mesh::truncation_vertices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (tags[i] == VertexTag::truncation_boundary) out.push_back(static_cast<int>(i));
  }
  auto angle = [&](int v) {
    const double a = std::atan2(vertices[v].y(), vertices[v].x());
    return a < 0.0 ? a + 2.0 * pi : a;
  };
  std::sort(out.begin(), out.end(), [&](int a, int b) { return angle(a) < angle(b); });
  return out;
}

void Mesh::update_statistics() {
  h_fem = 0.0;
  shape_regularity = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& T = triangles[t];
    const double a = (vertices[T[1]] - vertices[T[2]]).norm();
    const double b = (vertices[T[2]] - vertices[T[0]]).norm();
    const double c = (vertices[T[0]] - vertices[T[1]]).norm();
    const double area = std::abs(triangle_area(t));
    const double s = 0.5 * (a + b + c);
    h_fem = std::max({h_fem, a, b, c});
    // circumradius abc / (4 area) over inradius area / s
    shape_regularity = std::max(shape_regularity, a * b * c * s / (4.0 * area * area));
  }
}

namespace {

void check_obstacle_for_meshing(const Obstacle& obstacle, double R) {
  if (obstacle.empty()) return;
  if (obstacle.parts().size() != 1) throw ConfigError("meshing supports a single star-shaped obstacle");
  const auto& part = obstacle.parts()[0];
  if (part.center().norm() != 0.0) throw ConfigError("meshing needs the obstacle centred at the origin");
  if (part.max_radius() >= R) throw ConfigError("obstacle does not fit inside B(0, R)");
}

double ring_perimeter(const std::function<double(double)>& radius) {
  constexpr int n = 512;
  double p = 0.0;
  Vec2 prev = radius(0.0) * Vec2(1.0, 0.0);
  for (int j = 1; j <= n; ++j) {
    const double th = 2.0 * pi * j / n;
    const Vec2 cur = radius(th) * Vec2(std::cos(th), std::sin(th));
    p += (cur - prev).norm();
    prev = cur;
  }
  return p;
}

// Connect ring A (inner) and ring B (outer), both starting at angle 0.
void zip(const std::vector<int>& A, const std::vector<int>& B, std::vector<std::array<int, 3>>& tris) {
  const int na = static_cast<int>(A.size());
  const int nb = static_cast<int>(B.size());
  int p = 0;
  int q = 0;
  while (p < na || q < nb) {
    const double a_next = static_cast<double>(p + 1) / na;
    const double b_next = static_cast<double>(q + 1) / nb;
    const bool advance_a = q == nb || (p < na && a_next <= b_next);
    if (advance_a) {
      tris.push_back({A[p % na], B[q % nb], A[(p + 1) % na]});
      ++p;
    } else {
      tris.push_back({A[p % na], B[q % nb], B[(q + 1) % nb]});
      ++q;
    }
  }
}

Mesh build_polar(const Obstacle& obstacle, double R, double spacing) {
  const bool empty = obstacle.empty();
  const StarShape* part = empty ? nullptr : &obstacle.parts()[0];
  auto rho = [&](double th) { return empty ? 0.0 : part->radius(th); };
  const double rho_min = empty ? 0.0 : part->min_radius();
  const int N = std::max(1, static_cast<int>(std::ceil((R - rho_min) / spacing)));

  Mesh mesh;
  mesh.R = R;
  std::vector<int> previous;
  for (int i = 0; i <= N; ++i) {
    const double s = static_cast<double>(i) / N;
    auto radius = [&](double th) { return i == N ? R : rho(th) + (R - rho(th)) * s; };
    std::vector<int> ring;
    if (empty && i == 0) {
      ring.push_back(0);
      mesh.vertices.push_back(Vec2::Zero());
      mesh.tags.push_back(VertexTag::interior);
    } else {
      const int n = std::max(3, static_cast<int>(std::ceil(ring_perimeter(radius) / spacing)));
      VertexTag tag = VertexTag::interior;
      if (i == N) tag = VertexTag::truncation_boundary;
      else if (i == 0) tag = VertexTag::obstacle_boundary;
      for (int j = 0; j < n; ++j) {
        const double th = 2.0 * pi * j / n;
        ring.push_back(static_cast<int>(mesh.vertices.size()));
        mesh.vertices.push_back(radius(th) * Vec2(std::cos(th), std::sin(th)));
        mesh.tags.push_back(tag);
      }
    }
    if (i > 0) {
      if (previous.size() == 1) {
        const int n = static_cast<int>(ring.size());
        for (int j = 0; j < n; ++j) mesh.triangles.push_back({previous[0], ring[j], ring[(j + 1) % n]});
      } else {
        zip(previous, ring, mesh.triangles);
      }
    }
    previous = std::move(ring);
  }
  mesh.update_statistics();
  return mesh;
}

}  // namespace

Mesh generate_mesh(const Obstacle& obstacle, double R, double h_target, const MeshOptions& options) {
  if (!(R > 0.0)) throw ConfigError("generate_mesh: R must be positive");
  if (!(h_target > 0.0)) throw ConfigError("generate_mesh: h_target must be positive");
  if (h_target < options.h_floor) {
    std::ostringstream msg;
    msg << "generate_mesh: h_target " << h_target << " is below the configured floor " << options.h_floor;
    throw ConfigError(msg.str());
  }
  check_obstacle_for_meshing(obstacle, R);
  const double estimate = 2.0 * pi * R * R / (h_target * h_target);
  if (estimate > static_cast<double>(options.max_vertices)) {
    throw ConfigError("generate_mesh: requested mesh exceeds max_vertices");
  }
  double scale = 1.0;
  for (int attempt = 0; attempt < 80; ++attempt) {
    Mesh mesh = build_polar(obstacle, R, scale * h_target / std::sqrt(2.0));
    if (mesh.h_fem <= h_target) return mesh;
    scale *= 0.95;
  }
  throw NumericalError("generate_mesh: could not reach the requested mesh width");
}

RefinedMesh refine_uniform(const Mesh& coarse, const Obstacle& obstacle) {
  const std::size_t nv = coarse.vertices.size();
  auto key = [](int a, int b) {
    const auto lo = static_cast<std::uint64_t>(std::min(a, b));
    const auto hi = static_cast<std::uint64_t>(std::max(a, b));
    return (lo << 32) | hi;
  };
  std::unordered_map<std::uint64_t, int> edge_count;
  edge_count.reserve(coarse.triangles.size() * 2);
  for (const auto& T : coarse.triangles) {
    for (int e = 0; e < 3; ++e) ++edge_count[key(T[e], T[(e + 1) % 3])];
  }

  RefinedMesh out;
  Mesh& fine = out.mesh;
  fine.R = coarse.R;
  fine.vertices = coarse.vertices;
  fine.tags = coarse.tags;
  std::vector<Eigen::Triplet<double>> P;
  P.reserve(nv + 2 * edge_count.size());
  for (std::size_t i = 0; i < nv; ++i) P.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);

  const StarShape* part = obstacle.empty() ? nullptr : &obstacle.parts().at(0);
  std::unordered_map<std::uint64_t, int> midpoint;
  midpoint.reserve(edge_count.size());
  auto mid = [&](int a, int b) {
    const auto k = key(a, b);
    auto it = midpoint.find(k);
    if (it != midpoint.end()) return it->second;
    Vec2 m = 0.5 * (coarse.vertices[a] + coarse.vertices[b]);
    VertexTag tag = VertexTag::interior;
    if (edge_count[k] == 1 && coarse.tags[a] == coarse.tags[b]) {
      if (coarse.tags[a] == VertexTag::truncation_boundary) {
        tag = VertexTag::truncation_boundary;
        m *= coarse.R / m.norm();
      } else if (coarse.tags[a] == VertexTag::obstacle_boundary && part) {
        tag = VertexTag::obstacle_boundary;
        const Vec2 rel = m - part->center();
        m = part->point(std::atan2(rel.y(), rel.x()));
      }
    }
    const int id = static_cast<int>(fine.vertices.size());
    fine.vertices.push_back(m);
    fine.tags.push_back(tag);
    P.emplace_back(id, a, 0.5);
    P.emplace_back(id, b, 0.5);
    midpoint.emplace(k, id);
    return id;
  };

  fine.triangles.reserve(4 * coarse.triangles.size());
  for (const auto& T : coarse.triangles) {
    const int ab = mid(T[0], T[1]);
    const int bc = mid(T[1], T[2]);
    const int ca = mid(T[2], T[0]);
    fine.triangles.push_back({T[0], ab, ca});
    fine.triangles.push_back({ab, T[1], bc});
    fine.triangles.push_back({ca, bc, T[2]});
    fine.triangles.push_back({ab, bc, ca});
  }
  fine.update_statistics();
  out.prolongation.resize(static_cast<int>(fine.vertices.size()), static_cast<int>(nv));
  out.prolongation.setFromTriplets(P.begin(), P.end());
  return out;
}

MeshCheck check_mesh(const Mesh& mesh, const Obstacle& obstacle, double tolerance, double shape_bound) {
  MeshCheck check;
  if (mesh.vertices.size() != mesh.tags.size()) check.failures.push_back("tag count differs from vertex count");
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    for (int v : mesh.triangles[t]) {
      if (v < 0 || static_cast<std::size_t>(v) >= mesh.vertices.size()) {
        check.failures.push_back("triangle " + std::to_string(t) + " references a missing vertex");
        return check;
      }
    }
    if (!(mesh.triangle_area(t) > 1e-14 * mesh.h_fem * mesh.h_fem)) {
      check.failures.push_back("triangle " + std::to_string(t) + " is not positively oriented");
      break;
    }
  }
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec2& x = mesh.vertices[i];
    if (mesh.tags[i] == VertexTag::truncation_boundary && std::abs(x.norm() - mesh.R) > tolerance) {
      check.failures.push_back("truncation vertex " + std::to_string(i) + " is off Gamma_R");
      break;
    }
    if (mesh.tags[i] == VertexTag::obstacle_boundary &&
        (obstacle.empty() || std::abs(obstacle.signed_distance(x)) > tolerance)) {
      check.failures.push_back("obstacle vertex " + std::to_string(i) + " is off the obstacle boundary");
      break;
    }
  }
  if (shape_bound > 0.0 && mesh.shape_regularity > shape_bound) {
    check.failures.push_back("shape regularity " + std::to_string(mesh.shape_regularity) + " exceeds bound " +
                             std::to_string(shape_bound));
  }
  return check;
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  char buf[128];
  out << "helmkit-mesh 1\n";
  std::snprintf(buf, sizeof buf, "radius %.17g\n", mesh.R);
  out << buf;
  out << "vertices " << mesh.vertices.size() << "\n";
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %d\n", mesh.vertices[i].x(), mesh.vertices[i].y(),
                  static_cast<int>(mesh.tags[i]));
    out << buf;
  }
  out << "triangles " << mesh.triangles.size() << "\n";
  for (const auto& T : mesh.triangles) out << T[0] << ' ' << T[1] << ' ' << T[2] << '\n';
}

Mesh read_mesh(std::istream& in) {
  auto expect = [&](const std::string& word) {
    std::string got;
    if (!(in >> got) || got != word) throw ConfigError("mesh file: expected '" + word + "', got '" + got + "'");
  };
  expect("helmkit-mesh");
  int version = 0;
  in >> version;
  if (version != 1) throw ConfigError("mesh file: unsupported version");
  Mesh mesh;
  expect("radius");
  in >> mesh.R;
  expect("vertices");
  std::size_t nv = 0;
  in >> nv;
  mesh.vertices.resize(nv);
  mesh.tags.resize(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    int tag = 0;
    if (!(in >> mesh.vertices[i].x() >> mesh.vertices[i].y() >> tag) || tag < 0 || tag > 2) {
      throw ConfigError("mesh file: bad vertex line " + std::to_string(i));
    }
    mesh.tags[i] = static_cast<VertexTag>(tag);
  }
  expect("triangles");
  std::size_t nt = 0;
  in >> nt;
  mesh.triangles.resize(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    auto& T = mesh.triangles[t];
    if (!(in >> T[0] >> T[1] >> T[2])) throw ConfigError("mesh file: bad triangle line " + std::to_string(t));
    for (int v : T) {
      if (v < 0 || static_cast<std::size_t>(v) >= nv) throw ConfigError("mesh file: vertex index out of range");
    }
  }
  mesh.update_statistics();
  return mesh;
}

}  // namespace helmkit
