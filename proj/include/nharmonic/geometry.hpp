#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

namespace nharm {

enum class MeshKind { Torus2, Torus3, Icosphere2 };

struct Cell {
  std::array<int, 8> nodes{};
  int node_count = 0;
};

// Discrete domain: periodic torus grid (multilinear cells, centroid
// quadrature) or geodesic icosphere (piecewise-linear triangles).
struct DomainMesh {
  MeshKind kind = MeshKind::Torus2;
  int dim = 2;        // domain dimension n
  int chart_dim = 2;  // components per node position
  int resolution = 0; // torus cells per side, or icosphere subdivisions
  double side = 0.0;  // torus side length

  std::vector<double> positions;  // node chart coordinates
  std::vector<Cell> cells;
  std::vector<double> volumes;    // per cell
  std::vector<double> stencils;   // per cell, node_count x dim, node-major
  std::vector<double> centroids;  // per cell chart coordinates
  std::vector<double> frames;     // icosphere: per cell orthonormal (e1,e2), 6 doubles

  // CSR node -> (cell, local corner) incidence, fixed order for
  // reproducible scatter-free assembly.
  std::vector<int> incidence_offsets;
  std::vector<int> incidence_cell;
  std::vector<int> incidence_local;
  std::vector<double> node_volumes;  // lumped cell volumes

  int node_count() const { return int(positions.size()) / chart_dim; }
  int cell_count() const { return int(cells.size()); }
  int stencil_stride() const { return cells.empty() ? 0 : cells[0].node_count * dim; }
  double total_volume() const;
  double diameter() const;
  double spacing() const;  // representative cell width

  double distance(int a, int b) const;
  // Geodesic distance from a node to an arbitrary chart point (e.g. a centroid).
  double distance_point(int node, std::span<const double> pt) const;

  std::span<const double> node_position(int i) const {
    return {positions.data() + std::size_t(i) * chart_dim, std::size_t(chart_dim)};
  }
  std::span<const double> cell_centroid(int c) const {
    return {centroids.data() + std::size_t(c) * chart_dim, std::size_t(chart_dim)};
  }
  std::span<const double> cell_stencil(int c) const {
    return {stencils.data() + std::size_t(c) * stencil_stride(),
            std::size_t(stencil_stride())};
  }
};

DomainMesh build_torus_mesh(int n, int resolution, double side);
DomainMesh build_icosphere_mesh(int subdivisions);

enum class TargetKind { Sphere, FlatTorus };

// Embedded target. The flat torus is represented on its universal cover:
// any ambient vector is a valid point, projection picks the canonical
// representative in [0, period).
struct TargetManifold {
  TargetKind kind = TargetKind::Sphere;
  int ambient = 3;
  double radius = 1.0;
  std::vector<double> periods;

  static TargetManifold sphere(int ambient, double radius = 1.0);
  static TargetManifold flat_torus(std::vector<double> periods);

  std::vector<double> project(std::span<const double> x) const;
  std::vector<double> tangent_project(std::span<const double> base,
                                      std::span<const double> v) const;
  std::vector<double> second_fundamental_form(std::span<const double> base,
                                              std::span<const double> X,
                                              std::span<const double> Y) const;
  bool on_manifold(std::span<const double> x, double tol = 1e-12) const;
  // Nodewise nearest-point retraction; identity for the flat torus.
  void retract_inplace(std::span<double> values) const;
};

struct MapField {
  std::shared_ptr<const DomainMesh> mesh;
  TargetManifold target;
  std::vector<double> values;  // node-major, ambient components each

  int ambient() const { return target.ambient; }
  std::span<const double> node_value(int i) const {
    return {values.data() + std::size_t(i) * target.ambient, std::size_t(target.ambient)};
  }
  std::span<double> node_value(int i) {
    return {values.data() + std::size_t(i) * target.ambient, std::size_t(target.ambient)};
  }
  void validate(double tol = 1e-12) const;
};

MapField constant_field(std::shared_ptr<const DomainMesh> mesh, TargetManifold target,
                        std::span<const double> value);
// Nodewise copy of icosphere positions; the classic energy-4*pi map.
MapField identity_sphere_field(std::shared_ptr<const DomainMesh> mesh,
                               TargetManifold target);
// Stereographic power map of degree d on the icosphere.
MapField degree_field_icosphere(std::shared_ptr<const DomainMesh> mesh,
                                TargetManifold target, int d);
// Degree-d map on the 2-torus: power map of width `scale` centered in the
// fundamental domain, seam collapsed to the north pole.
MapField degree_field_torus(std::shared_ptr<const DomainMesh> mesh,
                            TargetManifold target, int d, double scale);

// Per-cell Jacobian, rows = domain directions, columns = ambient components.
// With `periods`, corner differences are reduced to the nearest image first,
// so flat-torus maps with winding see the geometric slope across the seam.
void cell_gradient(const DomainMesh& mesh, std::span<const double> values, int ambient,
                   int cell, double* out, const double* periods = nullptr);
std::vector<double> cell_gradient(const DomainMesh& mesh, const MapField& field, int cell);
inline const double* wrap_periods(const TargetManifold& target) {
  return target.kind == TargetKind::FlatTorus ? target.periods.data() : nullptr;
}

struct DegreeResult {
  int value = 0;
  double residual = 0.0;  // distance of the raw integral from the nearest integer
  double raw = 0.0;
  bool degenerate = false;  // residual > 0.2, map under-resolved
};
DegreeResult degree(const MapField& field);

std::vector<int> geodesic_ball_nodes(const DomainMesh& mesh, int center, double radius);

}  // namespace nharm
