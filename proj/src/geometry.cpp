#include "nharmonic/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <stdexcept>

namespace nharm {

namespace {

constexpr double kPi = std::numbers::pi;

double dot3(const double* a, const double* b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

std::array<double, 3> cross3(const double* a, const double* b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

double norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

void build_incidence(DomainMesh& mesh) {
  const int nn = mesh.node_count();
  std::vector<int> counts(nn, 0);
  for (const Cell& c : mesh.cells)
    for (int k = 0; k < c.node_count; ++k) ++counts[c.nodes[k]];
  mesh.incidence_offsets.assign(nn + 1, 0);
  for (int i = 0; i < nn; ++i) mesh.incidence_offsets[i + 1] = mesh.incidence_offsets[i] + counts[i];
  mesh.incidence_cell.resize(mesh.incidence_offsets.back());
  mesh.incidence_local.resize(mesh.incidence_offsets.back());
  std::vector<int> fill(nn, 0);
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const Cell& cell = mesh.cells[c];
    for (int k = 0; k < cell.node_count; ++k) {
      const int node = cell.nodes[k];
      const int slot = mesh.incidence_offsets[node] + fill[node]++;
      mesh.incidence_cell[slot] = c;
      mesh.incidence_local[slot] = k;
    }
  }
  mesh.node_volumes.assign(nn, 0.0);
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const Cell& cell = mesh.cells[c];
    const double share = mesh.volumes[c] / cell.node_count;
    for (int k = 0; k < cell.node_count; ++k) mesh.node_volumes[cell.nodes[k]] += share;
  }
}

}  // namespace

double DomainMesh::total_volume() const {
  double acc = 0.0;
  for (double v : volumes) acc += v;
  return acc;
}

double DomainMesh::diameter() const {
  if (kind == MeshKind::Icosphere2) return kPi;
  return 0.5 * side * std::sqrt(double(dim));
}

double DomainMesh::spacing() const {
  if (kind == MeshKind::Icosphere2) {
    const Cell& c = cells[0];
    double acc = 0.0;
    for (int e = 0; e < 3; ++e) acc += distance(c.nodes[e], c.nodes[(e + 1) % 3]);
    return acc / 3.0;
  }
  return side / resolution;
}

double DomainMesh::distance(int a, int b) const {
  return distance_point(a, node_position(b));
}

double DomainMesh::distance_point(int node, std::span<const double> pt) const {
  const std::span<const double> p = node_position(node);
  if (kind == MeshKind::Icosphere2) {
    const double npt = norm(pt);
    if (npt <= 0.0) throw std::invalid_argument("distance_point: zero chart point");
    double d = 0.0, c = 0.0;
    std::array<double, 3> q{pt[0] / npt, pt[1] / npt, pt[2] / npt};
    c = dot3(p.data(), q.data());
    const auto cr = cross3(p.data(), q.data());
    d = std::sqrt(cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]);
    return std::atan2(d, c);
  }
  double acc = 0.0;
  for (int i = 0; i < chart_dim; ++i) {
    double dx = std::abs(p[i] - pt[i]);
    dx = std::fmod(dx, side);
    dx = std::min(dx, side - dx);
    acc += dx * dx;
  }
  return std::sqrt(acc);
}

DomainMesh build_torus_mesh(int n, int resolution, double side) {
  if (n != 2 && n != 3) throw std::invalid_argument("build_torus_mesh: n must be 2 or 3");
  if (resolution < 2) throw std::invalid_argument("build_torus_mesh: resolution must be >= 2");
  if (side <= 0.0) throw std::invalid_argument("build_torus_mesh: side must be > 0");

  DomainMesh mesh;
  mesh.kind = n == 2 ? MeshKind::Torus2 : MeshKind::Torus3;
  mesh.dim = n;
  mesh.chart_dim = n;
  mesh.resolution = resolution;
  mesh.side = side;

  const int m = resolution;
  const double h = side / m;
  const int nz = n == 3 ? m : 1;
  mesh.positions.reserve(std::size_t(m) * m * nz * n);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) {
        mesh.positions.push_back(i * h);
        mesh.positions.push_back(j * h);
        if (n == 3) mesh.positions.push_back(k * h);
      }

  auto node_id = [&](int i, int j, int k) {
    i = (i % m + m) % m;
    j = (j % m + m) % m;
    k = (k % m + m) % m;
    return i + m * (j + m * k);
  };

  const double vol = std::pow(h, n);
  const double coeff = 1.0 / (h * (n == 2 ? 2.0 : 4.0));
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) {
        Cell cell;
        if (n == 2) {
          cell.node_count = 4;
          cell.nodes = {node_id(i, j, 0),     node_id(i + 1, j, 0),
                        node_id(i, j + 1, 0), node_id(i + 1, j + 1, 0),
                        0, 0, 0, 0};
        } else {
          cell.node_count = 8;
          cell.nodes = {node_id(i, j, k),         node_id(i + 1, j, k),
                        node_id(i, j + 1, k),     node_id(i + 1, j + 1, k),
                        node_id(i, j, k + 1),     node_id(i + 1, j, k + 1),
                        node_id(i, j + 1, k + 1), node_id(i + 1, j + 1, k + 1)};
        }
        mesh.cells.push_back(cell);
        mesh.volumes.push_back(vol);
        mesh.centroids.push_back((i + 0.5) * h);
        mesh.centroids.push_back((j + 0.5) * h);
        if (n == 3) mesh.centroids.push_back((k + 0.5) * h);
        // Centroid gradient of the multilinear interpolant: per axis, the
        // mean of the parallel edge differences.
        for (int corner = 0; corner < cell.node_count; ++corner)
          for (int axis = 0; axis < n; ++axis) {
            const int bit = (corner >> axis) & 1;
            mesh.stencils.push_back((bit ? 1.0 : -1.0) * coeff);
          }
      }

  build_incidence(mesh);
  return mesh;
}

DomainMesh build_icosphere_mesh(int subdivisions) {
  if (subdivisions < 0)
    throw std::invalid_argument("build_icosphere_mesh: subdivisions must be >= 0");

  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<std::array<double, 3>> verts = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
      {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
      {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : verts) {
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    v = {v[0] / n, v[1] / n, v[2] / n};
  }
  std::vector<std::array<int, 3>> tris = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    std::array<double, 3> m = {verts[a][0] + verts[b][0], verts[a][1] + verts[b][1],
                               verts[a][2] + verts[b][2]};
    const double n = std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
    m = {m[0] / n, m[1] / n, m[2] / n};
    verts.push_back(m);
    const int id = int(verts.size()) - 1;
    midpoint.emplace(key, id);
    return id;
  };

  for (int level = 0; level < subdivisions; ++level) {
    std::vector<std::array<int, 3>> next;
    next.reserve(tris.size() * 4);
    for (const auto& tri : tris) {
      const int a = mid(tri[0], tri[1]);
      const int b = mid(tri[1], tri[2]);
      const int c = mid(tri[2], tri[0]);
      next.push_back({tri[0], a, c});
      next.push_back({tri[1], b, a});
      next.push_back({tri[2], c, b});
      next.push_back({a, b, c});
    }
    tris = std::move(next);
  }

  DomainMesh mesh;
  mesh.kind = MeshKind::Icosphere2;
  mesh.dim = 2;
  mesh.chart_dim = 3;
  mesh.resolution = subdivisions;
  mesh.positions.reserve(verts.size() * 3);
  for (const auto& v : verts) {
    mesh.positions.push_back(v[0]);
    mesh.positions.push_back(v[1]);
    mesh.positions.push_back(v[2]);
  }

  for (const auto& tri : tris) {
    Cell cell;
    cell.node_count = 3;
    cell.nodes = {tri[0], tri[1], tri[2], 0, 0, 0, 0, 0};
    mesh.cells.push_back(cell);

    const double* p0 = verts[tri[0]].data();
    const double* p1 = verts[tri[1]].data();
    const double* p2 = verts[tri[2]].data();
    double d1[3] = {p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]};
    double d2[3] = {p2[0] - p0[0], p2[1] - p0[1], p2[2] - p0[2]};
    const auto crossv = cross3(d1, d2);
    const double area2 = std::sqrt(crossv[0] * crossv[0] + crossv[1] * crossv[1] +
                                   crossv[2] * crossv[2]);
    mesh.volumes.push_back(0.5 * area2);

    double centroid[3] = {(p0[0] + p1[0] + p2[0]) / 3.0, (p0[1] + p1[1] + p2[1]) / 3.0,
                          (p0[2] + p1[2] + p2[2]) / 3.0};
    mesh.centroids.insert(mesh.centroids.end(), centroid, centroid + 3);

    // Orthonormal in-plane frame, oriented so e1 x e2 points outward.
    const double l1 = std::sqrt(dot3(d1, d1));
    double e1[3] = {d1[0] / l1, d1[1] / l1, d1[2] / l1};
    const double proj = dot3(d2, e1);
    double e2[3] = {d2[0] - proj * e1[0], d2[1] - proj * e1[1], d2[2] - proj * e1[2]};
    const double l2 = std::sqrt(dot3(e2, e2));
    e2[0] /= l2; e2[1] /= l2; e2[2] /= l2;
    const auto nrm = cross3(e1, e2);
    if (dot3(nrm.data(), centroid) < 0.0) {
      e2[0] = -e2[0]; e2[1] = -e2[1]; e2[2] = -e2[2];
    }
    mesh.frames.insert(mesh.frames.end(), {e1[0], e1[1], e1[2], e2[0], e2[1], e2[2]});
    // Solve A G = [u1-u0; u2-u0] with A = [[d1.e1, d1.e2], [d2.e1, d2.e2]].
    const double a11 = dot3(d1, e1), a12 = dot3(d1, e2);
    const double a21 = dot3(d2, e1), a22 = dot3(d2, e2);
    const double det = a11 * a22 - a12 * a21;
    const double b11 = a22 / det, b12 = -a12 / det;
    const double b21 = -a21 / det, b22 = a11 / det;
    // Stencil rows: coefficient of each corner in each frame direction.
    const double c1[2] = {-(b11 + b12), -(b21 + b22)};
    mesh.stencils.push_back(c1[0]);
    mesh.stencils.push_back(c1[1]);
    mesh.stencils.push_back(b11);
    mesh.stencils.push_back(b21);
    mesh.stencils.push_back(b12);
    mesh.stencils.push_back(b22);
  }

  build_incidence(mesh);
  return mesh;
}

TargetManifold TargetManifold::sphere(int ambient, double radius) {
  if (ambient < 2) throw std::invalid_argument("sphere target needs ambient >= 2");
  if (radius <= 0.0) throw std::invalid_argument("sphere target needs radius > 0");
  TargetManifold t;
  t.kind = TargetKind::Sphere;
  t.ambient = ambient;
  t.radius = radius;
  return t;
}

TargetManifold TargetManifold::flat_torus(std::vector<double> periods) {
  if (periods.empty()) throw std::invalid_argument("flat torus needs periods");
  for (double p : periods)
    if (p <= 0.0) throw std::invalid_argument("flat torus periods must be > 0");
  TargetManifold t;
  t.kind = TargetKind::FlatTorus;
  t.ambient = int(periods.size());
  t.periods = std::move(periods);
  return t;
}

std::vector<double> TargetManifold::project(std::span<const double> x) const {
  std::vector<double> out(x.begin(), x.end());
  if (kind == TargetKind::Sphere) {
    const double n = norm(x);
    if (n == 0.0) throw std::domain_error("project: zero vector has no nearest sphere point");
    for (double& v : out) v *= radius / n;
  } else {
    for (int i = 0; i < ambient; ++i) {
      out[i] = std::fmod(out[i], periods[i]);
      if (out[i] < 0.0) out[i] += periods[i];
    }
  }
  return out;
}

bool TargetManifold::on_manifold(std::span<const double> x, double tol) const {
  if (kind == TargetKind::FlatTorus) return true;
  return std::abs(norm(x) - radius) <= tol * radius;
}

std::vector<double> TargetManifold::tangent_project(std::span<const double> base,
                                                    std::span<const double> v) const {
  std::vector<double> out(v.begin(), v.end());
  if (kind == TargetKind::FlatTorus) return out;
  if (!on_manifold(base, 1e-8))
    throw std::invalid_argument("tangent_project: base point is off the manifold");
  const double nb = norm(base);
  double proj = 0.0;
  for (int i = 0; i < ambient; ++i) proj += v[i] * base[i] / nb;
  for (int i = 0; i < ambient; ++i) out[i] -= proj * base[i] / nb;
  return out;
}

std::vector<double> TargetManifold::second_fundamental_form(std::span<const double> base,
                                                            std::span<const double> X,
                                                            std::span<const double> Y) const {
  std::vector<double> out(std::size_t(ambient), 0.0);
  if (kind == TargetKind::FlatTorus) return out;
  if (!on_manifold(base, 1e-8))
    throw std::invalid_argument("second_fundamental_form: base point is off the manifold");
  const double nb = norm(base);
  double xn = 0.0, yn = 0.0;
  for (int i = 0; i < ambient; ++i) {
    xn += X[i] * base[i] / nb;
    yn += Y[i] * base[i] / nb;
  }
  const double sx = norm(X), sy = norm(Y);
  if (std::abs(xn) > 1e-8 * std::max(1.0, sx) || std::abs(yn) > 1e-8 * std::max(1.0, sy))
    throw std::invalid_argument("second_fundamental_form: inputs are not tangent");
  double xy = 0.0;
  for (int i = 0; i < ambient; ++i) xy += X[i] * Y[i];
  for (int i = 0; i < ambient; ++i) out[i] = -xy * base[i] / (radius * radius);
  return out;
}

void TargetManifold::retract_inplace(std::span<double> values) const {
  if (kind == TargetKind::FlatTorus) return;
  const std::size_t nodes = values.size() / std::size_t(ambient);
  for (std::size_t i = 0; i < nodes; ++i) {
    double* v = values.data() + i * ambient;
    double acc = 0.0;
    for (int c = 0; c < ambient; ++c) acc += v[c] * v[c];
    const double n = std::sqrt(acc);
    if (n == 0.0) throw std::domain_error("retract: node value collapsed to zero");
    const double f = radius / n;
    for (int c = 0; c < ambient; ++c) v[c] *= f;
  }
}

void MapField::validate(double tol) const {
  if (!mesh) throw std::invalid_argument("MapField: missing mesh");
  if (values.size() != std::size_t(mesh->node_count()) * std::size_t(target.ambient))
    throw std::invalid_argument("MapField: value array has wrong size");
  if (target.kind == TargetKind::Sphere) {
    for (int i = 0; i < mesh->node_count(); ++i)
      if (!target.on_manifold(node_value(i), tol))
        throw std::invalid_argument("MapField: node value is off the target");
  }
}

MapField constant_field(std::shared_ptr<const DomainMesh> mesh, TargetManifold target,
                        std::span<const double> value) {
  MapField f;
  f.mesh = std::move(mesh);
  f.target = std::move(target);
  const int nn = f.mesh->node_count();
  f.values.resize(std::size_t(nn) * f.target.ambient);
  for (int i = 0; i < nn; ++i)
    for (int c = 0; c < f.target.ambient; ++c)
      f.values[std::size_t(i) * f.target.ambient + c] = value[c];
  return f;
}

MapField identity_sphere_field(std::shared_ptr<const DomainMesh> mesh,
                               TargetManifold target) {
  if (mesh->kind != MeshKind::Icosphere2 || target.kind != TargetKind::Sphere ||
      target.ambient != 3)
    throw std::invalid_argument("identity_sphere_field: needs icosphere domain and S^2 target");
  MapField f;
  f.mesh = std::move(mesh);
  f.target = std::move(target);
  f.values = f.mesh->positions;
  for (double& v : f.values) v *= f.target.radius;
  return f;
}

namespace {

// Inverse stereographic projection from the north pole, scaled to `radius`.
std::array<double, 3> from_plane(std::complex<double> w, double radius, bool infinite) {
  if (infinite) return {0.0, 0.0, radius};
  const double q = std::norm(w);
  const double denom = q + 1.0;
  return {radius * 2.0 * w.real() / denom, radius * 2.0 * w.imag() / denom,
          radius * (q - 1.0) / denom};
}

std::complex<double> power_map(std::complex<double> z, int d) {
  if (d < 0) z = std::conj(z);
  std::complex<double> w{1.0, 0.0};
  for (int i = 0; i < std::abs(d); ++i) w *= z;
  return w;
}

}  // namespace

MapField degree_field_icosphere(std::shared_ptr<const DomainMesh> mesh,
                                TargetManifold target, int d) {
  if (mesh->kind != MeshKind::Icosphere2 || target.kind != TargetKind::Sphere ||
      target.ambient != 3)
    throw std::invalid_argument("degree_field_icosphere: needs icosphere domain and S^2 target");
  MapField f;
  f.mesh = std::move(mesh);
  f.target = std::move(target);
  const int nn = f.mesh->node_count();
  f.values.resize(std::size_t(nn) * 3);
  const double r = f.target.radius;
  for (int i = 0; i < nn; ++i) {
    const auto p = f.mesh->node_position(i);
    std::array<double, 3> out;
    if (d == 0) {
      out = {0.0, 0.0, r};
    } else if (1.0 - p[2] < 1e-14) {
      out = {0.0, 0.0, r};  // north pole is a fixed point of the power map
    } else {
      const std::complex<double> z{p[0] / (1.0 - p[2]), p[1] / (1.0 - p[2])};
      out = from_plane(power_map(z, d), r, false);
    }
    std::copy(out.begin(), out.end(), f.values.begin() + std::size_t(i) * 3);
  }
  return f;
}

MapField degree_field_torus(std::shared_ptr<const DomainMesh> mesh,
                            TargetManifold target, int d, double scale) {
  if (mesh->kind != MeshKind::Torus2 || target.kind != TargetKind::Sphere ||
      target.ambient != 3)
    throw std::invalid_argument("degree_field_torus: needs 2-torus domain and S^2 target");
  if (scale <= 0.0) throw std::invalid_argument("degree_field_torus: scale must be > 0");
  MapField f;
  f.mesh = std::move(mesh);
  f.target = std::move(target);
  const int nn = f.mesh->node_count();
  f.values.resize(std::size_t(nn) * 3);
  const double L = f.mesh->side;
  const double r = f.target.radius;
  for (int i = 0; i < nn; ++i) {
    const auto p = f.mesh->node_position(i);
    // The seam x=0 or y=0 collapses to the north pole, making the chart map
    // periodic; the center carries the power-map core.
    const double b = std::sin(kPi * p[0] / L) * std::sin(kPi * p[1] / L);
    std::array<double, 3> out;
    if (d == 0) {
      out = {0.0, 0.0, r};
    } else if (b < 1e-14) {
      out = {0.0, 0.0, r};
    } else {
      const std::complex<double> z{(p[0] - 0.5 * L) / scale, (p[1] - 0.5 * L) / scale};
      // The plane-to-sphere chart reverses orientation, so the winding is
      // negated to land in the requested class.
      const std::complex<double> w = power_map(z, -d) / b;
      out = from_plane(w, r, !std::isfinite(std::norm(w)));
    }
    std::copy(out.begin(), out.end(), f.values.begin() + std::size_t(i) * 3);
  }
  return f;
}

void cell_gradient(const DomainMesh& mesh, std::span<const double> values, int ambient,
                   int cell, double* out, const double* periods) {
  const Cell& c = mesh.cells[cell];
  const int dim = mesh.dim;
  const double* st = mesh.stencils.data() + std::size_t(cell) * mesh.stencil_stride();
  for (int i = 0; i < dim * ambient; ++i) out[i] = 0.0;
  if (periods) {
    const double* u0 = values.data() + std::size_t(c.nodes[0]) * ambient;
    for (int k = 1; k < c.node_count; ++k) {
      const double* u = values.data() + std::size_t(c.nodes[k]) * ambient;
      for (int a = 0; a < ambient; ++a) {
        double d = u[a] - u0[a];
        d -= periods[a] * std::round(d / periods[a]);
        for (int i = 0; i < dim; ++i) out[std::size_t(i) * ambient + a] += st[k * dim + i] * d;
      }
    }
    return;
  }
  for (int k = 0; k < c.node_count; ++k) {
    const double* u = values.data() + std::size_t(c.nodes[k]) * ambient;
    for (int i = 0; i < dim; ++i) {
      const double coeff = st[k * dim + i];
      double* row = out + std::size_t(i) * ambient;
      for (int a = 0; a < ambient; ++a) row[a] += coeff * u[a];
    }
  }
}

std::vector<double> cell_gradient(const DomainMesh& mesh, const MapField& field, int cell) {
  std::vector<double> out(std::size_t(mesh.dim) * field.ambient());
  cell_gradient(mesh, field.values, field.ambient(), cell, out.data(),
                wrap_periods(field.target));
  return out;
}

namespace {

double det3(const double m[9]) {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

double det4(const double m[16]) {
  double acc = 0.0;
  for (int col = 0; col < 4; ++col) {
    double sub[9];
    int idx = 0;
    for (int r = 1; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        if (c != col) sub[idx++] = m[r * 4 + c];
    const double sign = (col % 2 == 0) ? 1.0 : -1.0;
    acc += sign * m[col] * det3(sub);
  }
  return acc;
}

}  // namespace

DegreeResult degree(const MapField& field) {
  const DomainMesh& mesh = *field.mesh;
  const int n = mesh.dim;
  const int N = field.ambient();
  if (field.target.kind != TargetKind::Sphere || N != n + 1)
    throw std::invalid_argument("degree: target must be S^n matching the domain dimension");
  const double omega = n == 2 ? 4.0 * kPi : 2.0 * kPi * kPi;
  const double r = field.target.radius;

  double raw = 0.0;
  std::vector<double> G(std::size_t(n) * N);
  for (int c = 0; c < mesh.cell_count(); ++c) {
    cell_gradient(mesh, field.values, N, c, G.data());
    const Cell& cell = mesh.cells[c];
    double center[4] = {0, 0, 0, 0};
    for (int k = 0; k < cell.node_count; ++k) {
      const double* u = field.values.data() + std::size_t(cell.nodes[k]) * N;
      for (int a = 0; a < N; ++a) center[a] += u[a];
    }
    double cn = 0.0;
    for (int a = 0; a < N; ++a) cn += center[a] * center[a];
    cn = std::sqrt(cn);
    if (cn == 0.0) continue;
    double det = 0.0;
    if (n == 2) {
      const double m[9] = {center[0] / cn,  center[1] / cn,  center[2] / cn,
                           G[0] / r, G[1] / r, G[2] / r,
                           G[3] / r, G[4] / r, G[5] / r};
      det = det3(m);
    } else {
      double m[16];
      for (int a = 0; a < 4; ++a) m[a] = center[a] / cn;
      for (int i = 0; i < 3; ++i)
        for (int a = 0; a < 4; ++a) m[(i + 1) * 4 + a] = G[std::size_t(i) * 4 + a] / r;
      det = det4(m);
    }
    raw += mesh.volumes[c] * det;
  }
  raw /= omega;

  DegreeResult res;
  res.raw = raw;
  res.value = int(std::lround(raw));
  res.residual = std::abs(raw - res.value);
  res.degenerate = res.residual > 0.2;
  return res;
}

std::vector<int> geodesic_ball_nodes(const DomainMesh& mesh, int center, double radius) {
  if (radius < 0.0) throw std::invalid_argument("geodesic_ball_nodes: radius must be >= 0");
  std::vector<int> out;
  for (int i = 0; i < mesh.node_count(); ++i)
    if (mesh.distance(center, i) <= radius) out.push_back(i);
  return out;
}

}  // namespace nharm
