#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nharmonic/geometry.hpp"

using namespace nharm;

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const DomainMesh> torus(int n, int res, double side) {
  return std::make_shared<DomainMesh>(build_torus_mesh(n, res, side));
}

std::shared_ptr<const DomainMesh> icosphere(int s) {
  return std::make_shared<DomainMesh>(build_icosphere_mesh(s));
}

// Affine least-squares fit of the corner values; for these cell types it
// reproduces the stencil gradient, which makes it an independent oracle.
std::vector<double> least_squares_gradient(const DomainMesh& mesh, const MapField& field,
                                           int cell) {
  const Cell& c = mesh.cells[cell];
  const int dim = mesh.dim;
  const int N = field.ambient();
  // Build centered coordinates in the stencil frame.
  std::vector<std::vector<double>> coords(std::size_t(c.node_count),
                                          std::vector<double>(std::size_t(dim), 0.0));
  if (mesh.kind == MeshKind::Icosphere2) {
    const double* e = mesh.frames.data() + std::size_t(cell) * 6;
    const auto p0 = mesh.node_position(c.nodes[0]);
    for (int k = 0; k < c.node_count; ++k) {
      const auto pk = mesh.node_position(c.nodes[k]);
      for (int i = 0; i < 2; ++i) {
        double acc = 0.0;
        for (int x = 0; x < 3; ++x) acc += (pk[x] - p0[x]) * e[i * 3 + x];
        coords[std::size_t(k)][std::size_t(i)] = acc;
      }
    }
  } else {
    const double h = mesh.side / mesh.resolution;
    for (int k = 0; k < c.node_count; ++k)
      for (int i = 0; i < dim; ++i)
        coords[std::size_t(k)][std::size_t(i)] = ((k >> i) & 1) ? h : 0.0;
  }
  // Normal equations for u ~ a + G^T x.
  const int cols = dim + 1;
  std::vector<double> ata(std::size_t(cols * cols), 0.0);
  std::vector<double> atb(std::size_t(cols * N), 0.0);
  for (int k = 0; k < c.node_count; ++k) {
    std::vector<double> row(std::size_t(cols), 1.0);
    for (int i = 0; i < dim; ++i) row[std::size_t(i + 1)] = coords[std::size_t(k)][std::size_t(i)];
    const double* u = field.values.data() + std::size_t(c.nodes[k]) * N;
    for (int r = 0; r < cols; ++r) {
      for (int s = 0; s < cols; ++s) ata[std::size_t(r * cols + s)] += row[std::size_t(r)] * row[std::size_t(s)];
      for (int a = 0; a < N; ++a) atb[std::size_t(r * N + a)] += row[std::size_t(r)] * u[a];
    }
  }
  // Gaussian elimination.
  for (int col = 0; col < cols; ++col) {
    int pivot = col;
    for (int r = col + 1; r < cols; ++r)
      if (std::abs(ata[std::size_t(r * cols + col)]) >
          std::abs(ata[std::size_t(pivot * cols + col)]))
        pivot = r;
    for (int s = 0; s < cols; ++s)
      std::swap(ata[std::size_t(col * cols + s)], ata[std::size_t(pivot * cols + s)]);
    for (int a = 0; a < N; ++a)
      std::swap(atb[std::size_t(col * N + a)], atb[std::size_t(pivot * N + a)]);
    const double d = ata[std::size_t(col * cols + col)];
    for (int r = 0; r < cols; ++r) {
      if (r == col) continue;
      const double f = ata[std::size_t(r * cols + col)] / d;
      for (int s = 0; s < cols; ++s)
        ata[std::size_t(r * cols + s)] -= f * ata[std::size_t(col * cols + s)];
      for (int a = 0; a < N; ++a) atb[std::size_t(r * N + a)] -= f * atb[std::size_t(col * N + a)];
    }
  }
  std::vector<double> G(std::size_t(dim * N));
  for (int i = 0; i < dim; ++i)
    for (int a = 0; a < N; ++a)
      G[std::size_t(i * N + a)] = atb[std::size_t((i + 1) * N + a)] /
                                  ata[std::size_t((i + 1) * cols + (i + 1))];
  return G;
}

// Signed solid angle subtended by a spherical triangle (unit vectors).
double solid_angle(const double* a, const double* b, const double* c) {
  const double det = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
                     a[2] * (b[0] * c[1] - b[1] * c[0]);
  const double ab = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  const double bc = b[0] * c[0] + b[1] * c[1] + b[2] * c[2];
  const double ca = c[0] * a[0] + c[1] * a[1] + c[2] * a[2];
  return 2.0 * std::atan2(det, 1.0 + ab + bc + ca);
}

double solid_angle_degree(const MapField& field) {
  double total = 0.0;
  for (int c = 0; c < field.mesh->cell_count(); ++c) {
    const Cell& cell = field.mesh->cells[c];
    double u[3][3];
    for (int k = 0; k < 3; ++k) {
      const auto v = field.node_value(cell.nodes[k]);
      double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      for (int x = 0; x < 3; ++x) u[k][x] = v[x] / norm;
    }
    total += solid_angle(u[0], u[1], u[2]);
  }
  return total / (4.0 * kPi);
}

}  // namespace

TEST_CASE("torus mesh construction") {
  {
    const auto mesh = torus(2, 4, 1.0);
    CHECK(mesh->cell_count() == 16);
    CHECK(mesh->node_count() == 16);
    CHECK(mesh->total_volume() == doctest::Approx(1.0).epsilon(1e-12));
  }
  {
    const auto mesh = torus(3, 3, 2.0);
    CHECK(mesh->cell_count() == 27);
    CHECK(mesh->total_volume() == doctest::Approx(8.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(build_torus_mesh(2, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_torus_mesh(4, 4, 1.0), std::invalid_argument);
}

TEST_CASE("icosphere mesh construction") {
  {
    const auto mesh = icosphere(0);
    CHECK(mesh->node_count() == 12);
    CHECK(mesh->cell_count() == 20);
  }
  CHECK(icosphere(3)->node_count() == 642);
  {
    const auto mesh = icosphere(4);
    CHECK(mesh->node_count() == 10 * 256 + 2);
    CHECK(mesh->total_volume() == doctest::Approx(4.0 * kPi).epsilon(0.01));
  }
  CHECK_THROWS_AS(build_icosphere_mesh(-1), std::invalid_argument);
}

TEST_CASE("stencils annihilate constants and reproduce linear fields") {
  // Exact cancellation on the torus; the icosphere stencil cancels constants
  // to rounding only.
  for (const auto& mesh : {torus(2, 5, 1.3), torus(3, 3, 0.7)}) {
    const auto target = TargetManifold::flat_torus({10.0, 10.0});
    const std::vector<double> value = {3.25, 7.5};
    const MapField field = constant_field(mesh, target, value);
    for (int c = 0; c < mesh->cell_count(); ++c) {
      const auto G = cell_gradient(*mesh, field, c);
      for (double g : G) CHECK(g == 0.0);
    }
  }
  {
    const auto mesh = icosphere(2);
    const auto target = TargetManifold::flat_torus({10.0, 10.0});
    const std::vector<double> value = {3.25, 7.5};
    const MapField field = constant_field(mesh, target, value);
    for (int c = 0; c < mesh->cell_count(); ++c)
      for (double g : cell_gradient(*mesh, field, c)) CHECK(std::abs(g) <= 1e-12);
  }
  // Linear chart field on an interior torus cell.
  const auto mesh = torus(2, 5, 1.0);
  MapField field;
  field.mesh = mesh;
  field.target = TargetManifold::flat_torus({100.0, 100.0});
  field.values.resize(std::size_t(mesh->node_count()) * 2);
  for (int i = 0; i < mesh->node_count(); ++i) {
    const auto p = mesh->node_position(i);
    field.values[std::size_t(i) * 2] = p[0];
    field.values[std::size_t(i) * 2 + 1] = p[1];
  }
  const int interior_cell = 1 + 5;  // (i=1, j=1)
  const auto G = cell_gradient(*mesh, field, interior_cell);
  CHECK(G[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(G[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(G[2] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(G[3] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stencil matches the least-squares oracle") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (const auto& mesh : {torus(2, 4, 1.1), torus(3, 3, 2.0), icosphere(1)}) {
    MapField field;
    field.mesh = mesh;
    field.target = TargetManifold::flat_torus({100.0, 100.0, 100.0});
    field.values.resize(std::size_t(mesh->node_count()) * 3);
    for (double& v : field.values) v = unit(rng);
    for (int c = 0; c < mesh->cell_count(); c += 3) {
      const auto G = cell_gradient(*mesh, field, c);
      const auto LS = least_squares_gradient(*mesh, field, c);
      for (std::size_t i = 0; i < G.size(); ++i)
        CHECK(G[i] == doctest::Approx(LS[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("sphere projection") {
  const auto sphere = TargetManifold::sphere(3);
  const std::vector<double> x = {0.0, 0.0, 2.0};
  const auto proj = sphere.project(x);
  CHECK(proj[0] == 0.0);
  CHECK(proj[1] == 0.0);
  CHECK(proj[2] == doctest::Approx(1.0).epsilon(1e-15));
  const auto twice = sphere.project(proj);
  for (int i = 0; i < 3; ++i) CHECK(twice[i] == proj[i]);
  const std::vector<double> on = {0.0, 0.0, 1.0};
  const auto fixed = sphere.project(on);
  for (int i = 0; i < 3; ++i) CHECK(fixed[i] == on[i]);
  const std::vector<double> zero = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(sphere.project(zero), std::domain_error);
}

TEST_CASE("flat torus projection wraps into the fundamental domain") {
  const auto target = TargetManifold::flat_torus({1.0, 1.0});
  const std::vector<double> x = {1.25, -0.5};
  const auto proj = target.project(x);
  CHECK(proj[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(proj[1] == doctest::Approx(0.5).epsilon(1e-15));
  const auto twice = target.project(proj);
  CHECK(twice[0] == proj[0]);
  CHECK(twice[1] == proj[1]);
}

TEST_CASE("tangent projection") {
  const auto sphere = TargetManifold::sphere(3);
  const std::vector<double> base = {0.0, 0.0, 1.0};
  {
    const std::vector<double> v = {0.0, 0.0, 5.0};
    const auto out = sphere.tangent_project(base, v);
    for (double x : out) CHECK(x == doctest::Approx(0.0).epsilon(1e-15));
  }
  {
    const std::vector<double> v = {1.0, 2.0, 3.0};
    const auto out = sphere.tangent_project(base, v);
    CHECK(out[0] == doctest::Approx(1.0));
    CHECK(out[1] == doctest::Approx(2.0));
    CHECK(out[2] == doctest::Approx(0.0).epsilon(1e-15));
  }
  const auto flat = TargetManifold::flat_torus({1.0, 2.0});
  const std::vector<double> fbase = {0.3, 0.4};
  const std::vector<double> fv = {7.0, -2.5};
  const auto out = flat.tangent_project(fbase, fv);
  CHECK(out[0] == fv[0]);
  CHECK(out[1] == fv[1]);

  const std::vector<double> off = {0.0, 0.0, 1.5};
  const std::vector<double> v = {1.0, 0.0, 0.0};
  CHECK_THROWS_AS(sphere.tangent_project(off, v), std::invalid_argument);

  // Projector properties on random input.
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int it = 0; it < 200; ++it) {
    std::vector<double> b = {unit(rng), unit(rng), unit(rng)};
    double norm = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
    if (norm < 1e-3) continue;
    for (double& x : b) x /= norm;
    const std::vector<double> v = {unit(rng), unit(rng), unit(rng)};
    const auto pv = sphere.tangent_project(b, v);
    const auto ppv = sphere.tangent_project(b, pv);
    double dot = 0.0;
    for (int i = 0; i < 3; ++i) {
      CHECK(ppv[i] == doctest::Approx(pv[i]).epsilon(1e-12));
      dot += pv[i] * b[i];
    }
    CHECK(std::abs(dot) <= 1e-12);
  }
}

TEST_CASE("second fundamental form") {
  const auto sphere = TargetManifold::sphere(3);
  const std::vector<double> u = {0.0, 0.0, 1.0};
  {
    const std::vector<double> X = {1.0, 0.0, 0.0};
    const auto A = sphere.second_fundamental_form(u, X, X);
    CHECK(A[0] == doctest::Approx(0.0));
    CHECK(A[1] == doctest::Approx(0.0));
    CHECK(A[2] == doctest::Approx(-1.0).epsilon(1e-14));
  }
  {
    const std::vector<double> X = {1.0, 0.0, 0.0};
    const std::vector<double> Y = {0.0, 1.0, 0.0};
    const auto A = sphere.second_fundamental_form(u, X, Y);
    for (double v : A) CHECK(v == doctest::Approx(0.0).epsilon(1e-14));
  }
  {
    const auto flat = TargetManifold::flat_torus({1.0, 1.0});
    const std::vector<double> b = {0.2, 0.9};
    const std::vector<double> X = {1.0, -2.0};
    const auto A = flat.second_fundamental_form(b, X, X);
    for (double v : A) CHECK(v == 0.0);
  }
  const std::vector<double> bad = {0.5, 0.0, 1.0};
  const std::vector<double> X = {1.0, 0.0, 0.0};
  CHECK_THROWS_AS(sphere.second_fundamental_form(bad, X, X), std::invalid_argument);
  const std::vector<double> non_tangent = {0.0, 0.0, 2.0};
  CHECK_THROWS_AS(sphere.second_fundamental_form(u, non_tangent, X), std::invalid_argument);

  // Finite-difference of the tangent projector along a great circle:
  // A(X,X) is the normal part of d/dt [P_{gamma(t)} X] at t=0.
  const std::vector<double> Xt = {1.0, 0.0, 0.0};
  const double h = 1e-6;
  const std::vector<double> gp = {std::sin(h), 0.0, std::cos(h)};
  const std::vector<double> gm = {std::sin(-h), 0.0, std::cos(-h)};
  const auto pp = sphere.tangent_project(gp, Xt);
  const auto pm = sphere.tangent_project(gm, Xt);
  std::vector<double> fd(3);
  for (int i = 0; i < 3; ++i) fd[i] = (pp[i] - pm[i]) / (2.0 * h);
  // Normal component at u = (0,0,1) is the z part.
  const auto A = sphere.second_fundamental_form(u, Xt, Xt);
  CHECK(fd[2] == doctest::Approx(A[2]).epsilon(1e-5));
}

TEST_CASE("degree of explicit maps") {
  const auto mesh = icosphere(2);
  const auto target = TargetManifold::sphere(3);
  {
    const MapField field = identity_sphere_field(mesh, target);
    const DegreeResult d = degree(field);
    CHECK(d.value == 1);
    CHECK_FALSE(d.degenerate);
    CHECK(solid_angle_degree(field) == doctest::Approx(1.0).epsilon(1e-10));
  }
  {
    const std::vector<double> v = {0.0, 0.0, 1.0};
    const MapField field = constant_field(mesh, target, v);
    CHECK(degree(field).value == 0);
    CHECK(degree(field).raw == 0.0);
  }
  {
    MapField field = identity_sphere_field(mesh, target);
    for (double& v : field.values) v = -v;  // antipodal map
    const DegreeResult d = degree(field);
    CHECK(d.value == -1);
    CHECK(solid_angle_degree(field) == doctest::Approx(-1.0).epsilon(1e-10));
  }
  for (int d : {-2, 2, 3}) {
    const MapField field = degree_field_icosphere(icosphere(4), target, d);
    const DegreeResult res = degree(field);
    CHECK(res.value == d);
    CHECK(solid_angle_degree(field) == doctest::Approx(double(d)).epsilon(1e-6));
  }
  // Degree-d torus bubbles agree with the solid-angle oracle.
  for (int d : {1, -1}) {
    const MapField field = degree_field_torus(torus(2, 48, 1.0), target, d, 0.15);
    const DegreeResult res = degree(field);
    CHECK(res.value == d);
    CHECK_FALSE(res.degenerate);
  }
  const MapField wrong = constant_field(torus(3, 3, 1.0), target, std::vector<double>{0, 0, 1});
  CHECK_THROWS_AS(degree(wrong), std::invalid_argument);
}

TEST_CASE("geodesic balls") {
  const auto mesh = torus(2, 4, 1.0);
  {
    const auto ball = geodesic_ball_nodes(*mesh, 5, 0.0);
    CHECK(ball == std::vector<int>{5});
  }
  {
    const auto ball = geodesic_ball_nodes(*mesh, 5, mesh->diameter() + 1.0);
    CHECK(int(ball.size()) == mesh->node_count());
  }
  {
    // Spacing 0.25: radius 0.26 catches the center and its 4 axis neighbors.
    const auto ball = geodesic_ball_nodes(*mesh, 5, 0.26);
    CHECK(ball.size() == 5);
    // Brute-force distance oracle.
    std::vector<int> expected;
    for (int i = 0; i < mesh->node_count(); ++i)
      if (mesh->distance(5, i) <= 0.26) expected.push_back(i);
    CHECK(ball == expected);
  }
  // Monotone in radius.
  const auto small = geodesic_ball_nodes(*mesh, 3, 0.3);
  const auto large = geodesic_ball_nodes(*mesh, 3, 0.5);
  CHECK(small.size() <= large.size());
}

TEST_CASE("map field validation") {
  const auto mesh = icosphere(1);
  const auto target = TargetManifold::sphere(3);
  MapField field = identity_sphere_field(mesh, target);
  CHECK_NOTHROW(field.validate());
  field.values[0] += 1e-6;
  CHECK_THROWS_AS(field.validate(), std::invalid_argument);
}
