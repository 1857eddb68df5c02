#include "nharmonic/bubbling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nharm {

namespace {

constexpr double kPi = std::numbers::pi;

double pow_half_n(double x, int n) {
  if (n == 2) return x;
  if (n == 3) return x * std::sqrt(x);
  return std::pow(x, 0.5 * n);
}

std::vector<double> per_cell_energies(const MapField& field, const GrowthParams& params) {
  return total_energy(field, params).per_cell;
}

std::vector<double> centroid_distances(const DomainMesh& mesh, int center) {
  std::vector<double> d(std::size_t(mesh.cell_count()));
  for (int c = 0; c < mesh.cell_count(); ++c)
    d[std::size_t(c)] = mesh.distance_point(center, mesh.cell_centroid(c));
  return d;
}

// Chart displacement from the center node to a cell centroid: minimal-image
// on the torus, in-frame geodesic direction on the icosphere. Returns the
// distance and the unit radial direction expressed in the cell's row frame.
struct RadialFrame {
  double dist = 0.0;
  double dir[3] = {0.0, 0.0, 0.0};  // components per stencil row
};

RadialFrame radial_frame(const DomainMesh& mesh, int center, int cell) {
  RadialFrame rf;
  const auto c = mesh.cell_centroid(cell);
  const auto z = mesh.node_position(center);
  if (mesh.kind == MeshKind::Icosphere2) {
    double nc = 0.0;
    for (int i = 0; i < 3; ++i) nc += c[i] * c[i];
    nc = std::sqrt(nc);
    double q[3] = {c[0] / nc, c[1] / nc, c[2] / nc};
    rf.dist = mesh.distance_point(center, c);
    // Tangent direction at q pointing away from the center.
    double dot = q[0] * z[0] + q[1] * z[1] + q[2] * z[2];
    double w[3] = {dot * q[0] - z[0], dot * q[1] - z[1], dot * q[2] - z[2]};
    double nw = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
    if (nw == 0.0) return rf;  // centroid at the center; direction undefined
    for (double& v : w) v /= nw;
    const double* e = mesh.frames.data() + std::size_t(cell) * 6;
    double f[2] = {w[0] * e[0] + w[1] * e[1] + w[2] * e[2],
                   w[0] * e[3] + w[1] * e[4] + w[2] * e[5]};
    const double nf = std::sqrt(f[0] * f[0] + f[1] * f[1]);
    if (nf > 0.0) {
      rf.dir[0] = f[0] / nf;
      rf.dir[1] = f[1] / nf;
    }
    return rf;
  }
  double acc = 0.0;
  for (int i = 0; i < mesh.dim; ++i) {
    double dx = c[i] - z[i];
    dx -= mesh.side * std::round(dx / mesh.side);
    rf.dir[i] = dx;
    acc += dx * dx;
  }
  rf.dist = std::sqrt(acc);
  if (rf.dist > 0.0)
    for (int i = 0; i < mesh.dim; ++i) rf.dir[i] /= rf.dist;
  return rf;
}

// Radial-squared and full-squared gradient at a cell from the stencil rows.
void radial_split(const DomainMesh& mesh, const MapField& field, int cell,
                  const RadialFrame& rf, double& grad_sq, double& radial_sq) {
  const int N = field.ambient();
  double G[3 * kMaxAmbient];
  cell_gradient(mesh, field.values, N, cell, G, wrap_periods(field.target));
  grad_sq = 0.0;
  radial_sq = 0.0;
  for (int a = 0; a < N; ++a) {
    double dr = 0.0;
    for (int i = 0; i < mesh.dim; ++i) {
      const double v = G[std::size_t(i) * N + a];
      grad_sq += v * v;
      dr += rf.dir[i] * v;
    }
    radial_sq += dr * dr;
  }
}

}  // namespace

namespace {

// Ball energies at every node for a fixed radius. On the uniform grid the
// cells within R of a node form one offset mask shared by all nodes.
std::vector<double> ball_energy_all_nodes(const DomainMesh& mesh,
                                          const std::vector<double>& cell_e, double R) {
  std::vector<double> out(std::size_t(mesh.node_count()), 0.0);
  if (mesh.kind != MeshKind::Icosphere2) {
    const int m = mesh.resolution;
    const double h = mesh.side / m;
    const int nz = mesh.dim == 3 ? m : 1;
    std::vector<std::array<int, 3>> mask;
    const int reach = std::min(m, int(std::ceil(R / h)) + 1);
    for (int dk = (mesh.dim == 3 ? -reach : 0); dk <= (mesh.dim == 3 ? reach : 0); ++dk)
      for (int dj = -reach; dj <= reach; ++dj)
        for (int di = -reach; di <= reach; ++di) {
          double acc = 0.0;
          const double off[3] = {(di + 0.5) * h, (dj + 0.5) * h, (dk + 0.5) * h};
          for (int i = 0; i < mesh.dim; ++i) {
            double dx = std::abs(off[i]);
            dx = std::fmod(dx, mesh.side);
            dx = std::min(dx, mesh.side - dx);
            acc += dx * dx;
          }
          if (std::sqrt(acc) <= R) mask.push_back({di, dj, dk});
        }
    for (auto& o : mask)
      for (int i = 0; i < 3; ++i) o[i] = ((o[i] % m) + m) % m;
    std::sort(mask.begin(), mask.end());
    mask.erase(std::unique(mask.begin(), mask.end()), mask.end());

    for (int k = 0; k < nz; ++k)
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
          double acc = 0.0;
          for (const auto& o : mask) {
            const int ci = (i + o[0]) % m;
            const int cj = (j + o[1]) % m;
            const int ck = (k + o[2]) % m;
            acc += cell_e[std::size_t(ci + m * (cj + m * ck))];
          }
          out[std::size_t(i + m * (j + m * k))] = acc;
        }
    return out;
  }
  for (int node = 0; node < mesh.node_count(); ++node) {
    double acc = 0.0;
    for (int c = 0; c < mesh.cell_count(); ++c)
      if (mesh.distance_point(node, mesh.cell_centroid(c)) <= R) acc += cell_e[std::size_t(c)];
    out[std::size_t(node)] = acc;
  }
  return out;
}

}  // namespace

std::pair<double, int> max_concentration(const MapField& field, const GrowthParams& params,
                                         double R) {
  if (R <= 0.0) throw std::invalid_argument("max_concentration: R must be > 0");
  const std::vector<double> cell_e = per_cell_energies(field, params);
  if (R >= field.mesh->diameter()) {
    // Every ball covers the whole domain; the exact tie goes to node 0.
    double total = 0.0;
    for (double e : cell_e) total += e;
    return {total, 0};
  }
  const std::vector<double> ball = ball_energy_all_nodes(*field.mesh, cell_e, R);
  double best = -1.0;
  int best_node = 0;
  for (int node = 0; node < field.mesh->node_count(); ++node)
    if (ball[std::size_t(node)] > best) {
      best = ball[std::size_t(node)];
      best_node = node;
    }
  return {best, best_node};
}

ConcentrationScan concentration_scan(const MapField& field, const GrowthParams& params,
                                     const std::vector<double>& radii) {
  ConcentrationScan scan;
  scan.radii = radii;
  for (double r : radii) {
    const auto [value, node] = max_concentration(field, params, r);
    scan.values.push_back(value);
    scan.nodes.push_back(node);
  }
  return scan;
}

std::optional<std::pair<double, int>> concentration_radius(const MapField& field,
                                                           const GrowthParams& params,
                                                           double threshold) {
  if (threshold <= 0.0)
    throw std::invalid_argument("concentration_radius: threshold must be > 0");
  const DomainMesh& mesh = *field.mesh;
  double hi = mesh.diameter() + mesh.spacing();
  const auto top = max_concentration(field, params, hi);
  if (top.first < threshold) return std::nullopt;
  double lo = 0.0;
  int node = top.second;
  const double tol = 1e-3 * mesh.spacing();
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const auto [value, mid_node] = max_concentration(field, params, mid);
    if (value >= threshold) {
      hi = mid;
      node = mid_node;
    } else {
      lo = mid;
    }
  }
  return std::make_pair(hi, node);
}

PatchField rescale_map(const MapField& field, const GrowthParams& params, int center,
                       double r, double chart_multiple, int resolution) {
  if (r <= 0.0) throw std::invalid_argument("rescale_map: r must be > 0");
  if (chart_multiple <= 0.0)
    throw std::invalid_argument("rescale_map: chart multiple must be > 0");
  const DomainMesh& mesh = *field.mesh;
  const double K = chart_multiple;
  const double extent = K * r;

  if (mesh.kind == MeshKind::Icosphere2) {
    if (extent >= 0.45 * kPi)
      throw std::invalid_argument("rescale_map: chart ball exits the icosphere chart");
  } else if (extent >= 0.5 * mesh.side) {
    throw std::invalid_argument("rescale_map: chart ball exceeds half the torus side");
  }
  if (mesh.dim != 2) throw std::invalid_argument("rescale_map: only 2d domains supported");

  PatchField patch;
  patch.half_width = K;
  patch.ambient = field.ambient();
  patch.params = params;
  patch.params.delta = r * r * params.delta;
  patch.params.s = std::pow(r, params.n) * params.s;
  patch.res = resolution > 0
                  ? resolution
                  : std::max(8, int(std::ceil(2.0 * extent / mesh.spacing())));

  const int nodes_per_side = patch.res + 1;
  patch.values.resize(std::size_t(nodes_per_side) * nodes_per_side * patch.ambient);
  const int N = patch.ambient;

  const auto z = mesh.node_position(center);
  // Icosphere chart: orthonormal tangent basis at the center node.
  double t1[3] = {0, 0, 0}, t2[3] = {0, 0, 0};
  if (mesh.kind == MeshKind::Icosphere2) {
    const double ax = std::abs(z[0]), ay = std::abs(z[1]), az = std::abs(z[2]);
    double seed[3] = {0, 0, 0};
    seed[ax <= ay && ax <= az ? 0 : (ay <= az ? 1 : 2)] = 1.0;
    const double d = seed[0] * z[0] + seed[1] * z[1] + seed[2] * z[2];
    for (int i = 0; i < 3; ++i) t1[i] = seed[i] - d * z[i];
    const double n1 = std::sqrt(t1[0] * t1[0] + t1[1] * t1[1] + t1[2] * t1[2]);
    for (double& v : t1) v /= n1;
    t2[0] = z[1] * t1[2] - z[2] * t1[1];
    t2[1] = z[2] * t1[0] - z[0] * t1[2];
    t2[2] = z[0] * t1[1] - z[1] * t1[0];
  }

  const double hp = patch.spacing();
  for (int j = 0; j < nodes_per_side; ++j)
    for (int i = 0; i < nodes_per_side; ++i) {
      const double x[2] = {-K + i * hp, -K + j * hp};
      double* out = patch.values.data() + (std::size_t(j) * nodes_per_side + i) * N;
      if (mesh.kind != MeshKind::Icosphere2) {
        // Periodic bilinear sample at center + r x.
        double px = z[0] + r * x[0];
        double py = z[1] + r * x[1];
        const double m = mesh.resolution;
        const double h = mesh.side / m;
        px = std::fmod(std::fmod(px, mesh.side) + mesh.side, mesh.side);
        py = std::fmod(std::fmod(py, mesh.side) + mesh.side, mesh.side);
        const int ci = std::min(int(px / h), mesh.resolution - 1);
        const int cj = std::min(int(py / h), mesh.resolution - 1);
        const double fx = px / h - ci;
        const double fy = py / h - cj;
        const int m_i = mesh.resolution;
        auto node_at = [&](int a, int b) {
          return ((a % m_i + m_i) % m_i) + m_i * ((b % m_i + m_i) % m_i);
        };
        const double* u00 = field.values.data() + std::size_t(node_at(ci, cj)) * N;
        const double* u10 = field.values.data() + std::size_t(node_at(ci + 1, cj)) * N;
        const double* u01 = field.values.data() + std::size_t(node_at(ci, cj + 1)) * N;
        const double* u11 = field.values.data() + std::size_t(node_at(ci + 1, cj + 1)) * N;
        for (int a = 0; a < N; ++a)
          out[a] = (1 - fx) * (1 - fy) * u00[a] + fx * (1 - fy) * u10[a] +
                   (1 - fx) * fy * u01[a] + fx * fy * u11[a];
      } else {
        // Exponential chart: geodesic of length r|x| in direction x.
        const double rho = r * std::sqrt(x[0] * x[0] + x[1] * x[1]);
        double p[3];
        if (rho == 0.0) {
          p[0] = z[0]; p[1] = z[1]; p[2] = z[2];
        } else {
          const double inv = r / rho;
          const double c1 = x[0] * inv, c2 = x[1] * inv;
          for (int ii = 0; ii < 3; ++ii)
            p[ii] = std::cos(rho) * z[ii] + std::sin(rho) * (c1 * t1[ii] + c2 * t2[ii]);
        }
        // Barycentric evaluation on the triangle whose radial projection
        // contains p.
        int best_cell = 0;
        double best_score = -1e300;
        double best_bary[3] = {0, 0, 0};
        for (int c = 0; c < mesh.cell_count(); ++c) {
          const Cell& cell = mesh.cells[c];
          const auto p0 = mesh.node_position(cell.nodes[0]);
          const auto p1 = mesh.node_position(cell.nodes[1]);
          const auto p2 = mesh.node_position(cell.nodes[2]);
          // Solve b0 p0 + b1 p1 + b2 p2 = t p with sum b = 1 by projecting
          // on the triangle plane through the origin ray.
          double m00 = 0, m01 = 0, m02 = 0, m10 = 0, m11 = 0, m12 = 0, m20 = 0, m21 = 0,
                 m22 = 0, r0 = 0, r1 = 0, r2 = 0;
          m00 = p0[0]; m01 = p1[0]; m02 = p2[0];
          m10 = p0[1]; m11 = p1[1]; m12 = p2[1];
          m20 = p0[2]; m21 = p1[2]; m22 = p2[2];
          // Cramer for M b = p (unnormalized); then rescale to sum 1.
          const double det = m00 * (m11 * m22 - m12 * m21) - m01 * (m10 * m22 - m12 * m20) +
                             m02 * (m10 * m21 - m11 * m20);
          if (std::abs(det) < 1e-300) continue;
          r0 = p[0]; r1 = p[1]; r2 = p[2];
          const double b0 = (r0 * (m11 * m22 - m12 * m21) - m01 * (r1 * m22 - m12 * r2) +
                             m02 * (r1 * m21 - m11 * r2)) / det;
          const double b1 = (m00 * (r1 * m22 - m12 * r2) - r0 * (m10 * m22 - m12 * m20) +
                             m02 * (m10 * r2 - r1 * m20)) / det;
          const double b2 = (m00 * (m11 * r2 - r1 * m21) - m01 * (m10 * r2 - r1 * m20) +
                             r0 * (m10 * m21 - m11 * m20)) / det;
          const double sum = b0 + b1 + b2;
          if (sum <= 0.0) continue;
          const double bary[3] = {b0 / sum, b1 / sum, b2 / sum};
          const double score = std::min({bary[0], bary[1], bary[2]});
          if (score > best_score) {
            best_score = score;
            best_cell = c;
            best_bary[0] = bary[0];
            best_bary[1] = bary[1];
            best_bary[2] = bary[2];
          }
        }
        const Cell& cell = mesh.cells[best_cell];
        for (int a = 0; a < N; ++a) {
          out[a] = 0.0;
          for (int k = 0; k < 3; ++k)
            out[a] += best_bary[k] * field.values[std::size_t(cell.nodes[k]) * N + a];
        }
      }
      // Keep the sample on the target.
      if (field.target.kind == TargetKind::Sphere) {
        double sq = 0.0;
        for (int a = 0; a < N; ++a) sq += out[a] * out[a];
        if (sq > 0.0) {
          const double f = field.target.radius / std::sqrt(sq);
          for (int a = 0; a < N; ++a) out[a] *= f;
        }
      }
    }
  return patch;
}

namespace {

double patch_energy_impl(const PatchField& patch, double ball_radius, bool dirichlet,
                         int n_exponent) {
  const int m = patch.res;
  const double h = patch.spacing();
  const int N = patch.ambient;
  const int nodes_per_side = m + 1;
  double total = 0.0;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      const double cx = -patch.half_width + (i + 0.5) * h;
      const double cy = -patch.half_width + (j + 0.5) * h;
      if (std::sqrt(cx * cx + cy * cy) > ball_radius) continue;
      const double* u00 =
          patch.values.data() + (std::size_t(j) * nodes_per_side + i) * N;
      const double* u10 =
          patch.values.data() + (std::size_t(j) * nodes_per_side + i + 1) * N;
      const double* u01 =
          patch.values.data() + (std::size_t(j + 1) * nodes_per_side + i) * N;
      const double* u11 =
          patch.values.data() + (std::size_t(j + 1) * nodes_per_side + i + 1) * N;
      double t = 0.0;
      for (int a = 0; a < N; ++a) {
        const double gx = 0.5 * ((u10[a] + u11[a]) - (u00[a] + u01[a])) / h;
        const double gy = 0.5 * ((u01[a] + u11[a]) - (u00[a] + u10[a])) / h;
        t += gx * gx + gy * gy;
      }
      const double vol = h * h;
      if (dirichlet)
        total += vol * pow_half_n(t, n_exponent) / n_exponent;
      else
        total += vol * integrand_from_norm_sq(t, patch.params);
    }
  return total;
}

}  // namespace

double patch_total_energy(const PatchField& patch, double ball_radius) {
  return patch_energy_impl(patch, ball_radius, false, 0);
}

double patch_dirichlet_energy(const PatchField& patch, double ball_radius, int n_exponent) {
  return patch_energy_impl(patch, ball_radius, true, n_exponent);
}

double neck_energy(const MapField& field, const GrowthParams& params, int center,
                   double r_in, double r_out) {
  if (r_in < 0.0 || r_out < r_in)
    throw std::invalid_argument("neck_energy: need 0 <= r_in <= r_out");
  const DomainMesh& mesh = *field.mesh;
  const std::vector<double> cell_e = per_cell_energies(field, params);
  const std::vector<double> dist = centroid_distances(mesh, center);
  double total = 0.0;
  for (int c = 0; c < mesh.cell_count(); ++c)
    if (dist[std::size_t(c)] > r_in && dist[std::size_t(c)] <= r_out)
      total += cell_e[std::size_t(c)];
  return total;
}

double tangential_energy_annulus(const MapField& field, const GrowthParams& params,
                                 int center, double r_in, double r_out) {
  const DomainMesh& mesh = *field.mesh;
  double total = 0.0;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const RadialFrame rf = radial_frame(mesh, center, c);
    if (rf.dist <= r_in || rf.dist > r_out) continue;
    double grad_sq = 0.0, radial_sq = 0.0;
    radial_split(mesh, field, c, rf, grad_sq, radial_sq);
    const double tangential = std::max(grad_sq - radial_sq, 0.0);
    total += mesh.volumes[std::size_t(c)] * std::pow(tangential, 0.5 * params.p);
  }
  return total;
}

double tangential_neck_energy(const MapField& field, const GrowthParams& params,
                              int center, double R1, double R2) {
  if (!(R2 >= 8.0 * R1) || R1 <= 0.0)
    throw std::invalid_argument("tangential_neck_energy: need R2 >= 8 R1 > 0");
  return tangential_energy_annulus(field, params, center, 2.0 * R1, 0.25 * R2);
}

std::pair<double, double> hopf_balance(const MapField& field, const GrowthParams& params,
                                       int center, double r, int min_shell_cells) {
  const DomainMesh& mesh = *field.mesh;
  const double width = mesh.spacing();
  const int n = params.n;
  const double p = params.p;

  std::vector<int> shell;
  const std::vector<double> dist = centroid_distances(mesh, center);
  for (int c = 0; c < mesh.cell_count(); ++c)
    if (std::abs(dist[std::size_t(c)] - r) <= 0.5 * width) shell.push_back(c);
  if (int(shell.size()) < min_shell_cells)
    throw std::invalid_argument("hopf_balance: shell under-resolved");

  double lhs = 0.0;
  double shell_term = 0.0;
  for (int c : shell) {
    const RadialFrame rf = radial_frame(mesh, center, c);
    double grad_sq = 0.0, radial_sq = 0.0;
    radial_split(mesh, field, c, rf, grad_sq, radial_sq);
    const double tangential = std::max(grad_sq - radial_sq, 0.0);
    const double line_meas = mesh.volumes[std::size_t(c)] / width;
    lhs += line_meas * weight(grad_sq, params) * radial_sq;
    const double a = params.s + pow_half_n(params.delta + grad_sq, n);
    const double outer = pow_guard(a, (p - n) / n);
    const double mid = n == 2 ? 1.0 : pow_guard(params.delta + grad_sq, 0.5 * (n - 2));
    shell_term += line_meas * outer * (params.s + mid * (params.delta + tangential));
  }

  double bulk = 0.0;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    if (dist[std::size_t(c)] > r) continue;
    double G[3 * kMaxAmbient];
    cell_gradient(mesh, field.values, field.ambient(), c, G, wrap_periods(field.target));
    double grad_sq = 0.0;
    for (int i = 0; i < mesh.dim * field.ambient(); ++i) grad_sq += G[i] * G[i];
    const double a = params.s + pow_half_n(params.delta + grad_sq, n);
    bulk += mesh.volumes[std::size_t(c)] * pow_guard(a, p / n);
  }

  const double rhs = (p - n) / ((p - 1.0) * r) * bulk + shell_term / (p - 1.0);
  return {lhs, rhs};
}

double gradient_decay_check(const MapField& field, int center, double r_in, double r_out) {
  const DomainMesh& mesh = *field.mesh;
  const int N = field.ambient();
  double worst = 0.0;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const double d = mesh.distance_point(center, mesh.cell_centroid(c));
    if (d <= r_in || d > r_out) continue;
    double G[3 * kMaxAmbient];
    cell_gradient(mesh, field.values, N, c, G, wrap_periods(field.target));
    double grad_sq = 0.0;
    for (int i = 0; i < mesh.dim * N; ++i) grad_sq += G[i] * G[i];
    worst = std::max(worst, d * std::sqrt(grad_sq));
  }
  return worst;
}

double default_concentration_threshold(const TargetManifold& target) {
  const double r = target.kind == TargetKind::Sphere ? target.radius : 1.0;
  return 0.3 * 4.0 * kPi * r * r;
}

BubbleReport energy_identity_report(const MapField& field, const GrowthParams& params,
                                    const BubbleDiagnosticsConfig& config) {
  BubbleReport rep;
  rep.e_pdelta = total_energy_value(field, params);
  rep.d_n = dirichlet_energy(field, params.n);

  const double threshold = config.threshold > 0.0
                               ? config.threshold
                               : default_concentration_threshold(field.target);
  const auto found = concentration_radius(field, params, threshold);
  const double K = config.chart_multiple;

  bool usable = found.has_value();
  if (usable) {
    const double extent = K * found->first;
    usable = extent <= config.annulus_outer && extent < 0.5 * field.mesh->diameter();
  }
  if (!usable) {
    rep.concentration = false;
    rep.defect = std::abs(rep.e_pdelta - rep.d_n);
    return rep;
  }

  const auto [r, node] = *found;
  rep.concentration = true;
  rep.node = node;
  const auto pos = field.mesh->node_position(node);
  rep.point.assign(pos.begin(), pos.end());
  rep.radius = r;
  rep.radii_exponent = std::pow(r, params.n - params.p);

  const PatchField patch =
      rescale_map(field, params, node, r, K, config.patch_resolution);
  rep.bubble_energies.push_back(patch_dirichlet_energy(patch, K, params.n));

  GrowthParams dirichlet = params;
  dirichlet.p = params.n;
  dirichlet.delta = 0.0;
  dirichlet.s = 0.0;
  rep.base_energy = rep.d_n - local_energy(field, dirichlet, node, K * r);

  double bubble_sum = 0.0;
  for (double b : rep.bubble_energies) bubble_sum += b;
  rep.defect = std::abs(rep.e_pdelta - rep.base_energy - bubble_sum);

  // Dyadic annulus ladder out to the configured outer radius.
  for (double r_in = r; r_in < config.annulus_outer; r_in *= 2.0) {
    NeckLadderRow row;
    row.r_in = r_in;
    row.r_out = std::min(2.0 * r_in, config.annulus_outer);
    row.neck_energy = neck_energy(field, params, node, row.r_in, row.r_out);
    row.tangential_energy =
        tangential_energy_annulus(field, params, node, row.r_in, row.r_out);
    try {
      const auto [lhs, rhs] =
          hopf_balance(field, params, node, row.r_out, config.min_shell_cells);
      row.hopf_lhs = lhs;
      row.hopf_rhs = rhs;
      row.hopf_valid = true;
    } catch (const std::invalid_argument&) {
      row.hopf_valid = false;
    }
    rep.ladder.push_back(row);
  }

  // A second center at comparable level far from the primary marks an
  // unresolved multi-bubble configuration.
  const std::vector<double> cell_e = per_cell_energies(field, params);
  const std::vector<double> ball = ball_energy_all_nodes(*field.mesh, cell_e, r);
  for (int other = 0; other < field.mesh->node_count(); ++other) {
    if (field.mesh->distance(node, other) <= 2.0 * K * r) continue;
    if (ball[std::size_t(other)] >= threshold) {
      rep.multi_bubble = true;
      break;
    }
  }
  return rep;
}

std::vector<double> radii_exponent_trace(const std::vector<double>& radii,
                                         const std::vector<double>& p_list, int n) {
  if (radii.size() != p_list.size())
    throw std::invalid_argument("radii_exponent_trace: length mismatch");
  std::vector<double> out;
  out.reserve(radii.size());
  for (std::size_t k = 0; k < radii.size(); ++k)
    out.push_back(std::pow(radii[k], n - p_list[k]));
  return out;
}

std::vector<double> entropy_trace(const ContinuationResult& run, int n) {
  std::vector<double> out;
  out.reserve(run.trace.size());
  for (const TraceRow& row : run.trace) out.push_back((row.p - n) * row.entropy);
  return out;
}

}  // namespace nharm
