#include "nharmonic/energy.hpp"

#include <cmath>
#include <stdexcept>

#include "nharmonic/parallel.hpp"

namespace nharm {

namespace {

struct KernelTerms {
  double a0_pow;   // (s + delta^{n/2})^{p/n}
  double exp_pn;   // p/n
  double inv_p;
};

double pow_half_n(double x, int n) {
  if (n == 2) return x;
  if (n == 3) return x * std::sqrt(x);
  return std::pow(x, 0.5 * n);
}

KernelTerms precompute(const GrowthParams& params) {
  KernelTerms t;
  t.exp_pn = params.p / params.n;
  t.a0_pow = pow_guard(params.s + pow_half_n(params.delta, params.n), t.exp_pn);
  t.inv_p = 1.0 / params.p;
  return t;
}

double grad_norm_sq(const double* G, int len) {
  double acc = 0.0;
  for (int i = 0; i < len; ++i) acc += G[i] * G[i];
  return acc;
}

void check_field(const MapField& field) {
  if (!field.mesh) throw std::invalid_argument("energy: field has no mesh");
  if (field.ambient() > kMaxAmbient)
    throw std::invalid_argument("energy: ambient dimension too large");
}

}  // namespace

EnergyReport total_energy(const MapField& field, const GrowthParams& params, int threads) {
  check_field(field);
  const DomainMesh& mesh = *field.mesh;
  const int N = field.ambient();
  const int nc = mesh.cell_count();
  const KernelTerms terms = precompute(params);

  EnergyReport report;
  report.per_cell.assign(std::size_t(nc), 0.0);
  parallel_for(nc, resolve_threads(threads), [&](int lo, int hi) {
    double G[3 * kMaxAmbient];
    for (int c = lo; c < hi; ++c) {
      cell_gradient(mesh, field.values, N, c, G, wrap_periods(field.target));
      const double t = grad_norm_sq(G, mesh.dim * N);
      const double a = params.s + pow_half_n(params.delta + t, params.n);
      const double density = (pow_guard(a, terms.exp_pn) - terms.a0_pow) * terms.inv_p;
      report.per_cell[std::size_t(c)] = mesh.volumes[std::size_t(c)] * density;
    }
  });
  double total = 0.0;
  for (double e : report.per_cell) total += e;
  report.total = total;
  return report;
}

double total_energy_value(const MapField& field, const GrowthParams& params, int threads) {
  check_field(field);
  const DomainMesh& mesh = *field.mesh;
  const int N = field.ambient();
  const int nc = mesh.cell_count();
  const KernelTerms terms = precompute(params);
  const int nthreads = resolve_threads(threads);

  std::vector<double> partial(std::size_t(std::max(nthreads, 1)), 0.0);
  const int chunk = (nc + nthreads - 1) / nthreads;
  parallel_for(nc, nthreads, [&](int lo, int hi) {
    double G[3 * kMaxAmbient];
    double acc = 0.0;
    for (int c = lo; c < hi; ++c) {
      cell_gradient(mesh, field.values, N, c, G, wrap_periods(field.target));
      const double t = grad_norm_sq(G, mesh.dim * N);
      const double a = params.s + pow_half_n(params.delta + t, params.n);
      acc += mesh.volumes[std::size_t(c)] *
             (pow_guard(a, terms.exp_pn) - terms.a0_pow) * terms.inv_p;
    }
    partial[std::size_t(lo / std::max(chunk, 1))] = acc;
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

double dirichlet_energy(const MapField& field, int n_exponent, int threads) {
  check_field(field);
  const DomainMesh& mesh = *field.mesh;
  const int N = field.ambient();
  const int nc = mesh.cell_count();
  const int nthreads = resolve_threads(threads);
  std::vector<double> partial(std::size_t(std::max(nthreads, 1)), 0.0);
  const int chunk = (nc + nthreads - 1) / nthreads;
  parallel_for(nc, nthreads, [&](int lo, int hi) {
    double G[3 * kMaxAmbient];
    double acc = 0.0;
    for (int c = lo; c < hi; ++c) {
      cell_gradient(mesh, field.values, N, c, G, wrap_periods(field.target));
      const double t = grad_norm_sq(G, mesh.dim * N);
      acc += mesh.volumes[std::size_t(c)] * pow_half_n(t, n_exponent);
    }
    partial[std::size_t(lo / std::max(chunk, 1))] = acc;
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total / n_exponent;
}

std::vector<double> euclidean_gradient(const MapField& field, const GrowthParams& params,
                                       int threads) {
  check_field(field);
  const DomainMesh& mesh = *field.mesh;
  const int N = field.ambient();
  const int nc = mesh.cell_count();
  const int nn = mesh.node_count();
  const int dim = mesh.dim;
  const int nthreads = resolve_threads(threads);

  // Pass 1: weighted Jacobian per cell. Pass 2: gather per node in fixed
  // incidence order, so the result is identical for any thread count.
  std::vector<double> weighted(std::size_t(nc) * std::size_t(dim) * N);
  parallel_for(nc, nthreads, [&](int lo, int hi) {
    double G[3 * kMaxAmbient];
    for (int c = lo; c < hi; ++c) {
      cell_gradient(mesh, field.values, N, c, G, wrap_periods(field.target));
      const double t = grad_norm_sq(G, dim * N);
      const double w = weight(t, params) * mesh.volumes[std::size_t(c)];
      double* out = weighted.data() + std::size_t(c) * dim * N;
      for (int i = 0; i < dim * N; ++i) out[i] = w * G[i];
    }
  });

  std::vector<double> grad(std::size_t(nn) * N, 0.0);
  parallel_for(nn, nthreads, [&](int lo, int hi) {
    for (int node = lo; node < hi; ++node) {
      double* g = grad.data() + std::size_t(node) * N;
      for (int slot = mesh.incidence_offsets[node]; slot < mesh.incidence_offsets[node + 1];
           ++slot) {
        const int c = mesh.incidence_cell[std::size_t(slot)];
        const int k = mesh.incidence_local[std::size_t(slot)];
        const double* st = mesh.stencils.data() + std::size_t(c) * mesh.stencil_stride();
        const double* wg = weighted.data() + std::size_t(c) * dim * N;
        for (int i = 0; i < dim; ++i) {
          const double coeff = st[k * dim + i];
          for (int a = 0; a < N; ++a) g[a] += coeff * wg[i * N + a];
        }
      }
    }
  });
  return grad;
}

std::vector<double> tangent_gradient(const MapField& field, const GrowthParams& params,
                                     int threads) {
  std::vector<double> grad = euclidean_gradient(field, params, threads);
  if (field.target.kind != TargetKind::Sphere) return grad;
  const int N = field.ambient();
  const int nn = field.mesh->node_count();
  for (int i = 0; i < nn; ++i) {
    const double* u = field.values.data() + std::size_t(i) * N;
    double* g = grad.data() + std::size_t(i) * N;
    double usq = 0.0, dot = 0.0;
    for (int a = 0; a < N; ++a) {
      usq += u[a] * u[a];
      dot += u[a] * g[a];
    }
    if (usq == 0.0) continue;
    const double f = dot / usq;
    for (int a = 0; a < N; ++a) g[a] -= f * u[a];
  }
  return grad;
}

double entropy(const MapField& field, const GrowthParams& params, int threads) {
  check_field(field);
  const DomainMesh& mesh = *field.mesh;
  const int N = field.ambient();
  const int nc = mesh.cell_count();
  const double exp_pn = params.p / params.n;
  const int nthreads = resolve_threads(threads);
  std::vector<double> partial(std::size_t(std::max(nthreads, 1)), 0.0);
  const int chunk = (nc + nthreads - 1) / nthreads;
  parallel_for(nc, nthreads, [&](int lo, int hi) {
    double G[3 * kMaxAmbient];
    double acc = 0.0;
    for (int c = lo; c < hi; ++c) {
      cell_gradient(mesh, field.values, N, c, G, wrap_periods(field.target));
      const double t = grad_norm_sq(G, mesh.dim * N);
      const double a = 1.0 + pow_half_n(params.delta + t, params.n);
      acc += mesh.volumes[std::size_t(c)] * std::pow(a, exp_pn) * std::log(a);
    }
    partial[std::size_t(lo / std::max(chunk, 1))] = acc;
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

double local_energy(const MapField& field, const GrowthParams& params, int center,
                    double radius) {
  check_field(field);
  const DomainMesh& mesh = *field.mesh;
  const int N = field.ambient();
  const KernelTerms terms = precompute(params);
  double G[3 * kMaxAmbient];
  double total = 0.0;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    if (mesh.distance_point(center, mesh.cell_centroid(c)) > radius) continue;
    cell_gradient(mesh, field.values, N, c, G, wrap_periods(field.target));
    const double t = grad_norm_sq(G, mesh.dim * N);
    const double a = params.s + pow_half_n(params.delta + t, params.n);
    total += mesh.volumes[std::size_t(c)] *
             (pow_guard(a, terms.exp_pn) - terms.a0_pow) * terms.inv_p;
  }
  return total;
}

}  // namespace nharm
