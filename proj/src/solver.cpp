#include "nharmonic/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nharm {

namespace {

bool degree_applies(const MapField& field) {
  return field.target.kind == TargetKind::Sphere &&
         field.ambient() == field.mesh->dim + 1;
}

SolveResult descend(const MapField& field0, const GrowthParams& params,
                    const SolverConfig& config, const std::vector<char>& fixed,
                    bool abort_on_degree_jump) {
  config.validate();
  params.validate();

  SolveResult res;
  res.field = field0;
  MapField& u = res.field;
  const int N = u.ambient();
  const int nn = u.mesh->node_count();
  const bool with_degree = config.track_degree && degree_applies(u);

  double energy = total_energy_value(u, params, config.threads);
  res.initial_energy = energy;
  res.final_energy = energy;
  res.energy_trace.push_back(energy);
  int deg0 = 0;
  if (with_degree) {
    deg0 = degree(u).value;
    res.degree_trace.push_back(deg0);
  }

  double step_start = config.initial_step;
  MapField trial = u;
  for (int iter = 0; iter < config.max_iters; ++iter) {
    std::vector<double> g = tangent_gradient(u, params, config.threads);
    if (!fixed.empty())
      for (int i = 0; i < nn; ++i)
        if (fixed[std::size_t(i)])
          for (int a = 0; a < N; ++a) g[std::size_t(i) * N + a] = 0.0;

    double residual = 0.0, gnorm2 = 0.0;
    for (int i = 0; i < nn; ++i) {
      double node_sq = 0.0;
      for (int a = 0; a < N; ++a) {
        const double v = g[std::size_t(i) * N + a];
        node_sq += v * v;
      }
      gnorm2 += node_sq;
      residual = std::max(residual, std::sqrt(node_sq) / u.mesh->node_volumes[std::size_t(i)]);
    }
    res.final_residual = residual;
    if (residual <= config.grad_tol) {
      res.status = SolveStatus::Converged;
      return res;
    }

    double t = step_start;
    bool accepted = false;
    while (t >= config.min_step) {
      trial.values = u.values;
      bool feasible = true;
      for (int i = 0; i < nn && feasible; ++i) {
        if (!fixed.empty() && fixed[std::size_t(i)]) continue;
        double* v = trial.values.data() + std::size_t(i) * N;
        const double* gi = g.data() + std::size_t(i) * N;
        for (int a = 0; a < N; ++a) v[a] -= t * gi[a];
        if (u.target.kind == TargetKind::Sphere) {
          double sq = 0.0;
          for (int a = 0; a < N; ++a) sq += v[a] * v[a];
          const double norm = std::sqrt(sq);
          if (norm == 0.0) {
            feasible = false;
            break;
          }
          const double f = u.target.radius / norm;
          for (int a = 0; a < N; ++a) v[a] *= f;
        }
      }
      if (feasible) {
        const double trial_energy = total_energy_value(trial, params, config.threads);
        if (trial_energy <= energy - config.armijo_c * t * gnorm2) {
          accepted = true;
          break;
        }
      }
      t *= config.backtrack;
    }
    if (!accepted) {
      res.status = SolveStatus::MaxIters;
      res.diagnostic = "line search exhausted min step at iteration " + std::to_string(iter);
      return res;
    }

    std::swap(u.values, trial.values);
    energy = total_energy_value(u, params, config.threads);
    res.energy_trace.push_back(energy);
    res.final_energy = energy;
    ++res.iterations;
    step_start = std::min(t / config.backtrack, config.initial_step * 1e6);

    if (with_degree) {
      const int d = degree(u).value;
      res.degree_trace.push_back(d);
      if (abort_on_degree_jump && d != deg0) {
        res.status = SolveStatus::DegreeJump;
        res.diagnostic = "degree changed from " + std::to_string(deg0) + " to " +
                         std::to_string(d) + " at iteration " + std::to_string(iter);
        return res;
      }
    }
  }
  res.status = SolveStatus::MaxIters;
  res.diagnostic = "iteration budget exhausted";
  res.final_residual = el_residual_norm(u, params, config.threads);
  return res;
}

}  // namespace

void SolverConfig::validate() const {
  if (max_iters < 0) throw std::invalid_argument("SolverConfig: max_iters must be >= 0");
  if (grad_tol <= 0.0) throw std::invalid_argument("SolverConfig: grad_tol must be > 0");
  if (armijo_c <= 0.0 || armijo_c >= 1.0)
    throw std::invalid_argument("SolverConfig: armijo_c must be in (0,1)");
  if (backtrack <= 0.0 || backtrack >= 1.0)
    throw std::invalid_argument("SolverConfig: backtrack must be in (0,1)");
  if (initial_step <= 0.0) throw std::invalid_argument("SolverConfig: initial_step must be > 0");
  if (min_step <= 0.0) throw std::invalid_argument("SolverConfig: min_step must be > 0");
}

double el_residual_norm(const MapField& field, const GrowthParams& params, int threads) {
  const std::vector<double> g = tangent_gradient(field, params, threads);
  const int N = field.ambient();
  double worst = 0.0;
  for (int i = 0; i < field.mesh->node_count(); ++i) {
    double sq = 0.0;
    for (int a = 0; a < N; ++a) {
      const double v = g[std::size_t(i) * N + a];
      sq += v * v;
    }
    worst = std::max(worst, std::sqrt(sq) / field.mesh->node_volumes[std::size_t(i)]);
  }
  return worst;
}

SolveResult minimize(const MapField& field0, const GrowthParams& params,
                     const SolverConfig& config) {
  return descend(field0, params, config, {}, false);
}

SolveResult solve_dirichlet(const MapField& field0, const std::vector<int>& fixed_nodes,
                            const GrowthParams& params, const SolverConfig& config) {
  if (fixed_nodes.empty())
    throw std::invalid_argument("solve_dirichlet: fixed node set must be nonempty");
  std::vector<char> mask(std::size_t(field0.mesh->node_count()), 0);
  for (int i : fixed_nodes) {
    if (i < 0 || i >= field0.mesh->node_count())
      throw std::invalid_argument("solve_dirichlet: fixed node index out of range");
    mask[std::size_t(i)] = 1;
  }
  return descend(field0, params, config, mask, false);
}

SolveResult minimize_in_degree_class(int d, std::shared_ptr<const DomainMesh> mesh,
                                     TargetManifold target, const GrowthParams& params,
                                     const SolverConfig& config, double torus_bubble_scale) {
  MapField init;
  if (mesh->kind == MeshKind::Icosphere2)
    init = degree_field_icosphere(std::move(mesh), std::move(target), d);
  else if (mesh->kind == MeshKind::Torus2)
    init = degree_field_torus(std::move(mesh), std::move(target), d, torus_bubble_scale);
  else
    throw std::invalid_argument("minimize_in_degree_class: unsupported mesh kind");
  SolverConfig cfg = config;
  cfg.track_degree = true;
  return descend(init, params, cfg, {}, true);
}

void ContinuationSchedule::validate(int n) const {
  if (p_list.size() != delta_list.size())
    throw std::invalid_argument("ContinuationSchedule: p_list and delta_list lengths differ");
  if (p_list.empty()) throw std::invalid_argument("ContinuationSchedule: empty schedule");
  for (std::size_t k = 0; k < p_list.size(); ++k) {
    if (p_list[k] <= n || p_list[k] > n + 1)
      throw std::invalid_argument("ContinuationSchedule: p values must lie in (n, n+1]");
    if (delta_list[k] <= 0.0 || delta_list[k] > 1.0)
      throw std::invalid_argument("ContinuationSchedule: delta values must lie in (0, 1]");
    if (k > 0 && !(p_list[k] < p_list[k - 1]))
      throw std::invalid_argument("ContinuationSchedule: p_list must be strictly decreasing");
    if (k > 0 && !(delta_list[k] < delta_list[k - 1]))
      throw std::invalid_argument("ContinuationSchedule: delta_list must be strictly decreasing");
  }
}

ContinuationResult run_continuation(const MapField& field0,
                                    const ContinuationSchedule& schedule,
                                    const GrowthParams& base, const SolverConfig& config) {
  schedule.validate(base.n);
  ContinuationResult out;
  MapField current = field0;
  const bool with_degree = config.track_degree && degree_applies(field0);
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    GrowthParams params = base;
    params.p = schedule.p_list[k];
    params.delta = schedule.delta_list[k];
    out.warm_start_energy.push_back(total_energy_value(current, params, config.threads));

    SolveResult step = minimize(current, params, config);
    if (step.status != SolveStatus::Converged) out.all_converged = false;

    TraceRow row;
    row.k = int(k);
    row.p = params.p;
    row.delta = params.delta;
    row.e_pdelta = step.final_energy;
    row.d_n = dirichlet_energy(step.field, base.n, config.threads);
    row.entropy = entropy(step.field, params, config.threads);
    row.residual = step.final_residual;
    row.iterations = step.iterations;
    if (with_degree) row.degree = degree(step.field).value;
    out.trace.push_back(row);

    current = step.field;
    out.steps.push_back(std::move(step));
  }
  return out;
}

}  // namespace nharm
