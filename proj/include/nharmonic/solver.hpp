#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nharmonic/energy.hpp"
#include "nharmonic/geometry.hpp"

namespace nharm {

struct SolverConfig {
  int max_iters = 500;
  double grad_tol = 1e-5;       // stop when el_residual_norm falls below
  double armijo_c = 0.1;
  double backtrack = 0.5;
  double initial_step = 1.0;
  double min_step = 1e-14;
  int threads = 1;
  bool track_degree = true;
  void validate() const;
};

enum class SolveStatus { Converged, MaxIters, DegreeJump };

struct SolveResult {
  MapField field;
  int iterations = 0;
  double initial_energy = 0.0;
  double final_energy = 0.0;
  double final_residual = 0.0;
  std::vector<double> energy_trace;  // energy at entry and after each accepted step
  std::vector<int> degree_trace;     // sphere targets of matching dimension
  SolveStatus status = SolveStatus::Converged;
  std::string diagnostic;
};

// Sup-norm of the tangent gradient scaled by inverse lumped node volume;
// zero exactly at discrete weak solutions.
double el_residual_norm(const MapField& field, const GrowthParams& params,
                        int threads = 1);

// Projected gradient descent: step along -tangent_gradient, retract to the
// target, accept by the Armijo rule on the total energy.
SolveResult minimize(const MapField& field0, const GrowthParams& params,
                     const SolverConfig& config);

// As minimize, with the gradient zeroed on fixed_nodes (values kept exactly).
SolveResult solve_dirichlet(const MapField& field0, const std::vector<int>& fixed_nodes,
                            const GrowthParams& params, const SolverConfig& config);

// Starts from an explicit degree-d map and aborts with DegreeJump if the
// degree changes along the way.
SolveResult minimize_in_degree_class(int d, std::shared_ptr<const DomainMesh> mesh,
                                     TargetManifold target, const GrowthParams& params,
                                     const SolverConfig& config,
                                     double torus_bubble_scale = 0.15);

struct ContinuationSchedule {
  std::vector<double> p_list;      // strictly decreasing in (n, n+1]
  std::vector<double> delta_list;  // strictly decreasing in (0, 1]
  void validate(int n) const;
  std::size_t size() const { return p_list.size(); }
};

struct TraceRow {
  int k = 0;
  double p = 0.0;
  double delta = 0.0;
  double e_pdelta = 0.0;
  double d_n = 0.0;
  double entropy = 0.0;
  double residual = 0.0;
  int iterations = 0;
  std::optional<int> degree;
};

struct ContinuationResult {
  std::vector<SolveResult> steps;
  std::vector<TraceRow> trace;
  // E_{p_k,delta_k} of the warm start before re-minimizing at step k.
  std::vector<double> warm_start_energy;
  bool all_converged = true;
};

// Minimize at each (p_k, delta_k), warm-starting from the previous step.
ContinuationResult run_continuation(const MapField& field0,
                                    const ContinuationSchedule& schedule,
                                    const GrowthParams& base,
                                    const SolverConfig& config);

}  // namespace nharm
