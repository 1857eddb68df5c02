#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nharmonic/energy.hpp"
#include "nharmonic/geometry.hpp"
#include "nharmonic/solver.hpp"

namespace nharm {

// Maximal concentration function F(R): the largest ball energy over all
// centers, ties broken by lowest node index.
std::pair<double, int> max_concentration(const MapField& field, const GrowthParams& params,
                                         double R);

struct ConcentrationScan {
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<int> nodes;
};
ConcentrationScan concentration_scan(const MapField& field, const GrowthParams& params,
                                     const std::vector<double>& radii);

// Smallest radius (to 1e-3 of the mesh spacing) with F(r) >= threshold,
// together with the realizing node; nullopt when even the full domain stays
// below the threshold.
std::optional<std::pair<double, int>> concentration_radius(const MapField& field,
                                                           const GrowthParams& params,
                                                           double threshold);

// Resample of u(center + r x) on a flat [-K,K]^2 grid with the rescaled
// parameters delta' = r^2 delta, s' = r^n s.
struct PatchField {
  int res = 0;             // cells per side
  double half_width = 0.0; // K
  int ambient = 0;
  GrowthParams params;     // rescaled parameters
  std::vector<double> values;  // (res+1)^2 nodes, node-major

  double spacing() const { return 2.0 * half_width / res; }
};
PatchField rescale_map(const MapField& field, const GrowthParams& params, int center,
                       double r, double chart_multiple, int resolution = 0);

// Energy of the patch over cells whose centroid lies in |x| <= ball_radius.
double patch_total_energy(const PatchField& patch, double ball_radius);
double patch_dirichlet_energy(const PatchField& patch, double ball_radius, int n_exponent);

// Energy over the annulus r_in < d <= r_out around a node.
double neck_energy(const MapField& field, const GrowthParams& params, int center,
                   double r_in, double r_out);

// Integral of the tangential gradient component to the p-th power over the
// annulus (r_in, r_out].
double tangential_energy_annulus(const MapField& field, const GrowthParams& params,
                                 int center, double r_in, double r_out);
// The dyadic-gap form: integrates over A(2 R1, R2/4); requires R2 >= 8 R1.
double tangential_neck_energy(const MapField& field, const GrowthParams& params,
                              int center, double R1, double R2);

// Both sides of the shell balance at radius r: the weighted radial energy
// flux against the bulk + tangential terms. Throws when fewer than
// min_shell_cells cells cross the shell.
std::pair<double, double> hopf_balance(const MapField& field, const GrowthParams& params,
                                       int center, double r, int min_shell_cells = 16);

// max over annulus cells of dist(center) * |grad u|; reported, not asserted.
double gradient_decay_check(const MapField& field, int center, double r_in, double r_out);

struct BubbleDiagnosticsConfig {
  double threshold = 0.0;        // 0 picks 0.3 * 4*pi*radius^2 for S^2 targets
  double chart_multiple = 8.0;   // K
  double annulus_outer = 0.25;
  int min_shell_cells = 16;
  int patch_resolution = 0;      // 0 matches the source spacing
};

struct NeckLadderRow {
  double r_in = 0.0;
  double r_out = 0.0;
  double neck_energy = 0.0;
  double tangential_energy = 0.0;
  double hopf_lhs = 0.0;
  double hopf_rhs = 0.0;
  bool hopf_valid = false;
};

struct BubbleReport {
  bool concentration = false;
  int node = -1;
  std::vector<double> point;       // chart coordinates of the concentration node
  double radius = 0.0;
  double radii_exponent = 1.0;     // r^{n-p}
  std::vector<double> bubble_energies;  // D_n of each rescaled bubble chart
  double base_energy = 0.0;        // D_n outside the K r ball
  std::vector<NeckLadderRow> ladder;
  double e_pdelta = 0.0;
  double d_n = 0.0;
  double defect = 0.0;             // |E_{p,delta} - base - sum of bubbles|
  bool multi_bubble = false;
};

BubbleReport energy_identity_report(const MapField& field, const GrowthParams& params,
                                    const BubbleDiagnosticsConfig& config);

// r_k^{n - p_k} per continuation step.
std::vector<double> radii_exponent_trace(const std::vector<double>& radii,
                                         const std::vector<double>& p_list, int n);
// (p_k - n) * entropy_k per continuation step.
std::vector<double> entropy_trace(const ContinuationResult& run, int n);

double default_concentration_threshold(const TargetManifold& target);

}  // namespace nharm
