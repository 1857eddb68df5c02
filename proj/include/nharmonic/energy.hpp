#pragma once

#include <vector>

#include "nharmonic/geometry.hpp"
#include "nharmonic/kernel.hpp"

namespace nharm {

inline constexpr int kMaxAmbient = 8;

struct EnergyReport {
  double total = 0.0;
  std::vector<double> per_cell;  // density times cell volume
};

EnergyReport total_energy(const MapField& field, const GrowthParams& params,
                          int threads = 1);
double total_energy_value(const MapField& field, const GrowthParams& params,
                          int threads = 1);

// (1/n) sum vol |G|^n; equal to total_energy at (p=n, delta=0, s=0).
double dirichlet_energy(const MapField& field, int n_exponent, int threads = 1);

// Exact derivative of the discrete total energy with respect to the
// unconstrained node values.
std::vector<double> euclidean_gradient(const MapField& field, const GrowthParams& params,
                                       int threads = 1);
// Nodewise tangent projection of the euclidean gradient.
std::vector<double> tangent_gradient(const MapField& field, const GrowthParams& params,
                                     int threads = 1);

// sum vol (1+(delta+|G|^2)^{n/2})^{p/n} log(1+(delta+|G|^2)^{n/2}); the s=1 form.
double entropy(const MapField& field, const GrowthParams& params, int threads = 1);

// Energy restricted to cells whose centroid lies in the geodesic ball.
double local_energy(const MapField& field, const GrowthParams& params, int center,
                    double radius);

}  // namespace nharm
