// Produces the frozen constants in include/nharmonic/kernel.hpp: sweeps the
// planar (a, b, theta) reduction of the vector inequalities over the tested
// parameter box and reports the observed extremes. Run after any change to
// the weight or V-map formulas and update the header if the values move.

#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "nharmonic/kernel.hpp"

using namespace nharm;

namespace {

struct Extremes {
  double ratio1 = 1e300;  // pairing / v_gap
  double ratio2 = 1e300;  // v_gap / p_gap
  double where1[7] = {0};
  double where2[7] = {0};
};

void visit(Extremes& ex, const GrowthParams& params, double a, double b, double theta) {
  const double X[2] = {a, 0.0};
  const double Y[2] = {b * std::cos(theta), b * std::sin(theta)};
  const GapReport gap = monotonicity_gap(std::span<const double>(X, 2),
                                         std::span<const double>(Y, 2), params);
  const double vmag = weight(a * a, params) * a * a + weight(b * b, params) * b * b;
  if (gap.v_gap > 1e-8 * (vmag + 1e-300)) {
    const double r1 = gap.pairing / gap.v_gap;
    if (r1 < ex.ratio1) {
      ex.ratio1 = r1;
      double loc[7] = {double(params.n), params.p, params.delta, params.s, a, b, theta};
      std::copy(loc, loc + 7, ex.where1);
    }
  }
  if (gap.p_gap > 1e-300) {
    const double r2 = gap.v_gap / gap.p_gap;
    if (r2 < ex.ratio2) {
      ex.ratio2 = r2;
      double loc[7] = {double(params.n), params.p, params.delta, params.s, a, b, theta};
      std::copy(loc, loc + 7, ex.where2);
    }
  }
}

std::vector<double> log_grid(double lo, double hi, int count, bool with_zero) {
  std::vector<double> out;
  if (with_zero) out.push_back(0.0);
  for (int i = 0; i < count; ++i)
    out.push_back(lo * std::pow(hi / lo, double(i) / (count - 1)));
  return out;
}

}  // namespace

int main() {
  const std::vector<double> mags = log_grid(1e-3, 10.0, 24, true);
  const std::vector<double> far_mags = log_grid(1e-3, 1e3, 30, true);
  const std::vector<double> deltas = {0.0, 1e-4, 1e-2, 0.1, 0.3, 1.0};
  const std::vector<double> svals = {0.0, 1e-4, 1e-2, 0.1, 0.3, 1.0};
  std::vector<double> thetas;
  for (int i = 0; i <= 24; ++i) thetas.push_back(M_PI * i / 24.0);

  Extremes ex;
  for (int n : {2, 3}) {
    std::vector<double> ps;
    for (int i = 0; i <= 8; ++i) ps.push_back(n + 1e-9 + (1.0 - 2e-9) * i / 8.0);
    for (double p : ps)
      for (double delta : deltas)
        for (double s : svals) {
          GrowthParams params{n, 2, p, delta, s};
          for (double a : mags)
            for (double b : mags)
              for (double theta : thetas) visit(ex, params, a, b, theta);
          // Normalized sweep |X| = 1 with a wide ratio range.
          for (double b : far_mags)
            for (double theta : thetas) visit(ex, params, 1.0, b, theta);
        }
  }

  // Random pass over the same box the tests sample.
  std::mt19937_64 rng(20240617);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (long it = 0; it < 2000000; ++it) {
    GrowthParams params;
    params.n = (it % 2 == 0) ? 2 : 3;
    params.ambient = 2;
    params.p = params.n + unit(rng);
    params.delta = (it % 7 == 0) ? 0.0 : unit(rng);
    params.s = (it % 5 == 0) ? 0.0 : unit(rng);
    const double a = (it % 11 == 0) ? 0.0 : std::pow(10.0, -3.0 + 4.0 * unit(rng));
    const double b = (it % 13 == 0) ? 0.0 : std::pow(10.0, -3.0 + 4.0 * unit(rng));
    visit(ex, params, a, b, M_PI * unit(rng));
  }

  std::printf("inf pairing/v_gap       = %.17g\n", ex.ratio1);
  std::printf("  at n=%g p=%.6g delta=%.6g s=%.6g a=%.6g b=%.6g theta=%.6g\n",
              ex.where1[0], ex.where1[1], ex.where1[2], ex.where1[3], ex.where1[4],
              ex.where1[5], ex.where1[6]);
  std::printf("inf v_gap/p_gap         = %.17g\n", ex.ratio2);
  std::printf("  at n=%g p=%.6g delta=%.6g s=%.6g a=%.6g b=%.6g theta=%.6g\n",
              ex.where2[0], ex.where2[1], ex.where2[2], ex.where2[3], ex.where2[4],
              ex.where2[5], ex.where2[6]);
  const double c0 = 0.9 * ex.ratio1;
  const double c1 = 0.9 * c0 * ex.ratio2;
  std::printf("kGapC0 = %.17g\n", c0);
  std::printf("kGapC1 = %.17g\n", c1);

  // Convexity constant: sup of (integrand - |x|^n/n) / (max(|x|^p,1)(P0-n+delta)).
  double worst = 0.0;
  double wloc[4] = {0};
  const std::vector<double> cx_mags = log_grid(1e-3, 1e8, 160, true);
  for (int n : {2, 3}) {
    const double p0 = default_p0(n);
    for (int i = 1; i <= 16; ++i) {
      const double p = n + (p0 - n) * i / 16.0;
      for (double delta : deltas)
        for (double a : cx_mags) {
          GrowthParams params{n, 2, p, delta, 1.0};
          const double t = a * a;
          const double lhs = integrand_from_norm_sq(t, params);
          const double margin =
              std::max(std::pow(t, 0.5 * p), 1.0) * (p0 - n + delta);
          const double num = lhs - (n == 2 ? t : t * std::sqrt(t)) / n;
          const double ratio = num / margin;
          if (ratio > worst) {
            worst = ratio;
            double loc[4] = {double(n), p, delta, a};
            std::copy(loc, loc + 4, wloc);
          }
        }
    }
  }
  std::printf("sup convexity ratio     = %.17g\n", worst);
  std::printf("  at n=%g p=%.6g delta=%.6g a=%.6g\n", wloc[0], wloc[1], wloc[2], wloc[3]);
  std::printf("kConvexityC4 = %.17g\n", 1.1 * worst);
  return 0;
}
