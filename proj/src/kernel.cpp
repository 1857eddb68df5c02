#include "nharmonic/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nharm {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm_sq(std::span<const double> a) { return dot(a, a); }

// (x)^{n/2} for x >= 0 without a pow call in the common dimensions.
double pow_half_n(double x, int n) {
  if (n == 2) return x;
  if (n == 3) return x * std::sqrt(x);
  if (n == 4) return x * x;
  return std::pow(x, 0.5 * n);
}

}  // namespace

void GrowthParams::validate() const {
  if (n < 2) throw std::invalid_argument("GrowthParams: n must be >= 2");
  if (ambient < 1) throw std::invalid_argument("GrowthParams: ambient must be >= 1");
  if (p < n) throw std::invalid_argument("GrowthParams: p must be >= n");
  if (delta < 0.0 || delta > 1.0)
    throw std::invalid_argument("GrowthParams: delta must be in [0,1]");
  if (s < 0.0 || s > 1.0) throw std::invalid_argument("GrowthParams: s must be in [0,1]");
}

void GrowthParams::validate_continuation() const {
  validate();
  if (p >= n + 1) throw std::invalid_argument("GrowthParams: continuation requires p < n+1");
}

double pow_guard(double x, double e) {
  if (x <= 0.0) return e == 0.0 ? 1.0 : 0.0;
  return std::pow(x, e);
}

double integrand_from_norm_sq(double t, const GrowthParams& params) {
  const double a = params.s + pow_half_n(params.delta + t, params.n);
  const double a0 = params.s + pow_half_n(params.delta, params.n);
  const double e = params.p / params.n;
  return (pow_guard(a, e) - pow_guard(a0, e)) / params.p;
}

double integrand(std::span<const double> G, const GrowthParams& params) {
  return integrand_from_norm_sq(norm_sq(G), params);
}

double weight(double t, const GrowthParams& params) {
  const double a = params.s + pow_half_n(params.delta + t, params.n);
  const double b = params.n == 2 ? 1.0 : pow_guard(params.delta + t, 0.5 * (params.n - 2));
  return pow_guard(a, (params.p - params.n) / params.n) * b;
}

double half_weight(double t, const GrowthParams& params) {
  const double a = params.s + pow_half_n(params.delta + t, params.n);
  const double b = params.n == 2 ? 1.0 : pow_guard(params.delta + t, 0.25 * (params.n - 2));
  return pow_guard(a, 0.5 * (params.p - params.n) / params.n) * b;
}

std::vector<double> v_map(std::span<const double> X, const GrowthParams& params) {
  const double h = half_weight(norm_sq(X), params);
  std::vector<double> out(X.begin(), X.end());
  for (double& v : out) v *= h;
  return out;
}

GapReport monotonicity_gap(std::span<const double> X, std::span<const double> Y,
                           const GrowthParams& params) {
  const double tx = norm_sq(X);
  const double ty = norm_sq(Y);
  const double wx = weight(tx, params);
  const double wy = weight(ty, params);
  GapReport rep{};
  double pairing = 0.0, dsq = 0.0, vgap = 0.0;
  const double hx = half_weight(tx, params);
  const double hy = half_weight(ty, params);
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double d = X[i] - Y[i];
    pairing += (wx * X[i] - wy * Y[i]) * d;
    dsq += d * d;
    const double dv = hx * X[i] - hy * Y[i];
    vgap += dv * dv;
  }
  rep.pairing = pairing;
  rep.v_gap = vgap;
  rep.p_gap = std::pow(dsq, 0.5 * params.p);
  const double nx = std::sqrt(tx), ny = std::sqrt(ty);
  rep.scale = wx * nx * (nx + ny) + wy * ny * (nx + ny) + 1.0;
  return rep;
}

SlackCheck uniqueness_lower_check(std::span<const double> X, std::span<const double> Y,
                                  const GrowthParams& params) {
  const GapReport gap = monotonicity_gap(X, Y, params);
  double dsq = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double d = X[i] - Y[i];
    dsq += d * d;
  }
  const double rhs = 0.5 * (weight(norm_sq(X), params) + weight(norm_sq(Y), params)) * dsq;
  SlackCheck chk{};
  chk.slack = gap.pairing - rhs;
  chk.scale = gap.scale + rhs;
  chk.ok = chk.slack >= -1e-12 * chk.scale;
  return chk;
}

SlackCheck uniqueness_upper_check(std::span<const double> X, std::span<const double> Y,
                                  const GrowthParams& params) {
  const double tx = norm_sq(X);
  const double ty = norm_sq(Y);
  const double hx = half_weight(tx, params);
  const double hy = half_weight(ty, params);
  double vgap = 0.0, dsq = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double dv = hx * X[i] - hy * Y[i];
    vgap += dv * dv;
    const double d = X[i] - Y[i];
    dsq += d * d;
  }
  const double lhs = std::sqrt(vgap);
  const double rhs = 0.5 * params.p * (hx + hy) * std::sqrt(dsq);
  SlackCheck chk{};
  chk.slack = rhs - lhs;
  chk.scale = lhs + rhs + 1.0;
  chk.ok = chk.slack >= -1e-12 * chk.scale;
  return chk;
}

SlackCheck convexity_bound_check(std::span<const double> x, const GrowthParams& params,
                                 double p0) {
  if (params.s != 1.0)
    throw std::invalid_argument("convexity_bound_check requires s = 1");
  if (p0 <= 0.0) p0 = default_p0(params.n);
  const double t = norm_sq(x);
  const double lhs = integrand_from_norm_sq(t, params);
  const double xp = std::pow(t, 0.5 * params.p);
  const double rhs = pow_half_n(t, params.n) / params.n +
                     kConvexityC4 * std::max(xp, 1.0) * (p0 - params.n + params.delta);
  SlackCheck chk{};
  chk.slack = rhs - lhs;
  chk.scale = lhs + rhs + 1.0;
  chk.ok = chk.slack >= -1e-12 * chk.scale;
  return chk;
}

double& CordesCoefficients::at(int i, int alpha, int j, int beta) {
  return a[std::size_t(((i * ambient + alpha) * n + j) * ambient + beta)];
}

double CordesCoefficients::at(int i, int alpha, int j, int beta) const {
  return a[std::size_t(((i * ambient + alpha) * n + j) * ambient + beta)];
}

double CordesCoefficients::trace() const {
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int alpha = 0; alpha < ambient; ++alpha) acc += at(i, alpha, i, alpha);
  return acc;
}

double CordesCoefficients::sum_squares() const {
  double acc = 0.0;
  for (double v : a) acc += v * v;
  return acc;
}

CordesCoefficients cordes_coefficients(std::span<const double> G, int n, int ambient,
                                       double p, double delta) {
  const double gsq = norm_sq(G);
  if (delta <= 0.0 && gsq == 0.0)
    throw std::invalid_argument("cordes_coefficients: delta = 0 with G = 0 is undefined");
  CordesCoefficients c;
  c.n = n;
  c.ambient = ambient;
  c.a.assign(std::size_t(n * ambient) * std::size_t(n * ambient), 0.0);
  const double factor = (p - 2.0) / (delta + gsq);
  for (int i = 0; i < n; ++i)
    for (int alpha = 0; alpha < ambient; ++alpha)
      for (int j = 0; j < n; ++j)
        for (int beta = 0; beta < ambient; ++beta) {
          // product first: keeps the coefficients exactly symmetric
          double v = (G[std::size_t(i * ambient + alpha)] *
                      G[std::size_t(j * ambient + beta)]) * factor;
          if (i == j && alpha == beta) v += 1.0;
          c.at(i, alpha, j, beta) = v;
        }
  return c;
}

std::pair<double, double> cordes_lhs_rhs(const CordesCoefficients& coeffs, double epsilon) {
  if (epsilon <= 0.0 || epsilon > 1.0)
    throw std::invalid_argument("cordes_lhs_rhs: epsilon must be in (0,1]");
  const double tr = coeffs.trace();
  const double lhs = coeffs.sum_squares();
  const double rhs = tr * tr / (coeffs.n * coeffs.ambient - 1.0 + epsilon);
  return {lhs, rhs};
}

double cordes_epsilon_max(double p, int nN) {
  if (nN < 1) throw std::invalid_argument("cordes_epsilon_max: nN must be >= 1");
  if (nN == 1) return 1.0;
  const double a = p - 2.0;
  const double m = nN;
  // Largest root in epsilon of the endpoint condition q(1) = 0; the quadratic
  // in t is convex for nN >= 2, so the constraint binds at t = 1.
  const double eps = (2.0 * a + m - (m - 2.0) * a * a) / (a * a + 2.0 * a + m);
  return std::clamp(eps, 0.0, 1.0);
}

bool cordes_admissible(int n, int ambient, double p) {
  const int m = n * ambient;
  if (m <= 2) return true;
  return p < 3.0 + 2.0 / (m - 2.0);
}

double contraction_factor(double epsilon) {
  if (epsilon <= 0.0 || epsilon > 1.0)
    throw std::invalid_argument("contraction_factor: epsilon must be in (0,1]");
  return std::sqrt(1.0 - epsilon);
}

CordesReport cordes_report(std::span<const double> G, int n, int ambient, double p,
                           double delta) {
  CordesReport rep;
  rep.epsilon_max = cordes_epsilon_max(p, n * ambient);
  rep.admissible = cordes_admissible(n, ambient, p);
  const CordesCoefficients c = cordes_coefficients(G, n, ambient, p, delta);
  const double eps = rep.epsilon_max > 0.0 ? rep.epsilon_max : 1.0;
  auto [lhs, rhs] = cordes_lhs_rhs(c, eps);
  rep.lhs = lhs;
  rep.rhs = rhs;
  return rep;
}

bool rescaling_identity_check(std::span<const double> G, double r,
                              const GrowthParams& params, double* lhs_out,
                              double* rhs_out) {
  if (r <= 0.0) throw std::invalid_argument("rescaling_identity_check: r must be > 0");
  GrowthParams scaled = params;
  scaled.delta = r * r * params.delta;
  scaled.s = std::pow(r, params.n) * params.s;
  const double t = norm_sq(G);
  const double lhs = integrand_from_norm_sq(r * r * t, scaled);
  const double rp = std::pow(r, params.p);
  const double rhs = rp * integrand_from_norm_sq(t, params);
  if (lhs_out) *lhs_out = lhs;
  if (rhs_out) *rhs_out = rhs;
  // Both sides subtract the ground level; machine precision is relative to
  // the pre-subtraction magnitude, not the cancelled result.
  const double e = params.p / params.n;
  const double a1 = pow_guard(scaled.s + pow_half_n(scaled.delta + r * r * t, params.n), e);
  const double a0 = pow_guard(scaled.s + pow_half_n(scaled.delta, params.n), e);
  const double b1 = pow_guard(params.s + pow_half_n(params.delta + t, params.n), e);
  const double b0 = pow_guard(params.s + pow_half_n(params.delta, params.n), e);
  const double scale = (a1 + a0 + rp * (b1 + b0)) / params.p + 1e-300;
  return std::abs(lhs - rhs) <= 1e-12 * scale;
}

bool p_monotonicity_check(std::span<const double> G, int n, double p1, double p2,
                          double delta) {
  if (!(p1 < p2)) throw std::invalid_argument("p_monotonicity_check: need p1 < p2");
  if (p1 < n) throw std::invalid_argument("p_monotonicity_check: need n <= p1");
  GrowthParams a;
  a.n = n;
  a.p = p1;
  a.delta = delta;
  a.s = 1.0;
  GrowthParams b = a;
  b.p = p2;
  const double t = norm_sq(G);
  const double lo = integrand_from_norm_sq(t, a);
  const double hi = integrand_from_norm_sq(t, b);
  return lo <= hi + 1e-14 * std::max(1.0, hi);
}

}  // namespace nharm
