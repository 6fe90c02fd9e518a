#include "expo_surf/measure.hpp"

#include <cmath>
#include <string>

#include "expo_surf/errors.hpp"
#include "expo_surf/special_functions.hpp"

namespace expo_surf {

MeasureParams::MeasureParams(std::size_t n, double p) : n_(n), p_(p) {
  if (n < 1 || n > kMaxN) {
    throw DomainError("MeasureParams: n must lie in [1, 1e6], got " + std::to_string(n));
  }
  if (!(p >= kMinP && p <= kMaxP)) {
    throw DomainError("MeasureParams: p must lie in [0.25, 64], got " + std::to_string(p));
  }
  if (radial_shape() > 1e6) throw DomainError("MeasureParams: n/p must not exceed 1e6");
  const double nd = static_cast<double>(n);
  log_c_ = -(std::log(nd) + log_unit_ball_volume(n) + log_J(nd - 1.0, p));
}

double log_density(const MeasureParams& params, std::span<const double> x) {
  if (x.size() != params.n()) throw DomainError("log_density: dimension mismatch");
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return params.log_c() - std::pow(r2, 0.5 * params.p()) / params.p();
}

namespace {

double gamma_argument(const MeasureParams& params, double r) {
  if (!(r >= 0.0)) throw DomainError("radial law: radius must be nonnegative");
  return std::pow(r, params.p()) / params.p();
}

}  // namespace

double radial_cdf(const MeasureParams& params, double r) {
  return regularized_gamma_p(params.radial_shape(), gamma_argument(params, r));
}

double radial_ccdf(const MeasureParams& params, double r) {
  return regularized_gamma_q(params.radial_shape(), gamma_argument(params, r));
}

double radial_mass(const MeasureParams& params, double r1, double r2) {
  if (!(r2 >= r1)) throw DomainError("radial_mass: requires r1 <= r2");
  const double a = params.radial_shape();
  const double x1 = gamma_argument(params, r1);
  const double x2 = gamma_argument(params, r2);
  // Below the median the lower tail is small and accurate; above it, the upper.
  if (x1 >= a) return regularized_gamma_q(a, x1) - regularized_gamma_q(a, x2);
  return regularized_gamma_p(a, x2) - regularized_gamma_p(a, x1);
}

double radial_quantile(const MeasureParams& params, double prob) {
  if (prob == 0.0) return 0.0;
  const double x = inverse_regularized_gamma_p(params.radial_shape(), prob);
  return std::pow(params.p() * x, 1.0 / params.p());
}

double truncation_radius(const MeasureParams& params, double tail_mass) {
  const double x = inverse_regularized_gamma_q(params.radial_shape(), tail_mass);
  return std::pow(params.p() * x, 1.0 / params.p());
}

double sample_radius(const MeasureParams& params, RandomStream& rng) {
  const double g = rng.gamma(params.radial_shape());
  return std::pow(params.p() * g, 1.0 / params.p());
}

void sample_point(const MeasureParams& params, RandomStream& rng, std::span<double> out) {
  if (out.size() != params.n()) throw DomainError("sample_point: dimension mismatch");
  rng.unit_vector(out);
  const double r = sample_radius(params, rng);
  for (double& v : out) v *= r;
}

std::vector<std::vector<double>> sample(const MeasureParams& params, std::size_t count,
                                        RandomStream& rng) {
  if (count == 0) throw DomainError("sample: count must be >= 1");
  std::vector<std::vector<double>> points(count, std::vector<double>(params.n()));
  for (auto& pt : points) sample_point(params, rng, pt);
  return points;
}

double annulus_delta(double p) { return -std::expm1(-1.0 / p); }

Annulus concentration_annulus(const MeasureParams& params) {
  const double mode = radial_mode(params);
  const double delta = annulus_delta(params.p());
  return {(1.0 - delta) * mode, (1.0 + delta) * mode};
}

double radial_mode(const MeasureParams& params) {
  if (params.n() < 2) throw DomainError("radial_mode: requires n >= 2");
  return std::pow(static_cast<double>(params.n() - 1), 1.0 / params.p());
}

}  // namespace expo_surf
