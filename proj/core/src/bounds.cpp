#include "expo_surf/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "expo_surf/errors.hpp"
#include "expo_surf/special_functions.hpp"
#include "expo_surf/surface_area.hpp"

namespace expo_surf {

namespace {

constexpr double kPi = std::numbers::pi;

double n_power(const MeasureParams& params, double exponent) {
  return std::pow(static_cast<double>(params.n()), exponent);
}

}  // namespace

std::string_view to_string(ConstantVariant variant) {
  return variant == ConstantVariant::as_stated ? "stated" : "derived";
}

ConstantVariant parse_constant_variant(std::string_view name) {
  if (name == "stated" || name == "as_stated") return ConstantVariant::as_stated;
  if (name == "derived" || name == "as_derived") return ConstantVariant::as_derived;
  throw DomainError("unknown constant variant '" + std::string(name) + "'");
}

Constants constants(double p) {
  if (!(p >= MeasureParams::kMinP && p <= MeasureParams::kMaxP)) {
    throw DomainError("constants: p must lie in [0.25, 64]");
  }
  const double e_inv_p = std::exp(-1.0 / p);
  Constants k{};
  k.delta_p = -std::expm1(-1.0 / p);
  k.C1 = std::sqrt(2.0 * p) * std::pow(2.0 - e_inv_p, 0.5 * p);
  if (p <= 2.0) {
    k.C = std::sqrt(2.0 / p) * std::exp(0.5 - 2.0 / p);
  } else {
    k.C = std::sqrt(2.0 / p) * e_inv_p * std::pow(2.0 - e_inv_p, 1.0 - 0.5 * p);
  }
  k.C_as_stated = 2.0 * std::pow(2.0 * kPi / p, 0.25) * std::sqrt(k.C / k.C1);
  k.C_as_derived = 1.0 / k.C_as_stated;
  return k;
}

double alpha_star(const MeasureParams& params) {
  if (params.n() < 2) throw DomainError("alpha_star: requires n >= 2");
  const Constants k = constants(params.p());
  return std::pow(params.p() / (2.0 * kPi), 0.25) * std::sqrt(k.C / k.C1) * n_power(params, -0.25);
}

XiLowerBounds xi_lower_bounds(const MeasureParams& params, double y_norm, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("xi_lower_bounds: alpha must lie in [0, 1]");
  if (!(y_norm > 0.0)) throw DomainError("xi_lower_bounds: |y| must be > 0");
  const double p = params.p();
  const Constants k = constants(p);
  const double scale = n_power(params, 1.0 / p - 0.5);
  const double radial = std::sqrt(2.0 * kPi / p);
  const double sqrt_n = std::sqrt(static_cast<double>(params.n()));

  XiLowerBounds xi{};
  xi.xi1 = radial * scale * alpha;
  xi.xi2 = std::exp(-1.0 / p) * std::sqrt(2.0 / p) * std::pow(y_norm, 1.0 - 0.5 * p) /
           (1.0 + std::sqrt(2.0 * p) * alpha * std::pow(y_norm, 0.5 * p));
  xi.combined = scale * (radial * alpha + k.C / (k.C1 * alpha * sqrt_n + 1.0));
  xi.combined_leading = alpha > 0.0 ? scale * (radial * alpha + k.C / (k.C1 * alpha * sqrt_n))
                                    : std::numeric_limits<double>::infinity();
  return xi;
}

double BoundsReport::polytope_bound(double facets, ConstantVariant v) const {
  if (!(facets >= 2.0)) throw DomainError("polytope_bound: K must be >= 2");
  return constants.upper_constant(v) * std::pow(static_cast<double>(n), 0.5 - 1.0 / p) *
         std::sqrt(std::log(facets));
}

BoundsReport theorem_bounds(const MeasureParams& params) {
  if (params.n() < 2) throw DomainError("theorem_bounds: requires n >= 2");
  BoundsReport r{};
  r.p = params.p();
  r.n = params.n();
  r.constants = constants(params.p());
  r.alpha_star = alpha_star(params);
  const double growth = n_power(params, 0.75 - 1.0 / params.p());
  r.upper_bound_as_stated = r.constants.C_as_stated * growth;
  r.upper_bound_as_derived = r.constants.C_as_derived * growth;
  r.lower_bound = std::exp(-2.25) * growth;
  r.lower_bound_construction = std::exp(-0.25) * growth;
  r.rough_bound = rough_upper_bound(params);
  if (std::exp(-2.25) <= r.constants.C_as_derived) r.lower_le_upper_from_n = 2;
  return r;
}

double polytope_bound(const MeasureParams& params, double facets, ConstantVariant variant) {
  if (!(facets >= 2.0)) throw DomainError("polytope_bound: K must be >= 2");
  return constants(params.p()).upper_constant(variant) * n_power(params, 0.5 - 1.0 / params.p()) *
         std::sqrt(std::log(facets));
}

double hyperplane_bound(const MeasureParams& params, double rho) {
  if (params.n() < 2) throw DomainError("hyperplane_bound: requires n >= 2");
  if (!(rho >= 0.0)) throw DomainError("hyperplane_bound: rho must be >= 0");
  const double p = params.p();
  return n_power(params, 0.5 - 1.0 / p) / std::sqrt(2.0 * kPi) *
         std::exp(-0.5 * rho * rho * n_power(params, 1.0 - 2.0 / p));
}

double cap_probability(std::size_t n, double r, double rho) {
  if (n < 3) throw DomainError("cap_probability: requires n >= 3");
  if (!(r > 0.0)) throw DomainError("cap_probability: r must be > 0");
  if (!(rho >= 0.0)) throw DomainError("cap_probability: rho must be >= 0");
  // Substituting t = x·√(r² + ρ²) leaves the ratio of ∫(1 - x²)^{(n-3)/2}
  // over [ρ/√(r²+ρ²), 1] and over [-1, 1].
  const double threshold = rho / std::hypot(r, rho);
  const double exponent = 0.5 * static_cast<double>(n - 3);
  auto f_log = [exponent](double x) {
    if (exponent == 0.0) return 0.0;
    return exponent * (std::log1p(-x) + std::log1p(x));
  };
  const double log_whole = quadrature_log(f_log, -1.0, 1.0);
  if (threshold >= 1.0) return 0.0;
  const double log_cap = quadrature_log(f_log, threshold, 1.0);
  return std::min(std::exp(log_cap - log_whole), 0.5);
}

double cap_probability_bound(const MeasureParams& params) {
  const double n = static_cast<double>(params.n());
  return std::exp(1.25) / std::sqrt(2.0 * kPi) * std::pow(n, -0.25) * std::exp(-0.5 * std::sqrt(n));
}

CapProbabilityTable::CapProbabilityTable(std::size_t n, double rho, double s_min, double s_max)
    : log_s_(kNodes), log_prob_(kNodes) {
  if (!(s_min > 0.0 && s_max > s_min)) throw DomainError("CapProbabilityTable: bad range");
  const double a = std::log(s_min);
  const double b = std::log(s_max);
  for (std::size_t k = 0; k < kNodes; ++k) {
    log_s_[k] = a + (b - a) * static_cast<double>(k) / (kNodes - 1);
    const double prob = cap_probability(n, std::exp(log_s_[k]), rho);
    log_prob_[k] = prob > 0.0 ? std::log(prob) : -std::numeric_limits<double>::infinity();
  }
}

double CapProbabilityTable::operator()(double s) const {
  if (s <= 0.0) return 0.0;
  const double x = std::log(s);
  if (x >= log_s_.back()) return std::exp(log_prob_.back());
  std::size_t k = 0;
  if (x > log_s_.front()) {
    k = static_cast<std::size_t>(std::upper_bound(log_s_.begin(), log_s_.end(), x) -
                                 log_s_.begin()) - 1;
  }
  const double y0 = log_prob_[k], y1 = log_prob_[k + 1];
  if (!std::isfinite(y0) || !std::isfinite(y1)) return 0.0;  // underflowed cell
  const double t = (x - log_s_[k]) / (log_s_[k + 1] - log_s_[k]);
  return std::exp(y0 + t * (y1 - y0));
}

double expected_random_polytope_surface(const MeasureParams& params, std::size_t facets,
                                        double rho) {
  const std::size_t n = params.n();
  if (n < 3) throw DomainError("expected_random_polytope_surface: requires n >= 3");
  if (facets < 1) throw DomainError("expected_random_polytope_surface: N must be >= 1");
  if (!(rho > 0.0)) throw DomainError("expected_random_polytope_surface: rho must be > 0");
  const double p = params.p();
  const double cutoff = plane_integration_cutoff(params, rho);
  const CapProbabilityTable cap(n, rho, cutoff * 1e-9, cutoff);
  const double others = static_cast<double>(facets - 1);
  auto f_log = [&](double s) {
    const double base = log_plane_radial_integrand(n, p, rho, s);
    if (others == 0.0) return base;
    return base + others * std::log1p(-cap(s));
  };
  QuadratureSpec spec;
  spec.rel_tolerance = 1e-9;
  spec.max_subdivisions = 8000;
  const double log_integral = quadrature_log(f_log, 0.0, cutoff, spec);
  const double log_plane_sphere =
      std::log(static_cast<double>(n - 1)) + log_unit_ball_volume(n - 1);
  return std::exp(params.log_c() + std::log(static_cast<double>(facets)) + log_plane_sphere +
                  log_integral);
}

}  // namespace expo_surf
