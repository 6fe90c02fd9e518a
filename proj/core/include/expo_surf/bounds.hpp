#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "expo_surf/measure.hpp"

namespace expo_surf {

/// Which reading of the upper-bound constant multiplies n^{3/4-1/p}.
///
/// Minimizing the combined pointwise certificate ξ over the cosine α gives
/// min ξ = K(p)·n^{1/p-3/4} with K(p) = 2(2π/p)^{1/4}√(C/C₁). The surface
/// area is at most 1/min ξ, so the bound constant is 1/K(p) (`as_derived`).
/// `as_stated` uses K(p) itself, the form printed alongside the theorem.
enum class ConstantVariant { as_stated, as_derived };

std::string_view to_string(ConstantVariant variant);
ConstantVariant parse_constant_variant(std::string_view name);

struct Constants {
  double delta_p;       ///< 1 - e^{-1/p}
  double C1;            ///< √(2p)(2 - e^{-1/p})^{p/2}
  double C;             ///< the p <= 2 or p >= 2 branch
  double C_as_stated;   ///< 2(2π/p)^{1/4}√(C/C₁)
  double C_as_derived;  ///< 1 / C_as_stated

  double upper_constant(ConstantVariant v) const {
    return v == ConstantVariant::as_stated ? C_as_stated : C_as_derived;
  }
};

/// Constants of the upper bound for exponent p (p in the supported range).
Constants constants(double p);

/// Cosine α* = (p/2π)^{1/4}√(C/C₁)·n^{-1/4} minimizing the combined
/// certificate. Requires n >= 2.
double alpha_star(const MeasureParams& params);

struct XiLowerBounds {
  /// Radial coordinate system: √(2π/p)·n^{1/p-1/2}·α.
  double xi1;
  /// Normal coordinate system: e^{-1/p}√(2/p)·|y|^{1-p/2}/(1 + √(2p)·α·|y|^{p/2}).
  double xi2;
  /// n^{1/p-1/2}(√(2π/p)·α + C/(C₁·α·√n + 1)).
  double combined;
  /// Leading-order form n^{1/p-1/2}(√(2π/p)·α + C/(C₁·α·√n)), whose exact
  /// minimizer is alpha_star with minimum C_as_stated·n^{1/p-3/4}. Infinite
  /// at α = 0.
  double combined_leading;
};

/// Pointwise lower bounds on ξ(y) for a boundary point at radius `y_norm`
/// whose normal makes cosine `alpha` with y. Throws DomainError unless
/// α ∈ [0, 1] and y_norm > 0.
XiLowerBounds xi_lower_bounds(const MeasureParams& params, double y_norm, double alpha);

struct BoundsReport {
  double p;
  std::size_t n;
  Constants constants;
  double alpha_star;
  double upper_bound_as_stated;   ///< C_as_stated·n^{3/4-1/p}
  double upper_bound_as_derived;  ///< C_as_derived·n^{3/4-1/p}
  double lower_bound;             ///< e^{-9/4}·n^{3/4-1/p}
  double lower_bound_construction;  ///< e^{-1/4}·n^{3/4-1/p}
  double rough_bound;             ///< J_{n+p-2,p}/J_{n-1,p}
  /// Since both bounds scale as n^{3/4-1/p}, lower <= upper_as_derived
  /// either for every n >= 2 or for none; this is 2 or empty.
  std::optional<std::size_t> lower_le_upper_from_n;

  double upper_bound(ConstantVariant v) const {
    return v == ConstantVariant::as_stated ? upper_bound_as_stated : upper_bound_as_derived;
  }
  /// C·n^{1/2-1/p}·√(ln K) for a polytope with K facets.
  double polytope_bound(double facets, ConstantVariant v = ConstantVariant::as_stated) const;
};

BoundsReport theorem_bounds(const MeasureParams& params);

/// C(p)·n^{1/2-1/p}·√(ln K) for a polytope with K >= 2 facets.
double polytope_bound(const MeasureParams& params, double facets,
                      ConstantVariant variant = ConstantVariant::as_stated);

/// (1/√(2π))·n^{1/2-1/p}·exp(-ρ²n^{1-2/p}/2), the mean-value bound on the
/// γ_p-area of a hyperplane at distance ρ.
double hyperplane_bound(const MeasureParams& params, double rho);

/// Probability that a uniform random direction u on S^{n-1} satisfies
/// <z, u> > rho for a fixed z with |z| = √(r² + rho²): the chance that the
/// hyperplane <x, u> = rho separates z from the origin. Ratio of two
/// quadratures of (1 - t²)^{(n-3)/2}. Requires n >= 3.
double cap_probability(std::size_t n, double r, double rho);

/// (e^{5/4}/√(2π))·n^{-1/4}·e^{-√n/2}.
double cap_probability_bound(const MeasureParams& params);

/// cap_probability(n, s, rho) tabulated on 2048 log-spaced nodes in s and
/// interpolated linearly in (ln s, ln p), which is monotone. Below the first
/// node the power law of the first cell is extended; above the last node the
/// last value is held.
class CapProbabilityTable {
 public:
  CapProbabilityTable(std::size_t n, double rho, double s_min, double s_max);

  double operator()(double s) const;

  static constexpr std::size_t kNodes = 2048;

 private:
  std::vector<double> log_s_;
  std::vector<double> log_prob_;
};

/// Expected γ_p-surface area of {x : <x, x_i> <= rho, i = 1..N} for N i.i.d.
/// uniform directions:
///   c_{n,p}·N·(n-1)ν_{n-1}·∫_0^∞ s^{n-2} e^{-(s²+ρ²)^{p/2}/p} (1 - p(s))^{N-1} ds
/// with p(s) = cap_probability(n, s, rho). Requires n >= 3.
double expected_random_polytope_surface(const MeasureParams& params, std::size_t facets,
                                        double rho);

}  // namespace expo_surf
