#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "expo_surf/bodies.hpp"
#include "expo_surf/measure.hpp"
#include "expo_surf/random.hpp"

namespace expo_surf {

enum class EstimateMethod { exact, quadrature, shell_mc, facet_mc };

std::string_view to_string(EstimateMethod method);
EstimateMethod parse_estimate_method(std::string_view name);

/// Output of every surface-area evaluator. `std_error` is zero exactly for
/// the deterministic methods.
struct SurfaceEstimate {
  double value = 0.0;
  double std_error = 0.0;
  EstimateMethod method = EstimateMethod::exact;
  std::uint64_t samples = 0;
  std::optional<double> epsilon;
};

/// γ_p-surface area of the sphere of radius R, in closed form.
SurfaceEstimate sphere_surface_exact(const MeasureParams& params, double radius);

/// ln of s^{n-2}·exp(-(s² + rho²)^{p/2}/p): the γ_p density on a hyperplane
/// at distance rho, integrated over the in-plane sphere of radius s (up to
/// the constant c_{n,p}·(n-1)·ν_{n-1}).
double log_plane_radial_integrand(std::size_t n, double p, double rho, double s);

/// Upper in-plane radius beyond which log_plane_radial_integrand is
/// negligible (80 below its peak and decreasing).
double plane_integration_cutoff(const MeasureParams& params, double rho);

/// ln of the γ_p-surface area of a hyperplane at distance rho from the origin.
double log_hyperplane_surface(const MeasureParams& params, double rho);

/// γ_p-surface area of a hyperplane at distance rho, by radial quadrature
/// over the (n-1)-dimensional plane. Requires n >= 2.
SurfaceEstimate hyperplane_surface(const MeasureParams& params, double rho);

/// How the shell estimator spends its samples.
enum class ShellSampling {
  /// Draw points from γ_p and count those with 0 < distance <= ε.
  point_count,
  /// Draw directions only and integrate the radial law exactly along each
  /// ray. Unbiased for the same shell mass, with far lower variance; the
  /// only option when the shell mass is too small to be hit by points.
  /// For a ball every direction gives the same value, so std_error is 0.
  radial_conditional,
};

struct ShellOptions {
  double epsilon = 0.0;
  /// Return 2·S(ε/2) - S(ε) instead of S(ε).
  bool richardson = false;
  ShellSampling sampling = ShellSampling::point_count;
  std::size_t workers = 1;
};

/// 0.05·n^{1/p - 1/2}, the width of the radial concentration zone scaled down.
double default_shell_width(const MeasureParams& params);

/// default_shell_width, narrowed so that the log radial density changes by
/// at most 0.05 across a shell at radius r.
double shell_width_for_radius(const MeasureParams& params, double r);

/// Minkowski-shell estimate γ_p((Q + εB) \ Q)/ε from `samples` draws.
/// The body must have an exact distance (Ball, Cube, Slab).
SurfaceEstimate shell_estimate(const MeasureParams& params, const ConvexBody& body,
                               std::size_t samples, RandomStream& rng,
                               const ShellOptions& options);

struct FacetOptions {
  /// Estimate facet 0 only and multiply by the facet count. Valid when the
  /// facets are exchangeable, as for i.i.d. random directions.
  bool single_facet = false;
  std::size_t workers = 1;
};

/// Facet Monte Carlo: for each facet, the hyperplane's γ_p-area times the
/// fraction of `samples_per_facet` points, drawn from the density restricted
/// to that hyperplane, which land inside the facet.
SurfaceEstimate facet_estimate(const MeasureParams& params, const ConvexBody& body,
                               std::size_t samples_per_facet, RandomStream& rng,
                               const FacetOptions& options = {});

/// J_{n+p-2,p}/J_{n-1,p}, an upper bound on the γ_p-surface area of any
/// convex body. Requires n >= 2.
double rough_upper_bound(const MeasureParams& params);

/// Sampler for the in-plane radius s of a point on a hyperplane at distance
/// `offset`, with density ∝ s^{n-2} exp(-(s² + offset²)^{p/2}/p). Inverse
/// CDF tabulated on 4096 Chebyshev-spaced nodes with cubic Hermite cells.
class InPlaneRadiusSampler {
 public:
  InPlaneRadiusSampler(const MeasureParams& params, double offset);

  /// Shared, cached instance for (n, p, offset).
  static std::shared_ptr<const InPlaneRadiusSampler> cached(const MeasureParams& params,
                                                            double offset);

  double operator()(RandomStream& rng) const { return quantile(rng.uniform()); }
  double quantile(double u) const;
  double cdf(double s) const;

  static constexpr std::size_t kNodes = 4096;

 private:
  double log_density(double s) const;

  std::size_t n_;
  double p_;
  double offset_;
  double log_peak_;
  double log_norm_;
  std::vector<double> nodes_;
  std::vector<double> cdf_;
  std::vector<double> pdf_;
};

}  // namespace expo_surf
