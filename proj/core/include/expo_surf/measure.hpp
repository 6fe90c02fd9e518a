#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "expo_surf/random.hpp"

namespace expo_surf {

/// The rotation-invariant probability measure γ_p on ℝⁿ with density
/// c_{n,p}·exp(-|x|^p / p). Immutable once constructed.
///
/// Supported box: p ∈ [0.25, 64], 1 <= n <= 10⁶, n/p <= 10⁶.
class MeasureParams {
 public:
  MeasureParams(std::size_t n, double p);

  std::size_t n() const { return n_; }
  double p() const { return p_; }
  /// ln c_{n,p} = -(ln n + ln ν_n + ln J_{n-1,p}).
  double log_c() const { return log_c_; }
  /// Shape n/p of the Gamma law followed by |X|^p / p.
  double radial_shape() const { return static_cast<double>(n_) / p_; }

  static constexpr double kMinP = 0.25;
  static constexpr double kMaxP = 64.0;
  static constexpr std::size_t kMaxN = 1'000'000;

 private:
  std::size_t n_;
  double p_;
  double log_c_;
};

struct Annulus {
  double inner;
  double outer;
};

/// ln of the density at x.
double log_density(const MeasureParams& params, std::span<const double> x);

/// P(|X| <= r) = P(n/p, r^p/p).
double radial_cdf(const MeasureParams& params, double r);
/// P(|X| > r).
double radial_ccdf(const MeasureParams& params, double r);
/// P(r1 < |X| <= r2), computed on whichever tail keeps the difference accurate.
double radial_mass(const MeasureParams& params, double r1, double r2);
/// Inverse of radial_cdf.
double radial_quantile(const MeasureParams& params, double prob);
/// Radius beyond which the measure carries at most `tail_mass`.
double truncation_radius(const MeasureParams& params, double tail_mass = 1e-16);

/// One draw of |X|: (p·G)^{1/p} with G ~ Gamma(n/p, 1).
double sample_radius(const MeasureParams& params, RandomStream& rng);
/// One point of γ_p written into `out` (size n).
void sample_point(const MeasureParams& params, RandomStream& rng, std::span<double> out);
/// `count` i.i.d. points of γ_p.
std::vector<std::vector<double>> sample(const MeasureParams& params, std::size_t count,
                                        RandomStream& rng);

/// Δ_p = 1 - e^{-1/p}.
double annulus_delta(double p);
/// (1 ± Δ_p)(n-1)^{1/p}; requires n >= 2.
Annulus concentration_annulus(const MeasureParams& params);
/// (n-1)^{1/p}, the maximizer of r ↦ (n-1) ln r - r^p/p; requires n >= 2.
double radial_mode(const MeasureParams& params);

}  // namespace expo_surf
