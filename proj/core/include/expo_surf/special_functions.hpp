#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>

namespace expo_surf {

/// Natural logarithm of a positive quantity. Products and sums of values
/// like t^n e^{-t^p/p} stay finite in this form long after the linear value
/// has overflowed or underflowed binary64.
struct LogValue {
  double log_magnitude = -std::numeric_limits<double>::infinity();

  static LogValue from_linear(double v) { return {std::log(v)}; }
  double linear() const { return std::exp(log_magnitude); }

  friend LogValue operator*(LogValue a, LogValue b) {
    return {a.log_magnitude + b.log_magnitude};
  }
  friend LogValue operator/(LogValue a, LogValue b) {
    return {a.log_magnitude - b.log_magnitude};
  }
  /// log-sum-exp
  friend LogValue operator+(LogValue a, LogValue b) {
    if (a.log_magnitude < b.log_magnitude) std::swap(a, b);
    if (b.log_magnitude == -std::numeric_limits<double>::infinity()) return a;
    return {a.log_magnitude + std::log1p(std::exp(b.log_magnitude - a.log_magnitude))};
  }
  friend bool operator<(LogValue a, LogValue b) { return a.log_magnitude < b.log_magnitude; }
};

/// Tolerances for quadrature_log. `abs_tolerance` is measured relative to
/// the integrand's peak value, i.e. on exp(f_log - max f_log).
struct QuadratureSpec {
  double rel_tolerance = 1e-10;
  double abs_tolerance = 1e-14;
  std::size_t max_subdivisions = 2000;
};

/// A log-integrand: returns ln of a nonnegative integrand, -inf for zero.
using LogIntegrand = std::function<double(double)>;

/// ln Γ(x) for x > 0.
double log_gamma(double x);

/// ln ν_n, the log-volume of the unit Euclidean ball in dimension n.
double log_unit_ball_volume(std::size_t n);

/// ln J_{a,p} where J_{a,p} = ∫_0^∞ t^a e^{-t^p/p} dt, via the closed form
/// p^{(a+1)/p - 1} Γ((a+1)/p).
double log_J(double a, double p);

/// Leading-order Laplace approximation of ln J_{a,p}, valid as a → ∞.
double log_J_laplace(double a, double p);

/// ln ∫_lo^hi exp(f_log(t)) dt.
///
/// Adaptive Gauss–Kronrod (7/15) panel subdivision. The interval is first
/// cut at the integrand's log-maximum and at geometrically spaced points on
/// either side of it, scaled to the width of the peak, so sharply peaked
/// integrands are resolved before any refinement. Panel integrals are
/// accumulated relative to the peak value, so the integrand itself may be
/// far outside binary64 range.
///
/// Throws DomainError if lo >= hi or f_log returns NaN, and AccuracyError
/// (carrying the best log estimate) if the tolerance is not met within
/// spec.max_subdivisions panels.
double quadrature_log(const LogIntegrand& f_log, double lo, double hi,
                      const QuadratureSpec& spec = {});

/// Upper limit used by quadrature_log_to_infinity: starting from
/// `initial_hi`, doubled until the log-integrand is decreasing there and at
/// least `log_drop` below its maximum on [lo, hi].
double integration_cutoff(const LogIntegrand& f_log, double lo, double initial_hi,
                          double log_drop = 80.0);

/// ln ∫_lo^∞ exp(f_log(t)) dt for an integrand that eventually decreases.
/// The upper limit starts at `initial_hi` and is pushed out until the
/// log-integrand sits `log_drop` below its maximum there.
double quadrature_log_to_infinity(const LogIntegrand& f_log, double lo, double initial_hi,
                                  const QuadratureSpec& spec = {}, double log_drop = 80.0);

/// Single 15-point Gauss–Kronrod evaluation of ∫_lo^hi f (linear scale).
/// If `error` is given it receives |K15 - G7|.
double gauss_kronrod_15(const std::function<double(double)>& f, double lo, double hi,
                        double* error = nullptr);

/// Second-order Laplace approximation √(-2π/(h''·t)) of ∫ e^{t·h(x)} dx for
/// h with an interior maximum of value 0 and curvature h'' < 0 there.
double laplace_second_order(double h_second_at_max, double t);

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

/// x such that P(a, x) = prob.
double inverse_regularized_gamma_p(double a, double prob);
/// x such that Q(a, x) = q; accurate for tiny q (tail quantiles).
double inverse_regularized_gamma_q(double a, double q);

}  // namespace expo_surf
