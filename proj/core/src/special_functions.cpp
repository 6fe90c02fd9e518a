#include "expo_surf/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "expo_surf/errors.hpp"

namespace expo_surf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Gauss–Kronrod 7/15 abscissae and weights on [-1, 1] (QUADPACK qk15).
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo;
  double hi;
  double integral;  // ∫ exp(f - shift) over the panel
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

// Evaluates f_log, rejecting NaN and tracking the largest value seen.
class Evaluator {
 public:
  explicit Evaluator(const LogIntegrand& f) : f_(f) {}

  double operator()(double t) {
    const double v = f_(t);
    if (std::isnan(v)) {
      throw DomainError("quadrature_log: integrand returned NaN at t=" + std::to_string(t));
    }
    if (v > max_seen_) max_seen_ = v;
    return v;
  }

  double max_seen() const { return max_seen_; }

 private:
  const LogIntegrand& f_;
  double max_seen_ = kNegInf;
};

Panel gauss_kronrod(Evaluator& f, double lo, double hi, double shift) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = std::exp(f(center) - shift);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double sum = std::exp(f(center - dx) - shift) + std::exp(f(center + dx) - shift);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

struct Peak {
  double location;
  double log_value;
};

// Locates the maximum of a unimodal log-integrand: coarse grid, then golden
// section inside the bracketing grid cells.
Peak find_peak(Evaluator& f, double lo, double hi) {
  constexpr int kGrid = 256;
  const double step = (hi - lo) / kGrid;
  int best = 0;
  double best_value = kNegInf;
  for (int i = 0; i <= kGrid; ++i) {
    const double t = (i == kGrid) ? hi : lo + i * step;
    const double v = f(t);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  if (best_value == kNegInf) return {0.5 * (lo + hi), kNegInf};

  double a = std::max(lo, lo + (best - 1) * step);
  double b = std::min(hi, lo + (best + 1) * step);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 80 && (b - a) > 1e-15 * (std::abs(a) + std::abs(b)); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  Peak peak{lo + best * step, best_value};
  if (best == kGrid) peak.location = hi;
  if (fc > peak.log_value) peak = {c, fc};
  if (fd > peak.log_value) peak = {d, fd};
  return peak;
}

// Distance from the peak at which the log-integrand has dropped by one unit,
// searched towards `bound`. Returns |bound - peak| if it never drops.
double peak_half_width(Evaluator& f, const Peak& peak, double bound) {
  const double span = std::abs(bound - peak.location);
  if (span == 0.0) return 0.0;
  const double dir = bound > peak.location ? 1.0 : -1.0;
  if (f(bound) > peak.log_value - 1.0) return span;
  double inside = 0.0;
  double outside = span;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (inside + outside);
    if (f(peak.location + dir * mid) > peak.log_value - 1.0) {
      inside = mid;
    } else {
      outside = mid;
    }
    if (outside - inside <= 1e-12 * span) break;
  }
  return outside;
}

std::vector<double> breakpoints(Evaluator& f, const Peak& peak, double lo, double hi) {
  std::vector<double> pts{lo, hi};
  if (peak.location > lo && peak.location < hi) pts.push_back(peak.location);
  for (const double bound : {lo, hi}) {
    const double width = peak_half_width(f, peak, bound);
    const double span = std::abs(bound - peak.location);
    if (width <= 0.0 || width >= span) continue;
    const double dir = bound > peak.location ? 1.0 : -1.0;
    for (double d = width; d < span; d *= 2.0) pts.push_back(peak.location + dir * d);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double integrate_with_shift(Evaluator& f, const std::vector<double>& pts, double shift,
                            const QuadratureSpec& spec) {
  std::priority_queue<Panel> panels;
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    Panel p = gauss_kronrod(f, pts[i], pts[i + 1], shift);
    total += p.integral;
    total_error += p.error;
    panels.push(p);
  }
  std::size_t count = panels.size();
  auto converged = [&] {
    return total_error <= std::max(spec.rel_tolerance * std::abs(total), spec.abs_tolerance);
  };
  while (!converged()) {
    if (count >= spec.max_subdivisions) {
      throw AccuracyError("quadrature_log: tolerance not reached within " +
                              std::to_string(spec.max_subdivisions) + " panels",
                          shift + std::log(total));
    }
    Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      // Panel cannot be split further in floating point; accept it.
      total_error -= worst.error;
      worst.error = 0.0;
      panels.push(worst);
      continue;
    }
    const Panel left = gauss_kronrod(f, worst.lo, mid, shift);
    const Panel right = gauss_kronrod(f, mid, worst.hi, shift);
    total += left.integral + right.integral - worst.integral;
    total_error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
  }
  // Re-sum to drop the drift from incremental updates.
  double resum = 0.0;
  while (!panels.empty()) {
    resum += panels.top().integral;
    panels.pop();
  }
  return resum;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma: argument must be positive and finite");
  }
  return boost::math::lgamma(x);
}

double log_unit_ball_volume(std::size_t n) {
  if (n == 0) throw DomainError("log_unit_ball_volume: dimension must be >= 1");
  const double half_n = 0.5 * static_cast<double>(n);
  return half_n * std::log(std::numbers::pi) - log_gamma(half_n + 1.0);
}

double log_J(double a, double p) {
  if (!(a >= 0.0) || !(p > 0.0) || !std::isfinite(a) || !std::isfinite(p)) {
    throw DomainError("log_J: requires a >= 0 and p > 0");
  }
  const double shape = (a + 1.0) / p;
  if (!std::isfinite(shape) || shape > 1e300) throw DomainError("log_J: (a+1)/p out of range");
  return (shape - 1.0) * std::log(p) + log_gamma(shape);
}

double log_J_laplace(double a, double p) {
  if (!(a > 1.0) || !(p > 0.0)) {
    throw DomainError("log_J_laplace: requires a > 1 and p > 0");
  }
  const double log_a = std::log(a);
  return 0.5 * std::log(2.0 * std::numbers::pi / p) + (1.0 / p - 0.5) * log_a +
         (a / p) * (log_a - 1.0);
}

double quadrature_log(const LogIntegrand& f_log, double lo, double hi,
                      const QuadratureSpec& spec) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("quadrature_log: requires finite lo < hi");
  }
  if (!(spec.rel_tolerance > 0.0) || !(spec.abs_tolerance > 0.0) || spec.max_subdivisions == 0) {
    throw DomainError("quadrature_log: tolerances must be positive");
  }
  Evaluator f(f_log);
  const Peak peak = find_peak(f, lo, hi);
  if (peak.log_value == kNegInf) return kNegInf;
  const std::vector<double> pts = breakpoints(f, peak, lo, hi);

  double shift = peak.log_value;
  double integral = integrate_with_shift(f, pts, shift, spec);
  // A missed spike would make exp(f - shift) overflow; redo on the true scale.
  if (f.max_seen() > shift + 300.0 || !std::isfinite(integral)) {
    shift = f.max_seen();
    integral = integrate_with_shift(f, pts, shift, spec);
  }
  if (integral <= 0.0) return kNegInf;
  return shift + std::log(integral);
}

double integration_cutoff(const LogIntegrand& f_log, double lo, double initial_hi,
                          double log_drop) {
  if (!(initial_hi > lo)) throw DomainError("integration_cutoff: requires initial_hi > lo");
  Evaluator f(f_log);
  double hi = initial_hi;
  for (int it = 0; it < 200; ++it) {
    const Peak peak = find_peak(f, lo, hi);
    const double at_hi = f(hi);
    const double just_inside = f(hi - 1e-6 * (hi - lo));
    const bool decreasing = at_hi <= just_inside;
    if (peak.log_value == kNegInf || (decreasing && at_hi <= peak.log_value - log_drop)) {
      return hi;
    }
    hi = lo + 2.0 * (hi - lo);
  }
  throw DomainError("integration_cutoff: integrand does not decay");
}

double quadrature_log_to_infinity(const LogIntegrand& f_log, double lo, double initial_hi,
                                  const QuadratureSpec& spec, double log_drop) {
  return quadrature_log(f_log, lo, integration_cutoff(f_log, lo, initial_hi, log_drop), spec);
}

double gauss_kronrod_15(const std::function<double(double)>& f, double lo, double hi,
                        double* error) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  if (error != nullptr) *error = std::abs(half * (kronrod - gauss));
  return half * kronrod;
}

double laplace_second_order(double h_second_at_max, double t) {
  if (!(h_second_at_max < 0.0)) throw DomainError("laplace_second_order: h'' must be negative");
  if (!(t > 0.0)) throw DomainError("laplace_second_order: t must be positive");
  return std::sqrt(-2.0 * std::numbers::pi / (h_second_at_max * t));
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) throw DomainError("regularized_gamma_p: requires a > 0, x >= 0");
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(a, x);
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) throw DomainError("regularized_gamma_q: requires a > 0, x >= 0");
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(a, x);
}

namespace {

// Root of g on (lo, hi) where g changes sign from `sign_lo` at lo. Bisection
// narrows the bracket, then safeguarded Newton polishes.
template <class G, class DG>
double bracketed_newton(G g, DG dg, double lo, double hi, bool increasing) {
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = g(mid);
    if ((v < 0.0) == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {
    const double v = g(x);
    if (v == 0.0) return x;
    if ((v < 0.0) == increasing) {
      lo = x;
    } else {
      hi = x;
    }
    const double slope = dg(x);
    double next = (slope != 0.0 && std::isfinite(slope)) ? x - v / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (step <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

}  // namespace

// Both inverses solve in u = ln x: for small shapes or tail masses the root
// lies many decades below 1, where a linear bracket cannot reach it.
double inverse_regularized_gamma_q(double a, double q) {
  if (!(a > 0.0) || !(q > 0.0) || !(q < 1.0)) {
    throw DomainError("inverse_regularized_gamma_q: requires a > 0 and 0 < q < 1");
  }
  if (q > 0.5) return inverse_regularized_gamma_p(a, 1.0 - q);
  const double log_q = std::log(q);
  auto g = [&](double u) {
    const double v = boost::math::gamma_q(a, std::exp(u));
    return (v > 0.0 ? std::log(v) : -std::numeric_limits<double>::max()) - log_q;
  };
  const double log_gamma_a = log_gamma(a);
  auto dg = [&](double u) {
    const double x = std::exp(u);
    return -std::exp(a * u - x - log_gamma_a - std::log(boost::math::gamma_q(a, x)));
  };
  double hi = std::log(std::max(1.0, a));
  while (g(hi) > 0.0) hi += std::max(1.0, std::abs(hi));
  double lo = hi - 1.0;
  while (g(lo) < 0.0) lo -= std::max(1.0, std::abs(lo));
  return std::exp(bracketed_newton(g, dg, lo, hi, false));
}

double inverse_regularized_gamma_p(double a, double prob) {
  if (!(a > 0.0) || !(prob > 0.0) || !(prob < 1.0)) {
    throw DomainError("inverse_regularized_gamma_p: requires a > 0 and 0 < prob < 1");
  }
  if (prob > 0.5) return inverse_regularized_gamma_q(a, 1.0 - prob);
  const double log_prob = std::log(prob);
  auto g = [&](double u) {
    const double v = boost::math::gamma_p(a, std::exp(u));
    return (v > 0.0 ? std::log(v) : -std::numeric_limits<double>::max()) - log_prob;
  };
  const double log_gamma_a = log_gamma(a);
  auto dg = [&](double u) {
    const double x = std::exp(u);
    return std::exp(a * u - x - log_gamma_a - std::log(boost::math::gamma_p(a, x)));
  };
  double hi = std::log(std::max(1.0, a));
  while (g(hi) < 0.0) hi += std::max(1.0, std::abs(hi));
  // P(a, x) ~ x^a / Γ(a + 1) as x -> 0
  double lo = std::min(hi, (log_prob + log_gamma(a + 1.0)) / a) - 1.0;
  while (g(lo) > 0.0) lo -= std::max(1.0, std::abs(lo));
  return std::exp(bracketed_newton(g, dg, lo, hi, true));
}

}  // namespace expo_surf
