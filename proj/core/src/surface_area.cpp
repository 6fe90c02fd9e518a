#include "expo_surf/surface_area.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>
#include <tuple>

#include "expo_surf/errors.hpp"
#include "expo_surf/special_functions.hpp"
#include "parallel.hpp"

namespace expo_surf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// exp() of anything below this underflows to a subnormal or zero.
constexpr double kLogUnderflow = -745.0;

double safe_exp(double log_value) { return log_value < kLogUnderflow ? 0.0 : std::exp(log_value); }

void require_plane_dimension(const MeasureParams& params, const char* what) {
  if (params.n() < 2) throw DomainError(std::string(what) + ": requires n >= 2");
}

// Running mean/variance (Welford); chunk results are merged in order.
struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    count += 1.0;
    const double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }

  void merge(const Moments& other) {
    if (other.count == 0.0) return;
    const double total = count + other.count;
    const double delta = other.mean - mean;
    mean += delta * other.count / total;
    m2 += other.m2 + delta * delta * count * other.count / total;
    count = total;
  }

  double std_error() const { return count > 1.0 ? std::sqrt(m2 / (count - 1.0) / count) : 0.0; }
};

}  // namespace

std::string_view to_string(EstimateMethod method) {
  switch (method) {
    case EstimateMethod::exact:
      return "exact";
    case EstimateMethod::quadrature:
      return "quadrature";
    case EstimateMethod::shell_mc:
      return "shell_mc";
    case EstimateMethod::facet_mc:
      return "facet_mc";
  }
  return "unknown";
}

EstimateMethod parse_estimate_method(std::string_view name) {
  for (auto m : {EstimateMethod::exact, EstimateMethod::quadrature, EstimateMethod::shell_mc,
                 EstimateMethod::facet_mc}) {
    if (to_string(m) == name) return m;
  }
  throw DomainError("unknown estimate method '" + std::string(name) + "'");
}

double log_plane_radial_integrand(std::size_t n, double p, double rho, double s) {
  const double radial = std::pow(s * s + rho * rho, 0.5 * p) / p;
  if (n == 2) return -radial;
  if (s <= 0.0) return kNegInf;
  return static_cast<double>(n - 2) * std::log(s) - radial;
}

double plane_integration_cutoff(const MeasureParams& params, double rho) {
  require_plane_dimension(params, "plane_integration_cutoff");
  const std::size_t n = params.n();
  const double p = params.p();
  return integration_cutoff([&](double s) { return log_plane_radial_integrand(n, p, rho, s); },
                            0.0, truncation_radius(MeasureParams(n - 1, p)));
}

SurfaceEstimate sphere_surface_exact(const MeasureParams& params, double radius) {
  if (!(radius > 0.0)) throw DomainError("sphere_surface_exact: radius must be > 0");
  const double nd = static_cast<double>(params.n());
  const double p = params.p();
  const double log_value =
      (nd - 1.0) * std::log(radius) - std::pow(radius, p) / p - log_J(nd - 1.0, p);
  return {safe_exp(log_value), 0.0, EstimateMethod::exact, 0, std::nullopt};
}

double log_hyperplane_surface(const MeasureParams& params, double rho) {
  require_plane_dimension(params, "hyperplane_surface");
  if (!(rho >= 0.0)) throw DomainError("hyperplane_surface: rho must be >= 0");
  const std::size_t n = params.n();
  const double p = params.p();
  const double log_integral =
      quadrature_log([&](double s) { return log_plane_radial_integrand(n, p, rho, s); }, 0.0,
                     plane_integration_cutoff(params, rho));
  const double log_plane_sphere = std::log(static_cast<double>(n - 1)) + log_unit_ball_volume(n - 1);
  return params.log_c() + log_plane_sphere + log_integral;
}

SurfaceEstimate hyperplane_surface(const MeasureParams& params, double rho) {
  return {safe_exp(log_hyperplane_surface(params, rho)), 0.0, EstimateMethod::quadrature, 0,
          std::nullopt};
}

double default_shell_width(const MeasureParams& params) {
  return 0.05 * std::pow(static_cast<double>(params.n()), 1.0 / params.p() - 0.5);
}

double shell_width_for_radius(const MeasureParams& params, double r) {
  if (!(r > 0.0)) throw DomainError("shell_width_for_radius: r must be > 0");
  const double slope =
      static_cast<double>(params.n() - 1) / r - std::pow(r, params.p() - 1.0);
  const double width = default_shell_width(params);
  if (slope == 0.0) return width;
  return std::min(width, 0.05 / std::abs(slope));
}

SurfaceEstimate shell_estimate(const MeasureParams& params, const ConvexBody& body,
                               std::size_t samples, RandomStream& rng,
                               const ShellOptions& options) {
  if (body.dim() != params.n()) throw DomainError("shell_estimate: dimension mismatch");
  if (std::holds_alternative<HalfspaceIntersection>(body.shape())) {
    throw UnsupportedVariantError(
        "shell_estimate: halfspace intersections have only a lower-bound distance");
  }
  if (samples < 1000) throw DomainError("shell_estimate: needs at least 1000 samples");
  const double eps = options.epsilon;
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("shell_estimate: epsilon must be > 0");
  const std::size_t workers = std::max<std::size_t>(options.workers, 1);
  const std::size_t n = params.n();
  const std::uint64_t chunk_seed = rng.next_u64();

  std::vector<Moments> chunk_moments(workers);
  detail::run_chunks(workers, [&](std::size_t c) {
    RandomStream stream(chunk_seed, c);
    const std::size_t count = detail::chunk_size(samples, workers, c);
    std::vector<double> x(n);
    Moments& m = chunk_moments[c];
    for (std::size_t i = 0; i < count; ++i) {
      double full = 0.0;  // shell mass indicator or conditional mass at width ε
      double half = 0.0;  // same at width ε/2
      if (options.sampling == ShellSampling::point_count) {
        sample_point(params, stream, x);
        const double d = distance(body, x).value;
        full = (d > 0.0 && d <= eps) ? 1.0 : 0.0;
        half = (d > 0.0 && d <= 0.5 * eps) ? 1.0 : 0.0;
      } else {
        stream.unit_vector(x);
        const double exit = ray_exit_radius(body, x);
        if (std::isfinite(exit)) {
          full = radial_mass(params, exit, ray_distance_radius(body, x, eps));
          if (options.richardson) {
            half = radial_mass(params, exit, ray_distance_radius(body, x, 0.5 * eps));
          }
        }
      }
      m.add(options.richardson ? (4.0 * half - full) / eps : full / eps);
    }
  });
  Moments total;
  for (const auto& m : chunk_moments) total.merge(m);
  return {std::max(total.mean, 0.0), total.std_error(), EstimateMethod::shell_mc, samples, eps};
}

InPlaneRadiusSampler::InPlaneRadiusSampler(const MeasureParams& params, double offset)
    : n_(params.n()), p_(params.p()), offset_(offset), log_peak_(0.0), log_norm_(0.0) {
  require_plane_dimension(params, "InPlaneRadiusSampler");
  if (!(offset >= 0.0)) throw DomainError("InPlaneRadiusSampler: offset must be >= 0");

  auto g = [&](double s) { return log_plane_radial_integrand(n_, p_, offset_, s); };
  // In v = ln s the log-density has derivative (n-2) - e^{2v}(e^{2v}+ρ²)^{p/2-1},
  // which is strictly decreasing, so the peak is the unique root.
  double peak = 0.0;
  if (n_ > 2) {
    auto slope = [&](double v) {
      const double w = std::exp(2.0 * v);
      return static_cast<double>(n_ - 2) - w * std::pow(w + offset_ * offset_, 0.5 * p_ - 1.0);
    };
    double vlo = -1.0, vhi = 1.0;
    while (slope(vlo) < 0.0) vlo -= 2.0;
    while (slope(vhi) > 0.0) vhi += 2.0;
    for (int it = 0; it < 200 && vhi - vlo > 1e-14; ++it) {
      const double mid = 0.5 * (vlo + vhi);
      (slope(mid) > 0.0 ? vlo : vhi) = mid;
    }
    peak = std::exp(0.5 * (vlo + vhi));
  }
  log_peak_ = g(peak);

  constexpr double kDrop = 60.0;
  auto cut = [&](double inside, double outward_factor) {
    double outside = inside;
    do {
      outside *= outward_factor;
    } while (g(outside) > log_peak_ - kDrop);
    for (int it = 0; it < 100; ++it) {
      const double mid = std::sqrt(inside * outside);
      (g(mid) > log_peak_ - kDrop ? inside : outside) = mid;
    }
    return outside;
  };
  const double lo = (n_ == 2) ? 0.0 : cut(peak, 0.5);
  const double hi = cut(std::max(peak, 1e-3), 2.0);

  nodes_.resize(kNodes);
  pdf_.resize(kNodes);
  cdf_.resize(kNodes);
  for (std::size_t k = 0; k < kNodes; ++k) {
    const double theta = std::numbers::pi * static_cast<double>(k) / (kNodes - 1);
    nodes_[k] = lo + 0.5 * (hi - lo) * (1.0 - std::cos(theta));
  }
  nodes_.front() = lo;
  nodes_.back() = hi;
  auto density = [&](double s) { return std::exp(g(s) - log_peak_); };
  cdf_[0] = 0.0;
  for (std::size_t k = 0; k < kNodes; ++k) {
    pdf_[k] = density(nodes_[k]);
    if (k > 0) cdf_[k] = cdf_[k - 1] + gauss_kronrod_15(density, nodes_[k - 1], nodes_[k]);
  }
  const double total = cdf_.back();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw AccuracyError("InPlaneRadiusSampler: inverse-CDF table construction failed", total);
  }
  for (std::size_t k = 0; k < kNodes; ++k) {
    cdf_[k] /= total;
    pdf_[k] /= total;
  }
  log_norm_ = log_peak_ + std::log(total);
}

double InPlaneRadiusSampler::log_density(double s) const {
  return log_plane_radial_integrand(n_, p_, offset_, s) - log_norm_;
}

namespace {

// Cubic Hermite CDF on a cell of width h, t ∈ [0, 1].
double hermite(double c0, double c1, double m0, double m1, double h, double t) {
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * c0 + (t3 - 2 * t2 + t) * h * m0 + (-2 * t3 + 3 * t2) * c1 +
         (t3 - t2) * h * m1;
}

double hermite_slope(double c0, double c1, double m0, double m1, double h, double t) {
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * c0 + (3 * t2 - 4 * t + 1) * h * m0 + (-6 * t2 + 6 * t) * c1 +
          (3 * t2 - 2 * t) * h * m1) /
         h;
}

}  // namespace

double InPlaneRadiusSampler::quantile(double u) const {
  if (u <= 0.0) return nodes_.front();
  if (u >= 1.0) return nodes_.back();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const std::size_t k = static_cast<std::size_t>(std::distance(cdf_.begin(), it)) - 1;
  if (k + 1 >= kNodes) return nodes_.back();
  const double h = nodes_[k + 1] - nodes_[k];
  const double c0 = cdf_[k], c1 = cdf_[k + 1], m0 = pdf_[k], m1 = pdf_[k + 1];
  double lo = 0.0, hi = 1.0;
  double t = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.5;
  for (int iter = 0; iter < 20; ++iter) {
    const double f = hermite(c0, c1, m0, m1, h, t) - u;
    (f < 0.0 ? lo : hi) = t;
    const double slope = hermite_slope(c0, c1, m0, m1, h, t) * h;
    double next = slope > 0.0 ? t - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) < 1e-14) {
      t = next;
      break;
    }
    t = next;
  }
  return nodes_[k] + t * h;
}

double InPlaneRadiusSampler::cdf(double s) const {
  if (s <= nodes_.front()) return 0.0;
  if (s >= nodes_.back()) return 1.0;
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), s);
  const std::size_t k = static_cast<std::size_t>(std::distance(nodes_.begin(), it)) - 1;
  const double h = nodes_[k + 1] - nodes_[k];
  return hermite(cdf_[k], cdf_[k + 1], pdf_[k], pdf_[k + 1], h, (s - nodes_[k]) / h);
}

std::shared_ptr<const InPlaneRadiusSampler> InPlaneRadiusSampler::cached(
    const MeasureParams& params, double offset) {
  using Key = std::tuple<std::size_t, double, double>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const InPlaneRadiusSampler>> cache;
  const Key key{params.n(), params.p(), offset};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto sampler = std::make_shared<const InPlaneRadiusSampler>(params, offset);
  std::lock_guard lock(mutex);
  return cache.try_emplace(key, std::move(sampler)).first->second;
}

SurfaceEstimate facet_estimate(const MeasureParams& params, const ConvexBody& body,
                               std::size_t samples_per_facet, RandomStream& rng,
                               const FacetOptions& options) {
  if (body.dim() != params.n()) throw DomainError("facet_estimate: dimension mismatch");
  require_plane_dimension(params, "facet_estimate");
  if (samples_per_facet == 0) throw DomainError("facet_estimate: needs at least one sample");
  const std::vector<Facet> all = facets(body);
  if (all.empty()) throw DomainError("facet_estimate: body has no facets");
  const std::size_t used = options.single_facet ? 1 : all.size();
  const double multiplier = options.single_facet ? static_cast<double>(all.size()) : 1.0;
  const std::size_t workers = std::max<std::size_t>(options.workers, 1);
  const std::size_t n = params.n();

  std::map<double, double> plane_area;  // offset -> hyperplane γ_p-area
  std::map<double, std::shared_ptr<const InPlaneRadiusSampler>> samplers;
  for (std::size_t f = 0; f < used; ++f) {
    const double offset = all[f].offset;
    if (!plane_area.contains(offset)) {
      plane_area[offset] = hyperplane_surface(params, offset).value;
      samplers[offset] = InPlaneRadiusSampler::cached(params, offset);
    }
  }

  const std::uint64_t chunk_seed = rng.next_u64();
  // hits[chunk][facet]
  std::vector<std::vector<std::uint64_t>> hits(workers, std::vector<std::uint64_t>(used, 0));
  detail::run_chunks(workers, [&](std::size_t c) {
    RandomStream stream(chunk_seed, c);
    const std::size_t count = detail::chunk_size(samples_per_facet, workers, c);
    std::vector<double> dir(n), y(n);
    for (std::size_t f = 0; f < used; ++f) {
      const Facet& facet = all[f];
      const InPlaneRadiusSampler& radius = *samplers.at(facet.offset);
      for (std::size_t i = 0; i < count; ++i) {
        // Uniform direction in the hyperplane: Gaussian vector with the
        // normal component removed.
        double norm2 = 0.0;
        do {
          double along = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            dir[j] = stream.normal();
            along += dir[j] * facet.normal[j];
          }
          norm2 = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            dir[j] -= along * facet.normal[j];
            norm2 += dir[j] * dir[j];
          }
        } while (norm2 == 0.0);
        const double s = radius(stream) / std::sqrt(norm2);
        for (std::size_t j = 0; j < n; ++j) y[j] = facet.offset * facet.normal[j] + s * dir[j];
        if (facet.contains(y)) ++hits[c][f];
      }
    }
  });

  double value = 0.0;
  double variance = 0.0;
  const double m = static_cast<double>(samples_per_facet);
  for (std::size_t f = 0; f < used; ++f) {
    std::uint64_t h = 0;
    for (std::size_t c = 0; c < workers; ++c) h += hits[c][f];
    const double fraction = static_cast<double>(h) / m;
    const double area = plane_area.at(all[f].offset) * multiplier;
    value += area * fraction;
    variance += area * area * fraction * (1.0 - fraction) / m;
  }
  return {value, std::sqrt(variance), EstimateMethod::facet_mc,
          static_cast<std::uint64_t>(used * samples_per_facet), std::nullopt};
}

double rough_upper_bound(const MeasureParams& params) {
  require_plane_dimension(params, "rough_upper_bound");
  const double nd = static_cast<double>(params.n());
  const double p = params.p();
  return std::exp(log_J(nd + p - 2.0, p) - log_J(nd - 1.0, p));
}

}  // namespace expo_surf
