#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "expo_surf/bodies.hpp"
#include "expo_surf/bounds.hpp"
#include "expo_surf/measure.hpp"
#include "expo_surf/random_polytope.hpp"
#include "expo_surf/serialization.hpp"
#include "expo_surf/special_functions.hpp"
#include "expo_surf/surface_area.hpp"

namespace expo_surf::cli {

namespace {

constexpr double kPi = std::numbers::pi;

class Report {
 public:
  void close(const std::string& name, double value, double reference, double tolerance) {
    const bool ok = std::abs(value - reference) <= tolerance;
    add(name, ok,
        {{"value", json_number(value)},
         {"reference", json_number(reference)},
         {"tolerance", json_number(tolerance)}});
  }

  void holds(const std::string& name, bool ok, nlohmann::json detail = nlohmann::json::object()) {
    add(name, ok, std::move(detail));
  }

  void run(const std::string& name, const std::function<void()>& body) {
    const std::size_t before = checks_.size();
    try {
      body();
    } catch (const std::exception& e) {
      checks_.erase(checks_.begin() + static_cast<std::ptrdiff_t>(before), checks_.end());
      add(name, false, {{"error", e.what()}});
    }
  }

  nlohmann::json finish() const {
    const auto failed = static_cast<std::size_t>(std::count_if(
        checks_.begin(), checks_.end(), [](const nlohmann::json& c) { return !c.at("passed").get<bool>(); }));
    return {{"checks", checks_}, {"total", checks_.size()}, {"passed", checks_.size() - failed},
            {"failed", failed}};
  }

 private:
  void add(const std::string& name, bool ok, nlohmann::json detail) {
    detail["name"] = name;
    detail["passed"] = ok;
    checks_.push_back(std::move(detail));
  }

  std::vector<nlohmann::json> checks_;
};

double gaussian_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

nlohmann::json run_verify(const VerifyOptions& options) {
  Report r;
  RandomStream root(options.seed, 0);
  std::uint64_t next_stream = 0;
  auto stream = [&] { return RandomStream(options.seed, ++next_stream); };

  r.run("log_gamma_factorial", [&] {
    r.close("log_gamma_factorial", log_gamma(11.0), std::log(3628800.0), 1e-12);
  });
  r.run("log_gamma_recurrence", [&] {
    double worst = 0.0;
    for (double x = 0.5; x <= 100.0; x += 0.75) {
      worst = std::max(worst, std::abs(log_gamma(x + 1.0) - log_gamma(x) - std::log(x)));
    }
    r.close("log_gamma_recurrence", worst, 0.0, 1e-12);
  });
  r.run("unit_ball_volume_n3", [&] {
    r.close("unit_ball_volume_n3", log_unit_ball_volume(3), std::log(4.0 * kPi / 3.0), 1e-13);
  });
  r.run("log_J_matches_quadrature", [&] {
    double worst = 0.0;
    for (double p : {0.5, 1.0, 2.0, 4.0}) {
      for (double a : {0.0, 7.0, 50.0, 200.0}) {
        const MeasureParams m(static_cast<std::size_t>(a) + 1, p);
        const double hi = truncation_radius(m);
        const double q = quadrature_log(
            [&](double t) { return (a == 0.0 ? 0.0 : a * std::log(t)) - std::pow(t, p) / p; }, 0.0, hi);
        worst = std::max(worst, std::abs(q - log_J(a, p)));
      }
    }
    r.close("log_J_matches_quadrature", worst, 0.0, 1e-8);
  });
  r.run("laplace_ratio_converges", [&] {
    bool ok = true;
    for (double p : {0.5, 1.0, 2.0, 4.0}) {
      double previous = INFINITY;
      for (double a : {1e2, 1e3, 1e4, 1e5}) {
        const double dev = std::abs(std::expm1(log_J_laplace(a, p) - log_J(a, p)));
        ok = ok && dev < previous;
        previous = dev;
      }
    }
    r.holds("laplace_ratio_converges", ok);
  });
  r.run("laplace_second_order_gaussian", [&] {
    r.close("laplace_second_order_gaussian", laplace_second_order(-1.0, 100.0),
            std::sqrt(2.0 * kPi / 100.0), 1e-14);
  });
  r.run("measure_normalization", [&] {
    double worst = 0.0;
    for (std::size_t n : {2, 10, 30}) {
      for (double p : {0.5, 2.0, 4.0}) {
        const MeasureParams m(n, p);
        const double base = std::log(static_cast<double>(n)) + log_unit_ball_volume(n) + m.log_c();
        const double q = quadrature_log(
            [&](double t) { return base + static_cast<double>(n - 1) * std::log(t) - std::pow(t, p) / p; },
            0.0, truncation_radius(m));
        worst = std::max(worst, std::abs(q));
      }
    }
    r.close("measure_normalization", worst, 0.0, 1e-8);
  });
  r.run("radial_cdf_closed_form", [&] {
    const MeasureParams m(2, 2.0);
    r.close("radial_cdf_closed_form", radial_cdf(m, 1.3), -std::expm1(-0.5 * 1.3 * 1.3), 1e-13);
  });
  r.run("sampler_moment", [&] {
    const MeasureParams m(10, 2.0);
    RandomStream rng = stream();
    const std::size_t count = 100000;
    double sum = 0.0, sum_sq = 0.0;
    std::vector<double> x(10);
    for (std::size_t i = 0; i < count; ++i) {
      sample_point(m, rng, x);
      double norm2 = 0.0;
      for (double v : x) norm2 += v * v;
      sum += norm2;
      sum_sq += norm2 * norm2;
    }
    const double mean = sum / count;
    const double se = std::sqrt((sum_sq / count - mean * mean) / count);
    r.close("sampler_moment", mean, 10.0, 3.0 * se);
  });
  r.run("annulus_delta", [&] {
    r.close("annulus_delta", annulus_delta(1.0), 1.0 - std::exp(-1.0), 1e-15);
  });
  r.run("radial_mode", [&] {
    r.close("radial_mode", radial_mode(MeasureParams(17, 3.0)), std::cbrt(16.0), 1e-14);
  });
  r.run("distance_contains_consistency", [&] {
    RandomStream rng = stream();
    const std::vector<ConvexBody> bodies = {ConvexBody::ball(4, 1.5), ConvexBody::cube(4, 0.7),
                                            ConvexBody::slab(0.4, {0.0, 0.6, 0.0, 0.8})};
    bool ok = true;
    std::vector<double> x(4);
    for (int i = 0; i < 2000; ++i) {
      for (double& v : x) v = 2.0 * rng.normal();
      for (const auto& b : bodies) ok = ok && ((distance(b, x).value == 0.0) == contains(b, x));
    }
    r.holds("distance_contains_consistency", ok);
  });
  r.run("facet_counts", [&] {
    std::vector<double> dirs(11 * 3);
    RandomStream rng = stream();
    for (int i = 0; i < 11; ++i) rng.unit_vector(std::span<double>(dirs).subspan(3 * i, 3));
    const bool ok = facets(ConvexBody::cube(3, 1.0)).size() == 6 &&
                    facets(ConvexBody::slab(1.0, {1.0, 0.0, 0.0})).size() == 2 &&
                    facets(ConvexBody::halfspaces(3, dirs, 1.0)).size() == 11;
    r.holds("facet_counts", ok);
  });
  r.run("sphere_surface_n2", [&] {
    r.close("sphere_surface_n2", sphere_surface_exact(MeasureParams(2, 2.0), 1.0).value,
            std::exp(-0.5), 1e-14);
  });
  r.run("hyperplane_gaussian", [&] {
    const MeasureParams m(6, 2.0);
    const double worst = std::max(
        std::abs(hyperplane_surface(m, 0.0).value - 1.0 / std::sqrt(2.0 * kPi)),
        std::abs(hyperplane_surface(m, 1.0).value - std::exp(-0.5) / std::sqrt(2.0 * kPi)));
    r.close("hyperplane_gaussian", worst, 0.0, 1e-9);
  });
  r.run("hyperplane_laplace_plane", [&] {
    r.close("hyperplane_laplace_plane", hyperplane_surface(MeasureParams(2, 1.0), 0.0).value, 1.0 / kPi,
            1e-9);
  });
  r.run("shell_ball", [&] {
    const MeasureParams m(5, 2.0);
    RandomStream rng = stream();
    ShellOptions o;
    o.richardson = true;
    o.epsilon = default_shell_width(m);
    o.workers = options.workers;
    const double exact = sphere_surface_exact(m, 2.0).value;
    const SurfaceEstimate e = shell_estimate(m, ConvexBody::ball(5, 2.0), 200000, rng, o);
    r.close("shell_ball", e.value, exact, std::max(3.0 * e.std_error, 0.02 * exact));
  });
  r.run("facet_cube_separable", [&] {
    const MeasureParams m(3, 2.0);
    RandomStream rng = stream();
    FacetOptions o;
    o.workers = options.workers;
    const double s = 1.0;
    const double phi = std::exp(-0.5 * s * s) / std::sqrt(2.0 * kPi);
    const double exact = 6.0 * phi * std::pow(2.0 * gaussian_cdf(s) - 1.0, 2.0);
    const SurfaceEstimate e = facet_estimate(m, ConvexBody::cube(3, s), 50000, rng, o);
    r.close("facet_cube_separable", e.value, exact, 3.0 * e.std_error);
  });
  r.run("slab_shell_vs_facet", [&] {
    const MeasureParams m(5, 2.0);
    const ConvexBody slab = ConvexBody::slab(1.0, {1.0, 0.0, 0.0, 0.0, 0.0});
    RandomStream rng = stream();
    ShellOptions o;
    o.richardson = true;
    o.epsilon = default_shell_width(m);
    o.workers = options.workers;
    const SurfaceEstimate shell = shell_estimate(m, slab, 400000, rng, o);
    const SurfaceEstimate facet = facet_estimate(m, slab, 1000, rng);
    r.close("slab_shell_vs_facet", shell.value, facet.value,
            3.0 * std::hypot(shell.std_error, facet.std_error));
  });
  r.run("rough_bound_n2", [&] {
    r.close("rough_bound_n2", rough_upper_bound(MeasureParams(2, 2.0)), std::sqrt(kPi / 2.0), 1e-13);
  });
  r.run("constants_p2", [&] {
    const Constants k = constants(2.0);
    const double stated = k.C_as_stated * options.tamper;
    const double expected = 2.0 * std::pow(kPi, 0.25) * std::sqrt(std::exp(-0.5) / (2.0 * (2.0 - std::exp(-0.5))));
    r.close("constants_p2", stated, expected, 1e-12);
  });
  r.run("constant_branches_agree", [&] {
    const double small = std::sqrt(2.0 / 2.0) * std::exp(0.5 - 2.0 / 2.0);
    const double e = std::exp(-0.5);
    const double large = std::sqrt(2.0 / 2.0) * e * std::pow(2.0 - e, 1.0 - 1.0);
    r.close("constant_branches_agree", constants(2.0).C, small, 1e-12);
    r.close("constant_branches_agree_large", constants(2.0).C, large, 1e-12);
  });
  r.run("constant_reciprocal", [&] {
    const Constants k = constants(3.0);
    r.close("constant_reciprocal", k.C_as_stated * options.tamper * k.C_as_derived, 1.0, 1e-15);
  });
  r.run("alpha_star_minimizes", [&] {
    double worst = 0.0;
    for (double p : {1.0, 2.0, 4.0}) {
      const MeasureParams m(10000, p);
      double best_alpha = 0.0, best = INFINITY;
      for (int i = 1; i <= 20000; ++i) {
        const double alpha = i * 5e-5;
        const double v = xi_lower_bounds(m, 1.0, alpha).combined_leading;
        if (v < best) {
          best = v;
          best_alpha = alpha;
        }
      }
      worst = std::max(worst, std::abs(best_alpha - alpha_star(m)));
    }
    r.close("alpha_star_minimizes", worst, 0.0, 1e-3);
  });
  r.run("theorem_bounds_p2_n16", [&] {
    const BoundsReport b = theorem_bounds(MeasureParams(16, 2.0));
    r.close("theorem_bounds_p2_n16", b.upper_bound_as_stated * options.tamper,
            2.0 * constants(2.0).C_as_stated, 1e-12);
    r.holds("lower_below_upper", b.lower_bound < b.upper_bound_as_derived);
  });
  r.run("polytope_bound_sqrt_log", [&] {
    const MeasureParams m(9, 2.0);
    r.close("polytope_bound_sqrt_log", polytope_bound(m, 2.0) / polytope_bound(m, 16.0), 0.5, 1e-14);
  });
  r.run("hyperplane_bound_exact_at_p2", [&] {
    double worst = 0.0;
    for (std::size_t n : {3, 8, 20}) {
      const MeasureParams m(n, 2.0);
      for (double rho : {0.0, 0.5, 1.0, 2.0}) {
        worst = std::max(worst, std::abs(hyperplane_bound(m, rho) - hyperplane_surface(m, rho).value));
      }
    }
    r.close("hyperplane_bound_exact_at_p2", worst, 0.0, 1e-9);
  });
  r.run("cap_probability_n3", [&] {
    r.close("cap_probability_n3", cap_probability(3, 1.0, 1.0), (std::sqrt(2.0) - 1.0) / (2.0 * std::sqrt(2.0)),
            1e-10);
  });
  r.run("cap_probability_hemisphere", [&] {
    r.close("cap_probability_hemisphere", cap_probability(9, 1.7, 0.0), 0.5, 1e-10);
  });
  r.run("cap_probability_monte_carlo", [&] {
    RandomStream rng = stream();
    const std::size_t n = 8, count = 200000;
    std::vector<double> u(n);
    const double z = std::sqrt(5.0);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < count; ++i) {
      rng.unit_vector(u);
      if (z * u[0] > 1.0) ++hits;
    }
    const double frac = static_cast<double>(hits) / count;
    r.close("cap_probability_monte_carlo", cap_probability(n, 2.0, 1.0), frac,
            3.0 * std::sqrt(frac * (1.0 - frac) / count));
  });
  r.run("paper_parameters_n16", [&] {
    const PaperParameters pp = paper_parameters(MeasureParams(16, 2.0));
    r.holds("paper_parameters_n16", pp.N == 11 && std::abs(pp.rho - 2.0) < 1e-14 && std::abs(pp.W - 1.0) < 1e-14,
            {{"N", pp.N}, {"rho", json_number(pp.rho)}, {"W", json_number(pp.W)}});
  });
  r.run("expectation_single_facet", [&] {
    const MeasureParams m(6, 1.0);
    r.close("expectation_single_facet", expected_random_polytope_surface(m, 1, 1.5),
            hyperplane_surface(m, 1.5).value, 1e-8);
  });
  r.run("randpoly_vs_expectation", [&] {
    const MeasureParams m(8, 2.0);
    ExperimentOptions o;
    o.trials = 100;
    o.samples_per_facet = 2000;
    o.workers = options.workers;
    RandomStream rng = stream();
    const ExperimentResult res = run_experiment(m, o, rng);
    const double expected = expected_random_polytope_surface(m, res.N, res.rho);
    r.close("randpoly_vs_expectation", res.mean, expected, 3.0 * res.std_error);
    const double rough = rough_upper_bound(m);
    bool dominated = true;
    for (const auto& rec : res.records) dominated = dominated && rec.estimate.value <= rough * 1.01;
    r.holds("randpoly_below_rough_bound", dominated);
  });
  r.run("experiment_deterministic", [&] {
    const MeasureParams m(8, 1.0);
    ExperimentOptions o;
    o.trials = 8;
    o.samples_per_facet = 500;
    o.workers = options.workers;
    RandomStream a(root.root_seed(), 99), b(root.root_seed(), 99);
    const ExperimentResult x = run_experiment(m, o, a);
    const ExperimentResult y = run_experiment(m, o, b);
    bool same = x.mean == y.mean;
    for (std::size_t i = 0; i < x.records.size(); ++i) {
      same = same && x.records[i].estimate.value == y.records[i].estimate.value;
    }
    r.holds("experiment_deterministic", same);
  });
  return r.finish();
}

}  // namespace expo_surf::cli
