#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "expo_surf/bodies.hpp"
#include "expo_surf/bounds.hpp"
#include "expo_surf/errors.hpp"
#include "expo_surf/measure.hpp"
#include "expo_surf/random_polytope.hpp"
#include "expo_surf/serialization.hpp"
#include "expo_surf/surface_area.hpp"
#include "verify.hpp"

namespace expo_surf::cli {

namespace {

const std::vector<std::string> kCommands = {"surface", "bounds", "scaling", "randpoly", "verify"};

// Files are opened in binary mode so line endings stay LF everywhere.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw ConfigError("cannot open output file '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::string provenance_line(const RunConfig& c) {
  return "# expo_surf " + c.command + " seed=" + std::to_string(c.seed) +
         " workers=" + std::to_string(c.workers) + "\n";
}

void emit_summary(const RunConfig& c, nlohmann::json summary, std::ostream& out) {
  summary["seed"] = c.seed;
  summary["workers"] = c.workers;
  if (!c.json_output.empty()) {
    Sink sink(c.json_output, out);
    *sink << summary.dump(2) << '\n';
  } else if (!c.output.empty()) {
    out << summary.dump(2) << '\n';
  }
}

std::size_t require_n(const RunConfig& c) {
  if (!c.n) throw ConfigError(c.command + ": --n is required");
  return *c.n;
}

MeasureParams make_params(std::size_t n, double p) {
  try {
    return MeasureParams(n, p);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

nlohmann::json read_body_document(const std::string& spec) {
  if (!spec.empty() && spec.front() == '{') return nlohmann::json::parse(spec);
  std::ifstream in(spec);
  if (!in) throw ConfigError("body '" + spec + "' is neither a preset, JSON, nor a readable file");
  return nlohmann::json::parse(in);
}

bool is_preset(const std::string& spec) {
  const std::string name = spec.substr(0, spec.find(':'));
  return name == "ball" || name == "cube" || name == "slab" || name == "halfspace" ||
         name == "randpoly";
}

// Presets: ball[:R], cube[:s], slab[:rho], halfspace[:rho], randpoly.
ConvexBody make_body(const RunConfig& c, const MeasureParams& params) {
  const std::size_t n = params.n();
  const auto colon = c.body.find(':');
  const std::string name = c.body.substr(0, colon);
  std::optional<double> value;
  if (colon != std::string::npos) value = parse_double(c.body.substr(colon + 1), "--body");
  std::vector<double> e1(n, 0.0);
  e1[0] = 1.0;
  if (name == "ball") return ConvexBody::ball(n, value.value_or(n >= 2 ? radial_mode(params) : 1.0));
  if (name == "cube") return ConvexBody::cube(n, value.value_or(1.0));
  if (name == "slab") return ConvexBody::slab(value.value_or(1.0), e1);
  if (name == "halfspace") return ConvexBody::halfspaces(n, e1, value.value_or(1.0));
  if (value) throw ConfigError("--body randpoly takes no value; use --N and --rho");
  const PaperParameters pp = paper_parameters(params);
  RandomStream body_rng(c.seed, 1);
  return construct(params, c.facets.value_or(pp.N), c.rho.value_or(pp.rho), body_rng);
}

EstimateMethod default_method(const ConvexBody& body) {
  if (std::holds_alternative<Ball>(body.shape())) return EstimateMethod::exact;
  if (std::holds_alternative<Slab>(body.shape())) return EstimateMethod::quadrature;
  return EstimateMethod::facet_mc;
}

SurfaceEstimate estimate_surface(const RunConfig& c, const MeasureParams& params,
                                 const ConvexBody& body, RandomStream& rng) {
  const EstimateMethod method = c.method ? parse_estimate_method(*c.method) : default_method(body);
  switch (method) {
    case EstimateMethod::exact:
      if (const auto* ball = std::get_if<Ball>(&body.shape())) {
        return sphere_surface_exact(params, ball->radius);
      }
      throw UnsupportedVariantError("exact: only balls have a closed form");
    case EstimateMethod::quadrature: {
      if (const auto* slab = std::get_if<Slab>(&body.shape())) {
        SurfaceEstimate e = hyperplane_surface(params, slab->offset);
        e.value *= 2.0;
        return e;
      }
      const auto* hs = std::get_if<HalfspaceIntersection>(&body.shape());
      if (hs != nullptr && hs->count == 1) return hyperplane_surface(params, hs->offset);
      throw UnsupportedVariantError("quadrature: only slabs and single halfspaces");
    }
    case EstimateMethod::shell_mc: {
      ShellOptions o;
      o.epsilon = c.epsilon.value_or(default_shell_width(params));
      o.richardson = c.richardson;
      if (c.sampling == "points") {
        o.sampling = ShellSampling::point_count;
      } else if (c.sampling == "radial") {
        o.sampling = ShellSampling::radial_conditional;
      } else {
        throw ConfigError("--sampling must be 'points' or 'radial'");
      }
      o.workers = c.workers;
      return shell_estimate(params, body, c.samples.value_or(1000000), rng, o);
    }
    case EstimateMethod::facet_mc: {
      FacetOptions o;
      o.single_facet = c.single_facet;
      o.workers = c.workers;
      return facet_estimate(params, body, c.samples.value_or(100000), rng, o);
    }
  }
  throw ConfigError("unknown method");
}

int run_surface(const RunConfig& c, std::ostream& out) {
  std::optional<ConvexBody> body;
  std::size_t n = 0;
  if (is_preset(c.body)) {
    n = require_n(c);
  } else {
    body = body_from_json(read_body_document(c.body));
    n = c.n.value_or(body->dim());
    if (n != body->dim()) throw ConfigError("surface: --n differs from the body's dimension");
  }
  const MeasureParams params = make_params(n, c.p);
  if (!body) body = make_body(c, params);
  RandomStream rng(c.seed, 0);
  const SurfaceEstimate e = estimate_surface(c, params, *body, rng);

  Sink sink(c.output, out);
  *sink << provenance_line(c) << "n,p,body,method,value,std_error,samples,epsilon\n"
        << n << ',' << format_number(c.p) << ',' << body->type_name() << ','
        << to_string(e.method) << ',' << format_number(e.value) << ','
        << format_number(e.std_error) << ',' << e.samples << ','
        << (e.epsilon ? format_number(*e.epsilon) : std::string()) << '\n';

  nlohmann::json summary = estimate_to_json(e);
  summary["n"] = n;
  summary["p"] = json_number(c.p);
  summary["body"] = body_to_json(*body);
  summary["rough_bound"] = n >= 2 ? json_number(rough_upper_bound(params)) : nlohmann::json();
  emit_summary(c, std::move(summary), out);
  return kSuccess;
}

int run_bounds(const RunConfig& c, std::ostream& out, std::optional<double> facets) {
  const MeasureParams params = make_params(require_n(c), c.p);
  const ConstantVariant variant = parse_constant_variant(c.variant);
  const BoundsReport r = theorem_bounds(params);
  const nlohmann::json doc = bounds_to_json(r);

  std::vector<std::pair<std::string, std::string>> rows = {
      {"n", std::to_string(r.n)},
      {"p", format_number(r.p)},
      {"variant", std::string(to_string(variant))},
      {"delta_p", format_number(r.constants.delta_p)},
      {"C1", format_number(r.constants.C1)},
      {"C", format_number(r.constants.C)},
      {"C_upper_as_stated", format_number(r.constants.C_as_stated)},
      {"C_upper_as_derived", format_number(r.constants.C_as_derived)},
      {"alpha_star", format_number(r.alpha_star)},
      {"lower_bound", format_number(r.lower_bound)},
      {"lower_bound_construction", format_number(r.lower_bound_construction)},
      {"upper_bound", format_number(r.upper_bound(variant))},
      {"upper_bound_as_stated", format_number(r.upper_bound_as_stated)},
      {"upper_bound_as_derived", format_number(r.upper_bound_as_derived)},
      {"rough_bound", format_number(r.rough_bound)},
  };
  if (facets) rows.emplace_back("polytope_bound", format_number(r.polytope_bound(*facets, variant)));

  Sink sink(c.output, out);
  if (c.format == "table") {
    for (const auto& [key, value] : rows) {
      *sink << key << std::string(26 - std::min<std::size_t>(key.size(), 25), ' ') << value << '\n';
    }
  } else if (c.format == "csv") {
    *sink << provenance_line(c);
    for (std::size_t i = 0; i < rows.size(); ++i) *sink << (i ? "," : "") << rows[i].first;
    *sink << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) *sink << (i ? "," : "") << rows[i].second;
    *sink << '\n';
  } else if (c.format == "json") {
    nlohmann::json full = doc;
    full["variant"] = std::string(to_string(variant));
    full["upper_bound"] = json_number(r.upper_bound(variant));
    if (facets) full["polytope_bound"] = json_number(r.polytope_bound(*facets, variant));
    *sink << full.dump(2) << '\n';
    return kSuccess;
  } else {
    throw ConfigError("--format must be table, csv or json");
  }
  nlohmann::json summary = doc;
  summary["variant"] = std::string(to_string(variant));
  emit_summary(c, std::move(summary), out);
  return kSuccess;
}

ExperimentOptions experiment_options(const RunConfig& c) {
  ExperimentOptions o;
  o.trials = c.trials;
  o.samples_per_facet = c.samples.value_or(4000);
  o.facets = c.facets;
  o.rho = c.rho;
  o.full_facet_limit = c.full_limit;
  o.workers = c.workers;
  return o;
}

int run_randpoly(const RunConfig& c, std::ostream& out) {
  const MeasureParams params = make_params(require_n(c), c.p);
  if (c.trials < 2) throw ConfigError("randpoly: --trials must be >= 2");
  RandomStream rng(c.seed, 0);
  const ExperimentResult result = run_experiment(params, experiment_options(c), rng);

  Sink sink(c.output, out);
  *sink << provenance_line(c);
  write_experiment_csv(*sink, result.records);

  const BoundsReport b = theorem_bounds(params);
  nlohmann::json summary = {
      {"n", params.n()},
      {"p", json_number(params.p())},
      {"N", result.N},
      {"rho", json_number(result.rho)},
      {"trials", c.trials},
      {"samples_per_facet", c.samples.value_or(4000)},
      {"mean", json_number(result.mean)},
      {"std_error", json_number(result.std_error)},
      {"full_mean", result.full_mean ? json_number(*result.full_mean) : nlohmann::json()},
      {"full_std_error", result.full_stderr ? json_number(*result.full_stderr) : nlohmann::json()},
      {"lower_bound", json_number(b.lower_bound)},
      {"lower_bound_construction", json_number(b.lower_bound_construction)},
      {"upper_bound_as_derived", json_number(b.upper_bound_as_derived)},
      {"rough_bound", json_number(b.rough_bound)},
  };
  if (params.n() >= 3) {
    summary["expected"] =
        json_number(expected_random_polytope_surface(params, result.N, result.rho));
  }
  emit_summary(c, std::move(summary), out);
  return kSuccess;
}

struct Fit {
  double slope;
  double slope_stderr;
};

Fit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / m;
    my += y[i] / m;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - my - slope * (x[i] - mx);
    ssr += r * r;
  }
  return {slope, std::sqrt(ssr / (m - 2.0) / sxx)};
}

int run_scaling(const RunConfig& c, std::ostream& out) {
  if (c.n_list.size() < 4) throw ConfigError("scaling: --n-list needs at least 4 values");
  if (c.target != "randpoly" && c.target != "ball" && c.target != "cube") {
    throw ConfigError("scaling: --target must be randpoly, ball or cube");
  }
  std::vector<double> log_n, log_mean;
  std::ostringstream rows;
  for (std::size_t i = 0; i < c.n_list.size(); ++i) {
    const MeasureParams params = make_params(c.n_list[i], c.p);
    RandomStream rng(c.seed, i);
    double mean = 0.0, std_error = 0.0;
    if (c.target == "randpoly") {
      const ExperimentResult r = run_experiment(params, experiment_options(c), rng);
      mean = r.mean;
      std_error = r.std_error;
    } else if (c.target == "ball") {
      mean = sphere_surface_exact(params, radial_mode(params)).value;
    } else {
      const double n = static_cast<double>(params.n());
      const double side = std::sqrt(2.0 * std::log(n)) * std::pow(n, 1.0 / c.p - 0.5);
      FacetOptions o;
      o.workers = c.workers;
      const SurfaceEstimate e =
          facet_estimate(params, ConvexBody::cube(params.n(), side), c.samples.value_or(100000), rng, o);
      mean = e.value;
      std_error = e.std_error;
    }
    if (!(mean > 0.0)) throw AccuracyError("scaling: non-positive mean at n=" + std::to_string(params.n()), mean);
    const BoundsReport b = theorem_bounds(params);
    rows << params.n() << ',' << format_number(mean) << ',' << format_number(std_error) << ','
         << format_number(b.lower_bound) << ',' << format_number(b.upper_bound_as_derived) << ','
         << format_number(b.rough_bound) << '\n';
    log_n.push_back(std::log(static_cast<double>(params.n())));
    log_mean.push_back(std::log(mean));
  }
  const Fit fit = fit_loglog(log_n, log_mean);

  Sink sink(c.output, out);
  *sink << provenance_line(c) << "n,mean,stderr,lower_bound,upper_as_derived,rough_bound\n"
        << rows.str();

  emit_summary(c,
               {{"slope", json_number(fit.slope)},
                {"slope_stderr", json_number(fit.slope_stderr)},
                {"theory", json_number(0.75 - 1.0 / c.p)},
                {"p", json_number(c.p)},
                {"target", c.target},
                {"n_list", c.n_list}},
               out);
  return kSuccess;
}

int run_verify_command(const RunConfig& c, std::ostream& out) {
  VerifyOptions o;
  o.seed = c.seed;
  o.workers = c.workers;
  o.tamper = c.tamper;
  nlohmann::json report = run_verify(o);
  report["seed"] = c.seed;
  report["workers"] = c.workers;
  Sink sink(c.output, out);
  *sink << report.dump(2) << '\n';
  return report.at("failed").get<std::size_t>() == 0 ? kSuccess : kCheckFailed;
}

// A config file naming the command may stand in for the subcommand.
std::vector<std::string> with_config_command(std::vector<std::string> args) {
  bool has_command = false;
  std::string config_path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    for (const auto& name : kCommands) has_command = has_command || args[i] == name;
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (has_command || config_path.empty()) return args;
  const nlohmann::json file = load_config_file(config_path);
  if (file.contains("command") && file.at("command").is_string()) {
    args.insert(args.begin() + 1, file.at("command").get<std::string>());
  }
  return args;
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv, argv + argc);
  args = with_config_command(std::move(args));

  CLI::App app{"Gaussian-type surface area of convex bodies: estimators, bounds, experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  OptionTable global;
  global.option(app, "config", "JSON file supplying any option; command-line flags override it");
  global.option(app, "seed", "64-bit root seed (default: $EXPO_SURF_SEED, else 0x5EED)");
  global.option(app, "workers", "worker threads (results depend on seed and workers only)");
  global.option(app, "output", "CSV or report destination (default: stdout)");
  global.option(app, "json", "JSON summary destination");

  OptionTable surface, bounds, scaling, randpoly, verify;
  auto* surface_cmd = app.add_subcommand("surface", "estimate the surface area of one body");
  surface.option(*surface_cmd, "body", "preset ball[:R] cube[:s] slab[:rho] halfspace[:rho] randpoly, JSON, or file");
  surface.option(*surface_cmd, "n", "dimension");
  surface.option(*surface_cmd, "p", "exponent (default 2)");
  surface.option(*surface_cmd, "method", "exact, quadrature, shell_mc or facet_mc");
  surface.option(*surface_cmd, "samples", "sample count (per facet for facet_mc)");
  surface.option(*surface_cmd, "epsilon", "shell width override");
  surface.option(*surface_cmd, "sampling", "shell sampling: points (default) or radial");
  surface.flag(*surface_cmd, "no-richardson", "report S(eps) instead of 2S(eps/2) - S(eps)");
  surface.flag(*surface_cmd, "single-facet", "estimate one facet and multiply by the facet count");
  surface.option(*surface_cmd, "N", "halfspace count for the randpoly preset");
  surface.option(*surface_cmd, "rho", "offset for the randpoly preset");

  auto* bounds_cmd = app.add_subcommand("bounds", "constants and bounds for (n, p)");
  bounds.option(*bounds_cmd, "n", "dimension");
  bounds.option(*bounds_cmd, "p", "exponent (default 2)");
  bounds.option(*bounds_cmd, "variant", "upper constant: stated or derived (default)");
  bounds.option(*bounds_cmd, "format", "table (default), csv or json");
  bounds.option(*bounds_cmd, "K", "facet count for the polytope bound");

  auto* scaling_cmd = app.add_subcommand("scaling", "fit the growth exponent over a list of n");
  scaling.option(*scaling_cmd, "p", "exponent (default 2)");
  scaling.option(*scaling_cmd, "n-list", "comma-separated dimensions, at least 4");
  scaling.option(*scaling_cmd, "target", "randpoly (default), ball or cube");
  scaling.option(*scaling_cmd, "trials", "randpoly trials per n (default 200)");
  scaling.option(*scaling_cmd, "samples", "samples per facet");
  scaling.option(*scaling_cmd, "full-limit", "run the all-facet estimator when N <= this");

  auto* randpoly_cmd = app.add_subcommand("randpoly", "random halfspace polytope experiment");
  randpoly.option(*randpoly_cmd, "n", "dimension (>= 4 unless --N and --rho are given)");
  randpoly.option(*randpoly_cmd, "p", "exponent (default 2)");
  randpoly.option(*randpoly_cmd, "N", "halfspace count (default from n)");
  randpoly.option(*randpoly_cmd, "rho", "common offset (default n^{1/p-1/4})");
  randpoly.option(*randpoly_cmd, "trials", "trials (default 200)");
  randpoly.option(*randpoly_cmd, "samples", "samples per facet (default 4000)");
  randpoly.option(*randpoly_cmd, "full-limit", "run the all-facet estimator when N <= this (default 64)");

  auto* verify_cmd = app.add_subcommand("verify", "run the invariant suite");
  verify.option(*verify_cmd, "tamper-constant", "scale the upper constant before checking (self-test)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  nlohmann::json file = nlohmann::json::object();
  if (auto path = global.resolve("config", file)) file = load_config_file(*path);

  RunConfig c;
  c.seed = environment_seed();
  if (auto v = global.resolve("seed", file)) c.seed = parse_u64(*v, "--seed");
  if (auto v = global.resolve("workers", file)) c.workers = parse_u64(*v, "--workers");
  if (c.workers < 1) throw ConfigError("--workers must be >= 1");
  if (auto v = global.resolve("output", file)) c.output = *v;
  if (auto v = global.resolve("json", file)) c.json_output = *v;

  auto common = [&](const OptionTable& t) {
    if (auto v = t.resolve("n", file)) c.n = parse_u64(*v, "--n");
    if (auto v = t.resolve("p", file)) c.p = parse_double(*v, "--p");
    if (auto v = t.resolve("samples", file)) c.samples = parse_u64(*v, "--samples");
    if (auto v = t.resolve("trials", file)) c.trials = parse_u64(*v, "--trials");
    if (auto v = t.resolve("N", file)) c.facets = parse_u64(*v, "--N");
    if (auto v = t.resolve("rho", file)) c.rho = parse_double(*v, "--rho");
    if (auto v = t.resolve("full-limit", file)) c.full_limit = parse_u64(*v, "--full-limit");
  };

  if (surface_cmd->parsed()) {
    c.command = "surface";
    common(surface);
    if (auto v = surface.resolve("body", file)) c.body = *v;
    if (auto v = surface.resolve("method", file)) c.method = *v;
    if (auto v = surface.resolve("epsilon", file)) c.epsilon = parse_double(*v, "--epsilon");
    if (auto v = surface.resolve("sampling", file)) c.sampling = *v;
    if (auto v = surface.resolve("no-richardson", file)) c.richardson = !parse_bool(*v, "--no-richardson");
    if (auto v = surface.resolve("single-facet", file)) c.single_facet = parse_bool(*v, "--single-facet");
    return run_surface(c, out);
  }
  if (bounds_cmd->parsed()) {
    c.command = "bounds";
    common(bounds);
    if (auto v = bounds.resolve("variant", file)) c.variant = *v;
    if (auto v = bounds.resolve("format", file)) c.format = *v;
    std::optional<double> facets;
    if (auto v = bounds.resolve("K", file)) facets = parse_double(*v, "--K");
    return run_bounds(c, out, facets);
  }
  if (scaling_cmd->parsed()) {
    c.command = "scaling";
    common(scaling);
    if (auto v = scaling.resolve("n-list", file)) c.n_list = parse_size_list(*v, "--n-list");
    if (auto v = scaling.resolve("target", file)) c.target = *v;
    return run_scaling(c, out);
  }
  if (randpoly_cmd->parsed()) {
    c.command = "randpoly";
    common(randpoly);
    return run_randpoly(c, out);
  }
  c.command = "verify";
  if (auto v = verify.resolve("tamper-constant", file)) c.tamper = parse_double(*v, "--tamper-constant");
  return run_verify_command(c, out);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(argc, argv, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const UnsupportedVariantError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const AccuracyError& e) {
    err << "accuracy error: " << e.what() << " (best estimate " << format_number(e.best_estimate())
        << ")\n";
    return kAccuracyError;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << '\n';
    return kResourceError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
}

}  // namespace expo_surf::cli
