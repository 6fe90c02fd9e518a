#include "expo_surf/random_polytope.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "expo_surf/errors.hpp"
#include "parallel.hpp"

namespace expo_surf {

namespace {

constexpr double kMaxFacets = 1e7;

struct MeanAndError {
  double mean;
  double std_error;
};

MeanAndError summarize(const std::vector<double>& values) {
  const double count = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= count;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (count - 1.0) / count)};
}

}  // namespace

PaperParameters paper_parameters(const MeasureParams& params) {
  if (params.n() < 4) throw DomainError("paper_parameters: requires n >= 4");
  const double n = static_cast<double>(params.n());
  const double p = params.p();
  const double log_count = 0.5 * std::log(2.0 * std::numbers::pi) - 1.25 + 0.25 * std::log(n) +
                           0.5 * std::sqrt(n);
  if (log_count > std::log(kMaxFacets)) {
    throw ResourceError("paper_parameters: N = e^" + std::to_string(log_count) +
                        " exceeds 1e7 halfspaces; use a smaller n");
  }
  const double count = std::round(std::exp(log_count));
  return {std::pow(n, 1.0 / p - 0.25), std::pow(n, 1.0 / p - 0.5),
          static_cast<std::size_t>(std::max(count, 1.0))};
}

ConvexBody construct(const MeasureParams& params, std::size_t facets, double rho,
                     RandomStream& rng) {
  if (facets < 1) throw DomainError("construct: N must be >= 1");
  const std::size_t n = params.n();
  std::vector<double> directions(facets * n);
  for (std::size_t i = 0; i < facets; ++i) {
    rng.unit_vector(std::span<double>(directions.data() + i * n, n));
  }
  return ConvexBody::halfspaces(n, std::move(directions), rho);
}

ExperimentResult run_experiment(const MeasureParams& params, const ExperimentOptions& options,
                                RandomStream& rng) {
  if (options.trials < 2) throw DomainError("run_experiment: needs at least 2 trials");
  std::size_t facets = 0;
  double rho = 0.0;
  if (options.facets && options.rho) {
    facets = *options.facets;
    rho = *options.rho;
  } else {
    const PaperParameters paper = paper_parameters(params);
    facets = options.facets.value_or(paper.N);
    rho = options.rho.value_or(paper.rho);
  }
  if (facets < 1) throw DomainError("run_experiment: N must be >= 1");
  if (!(rho > 0.0)) throw DomainError("run_experiment: rho must be > 0");
  const bool run_full = facets <= options.full_facet_limit;

  const std::uint64_t base_seed = rng.next_u64();
  std::vector<ExperimentRecord> records(options.trials);
  const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, options.trials));
  detail::run_chunks(workers, [&](std::size_t c) {
    for (std::size_t t = c; t < options.trials; t += workers) {
      RandomStream stream(base_seed, t);
      const ConvexBody body = construct(params, facets, rho, stream);
      ExperimentRecord& rec = records[t];
      rec = {t, base_seed, params.n(), params.p(), facets, rho, {}, std::nullopt};
      rec.estimate = facet_estimate(params, body, options.samples_per_facet, stream,
                                    {.single_facet = true, .workers = 1});
      if (run_full) {
        rec.full_estimate = facet_estimate(params, body, options.samples_per_facet, stream,
                                           {.single_facet = false, .workers = 1});
      }
    }
  });

  std::vector<double> single, full;
  single.reserve(records.size());
  for (const auto& r : records) {
    single.push_back(r.estimate.value);
    if (r.full_estimate) full.push_back(r.full_estimate->value);
  }
  const MeanAndError s = summarize(single);
  ExperimentResult result{facets, rho, s.mean, s.std_error, std::nullopt, std::nullopt,
                          std::move(records)};
  if (run_full) {
    const MeanAndError f = summarize(full);
    result.full_mean = f.mean;
    result.full_stderr = f.std_error;
  }
  return result;
}

}  // namespace expo_surf
