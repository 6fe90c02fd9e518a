#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "expo_surf/bodies.hpp"
#include "expo_surf/measure.hpp"
#include "expo_surf/random.hpp"
#include "expo_surf/surface_area.hpp"

namespace expo_surf {

/// Parameters of the lower-bound construction in dimension n:
/// offset ρ = n^{1/p-1/4}, window half-width W = n^{1/p-1/2}, and
/// N = round(√(2π)e^{-5/4}·n^{1/4}·e^{√n/2}) >= 1 halfspaces.
struct PaperParameters {
  double rho;
  double W;
  std::size_t N;
};

/// Throws DomainError for n < 4 and ResourceError when N would exceed 10⁷.
PaperParameters paper_parameters(const MeasureParams& params);

/// {x : <x, x_i> <= rho} for N i.i.d. uniform directions x_i.
ConvexBody construct(const MeasureParams& params, std::size_t facets, double rho,
                     RandomStream& rng);

struct ExperimentRecord {
  std::size_t trial;
  std::uint64_t seed;  ///< base seed; trial t uses RandomStream(seed, t)
  std::size_t n;
  double p;
  std::size_t N;
  double rho;
  /// Exchangeable single-facet estimate (facet 0 mass × N).
  SurfaceEstimate estimate;
  /// All-facet estimate, when N is small enough to run it.
  std::optional<SurfaceEstimate> full_estimate;
};

struct ExperimentOptions {
  std::size_t trials = 200;
  std::size_t samples_per_facet = 4000;
  /// Override the construction's N and ρ.
  std::optional<std::size_t> facets;
  std::optional<double> rho;
  /// Also run the all-facet estimator when N <= this.
  std::size_t full_facet_limit = 64;
  std::size_t workers = 1;
};

struct ExperimentResult {
  std::size_t N;
  double rho;
  double mean;    ///< over trials, exchangeable estimates
  double std_error;  ///< standard error of `mean`
  /// Same statistics for the all-facet estimates, if every trial ran one.
  std::optional<double> full_mean;
  std::optional<double> full_stderr;
  std::vector<ExperimentRecord> records;
};

/// Builds `options.trials` random polytopes and estimates the γ_p-surface
/// area of each. Trials run in parallel with one substream per trial, so the
/// result does not depend on the worker count.
ExperimentResult run_experiment(const MeasureParams& params, const ExperimentOptions& options,
                                RandomStream& rng);

}  // namespace expo_surf
