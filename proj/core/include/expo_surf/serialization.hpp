#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "expo_surf/bodies.hpp"
#include "expo_surf/bounds.hpp"
#include "expo_surf/random_polytope.hpp"
#include "expo_surf/surface_area.hpp"

namespace expo_surf {

/// Shortest round-trip-stable text for CSV/JSON output: 9 significant
/// digits, '.' decimal separator regardless of the global locale.
std::string format_number(double value);

/// `value` rounded to the digits format_number prints; null when not finite.
nlohmann::json json_number(double value);

/// {"type": "ball"|"cube"|"slab"|"halfspaces", "n": n,
///  "parameters": {...}, "directions": [[...], ...]}
nlohmann::json body_to_json(const ConvexBody& body);
ConvexBody body_from_json(const nlohmann::json& doc);

/// {"value", "std_error", "method", "samples", "epsilon"}; epsilon is null
/// when not applicable.
nlohmann::json estimate_to_json(const SurfaceEstimate& estimate);
SurfaceEstimate estimate_from_json(const nlohmann::json& doc);

nlohmann::json bounds_to_json(const BoundsReport& report);

/// CSV columns for experiment records.
inline constexpr const char* kExperimentCsvHeader = "trial,seed,n,p,N,rho,estimate,std_error,method";

void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);

}  // namespace expo_surf
