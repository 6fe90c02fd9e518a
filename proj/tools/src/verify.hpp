#pragma once

#include <cstddef>
#include <cstdint>

#include <nlohmann/json.hpp>

namespace expo_surf::cli {

struct VerifyOptions {
  std::uint64_t seed;
  std::size_t workers = 1;
  /// Multiplies the upper-bound constant before it is checked. Any value
  /// other than 1 must make the report fail.
  double tamper = 1.0;
};

/// Runs the invariant suite at a reduced grid. The report holds one entry
/// per named check and the totals.
nlohmann::json run_verify(const VerifyOptions& options);

}  // namespace expo_surf::cli
