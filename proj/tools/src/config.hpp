#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace CLI {
class App;
class Option;
}  // namespace CLI

namespace expo_surf::cli {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;
inline constexpr const char* kSeedVariable = "EXPO_SURF_SEED";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::optional<std::size_t> n;
  double p = 2.0;
  std::vector<std::size_t> n_list;
  std::string body = "ball";
  std::optional<std::string> method;
  std::optional<std::size_t> samples;
  std::size_t trials = 200;
  std::optional<double> epsilon;
  std::string sampling = "points";
  bool richardson = true;
  bool single_facet = false;
  std::optional<std::size_t> facets;
  std::optional<double> rho;
  std::size_t full_limit = 64;
  std::string variant = "derived";
  std::string target = "randpoly";
  std::string format = "table";
  std::uint64_t seed = kDefaultSeed;
  std::size_t workers = 1;
  std::string output;       ///< CSV or report path; empty for stdout
  std::string json_output;  ///< JSON summary path; empty for none
  double tamper = 1.0;
};

// Option values as raw strings, so the same parser handles the command line
// and the config file. Command-line values win.
class OptionTable {
 public:
  void option(CLI::App& app, const std::string& name, const std::string& help);
  void flag(CLI::App& app, const std::string& name, const std::string& help);

  std::optional<std::string> resolve(const std::string& name, const nlohmann::json& file) const;

 private:
  struct Entry {
    CLI::Option* option = nullptr;
    std::string value;
    bool is_flag = false;
  };
  std::map<std::string, Entry> entries_;
};

nlohmann::json load_config_file(const std::string& path);

double parse_double(const std::string& text, const std::string& what);
std::uint64_t parse_u64(const std::string& text, const std::string& what);
std::vector<std::size_t> parse_size_list(const std::string& text, const std::string& what);
bool parse_bool(const std::string& text, const std::string& what);

/// EXPO_SURF_SEED when set, else kDefaultSeed.
std::uint64_t environment_seed();

}  // namespace expo_surf::cli
