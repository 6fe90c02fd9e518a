#include "config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>

#include "CLI11.hpp"

namespace expo_surf::cli {

namespace {

std::string json_to_text(const nlohmann::json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_array()) {
    std::string joined;
    for (const auto& item : value) {
      if (!joined.empty()) joined += ',';
      joined += json_to_text(item);
    }
    return joined;
  }
  if (value.is_object()) return value.dump();
  return value.dump();
}

std::string strip(const std::string& text) {
  const auto first = text.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = text.find_last_not_of(" \t");
  return text.substr(first, last - first + 1);
}

}  // namespace

void OptionTable::option(CLI::App& app, const std::string& name, const std::string& help) {
  Entry& e = entries_[name];
  e.option = app.add_option("--" + name, e.value, help);
}

void OptionTable::flag(CLI::App& app, const std::string& name, const std::string& help) {
  Entry& e = entries_[name];
  e.is_flag = true;
  e.option = app.add_flag("--" + name, help);
}

std::optional<std::string> OptionTable::resolve(const std::string& name,
                                                const nlohmann::json& file) const {
  const auto it = entries_.find(name);
  if (it != entries_.end() && it->second.option->count() > 0) {
    return it->second.is_flag ? std::string("true") : it->second.value;
  }
  std::string underscored = name;
  for (char& c : underscored) {
    if (c == '-') c = '_';
  }
  for (const std::string& key : {name, underscored}) {
    if (file.is_object() && file.contains(key) && !file.at(key).is_null()) {
      return json_to_text(file.at(key));
    }
  }
  return std::nullopt;
}

nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    nlohmann::json doc = nlohmann::json::parse(in);
    if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");
    return doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = strip(text);
  double value = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    throw ConfigError(what + ": '" + text + "' is not a number");
  }
  return value;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  std::string t = strip(text);
  int base = 10;
  if (t.size() > 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X')) {
    t = t.substr(2);
    base = 16;
  }
  std::uint64_t value = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value, base);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    throw ConfigError(what + ": '" + text + "' is not a non-negative integer");
  }
  return value;
}

std::vector<std::size_t> parse_size_list(const std::string& text, const std::string& what) {
  std::vector<std::size_t> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find(',', start);
    const std::string item = text.substr(start, end == std::string::npos ? end : end - start);
    values.push_back(static_cast<std::size_t>(parse_u64(item, what)));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return values;
}

bool parse_bool(const std::string& text, const std::string& what) {
  const std::string t = strip(text);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  throw ConfigError(what + ": '" + text + "' is not a boolean");
}

std::uint64_t environment_seed() {
  const char* value = std::getenv(kSeedVariable);
  if (value == nullptr || *value == '\0') return kDefaultSeed;
  return parse_u64(value, kSeedVariable);
}

}  // namespace expo_surf::cli
