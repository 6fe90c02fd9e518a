#include "expo_surf/serialization.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <system_error>

#include "expo_surf/errors.hpp"

namespace expo_surf {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<double> read_vector(const nlohmann::json& doc, const char* what) {
  if (!doc.is_array()) throw DomainError(std::string("body json: '") + what + "' must be an array");
  return doc.get<std::vector<double>>();
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 9);
  if (res.ec != std::errc{}) throw DomainError("format_number: conversion failed");
  return std::string(buf, res.ptr);
}

nlohmann::json json_number(double value) {
  if (!std::isfinite(value)) return nullptr;
  const std::string text = format_number(value);
  double parsed = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), parsed);
  return parsed;
}

nlohmann::json body_to_json(const ConvexBody& body) {
  nlohmann::json doc;
  doc["type"] = std::string(body.type_name());
  doc["n"] = body.dim();
  std::visit(Overloaded{[&](const Ball& b) { doc["parameters"] = {{"radius", b.radius}}; },
                        [&](const Cube& c) { doc["parameters"] = {{"half_side", c.half_side}}; },
                        [&](const Slab& s) {
                          doc["parameters"] = {{"offset", s.offset}, {"normal", s.normal}};
                        },
                        [&](const HalfspaceIntersection& h) {
                          doc["parameters"] = {{"offset", h.offset}};
                          auto rows = nlohmann::json::array();
                          for (std::size_t i = 0; i < h.count; ++i) {
                            const auto d = h.direction(i, body.dim());
                            rows.push_back(std::vector<double>(d.begin(), d.end()));
                          }
                          doc["directions"] = std::move(rows);
                        }},
             body.shape());
  return doc;
}

ConvexBody body_from_json(const nlohmann::json& doc) {
  try {
    const std::string type = doc.at("type").get<std::string>();
    const nlohmann::json& params = doc.at("parameters");
    if (type == "ball") {
      return ConvexBody::ball(doc.at("n").get<std::size_t>(), params.at("radius").get<double>());
    }
    if (type == "cube") {
      return ConvexBody::cube(doc.at("n").get<std::size_t>(), params.at("half_side").get<double>());
    }
    if (type == "slab") {
      std::vector<double> normal = read_vector(params.at("normal"), "normal");
      if (doc.contains("n") && doc.at("n").get<std::size_t>() != normal.size()) {
        throw DomainError("body json: slab normal length differs from n");
      }
      return ConvexBody::slab(params.at("offset").get<double>(), std::move(normal));
    }
    if (type == "halfspaces") {
      const std::size_t n = doc.at("n").get<std::size_t>();
      std::vector<double> flat;
      for (const auto& row : doc.at("directions")) {
        std::vector<double> d = read_vector(row, "directions");
        if (d.size() != n) throw DomainError("body json: direction length differs from n");
        flat.insert(flat.end(), d.begin(), d.end());
      }
      return ConvexBody::halfspaces(n, std::move(flat), params.at("offset").get<double>());
    }
    throw DomainError("body json: unknown type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("body json: ") + e.what());
  }
}

nlohmann::json estimate_to_json(const SurfaceEstimate& estimate) {
  return {{"value", json_number(estimate.value)},
          {"std_error", json_number(estimate.std_error)},
          {"method", std::string(to_string(estimate.method))},
          {"samples", estimate.samples},
          {"epsilon", estimate.epsilon ? json_number(*estimate.epsilon) : nlohmann::json(nullptr)}};
}

SurfaceEstimate estimate_from_json(const nlohmann::json& doc) {
  try {
    SurfaceEstimate e;
    e.value = doc.at("value").get<double>();
    e.std_error = doc.at("std_error").get<double>();
    e.method = parse_estimate_method(doc.at("method").get<std::string>());
    e.samples = doc.at("samples").get<std::uint64_t>();
    if (doc.contains("epsilon") && !doc.at("epsilon").is_null()) {
      e.epsilon = doc.at("epsilon").get<double>();
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw DomainError(std::string("estimate json: ") + ex.what());
  }
}

nlohmann::json bounds_to_json(const BoundsReport& r) {
  return {{"p", json_number(r.p)},
          {"n", r.n},
          {"delta_p", json_number(r.constants.delta_p)},
          {"C1", json_number(r.constants.C1)},
          {"C", json_number(r.constants.C)},
          {"C_upper_as_stated", json_number(r.constants.C_as_stated)},
          {"C_upper_as_derived", json_number(r.constants.C_as_derived)},
          {"alpha_star", json_number(r.alpha_star)},
          {"upper_bound_as_stated", json_number(r.upper_bound_as_stated)},
          {"upper_bound_as_derived", json_number(r.upper_bound_as_derived)},
          {"lower_bound", json_number(r.lower_bound)},
          {"lower_bound_construction", json_number(r.lower_bound_construction)},
          {"rough_bound", json_number(r.rough_bound)},
          {"lower_le_upper_from_n",
           r.lower_le_upper_from_n ? nlohmann::json(*r.lower_le_upper_from_n)
                                   : nlohmann::json(nullptr)}};
}

void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << kExperimentCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.trial << ',' << r.seed << ',' << r.n << ',' << format_number(r.p) << ',' << r.N << ','
        << format_number(r.rho) << ',' << format_number(r.estimate.value) << ','
        << format_number(r.estimate.std_error) << ',' << to_string(r.estimate.method) << '\n';
  }
}

}  // namespace expo_surf
