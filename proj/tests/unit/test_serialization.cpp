#include <clocale>
#include <cmath>
#include <locale>
#include <sstream>
#include <string>
#include <variant>

#include <gtest/gtest.h>

#include "expo_surf/errors.hpp"
#include "expo_surf/random.hpp"
#include "expo_surf/serialization.hpp"

using namespace expo_surf;

TEST(FormatNumber, NineSignificantDigits) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(123456789012.0), "1.23456789e+11");
  EXPECT_EQ(format_number(-3.0242027006024203e-18), "-3.0242027e-18");
}

TEST(FormatNumber, IgnoresGlobalLocale) {
  const char* previous = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = previous ? previous : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") == nullptr) GTEST_SKIP() << "locale unavailable";
  EXPECT_EQ(format_number(0.25), "0.25");
  std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST(JsonNumber, RoundsLikeText) {
  EXPECT_EQ(json_number(1.0 / 3.0).get<double>(), 0.333333333);
  EXPECT_TRUE(json_number(NAN).is_null());
  EXPECT_TRUE(json_number(INFINITY).is_null());
  for (double v : {0.6065306597, 1e-300, 12345.678901234}) {
    const double once = json_number(v).get<double>();
    EXPECT_EQ(json_number(once).get<double>(), once);
  }
}

TEST(BodyJson, RoundTrip) {
  RandomStream rng(601);
  std::vector<double> dirs(3 * 4);
  for (int i = 0; i < 4; ++i) rng.unit_vector(std::span<double>(dirs).subspan(3 * i, 3));
  for (const ConvexBody& body : {ConvexBody::ball(3, 1.5), ConvexBody::cube(4, 0.25),
                                 ConvexBody::slab(0.7, {0.0, 0.6, 0.8}), ConvexBody::halfspaces(3, dirs, 1.1)}) {
    const auto doc = body_to_json(body);
    EXPECT_EQ(doc["type"], std::string(body.type_name()));
    const ConvexBody back = body_from_json(nlohmann::json::parse(doc.dump()));
    EXPECT_EQ(back.dim(), body.dim());
    EXPECT_EQ(back.type_name(), body.type_name());
    EXPECT_EQ(body_to_json(back), doc);
  }
}

TEST(BodyJson, ParsesHandWritten) {
  const auto ball = body_from_json(nlohmann::json::parse(R"({"type":"ball","n":5,"parameters":{"radius":2}})"));
  EXPECT_EQ(std::get<Ball>(ball.shape()).radius, 2.0);
  const auto h = body_from_json(nlohmann::json::parse(
      R"({"type":"halfspaces","n":2,"parameters":{"offset":1},"directions":[[1,0],[0,-1]]})"));
  EXPECT_EQ(std::get<HalfspaceIntersection>(h.shape()).count, 2u);
}

TEST(BodyJson, RejectsMalformed) {
  EXPECT_THROW(body_from_json(nlohmann::json::parse(R"({"type":"torus","n":3})")), DomainError);
  EXPECT_THROW(body_from_json(nlohmann::json::parse(R"({"type":"ball","n":3})")), DomainError);
  EXPECT_THROW(body_from_json(nlohmann::json::parse(R"({"type":"ball","n":3,"parameters":{"radius":-1}})")),
               DomainError);
  EXPECT_THROW(body_from_json(nlohmann::json::parse(
                   R"({"type":"halfspaces","n":2,"parameters":{"offset":1},"directions":[[1,0,0]]})")),
               DomainError);
}

TEST(EstimateJson, RoundTrip) {
  SurfaceEstimate e;
  e.value = 0.6065;
  e.std_error = 0.0012;
  e.method = EstimateMethod::shell_mc;
  e.samples = 1'000'000;
  e.epsilon = 0.01;
  const auto doc = estimate_to_json(e);
  EXPECT_EQ(doc["method"], "shell_mc");
  const auto back = estimate_from_json(nlohmann::json::parse(doc.dump()));
  EXPECT_EQ(back.value, e.value);
  EXPECT_EQ(back.std_error, e.std_error);
  EXPECT_EQ(back.method, e.method);
  EXPECT_EQ(back.samples, e.samples);
  EXPECT_EQ(back.epsilon, e.epsilon);

  SurfaceEstimate exact;
  exact.value = 0.25;
  const auto exact_doc = estimate_to_json(exact);
  EXPECT_TRUE(exact_doc["epsilon"].is_null());
  EXPECT_FALSE(estimate_from_json(exact_doc).epsilon.has_value());
}

TEST(BoundsJson, Fields) {
  const auto doc = bounds_to_json(theorem_bounds(MeasureParams(16, 2.0)));
  for (const char* key : {"p", "n", "delta_p", "C1", "C", "C_upper_as_stated", "C_upper_as_derived", "alpha_star",
                          "upper_bound_as_stated", "upper_bound_as_derived", "lower_bound",
                          "lower_bound_construction", "rough_bound", "lower_le_upper_from_n"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }
  EXPECT_EQ(doc["n"], 16);
  EXPECT_EQ(doc["lower_bound"].get<double>(), 0.210798449);
}

TEST(ExperimentCsv, HeaderAndRows) {
  ExperimentRecord r{3, 77, 8, 2.0, 5, 1.0 / 3.0, {}, std::nullopt};
  r.estimate.value = 0.5;
  r.estimate.std_error = 0.01;
  r.estimate.method = EstimateMethod::facet_mc;
  std::ostringstream out;
  write_experiment_csv(out, {r});
  EXPECT_EQ(out.str(),
            "trial,seed,n,p,N,rho,estimate,std_error,method\n"
            "3,77,8,2,5,0.333333333,0.5,0.01,facet_mc\n");
  EXPECT_EQ(out.str().find('\r'), std::string::npos);
}

namespace {

struct CommaDecimal : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
};

}  // namespace

TEST(ExperimentCsv, IgnoresStreamLocale) {
  ExperimentRecord r{0, 1, 8, 1.5, 5, 0.25, {}, std::nullopt};
  r.estimate.value = 0.125;
  std::ostringstream out;
  out.imbue(std::locale(std::locale::classic(), new CommaDecimal));
  write_experiment_csv(out, {r});
  EXPECT_NE(out.str().find("0,1,8,1.5,5,0.25,0.125,0,exact"), std::string::npos) << out.str();
}
