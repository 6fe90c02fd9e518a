#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "expo_surf/bodies.hpp"
#include "expo_surf/errors.hpp"
#include "expo_surf/random.hpp"

using namespace expo_surf;

namespace {

std::vector<double> unit(std::size_t n, std::size_t axis, double sign = 1.0) {
  std::vector<double> e(n, 0.0);
  e[axis] = sign;
  return e;
}

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace

TEST(Bodies, Validation) {
  EXPECT_THROW(ConvexBody::ball(3, 0.0), DomainError);
  EXPECT_THROW(ConvexBody::cube(3, -1.0), DomainError);
  EXPECT_THROW(ConvexBody::slab(1.0, {1.0, 1.0}), DomainError);
  EXPECT_THROW(ConvexBody::slab(-0.1, {1.0, 0.0}), DomainError);
  EXPECT_NO_THROW(ConvexBody::slab(0.0, {1.0, 0.0}));
  EXPECT_THROW(ConvexBody::halfspaces(2, {1.0, 0.0}, 0.0), DomainError);
  EXPECT_THROW(ConvexBody::halfspaces(2, {1.0, 0.0, 0.0}, 1.0), DomainError);
  EXPECT_THROW(ConvexBody::halfspaces(2, {1.0, 1e-5}, 1.0), DomainError);
  EXPECT_NO_THROW(ConvexBody::halfspaces(2, {1.0, 1e-7}, 1.0));
}

TEST(Bodies, TypeNames) {
  EXPECT_EQ(ConvexBody::ball(2, 1.0).type_name(), "ball");
  EXPECT_EQ(ConvexBody::cube(2, 1.0).type_name(), "cube");
  EXPECT_EQ(ConvexBody::slab(1.0, {0.0, 1.0}).type_name(), "slab");
  EXPECT_EQ(ConvexBody::halfspaces(2, {0.0, 1.0}, 1.0).type_name(), "halfspaces");
}

TEST(Contains, Examples) {
  const std::vector<double> origin(4, 0.0);
  EXPECT_TRUE(contains(ConvexBody::ball(4, 1.0), origin));
  const std::vector<double> just_out{1.0001, 0.0, 0.0, 0.0};
  EXPECT_FALSE(contains(ConvexBody::cube(4, 1.0), just_out));
  RandomStream rng(4);
  std::vector<double> dirs(4 * 9);
  for (int i = 0; i < 9; ++i) rng.unit_vector(std::span<double>(dirs).subspan(4 * i, 4));
  EXPECT_TRUE(contains(ConvexBody::halfspaces(4, dirs, 0.01), origin));
  EXPECT_THROW(contains(ConvexBody::ball(3, 1.0), origin), DomainError);
}

TEST(Distance, Examples) {
  const std::vector<double> x{1.5, 0.0};
  const Distance d = distance(ConvexBody::ball(2, 1.0), x);
  EXPECT_DOUBLE_EQ(d.value, 0.5);
  EXPECT_EQ(d.kind, DistanceKind::exact);

  const std::vector<double> corner{2.0, 2.0};
  const Distance c = distance(ConvexBody::cube(2, 1.0), corner);
  EXPECT_NEAR(c.value, std::sqrt(2.0), 1e-15);
  EXPECT_EQ(c.kind, DistanceKind::exact);

  const std::vector<double> two_e1{2.0, 0.0, 0.0};
  const Distance h = distance(ConvexBody::halfspaces(3, unit(3, 0), 1.0), two_e1);
  EXPECT_DOUBLE_EQ(h.value, 1.0);
  EXPECT_EQ(h.kind, DistanceKind::lower_bound);

  const std::vector<double> y{0.3, 3.0};
  EXPECT_NEAR(distance(ConvexBody::slab(1.0, {0.0, 1.0}), y).value, 2.0, 1e-15);
  const std::vector<double> z{0.3, -3.5};
  EXPECT_NEAR(distance(ConvexBody::slab(1.0, {0.0, 1.0}), z).value, 2.5, 1e-15);
}

TEST(Distance, ZeroExactlyInsideForExactVariants) {
  RandomStream rng(12);
  const std::vector<ConvexBody> bodies = {ConvexBody::ball(5, 1.7), ConvexBody::cube(5, 0.6),
                                          ConvexBody::slab(0.5, {0.6, 0.0, 0.8, 0.0, 0.0})};
  std::vector<double> x(5);
  for (int i = 0; i < 20000; ++i) {
    for (double& v : x) v = 1.5 * rng.normal();
    for (const auto& b : bodies) {
      const Distance d = distance(b, x);
      EXPECT_EQ(d.kind, DistanceKind::exact);
      EXPECT_EQ(d.value == 0.0, contains(b, x));
    }
  }
}

TEST(Distance, CubeMatchesProjection) {
  RandomStream rng(13);
  std::vector<double> x(6);
  for (int i = 0; i < 2000; ++i) {
    for (double& v : x) v = 2.0 * rng.normal();
    double sq = 0.0;
    for (double v : x) {
      const double excess = std::max(std::abs(v) - 0.8, 0.0);
      sq += excess * excess;
    }
    EXPECT_NEAR(distance(ConvexBody::cube(6, 0.8), x).value, std::sqrt(sq), 1e-14);
  }
}

TEST(Distance, HalfspaceLowerBoundNeverExceedsTrueDistance) {
  // Brute-force projection onto a pentagon-like polygon in the plane.
  const double rho = 1.0;
  std::vector<double> dirs;
  for (double angle : {0.1, 1.4, 2.5, 3.9, 5.0}) {
    dirs.push_back(std::cos(angle));
    dirs.push_back(std::sin(angle));
  }
  const ConvexBody body = ConvexBody::halfspaces(2, dirs, rho);
  std::vector<std::array<double, 2>> boundary;
  for (std::size_t i = 0; i < 5; ++i) {
    const double dx = dirs[2 * i], dy = dirs[2 * i + 1];
    for (double t = -6.0; t <= 6.0; t += 1e-4) {
      const std::array<double, 2> y{rho * dx - t * dy, rho * dy + t * dx};
      bool inside = true;
      for (std::size_t j = 0; j < 5; ++j) inside = inside && dirs[2 * j] * y[0] + dirs[2 * j + 1] * y[1] <= rho + 1e-9;
      if (inside) boundary.push_back(y);
    }
  }
  RandomStream rng(14);
  for (int k = 0; k < 300; ++k) {
    const std::vector<double> x{3.0 * rng.normal(), 3.0 * rng.normal()};
    if (contains(body, x)) continue;
    double best = INFINITY;
    for (const auto& y : boundary) best = std::min(best, std::hypot(x[0] - y[0], x[1] - y[1]));
    EXPECT_LE(distance(body, x).value, best + 1e-4);
  }
}

TEST(Facets, Counts) {
  const auto cube = facets(ConvexBody::cube(3, 2.0));
  ASSERT_EQ(cube.size(), 6u);
  int found = 0;
  for (std::size_t axis = 0; axis < 3; ++axis) {
    for (double sign : {1.0, -1.0}) {
      for (const auto& f : cube) found += (f.normal == unit(3, axis, sign) && f.offset == 2.0);
    }
  }
  EXPECT_EQ(found, 6);

  const auto slab = facets(ConvexBody::slab(0.7, {0.0, 1.0}));
  ASSERT_EQ(slab.size(), 2u);
  EXPECT_EQ(slab[0].offset, 0.7);
  EXPECT_EQ(slab[1].offset, 0.7);
  EXPECT_EQ(slab[0].normal[1], -slab[1].normal[1]);

  RandomStream rng(15);
  std::vector<double> dirs(5 * 11);
  for (int i = 0; i < 11; ++i) rng.unit_vector(std::span<double>(dirs).subspan(5 * i, 5));
  EXPECT_EQ(facets(ConvexBody::halfspaces(5, dirs, 1.0)).size(), 11u);

  EXPECT_THROW(facets(ConvexBody::ball(3, 1.0)), UnsupportedVariantError);
}

TEST(Facets, PointsLieOnBoundary) {
  RandomStream rng(16);
  const std::size_t n = 4;
  std::vector<double> dirs(n * 6);
  for (int i = 0; i < 6; ++i) rng.unit_vector(std::span<double>(dirs).subspan(n * i, n));
  const std::vector<ConvexBody> bodies = {ConvexBody::cube(n, 1.0), ConvexBody::halfspaces(n, dirs, 0.8),
                                          ConvexBody::slab(0.5, unit(n, 2))};
  std::vector<double> y(n);
  for (const auto& body : bodies) {
    for (const auto& f : facets(body)) {
      int accepted = 0;
      for (int k = 0; k < 3000; ++k) {
        // random point of the facet's hyperplane
        for (double& v : y) v = 1.5 * rng.normal();
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += y[i] * f.normal[i];
        for (std::size_t i = 0; i < n; ++i) y[i] += (f.offset - dot) * f.normal[i];
        if (!f.contains(y)) continue;
        ++accepted;
        double on_plane = 0.0;
        for (std::size_t i = 0; i < n; ++i) on_plane += y[i] * f.normal[i];
        EXPECT_NEAR(on_plane, f.offset, 1e-12);
        std::vector<double> inward(y);
        for (std::size_t i = 0; i < n; ++i) inward[i] -= 1e-9 * f.normal[i];
        EXPECT_TRUE(contains(body, inward));
      }
      EXPECT_GT(accepted, 0) << body.type_name();
    }
  }
}

TEST(Facets, DuplicateDirectionCreditedOnce) {
  const std::vector<double> dirs{1.0, 0.0, 0.0, 1.0, 1.0, 0.0};
  const auto fs = facets(ConvexBody::halfspaces(2, dirs, 1.0));
  ASSERT_EQ(fs.size(), 3u);
  const std::vector<double> y{1.0, -0.5};
  EXPECT_TRUE(fs[0].contains(y));
  EXPECT_FALSE(fs[2].contains(y));
}

TEST(Rays, ExitRadius) {
  RandomStream rng(17);
  std::vector<double> u(3);
  for (int k = 0; k < 500; ++k) {
    rng.unit_vector(u);
    EXPECT_NEAR(ray_exit_radius(ConvexBody::ball(3, 2.0), u), 2.0, 1e-15);
    const double inf_norm = std::max({std::abs(u[0]), std::abs(u[1]), std::abs(u[2])});
    EXPECT_NEAR(ray_exit_radius(ConvexBody::cube(3, 1.5), u), 1.5 / inf_norm, 1e-12);
  }
  const std::vector<double> e2{0.0, 1.0, 0.0};
  EXPECT_TRUE(std::isinf(ray_exit_radius(ConvexBody::slab(1.0, unit(3, 0)), e2)));
  EXPECT_TRUE(std::isinf(ray_exit_radius(ConvexBody::halfspaces(3, unit(3, 0), 1.0), e2)));
}

TEST(Rays, DistanceRadiusInvertsDistance) {
  RandomStream rng(18);
  const std::size_t n = 5;
  const std::vector<ConvexBody> bodies = {ConvexBody::ball(n, 1.2), ConvexBody::cube(n, 0.9),
                                          ConvexBody::slab(0.4, {0.0, 0.6, 0.0, 0.8, 0.0})};
  std::vector<double> u(n), x(n);
  for (int k = 0; k < 2000; ++k) {
    rng.unit_vector(u);
    for (const auto& body : bodies) {
      for (double eps : {1e-3, 0.05, 0.7}) {
        const double r = ray_distance_radius(body, u, eps);
        if (!std::isfinite(r)) continue;
        for (std::size_t i = 0; i < n; ++i) x[i] = r * u[i];
        EXPECT_NEAR(distance(body, x).value, eps, 1e-10 * std::max(1.0, r)) << body.type_name();
        EXPECT_GE(r, ray_exit_radius(body, u));
      }
    }
  }
  const std::vector<double> e1 = unit(3, 0);
  EXPECT_THROW(ray_distance_radius(ConvexBody::halfspaces(3, e1, 1.0), e1, 0.1), UnsupportedVariantError);
  EXPECT_NEAR(norm(e1), 1.0, 0.0);
}
