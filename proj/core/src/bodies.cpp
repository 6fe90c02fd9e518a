#include "expo_surf/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "expo_surf/errors.hpp"

namespace expo_surf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kUnitTolerance = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void require_unit(std::span<const double> v, const char* what) {
  const double norm = std::sqrt(dot(v, v));
  if (!(std::abs(norm - 1.0) <= kUnitTolerance)) {
    throw DomainError(std::string(what) + ": direction is not unit-norm (|v| = " +
                      std::to_string(norm) + ")");
  }
}

void require_dim(const ConvexBody& body, std::span<const double> x) {
  if (x.size() != body.dim()) throw DomainError("convex body: dimension mismatch");
}

}  // namespace

ConvexBody ConvexBody::ball(std::size_t n, double radius) {
  if (n == 0) throw DomainError("ball: dimension must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("ball: radius must be > 0");
  return ConvexBody(n, Ball{radius});
}

ConvexBody ConvexBody::cube(std::size_t n, double half_side) {
  if (n == 0) throw DomainError("cube: dimension must be >= 1");
  if (!(half_side > 0.0) || !std::isfinite(half_side)) {
    throw DomainError("cube: half_side must be > 0");
  }
  return ConvexBody(n, Cube{half_side});
}

ConvexBody ConvexBody::slab(double offset, std::vector<double> unit_normal) {
  if (unit_normal.empty()) throw DomainError("slab: empty normal");
  if (!(offset >= 0.0) || !std::isfinite(offset)) throw DomainError("slab: offset must be >= 0");
  require_unit(unit_normal, "slab");
  const std::size_t n = unit_normal.size();
  return ConvexBody(n, Slab{offset, std::move(unit_normal)});
}

ConvexBody ConvexBody::halfspaces(std::size_t n, std::vector<double> directions, double offset) {
  if (n == 0) throw DomainError("halfspaces: dimension must be >= 1");
  if (directions.empty() || directions.size() % n != 0) {
    throw DomainError("halfspaces: direction matrix size is not a positive multiple of n");
  }
  if (!(offset > 0.0) || !std::isfinite(offset)) {
    throw DomainError("halfspaces: offset must be > 0 so the origin is interior");
  }
  const std::size_t count = directions.size() / n;
  for (std::size_t i = 0; i < count; ++i) {
    require_unit(std::span<const double>(directions.data() + i * n, n), "halfspaces");
  }
  auto shared = std::make_shared<const std::vector<double>>(std::move(directions));
  return ConvexBody(n, HalfspaceIntersection{std::move(shared), count, offset});
}

std::string_view ConvexBody::type_name() const {
  return std::visit(Overloaded{[](const Ball&) { return std::string_view("ball"); },
                               [](const Cube&) { return std::string_view("cube"); },
                               [](const Slab&) { return std::string_view("slab"); },
                               [](const HalfspaceIntersection&) {
                                 return std::string_view("halfspaces");
                               }},
                    shape_);
}

bool contains(const ConvexBody& body, std::span<const double> x) {
  require_dim(body, x);
  const std::size_t n = body.dim();
  return std::visit(
      Overloaded{
          [&](const Ball& b) { return dot(x, x) <= b.radius * b.radius; },
          [&](const Cube& c) {
            return std::all_of(x.begin(), x.end(),
                               [&](double v) { return std::abs(v) <= c.half_side; });
          },
          [&](const Slab& s) { return std::abs(dot(x, s.normal)) <= s.offset; },
          [&](const HalfspaceIntersection& h) {
            for (std::size_t i = 0; i < h.count; ++i) {
              if (dot(x, h.direction(i, n)) > h.offset) return false;
            }
            return true;
          }},
      body.shape());
}

Distance distance(const ConvexBody& body, std::span<const double> x) {
  require_dim(body, x);
  const std::size_t n = body.dim();
  return std::visit(
      Overloaded{[&](const Ball& b) {
                   return Distance{std::max(std::sqrt(dot(x, x)) - b.radius, 0.0),
                                   DistanceKind::exact};
                 },
                 [&](const Cube& c) {
                   double d2 = 0.0;
                   for (double v : x) {
                     const double excess = std::abs(v) - c.half_side;
                     if (excess > 0.0) d2 += excess * excess;
                   }
                   return Distance{std::sqrt(d2), DistanceKind::exact};
                 },
                 [&](const Slab& s) {
                   return Distance{std::max(std::abs(dot(x, s.normal)) - s.offset, 0.0),
                                   DistanceKind::exact};
                 },
                 [&](const HalfspaceIntersection& h) {
                   double worst = 0.0;
                   for (std::size_t i = 0; i < h.count; ++i) {
                     worst = std::max(worst, dot(x, h.direction(i, n)) - h.offset);
                   }
                   return Distance{worst, DistanceKind::lower_bound};
                 }},
      body.shape());
}

std::vector<Facet> facets(const ConvexBody& body) {
  const std::size_t n = body.dim();
  return std::visit(
      Overloaded{
          [](const Ball&) -> std::vector<Facet> {
            throw UnsupportedVariantError("facets: a ball has no flat facets");
          },
          [&](const Cube& c) {
            std::vector<Facet> out;
            out.reserve(2 * n);
            for (std::size_t i = 0; i < n; ++i) {
              for (const double sign : {1.0, -1.0}) {
                std::vector<double> normal(n, 0.0);
                normal[i] = sign;
                const double s = c.half_side;
                out.push_back({std::move(normal), s, [i, s](std::span<const double> y) {
                                 for (std::size_t j = 0; j < y.size(); ++j) {
                                   if (j != i && std::abs(y[j]) > s) return false;
                                 }
                                 return true;
                               }});
              }
            }
            return out;
          },
          [&](const Slab& s) {
            std::vector<double> flipped(s.normal);
            for (double& v : flipped) v = -v;
            auto whole_plane = [](std::span<const double>) { return true; };
            return std::vector<Facet>{{s.normal, s.offset, whole_plane},
                                      {std::move(flipped), s.offset, whole_plane}};
          },
          [&](const HalfspaceIntersection& h) {
            std::vector<Facet> out;
            out.reserve(h.count);
            for (std::size_t i = 0; i < h.count; ++i) {
              const auto d = h.direction(i, n);
              out.push_back({std::vector<double>(d.begin(), d.end()), h.offset,
                             [h, i, n](std::span<const double> y) {
                               const double own = dot(y, h.direction(i, n));
                               for (std::size_t j = 0; j < h.count; ++j) {
                                 if (j == i) continue;
                                 const double other = dot(y, h.direction(j, n));
                                 // Ties only arise for duplicate directions; the
                                 // lowest index keeps the shared piece.
                                 if (other > own || (other == own && j < i)) return false;
                               }
                               return true;
                             }});
            }
            return out;
          }},
      body.shape());
}

double ray_exit_radius(const ConvexBody& body, std::span<const double> u) {
  require_dim(body, u);
  const std::size_t n = body.dim();
  return std::visit(
      Overloaded{[&](const Ball& b) { return b.radius; },
                 [&](const Cube& c) {
                   double m = 0.0;
                   for (double v : u) m = std::max(m, std::abs(v));
                   return m > 0.0 ? c.half_side / m : kInf;
                 },
                 [&](const Slab& s) {
                   const double c = std::abs(dot(u, s.normal));
                   return c > 0.0 ? s.offset / c : kInf;
                 },
                 [&](const HalfspaceIntersection& h) {
                   double r = kInf;
                   for (std::size_t i = 0; i < h.count; ++i) {
                     const double c = dot(u, h.direction(i, n));
                     if (c > 0.0) r = std::min(r, h.offset / c);
                   }
                   return r;
                 }},
      body.shape());
}

double ray_distance_radius(const ConvexBody& body, std::span<const double> u, double eps) {
  require_dim(body, u);
  if (!(eps >= 0.0)) throw DomainError("ray_distance_radius: eps must be >= 0");
  return std::visit(
      Overloaded{
          [&](const Ball& b) { return b.radius + eps; },
          [&](const Cube& c) {
            // Σ_i (r·a_i - s)_+² = eps² with a sorted descending; solve the
            // quadratic on each interval where the active set is fixed.
            std::vector<double> a(u.size());
            std::transform(u.begin(), u.end(), a.begin(), [](double v) { return std::abs(v); });
            std::sort(a.begin(), a.end(), std::greater<>());
            if (a.front() == 0.0) return kInf;
            const double s = c.half_side;
            double sum_a2 = 0.0, sum_a = 0.0;
            for (std::size_t k = 0; k < a.size() && a[k] > 0.0; ++k) {
              sum_a2 += a[k] * a[k];
              sum_a += a[k];
              const double count = static_cast<double>(k + 1);
              const double b = s * sum_a;
              const double disc = b * b - sum_a2 * (count * s * s - eps * eps);
              const double r = (b + std::sqrt(std::max(disc, 0.0))) / sum_a2;
              const bool last = (k + 1 == a.size()) || a[k + 1] == 0.0;
              if (last || r <= s / a[k + 1]) return r;
            }
            return kInf;
          },
          [&](const Slab& s) {
            const double c = std::abs(dot(u, s.normal));
            return c > 0.0 ? (s.offset + eps) / c : kInf;
          },
          [](const HalfspaceIntersection&) -> double {
            throw UnsupportedVariantError(
                "ray_distance_radius: halfspace intersections have no exact distance");
          }},
      body.shape());
}

}  // namespace expo_surf
