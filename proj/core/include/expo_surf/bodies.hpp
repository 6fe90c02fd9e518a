#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace expo_surf {

/// Euclidean ball of the given radius centred at the origin.
struct Ball {
  double radius;
};

/// The cube [-half_side, half_side]ⁿ.
struct Cube {
  double half_side;
};

/// {x : |<x, normal>| <= offset}.
struct Slab {
  double offset;
  std::vector<double> normal;
};

/// {x : <x, d_i> <= offset for every direction d_i}. Directions are stored
/// row-major and shared between copies, so copying a body is cheap.
struct HalfspaceIntersection {
  std::shared_ptr<const std::vector<double>> directions;
  std::size_t count;
  double offset;

  std::span<const double> direction(std::size_t i, std::size_t dim) const {
    return {directions->data() + i * dim, dim};
  }
};

class ConvexBody {
 public:
  using Shape = std::variant<Ball, Cube, Slab, HalfspaceIntersection>;

  static ConvexBody ball(std::size_t n, double radius);
  static ConvexBody cube(std::size_t n, double half_side);
  /// `unit_normal` must have norm 1 within 1e-12; its size fixes n.
  static ConvexBody slab(double offset, std::vector<double> unit_normal);
  /// `directions` holds `directions.size() / n` unit vectors, row-major.
  static ConvexBody halfspaces(std::size_t n, std::vector<double> directions, double offset);

  std::size_t dim() const { return dim_; }
  const Shape& shape() const { return shape_; }
  std::string_view type_name() const;

 private:
  ConvexBody(std::size_t dim, Shape shape) : dim_(dim), shape_(std::move(shape)) {}

  std::size_t dim_;
  Shape shape_;
};

enum class DistanceKind { exact, lower_bound };

struct Distance {
  double value;
  DistanceKind kind;
};

bool contains(const ConvexBody& body, std::span<const double> x);

/// Euclidean distance from x to the body; exact for Ball, Cube and Slab. For
/// a halfspace intersection returns max_i(<x, d_i> - offset)_+, which never
/// exceeds the true distance.
Distance distance(const ConvexBody& body, std::span<const double> x);

/// A flat piece of the boundary lying in {y : <y, normal> = offset}.
/// `contains` decides whether a point of that hyperplane belongs to the
/// piece. Points shared by duplicate constraints are credited to exactly
/// one facet.
struct Facet {
  std::vector<double> normal;
  double offset;
  std::function<bool(std::span<const double>)> contains;
};

/// Facets of a Cube (2n), Slab (2) or HalfspaceIntersection (one per
/// direction). Throws UnsupportedVariantError for a Ball.
std::vector<Facet> facets(const ConvexBody& body);

/// Radius at which the ray t·u (u a unit vector) leaves the body; +inf if
/// it never does.
double ray_exit_radius(const ConvexBody& body, std::span<const double> u);

/// Radius r on the ray t·u with distance(body, r·u) = eps. Defined for the
/// exact-distance variants only (distance along a ray from an interior
/// point is nondecreasing past the exit radius). +inf if the ray never
/// reaches that distance.
double ray_distance_radius(const ConvexBody& body, std::span<const double> u, double eps);

}  // namespace expo_surf
