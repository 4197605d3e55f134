#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mcms {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Membership tolerance for closed windows.
inline constexpr double kMembershipEps = 1e-9;

/// A convex window in the internal plane: empty, a single point, or a convex
/// polygon with counter-clockwise vertices and positive area.
class Region {
 public:
  enum class Kind { Empty, Point, Polygon };

  Region() = default;

  static Region empty() { return Region(); }
  static Region point(const Vec2& u);
  /// Validates convexity (collinear tolerance 1e-12), drops duplicate and
  /// collinear vertices, and reorients to CCW. Throws std::invalid_argument
  /// if fewer than three vertices survive or the polygon is not convex.
  static Region polygon(std::vector<Vec2> vertices);

  Kind kind() const { return kind_; }
  bool is_empty() const { return kind_ == Kind::Empty; }
  bool is_point() const { return kind_ == Kind::Point; }
  bool is_polygon() const { return kind_ == Kind::Polygon; }

  /// The location of a Point region; throws std::logic_error otherwise.
  const Vec2& point() const;
  /// Polygon vertices (CCW), the single point, or nothing.
  std::span<const Vec2> vertices() const { return vertices_; }

 private:
  Kind kind_ = Kind::Empty;
  std::vector<Vec2> vertices_;
};

/// conv{1, xi, ..., xi^4}: the regular pentagon with unit circumradius.
Region regular_pentagon();

/// max over the region of <x, n>. Throws std::domain_error("empty support").
double support(const Region& region, const Vec2& n);

/// Image under a linear map. Throws std::invalid_argument for singular maps
/// applied to a polygon.
Region linear_image(const Region& region, const Mat2& m);
Region scaled(const Region& region, double factor);
Region translated(const Region& region, const Vec2& offset);

/// Minkowski difference {u : shape + u is a subset of container}.
///
/// Each edge half-plane of the container is shifted inward by the support of
/// the shape in the edge normal, and the shifted half-planes are intersected.
/// Results with area below 1e-18 collapse to a Point (if feasible within
/// 1e-9) or to Empty. A lower-dimensional segment also collapses to a Point
/// at its midpoint; it is measure-zero either way.
Region erode(const Region& container, const Region& shape);

double area(const Region& region);
double perimeter(const Region& region);
/// Largest |v| over the region (distance from the origin).
double circumradius(const Region& region);
Vec2 centroid(const Region& region);

/// Closed-set membership: true iff u lies within distance eps of the region.
bool contains(const Region& region, const Vec2& u, double eps = kMembershipEps);
/// Open-set membership: true iff u lies at least eps inside every edge.
bool contains_interior(const Region& region, const Vec2& u,
                       double eps = kMembershipEps);

struct BoundingBox {
  Vec2 lo;
  Vec2 hi;
};
BoundingBox bounding_box(const Region& region);

/// Uniform cell grid; cell (ix, iy) covers origin + h*[ix, ix+1) x h*[iy, iy+1).
/// Values on a grid are stored row-major with y increasing.
struct GridSpec {
  Vec2 origin{0.0, 0.0};
  double h = 1.0;
  int nx = 0;
  int ny = 0;

  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * nx + ix;
  }
  Vec2 cell_center(int ix, int iy) const {
    return origin + Vec2((ix + 0.5) * h, (iy + 0.5) * h);
  }
  Vec2 upper() const { return origin + Vec2(nx * h, ny * h); }
  bool covers(const BoundingBox& box) const;
};

/// Per-cell coverage fraction of a polygon, estimated by supersample^2
/// stratified subsamples in cells crossed by the boundary. Throws
/// std::invalid_argument("measure-zero window: rasterization forbidden") for
/// Empty/Point regions and when the grid does not cover the polygon.
std::vector<double> rasterize(const Region& region, const GridSpec& grid,
                              int supersample);

}  // namespace mcms
