#include "mcms/polygeom.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mcms/cyclotomic.hpp"

namespace mcms {
namespace {

constexpr double kCollinearTol = 1e-12;
constexpr double kCollapseArea = 1e-18;
constexpr double kFeasibleSlack = 1e-9;

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double signed_area(const std::vector<Vec2>& v) {
  double s = 0.0;
  const std::size_t n = v.size();
  if (n < 3) return 0.0;
  const Vec2& o = v[0];
  for (std::size_t k = 1; k + 1 < n; ++k) s += cross(v[k] - o, v[k + 1] - o);
  return 0.5 * s;
}

// Keeps the part of a convex polygon with <p, n> <= b.
std::vector<Vec2> clip(const std::vector<Vec2>& poly, const Vec2& n, double b) {
  std::vector<Vec2> out;
  out.reserve(poly.size() + 1);
  const std::size_t m = poly.size();
  for (std::size_t k = 0; k < m; ++k) {
    const Vec2& p = poly[k];
    const Vec2& q = poly[(k + 1) % m];
    const double dp = p.dot(n) - b;
    const double dq = q.dot(n) - b;
    if (dp <= 0.0) out.push_back(p);
    if ((dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0)) {
      out.push_back(p + (q - p) * (dp / (dp - dq)));
    }
  }
  return out;
}

std::vector<Vec2> intersect_halfplanes(const std::vector<Vec2>& normals,
                                       const std::vector<double>& offsets,
                                       const BoundingBox& box, double slack) {
  std::vector<Vec2> poly{box.lo, Vec2(box.hi.x(), box.lo.y()), box.hi,
                         Vec2(box.lo.x(), box.hi.y())};
  for (std::size_t e = 0; e < normals.size() && !poly.empty(); ++e) {
    poly = clip(poly, normals[e], offsets[e] + slack);
  }
  return poly;
}

Vec2 polygon_centroid(const std::vector<Vec2>& v) {
  const Vec2 o = v[0];
  double a = 0.0;
  Vec2 c(0.0, 0.0);
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    const Vec2 p = v[k] - o;
    const Vec2 q = v[k + 1] - o;
    const double t = cross(p, q);
    a += t;
    c += t * (p + q) / 3.0;
  }
  if (std::abs(a) > 0.0) return o + c / a;
  // Degenerate (segment-like): centre of the bounding box.
  Vec2 lo = v[0], hi = v[0];
  for (const Vec2& p : v) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Region Region::point(const Vec2& u) {
  Region r;
  r.kind_ = Kind::Point;
  r.vertices_ = {u};
  return r;
}

Region Region::polygon(std::vector<Vec2> v) {
  double scale = 1.0;
  for (const Vec2& p : v) scale = std::max(scale, p.norm());

  // Consecutive duplicates (including the wrap-around pair).
  std::vector<Vec2> dedup;
  for (const Vec2& p : v) {
    if (dedup.empty() || (p - dedup.back()).norm() > kCollinearTol * scale) {
      dedup.push_back(p);
    }
  }
  while (dedup.size() > 1 &&
         (dedup.front() - dedup.back()).norm() <= kCollinearTol * scale) {
    dedup.pop_back();
  }
  if (dedup.size() < 3) throw std::invalid_argument("degenerate polygon");
  if (signed_area(dedup) < 0.0) std::reverse(dedup.begin(), dedup.end());

  // Drop collinear vertices; any right turn means non-convex input.
  bool changed = true;
  while (changed && dedup.size() >= 3) {
    changed = false;
    const std::size_t n = dedup.size();
    for (std::size_t k = 0; k < n; ++k) {
      const Vec2& a = dedup[(k + n - 1) % n];
      const Vec2& b = dedup[k];
      const Vec2& c = dedup[(k + 1) % n];
      const Vec2 e1 = b - a;
      const Vec2 e2 = c - b;
      const double turn = cross(e1, e2) / (e1.norm() * e2.norm());
      if (std::abs(turn) <= kCollinearTol) {
        dedup.erase(dedup.begin() + static_cast<std::ptrdiff_t>(k));
        changed = true;
        break;
      }
      if (turn < 0.0) throw std::invalid_argument("polygon is not convex");
    }
  }
  if (dedup.size() < 3) throw std::invalid_argument("degenerate polygon");

  // All left turns but winding more than once (e.g. a pentagram).
  double winding = 0.0;
  const std::size_t n = dedup.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 e1 = dedup[(k + 1) % n] - dedup[k];
    const Vec2 e2 = dedup[(k + 2) % n] - dedup[(k + 1) % n];
    winding += std::atan2(cross(e1, e2), e1.dot(e2));
  }
  if (std::abs(winding - 2.0 * std::numbers::pi) > 1e-6) {
    throw std::invalid_argument("polygon is not simple");
  }
  if (!(signed_area(dedup) > 0.0)) throw std::invalid_argument("degenerate polygon");

  Region r;
  r.kind_ = Kind::Polygon;
  r.vertices_ = std::move(dedup);
  return r;
}

const Vec2& Region::point() const {
  if (kind_ != Kind::Point) throw std::logic_error("region is not a single point");
  return vertices_.front();
}

Region regular_pentagon() {
  std::vector<Vec2> v;
  for (int k = 0; k < 5; ++k) {
    const auto z = xi_power(k);
    v.emplace_back(z.real(), z.imag());
  }
  return Region::polygon(std::move(v));
}

double support(const Region& region, const Vec2& n) {
  if (region.is_empty()) throw std::domain_error("empty support");
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec2& p : region.vertices()) best = std::max(best, p.dot(n));
  return best;
}

Region linear_image(const Region& region, const Mat2& m) {
  switch (region.kind()) {
    case Region::Kind::Empty:
      return region;
    case Region::Kind::Point:
      return Region::point(m * region.point());
    case Region::Kind::Polygon:
      break;
  }
  if (!(std::abs(m.determinant()) > 0.0)) {
    throw std::invalid_argument("linear_image: singular map");
  }
  std::vector<Vec2> v;
  for (const Vec2& p : region.vertices()) v.push_back(m * p);
  return Region::polygon(std::move(v));
}

Region scaled(const Region& region, double factor) {
  return linear_image(region, factor * Mat2::Identity());
}

Region translated(const Region& region, const Vec2& offset) {
  switch (region.kind()) {
    case Region::Kind::Empty:
      return region;
    case Region::Kind::Point:
      return Region::point(region.point() + offset);
    case Region::Kind::Polygon:
      break;
  }
  std::vector<Vec2> v;
  for (const Vec2& p : region.vertices()) v.push_back(p + offset);
  return Region::polygon(std::move(v));
}

Region erode(const Region& container, const Region& shape) {
  if (container.is_empty() || shape.is_empty()) {
    throw std::invalid_argument("erode: empty operand");
  }
  if (container.is_point()) {
    if (shape.is_point()) return Region::point(container.point() - shape.point());
    return Region::empty();
  }

  const auto cv = container.vertices();
  const std::size_t n = cv.size();
  std::vector<Vec2> normals;
  std::vector<double> offsets;
  for (std::size_t e = 0; e < n; ++e) {
    const Vec2 d = cv[(e + 1) % n] - cv[e];
    const Vec2 normal = Vec2(d.y(), -d.x()).normalized();
    normals.push_back(normal);
    offsets.push_back(cv[e].dot(normal) - support(shape, normal));
  }

  BoundingBox box = bounding_box(container);
  const Vec2 anchor = shape.vertices().front();
  box.lo += -anchor - Vec2::Ones();
  box.hi += -anchor + Vec2::Ones();

  const auto exact = intersect_halfplanes(normals, offsets, box, 0.0);
  if (exact.size() >= 3 && signed_area(exact) >= kCollapseArea) {
    try {
      return Region::polygon(exact);
    } catch (const std::invalid_argument&) {
      // sliver below collinearity resolution; classified below
    }
  }
  const auto relaxed = intersect_halfplanes(normals, offsets, box, kFeasibleSlack);
  if (relaxed.empty()) return Region::empty();
  return Region::point(polygon_centroid(relaxed));
}

double area(const Region& region) {
  if (!region.is_polygon()) return 0.0;
  const auto v = region.vertices();
  return signed_area(std::vector<Vec2>(v.begin(), v.end()));
}

double perimeter(const Region& region) {
  if (!region.is_polygon()) return 0.0;
  const auto v = region.vertices();
  double s = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) s += (v[(k + 1) % v.size()] - v[k]).norm();
  return s;
}

double circumradius(const Region& region) {
  double r = 0.0;
  for (const Vec2& p : region.vertices()) r = std::max(r, p.norm());
  return r;
}

Vec2 centroid(const Region& region) {
  if (region.is_empty()) throw std::domain_error("centroid of empty region");
  if (region.is_point()) return region.point();
  const auto v = region.vertices();
  return polygon_centroid(std::vector<Vec2>(v.begin(), v.end()));
}

bool contains(const Region& region, const Vec2& u, double eps) {
  switch (region.kind()) {
    case Region::Kind::Empty:
      return false;
    case Region::Kind::Point:
      return (u - region.point()).norm() <= eps;
    case Region::Kind::Polygon:
      break;
  }
  const auto v = region.vertices();
  const std::size_t n = v.size();
  for (std::size_t e = 0; e < n; ++e) {
    const Vec2 d = v[(e + 1) % n] - v[e];
    if (cross(d, u - v[e]) < -eps * d.norm()) return false;
  }
  return true;
}

bool contains_interior(const Region& region, const Vec2& u, double eps) {
  if (!region.is_polygon()) return false;
  const auto v = region.vertices();
  const std::size_t n = v.size();
  for (std::size_t e = 0; e < n; ++e) {
    const Vec2 d = v[(e + 1) % n] - v[e];
    if (cross(d, u - v[e]) <= eps * d.norm()) return false;
  }
  return true;
}

BoundingBox bounding_box(const Region& region) {
  if (region.is_empty()) throw std::domain_error("bounding box of empty region");
  BoundingBox box{region.vertices().front(), region.vertices().front()};
  for (const Vec2& p : region.vertices()) {
    box.lo = box.lo.cwiseMin(p);
    box.hi = box.hi.cwiseMax(p);
  }
  return box;
}

bool GridSpec::covers(const BoundingBox& box) const {
  constexpr double slack = 1e-12;
  const Vec2 up = upper();
  return box.lo.x() >= origin.x() - slack && box.lo.y() >= origin.y() - slack &&
         box.hi.x() <= up.x() + slack && box.hi.y() <= up.y() + slack;
}

std::vector<double> rasterize(const Region& region, const GridSpec& grid,
                              int supersample) {
  if (!region.is_polygon()) {
    throw std::invalid_argument("measure-zero window: rasterization forbidden");
  }
  if (supersample < 1) throw std::invalid_argument("supersample must be >= 1");
  const BoundingBox box = bounding_box(region);
  if (!grid.covers(box)) {
    throw std::invalid_argument("rasterize: grid does not cover the window");
  }

  std::vector<double> out(grid.size(), 0.0);
  const auto v = region.vertices();
  const std::size_t n = v.size();
  const double h = grid.h;
  auto clamp_index = [](double t, int hi) {
    return std::clamp(static_cast<int>(std::floor(t)), 0, hi - 1);
  };
  const int ix0 = clamp_index((box.lo.x() - grid.origin.x()) / h, grid.nx);
  const int ix1 = clamp_index((box.hi.x() - grid.origin.x()) / h, grid.nx);
  const int iy0 = clamp_index((box.lo.y() - grid.origin.y()) / h, grid.ny);
  const int iy1 = clamp_index((box.hi.y() - grid.origin.y()) / h, grid.ny);
  const double inv = 1.0 / (supersample * supersample);

  for (int iy = iy0; iy <= iy1; ++iy) {
    for (int ix = ix0; ix <= ix1; ++ix) {
      const Vec2 lo = grid.origin + Vec2(ix * h, iy * h);
      const std::array<Vec2, 4> corners{lo, lo + Vec2(h, 0.0), lo + Vec2(h, h),
                                        lo + Vec2(0.0, h)};
      bool all_inside = true;
      bool separated = false;
      for (std::size_t e = 0; e < n && !separated; ++e) {
        const Vec2 d = v[(e + 1) % n] - v[e];
        int outside = 0;
        for (const Vec2& c : corners) {
          if (cross(d, c - v[e]) < 0.0) ++outside;
        }
        if (outside > 0) all_inside = false;
        if (outside == 4) separated = true;
      }
      double cover;
      if (separated) {
        cover = 0.0;
      } else if (all_inside) {
        cover = 1.0;
      } else {
        int hits = 0;
        for (int sy = 0; sy < supersample; ++sy) {
          for (int sx = 0; sx < supersample; ++sx) {
            const Vec2 p = lo + Vec2((sx + 0.5) * h / supersample,
                                     (sy + 0.5) * h / supersample);
            if (contains(region, p, 0.0)) ++hits;
          }
        }
        cover = hits * inv;
      }
      out[grid.index(ix, iy)] = cover;
    }
  }
  return out;
}

}  // namespace mcms
