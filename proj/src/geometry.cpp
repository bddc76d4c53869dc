#include "seek/geometry.hpp"

#include <algorithm>
#include <limits>

namespace seek {

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 <= 0.0) return distance(p, a);
  double t = dot(p - a, ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + ab * t);
}

double Polygon::area() const {
  double acc = 0.0;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = pts[i];
    const Vec2& b = pts[(i + 1) % n];
    acc += cross(a, b);
  }
  return 0.5 * acc;
}

Vec2 Polygon::centroid() const {
  const double a = area();
  const std::size_t n = pts.size();
  if (std::abs(a) < 1e-12) {  // degenerate: fall back to vertex mean
    Vec2 m{};
    for (const Vec2& p : pts) m = m + p;
    return m * (1.0 / static_cast<double>(n));
  }
  Vec2 c{};
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = pts[i];
    const Vec2& q = pts[(i + 1) % n];
    const double w = cross(p, q);
    c.x += (p.x + q.x) * w;
    c.y += (p.y + q.y) * w;
  }
  return c * (1.0 / (6.0 * a));
}

bool Polygon::contains(const Vec2& p) const {
  const std::size_t n = pts.size();
  if (n < 3) return false;
  if (boundary_distance(p) < 1e-12) return true;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = pts[i];
    const Vec2& b = pts[j];
    const bool straddles = (a.y > p.y) != (b.y > p.y);
    if (straddles) {
      const double x_at = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (p.x < x_at) inside = !inside;
    }
  }
  return inside;
}

double Polygon::boundary_distance(const Vec2& p) const {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, point_segment_distance(p, pts[i], pts[(i + 1) % n]));
  }
  return best;
}

std::pair<Vec2, Vec2> Polygon::bbox() const {
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Vec2& p : pts) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  return {lo, hi};
}

static int orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double v = cross(b - a, c - a);
  if (v > 1e-12) return 1;
  if (v < -1e-12) return -1;
  return 0;
}

bool segments_properly_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const int o1 = orient(a, b, c);
  const int o2 = orient(a, b, d);
  const int o3 = orient(c, d, a);
  const int o4 = orient(c, d, b);
  return o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 && o1 != o2 && o3 != o4;
}

bool Polygon::is_simple() const {
  const std::size_t n = pts.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = pts[i];
    const Vec2& b = pts[(i + 1) % n];
    if (distance(a, b) < 1e-12) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      // skip adjacent edges (share a vertex)
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_properly_cross(a, b, pts[j], pts[(j + 1) % n])) return false;
    }
  }
  return true;
}

bool polygons_overlap(const Polygon& a, const Polygon& b) {
  // Interiors intersect iff edges properly cross or one strictly contains
  // a representative interior point of the other. Shared walls (touching
  // boundaries) do not count as overlap.
  const std::size_t na = a.pts.size();
  const std::size_t nb = b.pts.size();
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      if (segments_properly_cross(a.pts[i], a.pts[(i + 1) % na], b.pts[j],
                                  b.pts[(j + 1) % nb])) {
        return true;
      }
    }
  }
  const auto strictly_inside = [](const Polygon& poly, const Vec2& p) {
    return poly.contains(p) && poly.boundary_distance(p) > 1e-9;
  };
  if (strictly_inside(b, a.centroid()) || strictly_inside(a, b.centroid())) return true;
  // Vertex and edge-midpoint probes; midpoints catch axis-aligned partial
  // overlaps whose vertices all land on the other polygon's boundary.
  for (std::size_t i = 0; i < na; ++i) {
    if (strictly_inside(b, a.pts[i])) return true;
    if (strictly_inside(b, (a.pts[i] + a.pts[(i + 1) % na]) * 0.5)) return true;
  }
  for (std::size_t j = 0; j < nb; ++j) {
    if (strictly_inside(a, b.pts[j])) return true;
    if (strictly_inside(a, (b.pts[j] + b.pts[(j + 1) % nb]) * 0.5)) return true;
  }
  return false;
}

}  // namespace seek
