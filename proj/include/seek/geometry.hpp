#ifndef SEEK_GEOMETRY_HPP
#define SEEK_GEOMETRY_HPP

#include <cmath>
#include <utility>
#include <vector>

namespace seek {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

  double norm() const { return std::hypot(x, y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

// Distance from point p to segment [a, b].
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

// Simple polygon (no self-intersections expected; validated by is_simple()).
struct Polygon {
  std::vector<Vec2> pts;

  double area() const;       // signed
  Vec2 centroid() const;     // area centroid
  bool contains(const Vec2& p) const;         // even-odd rule, boundary counts as inside
  double boundary_distance(const Vec2& p) const;  // min distance to any edge
  bool is_simple() const;
  std::pair<Vec2, Vec2> bbox() const;
};

// True if the interiors of the two polygons intersect (shared boundary is fine).
bool polygons_overlap(const Polygon& a, const Polygon& b);

// True if segments [a,b] and [c,d] properly cross (intersection in both interiors).
bool segments_properly_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

}  // namespace seek

#endif  // SEEK_GEOMETRY_HPP
