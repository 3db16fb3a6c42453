#pragma once

#include <cmath>
#include <optional>
#include <vector>

namespace robosim {

constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::sqrt(x * x + y * y); }
  Vec2 normalized() const {
    double n = norm();
    return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
  }
};

struct Segment {
  Vec2 a;
  Vec2 b;
};

// Axis-aligned rectangle, min <= max componentwise.
struct Rect {
  Vec2 min;
  Vec2 max;

  bool contains(const Vec2& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  std::vector<Segment> edges() const {
    return {{{min.x, min.y}, {max.x, min.y}},
            {{max.x, min.y}, {max.x, max.y}},
            {{max.x, max.y}, {min.x, max.y}},
            {{min.x, max.y}, {min.x, min.y}}};
  }
};

inline double normalize_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

inline Vec2 heading_dir(double heading) {
  return {std::cos(heading), std::sin(heading)};
}

// Distance along the ray (origin, dir) to the segment, if it intersects.
inline std::optional<double> ray_segment_distance(const Vec2& origin, const Vec2& dir,
                                                  const Segment& seg) {
  const Vec2 e = seg.b - seg.a;
  const double denom = dir.x * e.y - dir.y * e.x;
  const Vec2 d = seg.a - origin;
  if (std::abs(denom) < 1e-12) return std::nullopt;  // parallel
  const double t = (d.x * e.y - d.y * e.x) / denom;
  const double u = (dir.x * d.y - dir.y * d.x) / -denom;
  if (t < 0.0 || u < 0.0 || u > 1.0) return std::nullopt;
  return t;
}

inline double point_segment_distance(const Vec2& p, const Segment& seg) {
  const Vec2 e = seg.b - seg.a;
  const double len2 = e.dot(e);
  if (len2 < 1e-18) return (p - seg.a).norm();
  double t = (p - seg.a).dot(e) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (seg.a + e * t)).norm();
}

inline double point_rect_distance(const Vec2& p, const Rect& r) {
  const double dx = std::max({r.min.x - p.x, 0.0, p.x - r.max.x});
  const double dy = std::max({r.min.y - p.y, 0.0, p.y - r.max.y});
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace robosim
