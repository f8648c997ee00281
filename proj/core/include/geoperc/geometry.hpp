#pragma once

#include <algorithm>
#include <cmath>
#include <compare>

#include "geoperc/errors.hpp"

namespace geoperc {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend auto operator<=>(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm2(Point2 a) { return dot(a, a); }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Axis-aligned closed rectangle [x_min, x_max] x [y_min, y_max] with
/// positive width and height.
class Rect {
 public:
  Rect(double x_min, double x_max, double y_min, double y_max)
      : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max) {
    if (!(std::isfinite(x_min) && std::isfinite(x_max) && std::isfinite(y_min) &&
          std::isfinite(y_max)))
      throw ParameterError("Rect: non-finite bound");
    if (!(x_min < x_max && y_min < y_max)) throw ParameterError("Rect: empty or inverted extent");
  }

  /// The l-infinity ball B_inf(center, half_side).
  static Rect square(Point2 center, double half_side) {
    return {center.x - half_side, center.x + half_side, center.y - half_side,
            center.y + half_side};
  }

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double y_min() const { return y_min_; }
  double y_max() const { return y_max_; }
  double width() const { return x_max_ - x_min_; }
  double height() const { return y_max_ - y_min_; }
  double area() const { return width() * height(); }
  double perimeter() const { return 2.0 * (width() + height()); }
  Point2 center() const { return {0.5 * (x_min_ + x_max_), 0.5 * (y_min_ + y_max_)}; }
  double circumradius() const { return 0.5 * std::hypot(width(), height()); }

  bool contains(Point2 p) const {
    return p.x >= x_min_ && p.x <= x_max_ && p.y >= y_min_ && p.y <= y_max_;
  }
  bool contains(const Rect& r) const {
    return r.x_min_ >= x_min_ && r.x_max_ <= x_max_ && r.y_min_ >= y_min_ && r.y_max_ <= y_max_;
  }

  Rect dilated(double d) const { return {x_min_ - d, x_max_ + d, y_min_ - d, y_max_ + d}; }

  /// Smallest rectangle containing both.
  Rect hull(const Rect& o) const {
    return {std::min(x_min_, o.x_min_), std::max(x_max_, o.x_max_), std::min(y_min_, o.y_min_),
            std::max(y_max_, o.y_max_)};
  }

  /// Euclidean distance from p to the rectangle (0 inside).
  double distance_to(Point2 p) const {
    const double dx = std::max({x_min_ - p.x, 0.0, p.x - x_max_});
    const double dy = std::max({y_min_ - p.y, 0.0, p.y - y_max_});
    return std::hypot(dx, dy);
  }

  friend bool operator==(const Rect&, const Rect&) = default;

 private:
  double x_min_, x_max_, y_min_, y_max_;
};

struct Segment {
  Point2 a;
  Point2 b;
};

inline double distance_to_segment(Point2 p, const Segment& s) {
  const Point2 d = s.b - s.a;
  const double len2 = norm2(d);
  double t = len2 > 0.0 ? dot(p - s.a, d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, s.a + t * d);
}

/// Closed Euclidean disc B(center, radius).
struct Disc {
  Point2 center;
  double radius = 0.0;

  bool contains(Point2 p) const { return norm2(p - center) <= radius * radius; }
  bool intersects(const Rect& r) const { return r.distance_to(center) <= radius; }
  bool intersects(const Segment& s) const { return distance_to_segment(center, s) <= radius; }

  friend bool operator==(const Disc&, const Disc&) = default;
};

}  // namespace geoperc
