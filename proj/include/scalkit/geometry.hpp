#pragma once

#include <cmath>
#include <numbers>
#include <variant>

namespace scal {

inline constexpr double kPi = std::numbers::pi;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double k) { return {k * a.x, k * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
/// Counter-clockwise quarter turn.
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 unit(Vec2 a) { const double n = norm(a); return {a.x / n, a.y / n}; }
inline Vec2 polar(double length, double bearing) {
  return {length * std::cos(bearing), length * std::sin(bearing)};
}
inline Vec2 rotate(Vec2 a, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}
/// Bearing in (-pi, pi], CCW from +x.
inline double bearing(Vec2 a) { return std::atan2(a.y, a.x); }
/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);
/// Unsigned angle between two non-zero vectors, in [0, pi].
double angle_between(Vec2 a, Vec2 b);

/// Rigid planar transform: rotate about the origin, then translate.
struct Pose2 {
  Vec2 translation{};
  double rotation = 0.0;

  Vec2 apply(Vec2 p) const { return rotate(p, rotation) + translation; }
  Vec2 apply_direction(Vec2 d) const { return rotate(d, rotation); }
  Pose2 inverse() const { return {rotate(-translation, -rotation), -rotation}; }
};

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);
Vec2 closest_point_on_segment(Vec2 p, Vec2 a, Vec2 b);
bool segments_intersect(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1);
double segment_segment_distance(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1);

// ---------------------------------------------------------------------------
// Contact shapes. Signed distance is negative inside the solid.

/// Solid half-plane {p : dot(p - point, normal) <= 0}; normal points into free space.
struct HalfPlane {
  Vec2 point{};
  Vec2 normal{0.0, 1.0};
};

struct Disk {
  Vec2 center{};
  double radius = 1.0;
};

/// Oriented rectangle.
struct Box {
  Vec2 center{};
  Vec2 half_extent{1.0, 1.0};
  double angle = 0.0;
};

using Shape = std::variant<HalfPlane, Disk, Box>;

/// Nearest-feature query result: signed distance and outward unit normal.
struct Feature {
  double distance = 0.0;
  Vec2 normal{};
  Vec2 closest{};
};

Feature point_feature(const HalfPlane& h, Vec2 p);
Feature point_feature(const Disk& d, Vec2 p);
Feature point_feature(const Box& b, Vec2 p);
Feature point_feature(const Shape& s, Vec2 p);

/// Signed separation between a segment and a solid. Positive: gap; negative:
/// penetration depth (minimum translation along a separating axis).
double segment_distance(const Shape& s, Vec2 a, Vec2 b);

Shape transformed(const Shape& s, const Pose2& pose);

}  // namespace scal
