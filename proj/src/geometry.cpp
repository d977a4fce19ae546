#include "scalkit/geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "scalkit/error.hpp"

namespace scal {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::InvalidSchedule: return "InvalidSchedule";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidDocument: return "InvalidDocument";
  }
  return "Unknown";
}

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  return a <= -kPi ? a + 2.0 * kPi : a;
}

double angle_between(Vec2 a, Vec2 b) {
  return std::atan2(std::abs(cross(a, b)), dot(a, b));
}

Vec2 closest_point_on_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return a;
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  return distance(p, closest_point_on_segment(p, a, b));
}

bool segments_intersect(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
  auto orient = [](Vec2 p, Vec2 q, Vec2 r) { return cross(q - p, r - p); };
  auto on_segment = [](Vec2 p, Vec2 q, Vec2 r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
           std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
  };
  const double d1 = orient(b0, b1, a0);
  const double d2 = orient(b0, b1, a1);
  const double d3 = orient(a0, a1, b0);
  const double d4 = orient(a0, a1, b1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(b0, b1, a0)) return true;
  if (d2 == 0 && on_segment(b0, b1, a1)) return true;
  if (d3 == 0 && on_segment(a0, a1, b0)) return true;
  if (d4 == 0 && on_segment(a0, a1, b1)) return true;
  return false;
}

double segment_segment_distance(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
  if (segments_intersect(a0, a1, b0, b1)) return 0.0;
  return std::min({point_segment_distance(a0, b0, b1), point_segment_distance(a1, b0, b1),
                   point_segment_distance(b0, a0, a1), point_segment_distance(b1, a0, a1)});
}

Feature point_feature(const HalfPlane& h, Vec2 p) {
  const double d = dot(p - h.point, h.normal);
  return {d, h.normal, p - d * h.normal};
}

Feature point_feature(const Disk& disk, Vec2 p) {
  const Vec2 r = p - disk.center;
  const double len = norm(r);
  // At the exact center any direction is a valid normal; pick +y.
  const Vec2 n = len > 0.0 ? (1.0 / len) * r : Vec2{0.0, 1.0};
  return {len - disk.radius, n, disk.center + disk.radius * n};
}

Feature point_feature(const Box& box, Vec2 p) {
  const Vec2 local = rotate(p - box.center, -box.angle);
  const double qx = std::abs(local.x) - box.half_extent.x;
  const double qy = std::abs(local.y) - box.half_extent.y;
  const double sx = local.x < 0.0 ? -1.0 : 1.0;
  const double sy = local.y < 0.0 ? -1.0 : 1.0;
  Feature f;
  Vec2 n_local, c_local;
  if (qx > 0.0 || qy > 0.0) {
    const Vec2 out{sx * std::max(qx, 0.0), sy * std::max(qy, 0.0)};
    f.distance = norm(out);
    n_local = (1.0 / f.distance) * out;
    c_local = {std::clamp(local.x, -box.half_extent.x, box.half_extent.x),
               std::clamp(local.y, -box.half_extent.y, box.half_extent.y)};
  } else if (qx >= qy) {
    f.distance = qx;
    n_local = {sx, 0.0};
    c_local = {sx * box.half_extent.x, local.y};
  } else {
    f.distance = qy;
    n_local = {0.0, sy};
    c_local = {local.x, sy * box.half_extent.y};
  }
  f.normal = rotate(n_local, box.angle);
  f.closest = rotate(c_local, box.angle) + box.center;
  return f;
}

Feature point_feature(const Shape& s, Vec2 p) {
  return std::visit([&](const auto& shape) { return point_feature(shape, p); }, s);
}

namespace {

std::array<Vec2, 4> box_corners(const Box& b) {
  const Vec2 u = polar(1.0, b.angle);
  const Vec2 v = perp(u);
  const Vec2 hu = b.half_extent.x * u, hv = b.half_extent.y * v;
  return {b.center + hu + hv, b.center - hu + hv, b.center - hu - hv, b.center + hu - hv};
}

double segment_box_distance(const Box& box, Vec2 a, Vec2 b) {
  const auto corners = box_corners(box);
  bool hit = point_feature(box, a).distance <= 0.0 || point_feature(box, b).distance <= 0.0;
  for (std::size_t i = 0; i < 4 && !hit; ++i)
    hit = segments_intersect(a, b, corners[i], corners[(i + 1) % 4]);

  if (!hit) {
    double d = std::min(point_feature(box, a).distance, point_feature(box, b).distance);
    for (const Vec2& c : corners) d = std::min(d, point_segment_distance(c, a, b));
    return d;
  }

  // Separating-axis overlap on the box axes and the segment normal.
  const Vec2 u = polar(1.0, box.angle);
  std::array<Vec2, 3> axes{u, perp(u), Vec2{}};
  std::size_t n_axes = 2;
  if (a != b) axes[n_axes++] = perp(unit(b - a));
  double depth = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n_axes; ++k) {
    const Vec2 ax = axes[k];
    const double c = dot(box.center, ax);
    const double r = box.half_extent.x * std::abs(dot(u, ax)) +
                     box.half_extent.y * std::abs(dot(perp(u), ax));
    const double s0 = std::min(dot(a, ax), dot(b, ax));
    const double s1 = std::max(dot(a, ax), dot(b, ax));
    depth = std::min(depth, std::min(c + r - s0, s1 - (c - r)));
  }
  return -std::max(depth, 0.0);
}

}  // namespace

double segment_distance(const Shape& s, Vec2 a, Vec2 b) {
  if (const auto* h = std::get_if<HalfPlane>(&s))
    return std::min(point_feature(*h, a).distance, point_feature(*h, b).distance);
  if (const auto* d = std::get_if<Disk>(&s))
    return point_segment_distance(d->center, a, b) - d->radius;
  return segment_box_distance(std::get<Box>(s), a, b);
}

Shape transformed(const Shape& s, const Pose2& pose) {
  if (const auto* h = std::get_if<HalfPlane>(&s))
    return HalfPlane{pose.apply(h->point), pose.apply_direction(h->normal)};
  if (const auto* d = std::get_if<Disk>(&s)) return Disk{pose.apply(d->center), d->radius};
  const auto& b = std::get<Box>(s);
  return Box{pose.apply(b.center), b.half_extent, b.angle + pose.rotation};
}

}  // namespace scal
