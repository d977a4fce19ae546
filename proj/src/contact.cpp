#include "scalkit/contact.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "scalkit/error.hpp"

namespace scal {

std::optional<HalfPlane> support_solid(const Environment& env) {
  if (env.support.kind == SupportKind::None) return std::nullopt;
  const double phi = env.support.kind == SupportKind::Ramp ? env.support.incline : 0.0;
  return HalfPlane{{0.0, env.support.height}, {-std::sin(phi), std::cos(phi)}};
}

namespace {

struct Frame2 {
  Vec2 origin;   // support reference point
  Vec2 tangent;  // along the surface
  Vec2 normal;   // into free space
  double angle;
};

Frame2 support_frame(const Environment& env) {
  const double phi = env.support.kind == SupportKind::Ramp ? env.support.incline : 0.0;
  return {{0.0, env.support.height}, polar(1.0, phi), perp(polar(1.0, phi)), phi};
}

}  // namespace

Vec2 object_centroid(const Environment& env, std::size_t index) {
  const ObjectShape& o = env.objects.at(index);
  const Frame2 f = support_frame(env);
  const double rise = o.kind == ObjectKind::Disk ? 0.5 * o.width : 0.5 * o.height;
  return f.origin + o.position * f.tangent + rise * f.normal;
}

Shape object_solid(const Environment& env, std::size_t index) {
  const ObjectShape& o = env.objects.at(index);
  const Vec2 c = object_centroid(env, index);
  if (o.kind == ObjectKind::Disk) return Disk{c, 0.5 * o.width};
  return Box{c, {0.5 * o.width, 0.5 * o.height}, support_frame(env).angle};
}

void require_valid(const Environment& env) {
  if (env.support.kind == SupportKind::Ramp &&
      !(std::abs(env.support.incline) < deg2rad(45.0)))
    throw ScalError(ErrorCode::InvalidArgument,
                    fmt::format("ramp incline {} deg outside (-45, 45)",
                                rad2deg(env.support.incline)));
  for (std::size_t i = 0; i < env.objects.size(); ++i) {
    const ObjectShape& o = env.objects[i];
    if (!(o.width > 0.0) || (o.kind == ObjectKind::Rectangle && !(o.height > 0.0)))
      throw ScalError(ErrorCode::InvalidArgument,
                      fmt::format("object {} must have positive dimensions", i));
  }
}

double default_dq(DriveMode mode) {
  return mode == DriveMode::Rotational ? deg2rad(0.1) : 0.1;
}

SlotSolution resolve_slot(const std::function<double(double)>& pen, double s_lo, double s_hi,
                          double tol, std::size_t samples) {
  SlotSolution out;
  auto eval = [&](double s) {
    ++out.evaluations;
    const double v = pen(s);
    if (!std::isfinite(v))
      throw ScalError(ErrorCode::BracketFailure,
                      fmt::format("penetration is not finite at s = {}", s));
    return v;
  };

  double prev_s = s_lo;
  double prev_f = eval(s_lo);
  if (prev_f <= 0.0) {
    out.s = s_lo;
    return out;
  }
  samples = std::max<std::size_t>(samples, 1);
  for (std::size_t k = 1; k <= samples; ++k) {
    const double s = k == samples ? s_hi
                                  : s_lo + (s_hi - s_lo) * static_cast<double>(k) /
                                               static_cast<double>(samples);
    const double f = eval(s);
    if (f > prev_f + 1e-12) out.monotone = false;
    if (f <= 0.0) {
      double lo = prev_s, hi = s;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (eval(mid) > 0.0 ? lo : hi) = mid;
      }
      out.s = hi;
      return out;
    }
    prev_s = s;
    prev_f = f;
  }
  throw ScalError(ErrorCode::NoSolution,
                  fmt::format("penetration {:.6g} mm remains at s_max = {}{}", prev_f, s_hi,
                              out.monotone ? "" : " (penetration not monotone in s)"));
}

double penetration(const ScalConfig& pose, std::span<const Shape> solids, ContactSet set) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const Shape& solid : solids) {
    if (set == ContactSet::Tip) {
      worst = std::max(worst, -point_feature(solid, pose.I).distance);
    } else {
      worst = std::max({worst, -segment_distance(solid, pose.B, pose.D),
                        -segment_distance(solid, pose.D, pose.I)});
    }
  }
  return worst;
}

ConstrainedStep step_constrained(const GripperAssembly& g, Side side, const DriveState& drive,
                                 std::span<const Shape> solids, double fold, ContactSet set,
                                 const SimSettings& cfg) {
  DriveState d = drive;
  auto pose_at = [&](double s) {
    d.s = s;
    return finger_pose(g, side, d, fold);
  };
  if (solids.empty()) return {g.finger.s_min, pose_at(g.finger.s_min), true};
  const SlotSolution sol = resolve_slot(
      [&](double s) { return penetration(pose_at(s), solids, set); }, g.finger.s_min,
      g.finger.s_max, cfg.root_tol, cfg.bracket_samples);
  return {sol.s, pose_at(sol.s), sol.monotone};
}

std::string_view to_string(PhaseLabel p) {
  switch (p) {
    case PhaseLabel::FreeApproach: return "FreeApproach";
    case PhaseLabel::SurfaceSlide: return "SurfaceSlide";
    case PhaseLabel::ObjectContact: return "ObjectContact";
    case PhaseLabel::Lift: return "Lift";
    case PhaseLabel::Envelope: return "Envelope";
    case PhaseLabel::PassiveOpen: return "PassiveOpen";
    case PhaseLabel::Secured: return "Secured";
    case PhaseLabel::Failed: return "Failed";
  }
  return "?";
}

std::string_view to_string(EventKind e) {
  switch (e) {
    case EventKind::FirstSupportContact: return "FIRST_SUPPORT_CONTACT";
    case EventKind::ObjectContact: return "OBJECT_CONTACT";
    case EventKind::PassiveOpen: return "PASSIVE_OPEN";
    case EventKind::ApertureExceedsObject: return "APERTURE_EXCEEDS_OBJECT";
    case EventKind::EnvelopeFold: return "ENVELOPE_FOLD";
    case EventKind::LiftOff: return "LIFT_OFF";
    case EventKind::Secured: return "SECURED";
    case EventKind::Failed: return "FAILED";
    case EventKind::OpeningNotTriggered: return "OPENING_NOT_TRIGGERED";
    case EventKind::EnvelopeUnreachable: return "ENVELOPE_UNREACHABLE";
  }
  return "?";
}

bool SimTrace::has_event(EventKind k) const { return event_index(k).has_value(); }

std::optional<std::size_t> SimTrace::event_index(EventKind k) const {
  for (std::size_t i = 0; i < events.size(); ++i)
    if (events[i].kind == k) return i;
  return std::nullopt;
}

}  // namespace scal
