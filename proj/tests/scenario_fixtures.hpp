#pragma once

// Scenario loading and trace invariant checks shared by the scenario tests and
// the acceptance binary. The checks recompute distances from the frame poses
// instead of trusting the contact flags.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "scalkit/config.hpp"

namespace scal::testing {

inline std::string source_path(const std::string& rel) { return std::string(SCALKIT_SOURCE_DIR) + "/" + rel; }

struct Loaded {
  ConfigDocument config;
  GripperAssembly assembly;
  Scenario scenario;
};

inline Loaded load(const std::string& config, const std::string& scenario) {
  Loaded l;
  l.config = parse_config(read_file(source_path("configs/" + config)));
  l.assembly = l.config.assembly();
  l.scenario = to_scenario(parse_scenario(read_file(source_path("scenarios/" + scenario))), l.config);
  return l;
}

/// Most negative signed distance of any fingertip to the support or to any
/// object (held objects displaced by the frame's offset). With `phalanges`,
/// the B-D and D-I segments are included for objects.
inline double worst_clearance(const SimTrace& t, bool phalanges = false) {
  double worst = std::numeric_limits<double>::infinity();
  for (const SimFrame& f : t.frames) {
    for (const FingerFrame& ff : f.fingers) {
      if (t.support) worst = std::min(worst, point_feature(*t.support, ff.pose.I).distance);
      for (std::size_t i = 0; i < t.objects.size(); ++i) {
        const Vec2 off = f.held_object == static_cast<int>(i) ? f.object_offset : Vec2{};
        const Shape obj = transformed(t.objects[i], Pose2{off, 0.0});
        worst = std::min(worst, point_feature(obj, ff.pose.I).distance);
        if (phalanges)
          worst = std::min({worst, segment_distance(obj, ff.pose.B, ff.pose.D),
                            segment_distance(obj, ff.pose.D, ff.pose.I)});
      }
    }
  }
  return worst;
}

/// Frames where the slot is extended without any contact flag.
inline std::size_t spring_violations(const SimTrace& t) {
  std::size_t bad = 0;
  for (const SimFrame& f : t.frames)
    for (const FingerFrame& ff : f.fingers) {
      const bool contact = ff.support_contact || ff.object_contact || ff.intermediate_contact || ff.distal_contact;
      if (ff.s > t.s_min && !contact) ++bad;
    }
  return bad;
}

inline bool drive_monotone(const SimTrace& t) {
  for (std::size_t i = 1; i < t.frames.size(); ++i)
    if (t.frames[i].q < t.frames[i - 1].q) return false;
  return true;
}

/// Every phase change happens at a frame that carries an event.
inline bool phases_follow_events(const SimTrace& t) {
  for (std::size_t i = 1; i < t.frames.size(); ++i) {
    if (t.frames[i].phase == t.frames[i - 1].phase) continue;
    const bool evented = std::any_of(t.events.begin(), t.events.end(),
                                     [&](const SimEvent& e) { return e.frame == i; });
    if (!evented) return false;
  }
  return true;
}

/// `kinds` appear in this relative order (each at least once).
inline bool ordered(const SimTrace& t, std::initializer_list<EventKind> kinds) {
  std::size_t from = 0;
  for (EventKind k : kinds) {
    auto it = std::find_if(t.events.begin() + static_cast<long>(from), t.events.end(),
                           [&](const SimEvent& e) { return e.kind == k; });
    if (it == t.events.end()) return false;
    from = static_cast<std::size_t>(it - t.events.begin()) + 1;
  }
  return true;
}

/// Largest event-coordinate change between two runs with the same event sequence;
/// infinity when the sequences differ.
inline double event_shift(const SimTrace& a, const SimTrace& b) {
  if (a.events.size() != b.events.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    if (a.events[i].kind != b.events[i].kind) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::abs(a.events[i].q - b.events[i].q));
  }
  return worst;
}

/// Frame-by-frame bitwise equality of two traces.
inline bool identical(const SimTrace& a, const SimTrace& b) {
  if (a.frames.size() != b.frames.size() || a.events.size() != b.events.size()) return false;
  for (std::size_t i = 0; i < a.events.size(); ++i)
    if (a.events[i].kind != b.events[i].kind || a.events[i].q != b.events[i].q ||
        a.events[i].frame != b.events[i].frame)
      return false;
  for (std::size_t i = 0; i < a.frames.size(); ++i) {
    const SimFrame &x = a.frames[i], &y = b.frames[i];
    if (x.q != y.q || x.probe != y.probe || x.phase != y.phase || x.held_object != y.held_object ||
        x.object_offset != y.object_offset || x.object_clearance != y.object_clearance)
      return false;
    for (std::size_t s = 0; s < 2; ++s) {
      const FingerFrame &p = x.fingers[s], &q = y.fingers[s];
      if (p.s != q.s || p.fold != q.fold || p.pose.I != q.pose.I || p.pose.D != q.pose.D ||
          p.pose.B != q.pose.B || p.support_contact != q.support_contact ||
          p.object_contact != q.object_contact || p.intermediate_contact != q.intermediate_contact ||
          p.distal_contact != q.distal_contact)
        return false;
    }
  }
  return a.final_phase == b.final_phase;
}

}  // namespace scal::testing
