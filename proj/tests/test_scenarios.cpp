#include <vector>

#include "doctest.h"
#include "scalkit/error.hpp"
#include "scenario_fixtures.hpp"

using namespace scal;
using namespace scal::testing;

namespace {

struct Named {
  const char* config;
  const char* scenario;
};

const Named kAll[] = {
    {"scal_r.json", "pinch_lift_flat.json"},   {"scal_r.json", "ramp_20.json"},
    {"scal_r.json", "envelope_disk.json"},     {"scal_l.json", "passive_open_disk.json"},
    {"scal_l.json", "probe_rect_vertical.json"}, {"scal_l.json", "probe_rect_oblique.json"},
    {"scal_r.json", "empty.json"},
};

std::vector<PhaseLabel> phase_sequence(const SimTrace& t) {
  std::vector<PhaseLabel> out;
  for (const SimFrame& f : t.frames)
    if (out.empty() || out.back() != f.phase) out.push_back(f.phase);
  return out;
}

std::size_t first_frame(const SimTrace& t, std::size_t side, bool FingerFrame::*flag) {
  for (std::size_t i = 0; i < t.frames.size(); ++i)
    if (t.frames[i].fingers[side].*flag) return i;
  return t.frames.size();
}

double segment_circle_gap(Vec2 a, Vec2 b, const Disk& d) {
  const Vec2 ab = b - a;
  const double t = std::clamp(dot(d.center - a, ab) / dot(ab, ab), 0.0, 1.0);
  return distance(a + t * ab, d.center) - d.radius;
}

}  // namespace

TEST_CASE("trace invariants hold for every shipped scenario") {
  for (const Named& n : kAll) {
    const std::string name = n.scenario;
    CAPTURE(name);
    const Loaded l = load(n.config, n.scenario);
    const SimTrace t = run(l.assembly, l.scenario);
    REQUIRE_FALSE(t.frames.empty());
    CHECK(worst_clearance(t) >= -1e-6);
    CHECK(spring_violations(t) == 0);
    CHECK(drive_monotone(t));
    CHECK(phases_follow_events(t));
    const SimTrace again = run(l.assembly, l.scenario);
    CHECK(identical(t, again));
  }
}

TEST_CASE("refinement: halving the drive step moves events by less than one step") {
  for (const Named& n : kAll) {
    const std::string name = n.scenario;
    CAPTURE(name);
    Loaded l = load(n.config, n.scenario);
    const SimTrace coarse = run(l.assembly, l.scenario);
    const double dq = l.scenario.settings.dq;
    l.scenario.settings.dq = dq / 2;
    const SimTrace fine = run(l.assembly, l.scenario);
    CHECK(event_shift(coarse, fine) < dq);
  }
}

TEST_CASE("flat-table pinch-lift") {
  const Loaded l = load("scal_r.json", "pinch_lift_flat.json");
  const SimTrace t = run(l.assembly, l.scenario);
  CHECK(t.secured());
  CHECK(ordered(t, {EventKind::FirstSupportContact, EventKind::ObjectContact, EventKind::LiftOff,
                    EventKind::Secured}));
  const std::vector<PhaseLabel> expected{PhaseLabel::FreeApproach, PhaseLabel::SurfaceSlide,
                                         PhaseLabel::ObjectContact, PhaseLabel::Lift,
                                         PhaseLabel::Secured};
  CHECK(phase_sequence(t) == expected);
  const SimFrame& last = t.frames.back();
  CHECK(last.held_object == 0);
  CHECK(last.object_clearance >= l.scenario.settings.secure_clearance);
  // Lift-off clearance threshold is respected at the event.
  const auto lift = t.event_index(EventKind::LiftOff);
  REQUIRE(lift);
  CHECK(t.frames[t.events[*lift].frame].object_clearance > l.scenario.settings.liftoff_clearance);
}

TEST_CASE("20 degree ramp: support contact precedes object contact on each finger") {
  const Loaded l = load("scal_r.json", "ramp_20.json");
  const SimTrace t = run(l.assembly, l.scenario);
  CHECK(t.secured());
  for (std::size_t side = 0; side < 2; ++side) {
    CAPTURE(side);
    const std::size_t sup = first_frame(t, side, &FingerFrame::support_contact);
    const std::size_t obj = first_frame(t, side, &FingerFrame::object_contact);
    CHECK(obj < t.frames.size());
    CHECK(sup < obj);
  }
}

TEST_CASE("envelope on a 60 mm disk: two-point contact per finger") {
  const Loaded l = load("scal_r.json", "envelope_disk.json");
  const SimTrace t = run(l.assembly, l.scenario);
  CHECK(t.secured());
  CHECK(ordered(t, {EventKind::ObjectContact, EventKind::EnvelopeFold, EventKind::Secured}));
  CHECK(worst_clearance(t, true) >= -1e-6);
  REQUIRE(t.objects.size() == 1);
  const Disk disk = std::get<Disk>(t.objects[0]);
  CHECK(disk.radius == 30.0);
  const SimFrame& f = t.frames.back();
  for (const FingerFrame& ff : f.fingers) {
    CHECK(ff.fold > 0.0);
    CHECK(std::abs(segment_circle_gap(ff.pose.B, ff.pose.D, disk)) < 1e-6);
    CHECK(std::abs(segment_circle_gap(ff.pose.D, ff.pose.I, disk)) < 1e-6);
  }
}

TEST_CASE("envelope with zero fold reduces to the pinch attempt") {
  Loaded l = load("scal_r.json", "envelope_disk.json");
  l.scenario.fold = 0.0;
  const SimTrace a = run_envelope(l.assembly, l.scenario);
  Scenario pinch = l.scenario;
  pinch.behavior = Behavior::PinchLift;
  const SimTrace b = run_scenario(l.assembly, pinch);
  CHECK(identical(a, b));
}

TEST_CASE("envelope on an object wider than the aperture is unreachable") {
  Loaded l = load("scal_r.json", "envelope_disk.json");
  l.scenario.env.objects[0].width = l.assembly.aperture + 20.0;
  const SimTrace t = run(l.assembly, l.scenario);
  CHECK(t.failed());
  CHECK(t.has_event(EventKind::EnvelopeUnreachable));
}

TEST_CASE("passive opening on a disk") {
  const Loaded l = load("scal_l.json", "passive_open_disk.json");
  const SimTrace t = run(l.assembly, l.scenario);
  CHECK(t.secured());
  CHECK(ordered(t, {EventKind::PassiveOpen, EventKind::ApertureExceedsObject, EventKind::ObjectContact,
                    EventKind::LiftOff, EventKind::Secured}));
  // During the probe the drive is idle and the slot opens under contact.
  bool opened = false;
  for (const SimFrame& f : t.frames)
    if (f.phase == PhaseLabel::PassiveOpen) {
      CHECK(f.q == t.frames.front().q);
      opened = opened || (f.fingers[0].s > t.s_min && f.fingers[1].s > t.s_min);
    }
  CHECK(opened);
}

TEST_CASE("vertical probe on a flat top does not open; a tilted probe does") {
  const SimTrace v = [] {
    const Loaded l = load("scal_l.json", "probe_rect_vertical.json");
    return run(l.assembly, l.scenario);
  }();
  CHECK(v.failed());
  CHECK(v.has_event(EventKind::OpeningNotTriggered));
  CHECK_FALSE(v.has_event(EventKind::PassiveOpen));

  for (double tilt : {15.0, -15.0}) {
    CAPTURE(tilt);
    Loaded l = load("scal_l.json", "probe_rect_oblique.json");
    l.scenario.probe_tilt = deg2rad(tilt);
    const SimTrace o = run(l.assembly, l.scenario);
    CHECK(o.secured());
    CHECK(ordered(o, {EventKind::PassiveOpen, EventKind::Secured}));
    CHECK(worst_clearance(o) >= -1e-6);
  }
}

TEST_CASE("empty environment: free approach only") {
  const Loaded l = load("scal_r.json", "empty.json");
  const SimTrace t = run(l.assembly, l.scenario);
  CHECK(t.events.empty());
  for (const SimFrame& f : t.frames) CHECK(f.phase == PhaseLabel::FreeApproach);
  CHECK_FALSE(t.failed());
}

TEST_CASE("behavior and drive mode must agree") {
  Loaded l = load("scal_r.json", "envelope_disk.json");
  CHECK_THROWS_AS(run(scal_l_assembly(), l.scenario), ScalError);
  Loaded p = load("scal_l.json", "passive_open_disk.json");
  CHECK_THROWS_AS(run(scal_r_assembly(), p.scenario), ScalError);
}

TEST_CASE("invalid schedules are rejected") {
  Loaded l = load("scal_r.json", "pinch_lift_flat.json");
  l.scenario.q_start = deg2rad(50.0);
  l.scenario.q_end = deg2rad(10.0);
  CHECK_THROWS_AS(run(l.assembly, l.scenario), ScalError);
  l.scenario.q_start = deg2rad(-10.0);
  l.scenario.q_end = std::nullopt;
  CHECK_THROWS_AS(run(l.assembly, l.scenario), ScalError);
}
