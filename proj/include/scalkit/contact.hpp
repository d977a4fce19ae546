#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "scalkit/drive.hpp"
#include "scalkit/geometry.hpp"
#include "scalkit/linkage.hpp"

namespace scal {

// ---------------------------------------------------------------------------
// Environment

enum class SupportKind { None, Flat, Ramp };

/// Support surface through (0, height) in the world frame, inclined by `incline`.
struct Support {
  SupportKind kind = SupportKind::Flat;
  double incline = 0.0;  // rad, ramp angle; must lie in (-45, 45) deg
  double height = 0.0;
};

enum class ObjectKind { Rectangle, Disk };

/// Kinematic object resting on the support. `position` is measured along the
/// support surface from its reference point; rectangles sit flat on ramps.
struct ObjectShape {
  ObjectKind kind = ObjectKind::Rectangle;
  double width = 10.0;   // diameter for disks
  double height = 10.0;  // ignored for disks
  double position = 0.0;
};

struct Environment {
  Support support;
  std::vector<ObjectShape> objects;
};

std::optional<HalfPlane> support_solid(const Environment& env);
Shape object_solid(const Environment& env, std::size_t index);
/// Centroid of object `index` in the world frame.
Vec2 object_centroid(const Environment& env, std::size_t index);
/// Throws InvalidArgument on non-positive dimensions or out-of-range incline.
void require_valid(const Environment& env);

// ---------------------------------------------------------------------------
// Slot resolution

struct SimSettings {
  double dq = 0.0;                         // drive increment; 0 selects the mode default
  double contact_tol = 1e-6;               // mm
  double root_tol = 1e-10;                 // mm, slot bisection
  double liftoff_clearance = 0.5;          // mm
  double secure_clearance = 5.0;           // mm of object lift that counts as secured
  double pinch_angle = deg2rad(30.0);      // opposing normals within this of antiparallel
  double min_incidence = deg2rad(5.0);     // passive opening needs this much tangential reaction
  std::size_t bracket_samples = 64;        // slot samples scanned before bisection
};

/// Default drive increment: 0.1 deg (Rotational) or 0.1 mm (Linear).
double default_dq(DriveMode mode);

struct SlotSolution {
  double s = 0.0;
  bool monotone = true;  // sampled penetration never increased with s
  std::size_t evaluations = 0;
};

/// Smallest s in [s_lo, s_hi] with penetration(s) <= 0, bracketed on a uniform
/// scan and refined by bisection to `tol`. Throws NoSolution if even s_hi
/// penetrates and BracketFailure if penetration is not finite.
SlotSolution resolve_slot(const std::function<double(double)>& penetration, double s_lo,
                          double s_hi, double tol, std::size_t samples);

enum class ContactSet {
  Tip,        // fingertip point I only
  Phalanges,  // intermediate (B-D) and distal (D-I) segments
};

/// Penetration of one finger pose into the solids (positive = overlap).
double penetration(const ScalConfig& pose, std::span<const Shape> solids, ContactSet set);

struct ConstrainedStep {
  double s = 0.0;
  ScalConfig pose;
  bool monotone = true;
};

/// Smallest slot extension that keeps `side` out of every solid at drive.q
/// (drive.s is ignored).
ConstrainedStep step_constrained(const GripperAssembly& g, Side side, const DriveState& drive,
                                 std::span<const Shape> solids, double fold = 0.0,
                                 ContactSet set = ContactSet::Tip, const SimSettings& cfg = {});

// ---------------------------------------------------------------------------
// Scenario runs

enum class PhaseLabel { FreeApproach, SurfaceSlide, ObjectContact, Lift, Envelope, PassiveOpen,
                        Secured, Failed };

enum class EventKind {
  FirstSupportContact,
  ObjectContact,
  PassiveOpen,
  ApertureExceedsObject,
  EnvelopeFold,
  LiftOff,
  Secured,
  Failed,
  OpeningNotTriggered,
  EnvelopeUnreachable,
};

std::string_view to_string(PhaseLabel p);
/// Upper-snake event name used in event logs, e.g. LIFT_OFF.
std::string_view to_string(EventKind e);

enum class Behavior { PinchLift, Envelope, PassiveOpen, ObliqueProbe };

struct Scenario {
  Behavior behavior = Behavior::PinchLift;
  Environment env;
  double base_x = 0.0;        // gripper base origin in the world
  double base_height = 110.0;
  std::optional<double> q_start;  // defaults to the assembly's drive range
  std::optional<double> q_end;
  double fold = deg2rad(45.0);    // commanded fingertip fold (envelope)
  double fold_step = deg2rad(0.5);
  double probe_tilt = 0.0;        // rad; gripper tilt for oblique probing
  double probe_step = 0.1;        // mm
  double probe_max = 200.0;       // mm
  SimSettings settings;
};

struct FingerFrame {
  double s = 0.0;
  double fold = 0.0;
  ScalConfig pose;
  bool support_contact = false;
  bool object_contact = false;
  bool intermediate_contact = false;  // B-D segment on an object
  bool distal_contact = false;        // D-I segment on an object
};

struct SimFrame {
  double q = 0.0;
  double probe = 0.0;
  PhaseLabel phase = PhaseLabel::FreeApproach;
  std::array<FingerFrame, 2> fingers;  // index with Side
  int held_object = -1;
  Vec2 object_offset{};                // translation of the held object
  double object_clearance = 0.0;       // along the support normal

  bool any_contact(std::size_t finger) const {
    const auto& f = fingers[finger];
    return f.support_contact || f.object_contact;
  }
};

struct SimEvent {
  EventKind kind;
  double q = 0.0;
  std::size_t frame = 0;
};

struct SimTrace {
  std::vector<SimFrame> frames;
  std::vector<SimEvent> events;
  PhaseLabel final_phase = PhaseLabel::FreeApproach;
  DriveMode mode = DriveMode::Rotational;
  double s_min = 0.0;
  /// Solids as simulated (gripper frame; differs from the world only when tilted).
  std::optional<HalfPlane> support;
  std::vector<Shape> objects;

  bool has_event(EventKind k) const;
  std::optional<std::size_t> event_index(EventKind k) const;
  bool secured() const { return final_phase == PhaseLabel::Secured; }
  bool failed() const { return final_phase == PhaseLabel::Failed; }
};

/// Pinch-lift (flat or ramp) under the assembly's drive.
SimTrace run_scenario(const GripperAssembly& g, const Scenario& sc);
/// Rotational swing to intermediate-phalange contact, then a commanded fold.
SimTrace run_envelope(const GripperAssembly& g, const Scenario& sc);
/// Linear mode: probe along the gripper axis, open on contact, then close and lift.
SimTrace run_passive_open(const GripperAssembly& g, const Scenario& sc);
/// Dispatches on sc.behavior; throws InvalidArgument on a mode mismatch.
SimTrace run(const GripperAssembly& g, const Scenario& sc);

}  // namespace scal
