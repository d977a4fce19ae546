#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "scalkit/contact.hpp"
#include "scalkit/error.hpp"

namespace scal {

namespace {

constexpr double kSlotEps = 1e-9;
constexpr Vec2 kProbeDir{0.0, -1.0};

std::vector<double> drive_schedule(double q0, double q1, double dq) {
  std::vector<double> qs;
  const double span = q1 - q0;
  const auto n = static_cast<std::size_t>(std::ceil(span / dq - 1e-9));
  qs.reserve(n + 1);
  for (std::size_t k = 0; k < n; ++k) qs.push_back(q0 + dq * static_cast<double>(k));
  qs.push_back(q1);
  return qs;
}

enum class Status { Continue, Secured, Failed };

class Runner {
 public:
  Runner(const GripperAssembly& g, const Scenario& sc, bool tilted) : g_(g), sc_(sc) {
    require_valid(g.finger);
    require_valid(sc.env);
    cfg_ = sc.settings;
    if (cfg_.dq == 0.0) cfg_.dq = default_dq(g.mode);
    if (!(cfg_.dq > 0.0) || !std::isfinite(cfg_.dq))
      throw ScalError(ErrorCode::InvalidSchedule, "drive increment must be positive");
    q_start_ = sc.q_start.value_or(g.q_min);
    q_end_ = sc.q_end.value_or(g.q_max);
    const double slack = 1e-9 * std::max(1.0, std::abs(g.q_max - g.q_min));
    if (!(q_start_ <= q_end_) || q_start_ < g.q_min - slack || q_end_ > g.q_max + slack)
      throw ScalError(ErrorCode::InvalidSchedule,
                      fmt::format("drive schedule [{}, {}] must be increasing within [{}, {}]",
                                  q_start_, q_end_, g.q_min, g.q_max));

    Pose2 env_pose{};
    if (tilted && sc.probe_tilt != 0.0 && !sc.env.objects.empty()) {
      // Tilting the probe is simulated as tilting the scene about the target.
      const Vec2 c = object_centroid(sc.env, 0);
      env_pose.rotation = -sc.probe_tilt;
      env_pose.translation = c - rotate(c, -sc.probe_tilt);
    }
    if (auto sup = support_solid(sc.env)) {
      support_ = HalfPlane{env_pose.apply(sup->point), env_pose.apply_direction(sup->normal)};
      up_ = support_->normal;
    }
    for (std::size_t i = 0; i < sc.env.objects.size(); ++i)
      objects_.push_back(transformed(object_solid(sc.env, i), env_pose));
    if (!sc.env.objects.empty()) target_ = env_pose.apply(object_centroid(sc.env, 0));

    trace_.mode = g.mode;
    trace_.s_min = g.finger.s_min;
    trace_.support = support_;
    trace_.objects = objects_;
  }

  double q_start() const { return q_start_; }
  double q_end() const { return q_end_; }
  double dq() const { return cfg_.dq; }
  bool has_objects() const { return !objects_.empty(); }
  const std::vector<Shape>& objects() const { return objects_; }
  const std::optional<HalfPlane>& support() const { return support_; }
  Vec2 target() const { return target_; }
  PhaseLabel phase() const { return phase_; }

  Pose2 base_pose(double probe) const {
    return {{sc_.base_x, sc_.base_height - probe}, 0.0};
  }

  std::vector<Shape> scene() const {
    std::vector<Shape> all;
    if (support_) all.emplace_back(*support_);
    all.insert(all.end(), objects_.begin(), objects_.end());
    return all;
  }

  // Tip-only contact flags against the support and the resting objects.
  void tip_flags(FingerFrame& f) const {
    f.support_contact = support_ && point_feature(*support_, f.pose.I).distance <= cfg_.contact_tol;
    f.object_contact = false;
    for (const Shape& o : objects_)
      if (point_feature(o, f.pose.I).distance <= cfg_.contact_tol) f.object_contact = true;
  }

  void phalange_flags(FingerFrame& f) const {
    const ScalConfig& c = f.pose;
    f.support_contact = support_ && std::min(segment_distance(*support_, c.B, c.D),
                                             segment_distance(*support_, c.D, c.I)) <=
                                        cfg_.contact_tol;
    f.intermediate_contact = f.distal_contact = false;
    for (const Shape& o : objects_) {
      if (segment_distance(o, c.B, c.D) <= cfg_.contact_tol) f.intermediate_contact = true;
      if (segment_distance(o, c.D, c.I) <= cfg_.contact_tol) f.distal_contact = true;
    }
    f.object_contact = f.intermediate_contact || f.distal_contact;
  }

  std::optional<ConstrainedStep> constrained(Side side, const DriveState& drive,
                                             const std::vector<Shape>& solids, ContactSet set) {
    try {
      return step_constrained(g_, side, drive, solids, 0.0, set, cfg_);
    } catch (const ScalError& e) {
      if (e.code() == ErrorCode::NoSolution || e.code() == ErrorCode::BracketFailure)
        return std::nullopt;
      throw;
    }
  }

  void set_phase(PhaseLabel p) { phase_ = p; }

  void commit(SimFrame frame, const std::vector<EventKind>& events, double q) {
    frame.phase = phase_;
    if (attached_) {
      frame.held_object = held_;
      frame.object_offset = offset_;
      frame.object_clearance = clearance_;
    }
    last_q_ = frame.q;
    trace_.frames.push_back(frame);
    for (EventKind k : events) trace_.events.push_back({k, q, trace_.frames.size() - 1});
  }

  void note_support(const SimFrame& fr, std::vector<EventKind>& ev) {
    if (support_event_) return;
    if (!fr.fingers[0].support_contact && !fr.fingers[1].support_contact) return;
    support_event_ = true;
    ev.push_back(EventKind::FirstSupportContact);
    if (phase_ == PhaseLabel::FreeApproach) phase_ = PhaseLabel::SurfaceSlide;
  }

  // Frame at s_min for both fingers; only used when nothing has been simulated yet.
  SimFrame rigid_frame(double q, double probe) const {
    SimFrame fr;
    fr.q = q;
    fr.probe = probe;
    for (Side side : kSides) {
      FingerFrame& f = fr.fingers[static_cast<std::size_t>(side)];
      f.s = g_.finger.s_min;
      f.pose = finger_pose(g_, side, {g_.mode, q, f.s, base_pose(probe)});
    }
    return fr;
  }

  void fail(double q, std::optional<EventKind> cause = std::nullopt) {
    SimFrame fr = trace_.frames.empty() ? rigid_frame(q_start_, 0.0) : trace_.frames.back();
    std::vector<EventKind> ev;
    if (cause) ev.push_back(*cause);
    ev.push_back(EventKind::Failed);
    phase_ = PhaseLabel::Failed;
    commit(fr, ev, q);
  }

  // Both fingers at one drive input; nullopt when a slot cannot be resolved.
  std::optional<SimFrame> solve_pinch_frame(const DriveState& drive, double probe) {
    SimFrame fr;
    fr.q = drive.q;
    fr.probe = probe;
    for (Side side : kSides) {
      const auto i = static_cast<std::size_t>(side);
      std::vector<Shape> solids;
      if (support_) solids.emplace_back(*support_);
      if (attached_) {
        solids.emplace_back(faces_[i]);
        for (std::size_t k = 0; k < objects_.size(); ++k)
          if (static_cast<int>(k) != held_) solids.push_back(objects_[k]);
      } else {
        solids.insert(solids.end(), objects_.begin(), objects_.end());
      }
      const auto st = constrained(side, drive, solids, ContactSet::Tip);
      if (!st) return std::nullopt;
      FingerFrame& f = fr.fingers[i];
      f.s = st->s;
      f.pose = st->pose;
      tip_flags(f);
      if (attached_) f.object_contact = point_feature(faces_[i], f.pose.I).distance <= cfg_.contact_tol;
    }
    return fr;
  }

  // One drive step of the pinch-lift behavior: free tips until both pinch the
  // same object, then tips slide on the pinched faces and carry the object.
  // The pinch is taken at the drive input where it first forms, found by
  // bisection between the previous step and this one.
  Status pinch_step(const DriveState& drive, double probe) {
    auto solved = solve_pinch_frame(drive, probe);
    if (!solved) {
      fail(drive.q);
      return Status::Failed;
    }
    if (!attached_ && pinch_candidate(*solved) && last_q_ && *last_q_ < drive.q) {
      double lo = *last_q_, hi = drive.q;
      std::optional<SimFrame> first = solved;
      for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        DriveState d = drive;
        d.q = mid;
        auto fr = solve_pinch_frame(d, probe);
        if (fr && pinch_candidate(*fr)) {
          hi = mid;
          first = fr;
        } else {
          lo = mid;
        }
      }
      if (hi < drive.q) {
        const Status st = process_pinch_frame(*first);
        if (st != Status::Continue) return st;
        solved = solve_pinch_frame(drive, probe);
        if (!solved) {
          fail(drive.q);
          return Status::Failed;
        }
      }
    }
    return process_pinch_frame(*solved);
  }

  Status process_pinch_frame(SimFrame fr) {
    std::vector<EventKind> ev;
    note_support(fr, ev);

    const Vec2 tl = fr.fingers[0].pose.I, tr = fr.fingers[1].pose.I;
    if (!attached_) {
      try_attach(fr, ev);
    } else {
      Vec2 delta = held_offset(tl, tr);
      double lift = dot(delta, up_);
      if (lift < 0.0) {
        delta = delta - lift * up_;
        lift = 0.0;
      }
      offset_ = delta;
      clearance_ = lift;
      const Vec2 motion = 0.5 * ((tl - prev_tip_[0]) + (tr - prev_tip_[1]));
      const bool gripping = fr.fingers[0].object_contact && fr.fingers[1].object_contact;
      if (phase_ == PhaseLabel::ObjectContact && gripping && dot(motion, up_) > 0.0 &&
          clearance_ > cfg_.liftoff_clearance) {
        ev.push_back(EventKind::LiftOff);
        phase_ = PhaseLabel::Lift;
      }
      if (phase_ == PhaseLabel::Lift && clearance_ >= cfg_.secure_clearance) {
        ev.push_back(EventKind::Secured);
        phase_ = PhaseLabel::Secured;
      }
    }
    prev_tip_ = {tl, tr};
    commit(fr, ev, fr.q);
    return phase_ == PhaseLabel::Secured ? Status::Secured : Status::Continue;
  }

  SimTrace finish() {
    trace_.final_phase = phase_;
    return std::move(trace_);
  }

 private:
  // Flat faces pin only the axis component, so the object follows the tips'
  // mean tangential motion. A disk is placed through both tips.
  Vec2 held_offset(Vec2 tl, Vec2 tr) const {
    const Vec2 mean = 0.5 * ((tl - tip0_[0]) + (tr - tip0_[1]));
    const Vec2 flat = mean - dot(mean, axis_) * axis_;
    const auto* disk = std::get_if<Disk>(&objects_[static_cast<std::size_t>(held_)]);
    if (!disk) return flat;
    const double half = 0.5 * distance(tl, tr);
    if (!(half < disk->radius)) return flat;
    const Vec2 mid = 0.5 * (tl + tr);
    const Vec2 across = std::sqrt(disk->radius * disk->radius - half * half) * perp(unit(tr - tl));
    const Vec2 prev = disk->center + offset_;
    const Vec2 a = mid + across, b = mid - across;
    return (distance(a, prev) <= distance(b, prev) ? a : b) - disk->center;
  }

  struct Pinch {
    int object = -1;
    std::array<Vec2, 2> normal{};
  };

  // Both tips on the same object with opposing normals.
  std::optional<Pinch> pinch_candidate(const SimFrame& fr) const {
    std::array<int, 2> hit{-1, -1};
    std::array<Vec2, 2> normal{};
    for (std::size_t i = 0; i < 2; ++i) {
      double best = cfg_.contact_tol;
      for (std::size_t k = 0; k < objects_.size(); ++k) {
        const Feature ft = point_feature(objects_[k], fr.fingers[i].pose.I);
        if (ft.distance <= best) {
          best = ft.distance;
          hit[i] = static_cast<int>(k);
          normal[i] = ft.normal;
        }
      }
    }
    if (hit[0] < 0 || hit[0] != hit[1]) return std::nullopt;
    if (dot(normal[0], normal[1]) > -std::cos(cfg_.pinch_angle)) return std::nullopt;
    return Pinch{hit[0], normal};
  }

  void try_attach(const SimFrame& fr, std::vector<EventKind>& ev) {
    const auto pinch = pinch_candidate(fr);
    if (!pinch) return;
    const auto& normal = pinch->normal;
    attached_ = true;
    held_ = pinch->object;
    for (std::size_t i = 0; i < 2; ++i) {
      tip0_[i] = fr.fingers[i].pose.I;
      faces_[i] = HalfPlane{tip0_[i], normal[i]};
    }
    axis_ = unit(normal[1] - normal[0]);
    offset_ = {};
    clearance_ = 0.0;
    ev.push_back(EventKind::ObjectContact);
    phase_ = PhaseLabel::ObjectContact;
  }

  const GripperAssembly& g_;
  const Scenario& sc_;
  SimSettings cfg_;
  double q_start_ = 0.0, q_end_ = 0.0;
  std::optional<HalfPlane> support_;
  Vec2 up_{0.0, 1.0};
  std::vector<Shape> objects_;
  Vec2 target_{};
  SimTrace trace_;
  PhaseLabel phase_ = PhaseLabel::FreeApproach;
  bool support_event_ = false;

  std::optional<double> last_q_;
  bool attached_ = false;
  int held_ = -1;
  std::array<HalfPlane, 2> faces_{};
  std::array<Vec2, 2> tip0_{}, prev_tip_{};
  Vec2 axis_{1.0, 0.0};
  Vec2 offset_{};
  double clearance_ = 0.0;
};

}  // namespace

SimTrace run_scenario(const GripperAssembly& g, const Scenario& sc) {
  Runner r(g, sc, false);
  double last = r.q_start();
  for (double q : drive_schedule(r.q_start(), r.q_end(), r.dq())) {
    last = q;
    if (r.pinch_step({g.mode, q, 0.0, r.base_pose(0.0)}, 0.0) != Status::Continue)
      return r.finish();
  }
  if (r.has_objects()) r.fail(last);
  return r.finish();
}

SimTrace run_envelope(const GripperAssembly& g, const Scenario& sc) {
  if (g.mode != DriveMode::Rotational)
    throw ScalError(ErrorCode::InvalidArgument, "enveloping requires the rotational drive");
  if (sc.fold == 0.0) return run_scenario(g, sc);
  if (!(sc.fold > 0.0) || !(sc.fold_step > 0.0))
    throw ScalError(ErrorCode::InvalidArgument, "fold angle and fold step must be positive");
  if (sc.env.objects.empty())
    throw ScalError(ErrorCode::InvalidArgument, "enveloping needs an object");

  Runner r(g, sc, false);
  if (sc.env.objects.front().width > g.aperture) {
    r.fail(r.q_start(), EventKind::EnvelopeUnreachable);
    return r.finish();
  }

  const std::vector<Shape> solids = r.scene();
  std::vector<Shape> ground;
  if (const auto& sup = r.support()) ground.emplace_back(*sup);

  // Object overlap of the phalanges with the slot resolved against the support only;
  // used to stop the swing at the exact drive input of first object contact.
  auto object_overlap = [&](double q) -> std::optional<double> {
    const DriveState drive{g.mode, q, 0.0, r.base_pose(0.0)};
    double worst = -std::numeric_limits<double>::infinity();
    for (Side side : kSides) {
      const auto st = r.constrained(side, drive, ground, ContactSet::Phalanges);
      if (!st) return std::nullopt;
      worst = std::max(worst, penetration(st->pose, r.objects(), ContactSet::Phalanges));
    }
    return worst;
  };

  auto swing_frame = [&](double q) -> std::optional<SimFrame> {
    const DriveState drive{g.mode, q, 0.0, r.base_pose(0.0)};
    SimFrame fr;
    fr.q = q;
    for (Side side : kSides) {
      const auto st = r.constrained(side, drive, solids, ContactSet::Phalanges);
      if (!st) return std::nullopt;
      FingerFrame& f = fr.fingers[static_cast<std::size_t>(side)];
      f.s = st->s;
      f.pose = st->pose;
      r.phalange_flags(f);
    }
    return fr;
  };

  bool object_event = false;
  std::optional<SimFrame> closed;
  double q_fold = r.q_start();
  double q_prev = r.q_start();
  for (double q : drive_schedule(r.q_start(), r.q_end(), r.dq())) {
    if (!object_event && q > q_prev) {
      const auto pen = object_overlap(q);
      if (pen && *pen > 0.0) {
        double lo = q_prev, hi = q;
        for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
          const double mid = 0.5 * (lo + hi);
          const auto m = object_overlap(mid);
          (m && *m <= 0.0 ? lo : hi) = mid;
        }
        q = lo;
      }
    }
    q_prev = q;
    const auto frame = swing_frame(q);
    if (!frame) {
      r.fail(q);
      return r.finish();
    }
    SimFrame fr = *frame;
    std::vector<EventKind> ev;
    r.note_support(fr, ev);
    const bool left = fr.fingers[0].object_contact, right = fr.fingers[1].object_contact;
    if (!object_event && (left || right)) {
      object_event = true;
      ev.push_back(EventKind::ObjectContact);
      r.set_phase(PhaseLabel::ObjectContact);
    }
    if (left && right) {
      ev.push_back(EventKind::EnvelopeFold);
      r.set_phase(PhaseLabel::Envelope);
    }
    r.commit(fr, ev, q);
    if (left && right) {
      closed = fr;
      q_fold = q;
      break;
    }
  }
  if (!closed) {
    r.fail(q_fold);
    return r.finish();
  }

  // Fold each distal phalange about D at frozen drive and slot until it meets the object.
  const DriveState hold{g.mode, q_fold, 0.0, r.base_pose(0.0)};
  auto folded = [&](Side side, double s, double fold) {
    DriveState d = hold;
    d.s = s;
    return finger_pose(g, side, d, fold);
  };
  std::array<bool, 2> stopped{false, false};
  SimFrame fr = *closed;
  const auto steps = static_cast<std::size_t>(std::ceil(sc.fold / sc.fold_step - 1e-9));
  for (std::size_t k = 1; k <= steps && !(stopped[0] && stopped[1]); ++k) {
    const double target = k == steps ? sc.fold : sc.fold_step * static_cast<double>(k);
    for (Side side : kSides) {
      const auto i = static_cast<std::size_t>(side);
      if (stopped[i]) continue;
      FingerFrame& f = fr.fingers[i];
      const ScalConfig pose = folded(side, f.s, target);
      if (penetration(pose, solids, ContactSet::Phalanges) <= 0.0) {
        f.fold = target;
        f.pose = pose;
      } else {
        double lo = f.fold, hi = target;
        for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
          const double mid = 0.5 * (lo + hi);
          (penetration(folded(side, f.s, mid), solids, ContactSet::Phalanges) <= 0.0 ? lo : hi) =
              mid;
        }
        f.fold = lo;
        f.pose = folded(side, f.s, lo);
        stopped[i] = true;
      }
      r.phalange_flags(f);
      if (f.distal_contact) stopped[i] = true;
    }
    std::vector<EventKind> ev;
    const bool done = std::all_of(fr.fingers.begin(), fr.fingers.end(), [](const FingerFrame& f) {
      return f.intermediate_contact && f.distal_contact;
    });
    if (done) {
      ev.push_back(EventKind::Secured);
      r.set_phase(PhaseLabel::Secured);
    }
    r.commit(fr, ev, q_fold);
    if (done) return r.finish();
  }
  r.fail(q_fold);
  return r.finish();
}

SimTrace run_passive_open(const GripperAssembly& g, const Scenario& sc) {
  if (g.mode != DriveMode::Linear)
    throw ScalError(ErrorCode::InvalidArgument, "passive opening requires the linear drive");
  if (sc.env.objects.empty())
    throw ScalError(ErrorCode::InvalidArgument, "passive opening needs an object");
  if (!(sc.probe_step > 0.0) || !(sc.probe_max >= 0.0))
    throw ScalError(ErrorCode::InvalidArgument, "probe step must be positive");

  Runner r(g, sc, true);
  const std::vector<Shape> solids = r.scene();
  const double q = r.q_start();
  const double min_tangential = std::sin(sc.settings.min_incidence);
  const Vec2 c = r.target();
  std::array<bool, 2> touched{false, false};
  double probe = 0.0;
  bool open = false;
  for (std::size_t k = 0;; ++k) {
    probe = sc.probe_step * static_cast<double>(k);
    if (probe > sc.probe_max) {
      r.fail(q);
      return r.finish();
    }
    const DriveState drive{g.mode, q, 0.0, r.base_pose(probe)};
    SimFrame fr;
    fr.q = q;
    fr.probe = probe;
    std::vector<EventKind> ev;
    for (Side side : kSides) {
      const auto i = static_cast<std::size_t>(side);
      const auto st = r.constrained(side, drive, solids, ContactSet::Tip);
      if (!st) {
        r.fail(q);
        return r.finish();
      }
      FingerFrame& f = fr.fingers[i];
      f.s = st->s;
      f.pose = st->pose;
      r.tip_flags(f);
    }
    bool flat = false;
    for (std::size_t i = 0; i < 2; ++i) {
      const FingerFrame& f = fr.fingers[i];
      if (!f.object_contact || touched[i]) continue;
      touched[i] = true;
      Vec2 n{};
      double best = sc.settings.contact_tol;
      for (const Shape& o : r.objects()) {
        const Feature ft = point_feature(o, f.pose.I);
        if (ft.distance <= best) {
          best = ft.distance;
          n = ft.normal;
        }
      }
      // A reaction along the probe axis has no component that can drive the slot.
      if (std::abs(cross(n, kProbeDir)) < min_tangential) flat = true;
    }
    if (flat) {
      r.commit(fr, {}, q);
      r.fail(q, EventKind::OpeningNotTriggered);
      return r.finish();
    }
    r.note_support(fr, ev);
    if (fr.fingers[0].support_contact || fr.fingers[1].support_contact) {
      r.commit(fr, ev, q);
      r.fail(q);
      return r.finish();
    }
    const bool spread = std::any_of(fr.fingers.begin(), fr.fingers.end(), [&](const FingerFrame& f) {
      return f.object_contact && f.s > g.finger.s_min + kSlotEps;
    });
    if (r.phase() == PhaseLabel::FreeApproach && spread) {
      ev.push_back(EventKind::PassiveOpen);
      r.set_phase(PhaseLabel::PassiveOpen);
    }
    const Vec2 tl = fr.fingers[0].pose.I, tr = fr.fingers[1].pose.I;
    if (r.phase() == PhaseLabel::PassiveOpen && tl.y <= c.y && tr.y <= c.y && tl.x < c.x &&
        tr.x > c.x) {
      ev.push_back(EventKind::ApertureExceedsObject);
      open = true;
    }
    r.commit(fr, ev, q);
    if (open) break;
  }

  const std::vector<double> qs = drive_schedule(q, r.q_end(), r.dq());
  for (std::size_t k = 1; k < qs.size(); ++k)
    if (r.pinch_step({g.mode, qs[k], 0.0, r.base_pose(probe)}, probe) != Status::Continue)
      return r.finish();
  r.fail(qs.back());
  return r.finish();
}

SimTrace run(const GripperAssembly& g, const Scenario& sc) {
  switch (sc.behavior) {
    case Behavior::PinchLift: return run_scenario(g, sc);
    case Behavior::Envelope: return run_envelope(g, sc);
    case Behavior::PassiveOpen:
    case Behavior::ObliqueProbe: return run_passive_open(g, sc);
  }
  throw ScalError(ErrorCode::InvalidArgument, "unknown behavior");
}

}  // namespace scal
