#include "scalkit/drive.hpp"

#include "scalkit/error.hpp"
#include "scalkit/kernels.hpp"

namespace scal {

GripperAssembly scal_r_assembly() {
  GripperAssembly g;
  g.finger = scal_r_params();
  g.mode = DriveMode::Rotational;
  g.aperture = 80.0;
  g.core_mount = deg2rad(-150.0);
  g.q_min = 0.0;
  g.q_max = deg2rad(90.0);
  return g;
}

GripperAssembly scal_l_assembly() {
  GripperAssembly g;
  g.finger = scal_l_params();
  g.mode = DriveMode::Linear;
  g.aperture = 180.0;
  g.core_mount = 0.0;
  g.q_min = 0.0;
  g.q_max = 120.0;
  return g;
}

namespace {

Vec2 deploy(const GripperAssembly& g, Side side, const DriveState& drive, Vec2 p) {
  const bool right = side == Side::Right;
  // Vertical flip into the deployed orientation, then mirror for the left finger.
  const Vec2 local{right ? p.x : -p.x, -p.y};
  const double half = 0.5 * g.aperture;
  Vec2 pivot{right ? half : -half, 0.0};
  if (g.mode == DriveMode::Linear) pivot.x += right ? -drive.q : drive.q;
  return drive.base_pose.apply(pivot + local);
}

}  // namespace

Vec2 finger_direction_to_world(const GripperAssembly&, Side side, const DriveState& drive,
                               Vec2 d) {
  const Vec2 local{side == Side::Right ? d.x : -d.x, -d.y};
  return drive.base_pose.apply_direction(local);
}

ScalConfig finger_pose(const GripperAssembly& g, Side side, const DriveState& drive,
                       double fold) {
  ScalConfig core = solve_scal(g.finger, drive.s);
  const double turn = g.core_mount + (g.mode == DriveMode::Rotational ? drive.q : 0.0);
  if (turn != 0.0) {
    core.B = rotate(core.B, turn);
    core.C = rotate(core.C, turn);
    core.D = rotate(core.D, turn);
  }
  ScalConfig c = frame_kinematics(g.finger, core, fold);
  for (Vec2* pt : {&c.A, &c.B, &c.C, &c.D, &c.E, &c.F, &c.G, &c.H, &c.I})
    *pt = deploy(g, side, drive, *pt);
  return c;
}

std::array<ScalConfig, 2> free_space_pose(const GripperAssembly& g, const DriveState& drive) {
  if (drive.s != g.finger.s_min)
    throw ScalError(ErrorCode::InvalidArgument,
                    "free-space pose requires the slot held at s_min");
  if (drive.mode != g.mode)
    throw ScalError(ErrorCode::InvalidArgument, "drive mode does not match the assembly");
  return {finger_pose(g, Side::Left, drive), finger_pose(g, Side::Right, drive)};
}

TraceSweep trace_sweep(const LinkageParams& p, double s_lo, double s_hi, std::size_t n) {
  return kernels::trace_sweep_parallel(p, nullptr, Side::Right, 0.0, s_lo, s_hi, n);
}

TraceSweep trace_sweep(const GripperAssembly& g, Side side, double q, double s_lo, double s_hi,
                       std::size_t n) {
  return kernels::trace_sweep_parallel(g.finger, &g, side, q, s_lo, s_hi, n);
}

bool polyline_is_simple(const std::vector<Vec2>& pts) {
  const std::size_t m = pts.size() < 2 ? 0 : pts.size() - 1;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 2; j < m; ++j)
      if (segments_intersect(pts[i], pts[i + 1], pts[j], pts[j + 1])) return false;
  return true;
}

}  // namespace scal
