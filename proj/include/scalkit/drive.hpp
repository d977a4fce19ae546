#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "scalkit/geometry.hpp"
#include "scalkit/linkage.hpp"

namespace scal {

enum class DriveMode { Rotational, Linear };

enum class Side : std::size_t { Left = 0, Right = 1 };
inline constexpr std::array<Side, 2> kSides{Side::Left, Side::Right};

/// One quasi-static drive frame.
struct DriveState {
  DriveMode mode = DriveMode::Rotational;
  double q = 0.0;     // rad (Rotational) or mm (Linear), inward positive
  double s = 0.0;     // slot extension
  Pose2 base_pose{};  // gripper base in the world (probe offsets, tilts)
};

/// Two mirrored fingers on a common base.
///
/// Gripper frame: origin midway between the base pivots, +y up (away from the
/// support), +x toward the right finger. The right finger's deployed frame is
/// the finger frame flipped vertically and placed at A = (+aperture/2, 0); the
/// left finger is its mirror about x = 0. Finger-frame +x is therefore outward.
struct GripperAssembly {
  LinkageParams finger = scal_r_params();
  DriveMode mode = DriveMode::Rotational;
  double aperture = 180.0;  // distance between base pivots at q = 0
  /// Rotation of the core A-B-C-D in the finger frame at q = 0 (Rotational);
  /// the drive adds q on top. The AE bearing is never rotated by the drive.
  double core_mount = 0.0;
  double q_min = 0.0;
  double q_max = deg2rad(90.0);
};

/// Both prototypes as shipped (rotational: 80 mm pivot spacing, core mounted at -150 deg).
GripperAssembly scal_r_assembly();
GripperAssembly scal_l_assembly();

/// Finger configuration for one side in the gripper/world frame at any slot
/// extension. `fold` is the active-fingertip rotation (inward positive).
ScalConfig finger_pose(const GripperAssembly& g, Side side, const DriveState& drive,
                       double fold = 0.0);

/// Maps a finger-frame direction into the world frame for `side`.
Vec2 finger_direction_to_world(const GripperAssembly& g, Side side, const DriveState& drive,
                               Vec2 d);

/// Free-space pose of both fingers (slot held at s_min). Index with Side.
std::array<ScalConfig, 2> free_space_pose(const GripperAssembly& g, const DriveState& drive);

/// Sampled joint loci over the slot travel.
struct TraceSweep {
  std::vector<double> s;
  std::vector<Vec2> B, D, I;
};

/// n uniformly spaced slot samples in [s_lo, s_hi], finger frame.
TraceSweep trace_sweep(const LinkageParams& p, double s_lo, double s_hi, std::size_t n);
/// Same, deployed for `side` at drive input q.
TraceSweep trace_sweep(const GripperAssembly& g, Side side, double q, double s_lo, double s_hi,
                       std::size_t n);

/// Joint locus as a polyline is simple (no two non-adjacent segments touch).
bool polyline_is_simple(const std::vector<Vec2>& pts);

}  // namespace scal
