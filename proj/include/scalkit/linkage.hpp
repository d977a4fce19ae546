#pragma once

#include <string>
#include <vector>

#include "scalkit/geometry.hpp"

namespace scal {

/// Geometry of one slot-constrained adaptive linkage finger.
///
/// Points live in the finger frame: A at the origin, angles CCW from +x, with
/// the base drawn below the fingertip. Deployment flips this frame vertically
/// (see drive.hpp), so a bearing of +90 deg here points at the support.
/// Lengths are in mm, angles in radians.
struct LinkageParams {
  double base_unit_l = 10.0;
  double len_AB = 60.0;
  double len_CB = 70.0;
  double len_BD = 40.0;
  double len_AE = 20.0;
  double len_BF = 20.0;
  double len_BG = 20.0;
  double len_DI = 40.0;
  double gamma = deg2rad(160.0);  // interior angle of the bent link CBD at B
  double s_min = 50.0;            // slot travel |AC|
  double s_max = 110.0;
  double alpha = 0.0;    // bearing of AE
  double beta = 0.0;     // bearing of the slot AC
  double theta_T = 0.0;  // apex of the connector triangle BFG at B
  int branch_B = +1;     // +1: B on the CCW side of AC
  int branch_D = +1;     // bend direction of CBD
  int branch_T = +1;     // fold direction of theta_T
  double tip_offset = 0.0;  // fixed bearing of DI relative to DH

  friend bool operator==(const LinkageParams&, const LinkageParams&) = default;
};

/// Rotational-drive prototype (AB horizontal at s_min, fingertip along DH).
LinkageParams scal_r_params();
/// Linear-drive prototype.
LinkageParams scal_l_params();

struct SpringParams {
  double k_slot = 0.0;  // N/mm, equivalent linear stiffness on the slot
  double preload = 0.0; // N, biases C toward s_min
  double k1 = 500.0;    // N*mm/rad at the intermediate joint

  friend bool operator==(const SpringParams&, const SpringParams&) = default;
};

/// Solved joint positions. Core solves fill A, B, C, D; frame kinematics fills the rest.
struct ScalConfig {
  double s = 0.0;
  Vec2 A, B, C, D, E, F, G, H, I;
};

/// Invariant violations of `p`, one message each; empty when valid.
std::vector<std::string> param_violations(const LinkageParams& p);
std::vector<std::string> param_violations(const SpringParams& p);
/// Throws ScalError(InvalidParams) listing every violation.
void require_valid(const LinkageParams& p);

/// Closed-form loop closure at slot extension `s`. Fills A, B, C, D.
/// Throws OutOfRange outside [s_min, s_max] and DegenerateGeometry at tangency.
ScalConfig solve_scal(const LinkageParams& p, double s);

/// Tangency discriminant (|AB|^2 - x_B^2) at `s`; loop closure needs it positive.
double closure_discriminant(const LinkageParams& p, double s);

/// Parallelogram frames, connector and distal phalange on top of a solved core.
/// `fold` rotates the orientation imposed at AE (active fingertip), in radians.
ScalConfig frame_kinematics(const LinkageParams& p, const ScalConfig& core, double fold = 0.0);

/// Bearing of DI in the finger frame; independent of s.
double tip_bearing(const LinkageParams& p, double fold = 0.0);

struct TipPose {
  Vec2 point;
  double bearing = 0.0;
};

TipPose tip_pose(const LinkageParams& p, double s);

/// Full finger configuration at `s` (core + frames).
ScalConfig finger_config(const LinkageParams& p, double s, double fold = 0.0);

}  // namespace scal
