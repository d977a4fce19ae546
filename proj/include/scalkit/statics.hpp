#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "scalkit/geometry.hpp"

namespace scal {

/// Denominators (mm) at or below this raise ErrorCode::Singular.
inline constexpr double kSingularTol = 1e-9;

/// Distal-only contact with the finger rigidized about its base.
struct PinchGeometry {
  double T_in = 0.0;    // N*mm, equivalent input moment
  double h1 = 0.0;      // mm, distal contact to distal-joint lever arm
  double l1 = 0.0;      // mm, base to distal joint
  double theta1 = 0.0;  // rad, link angle from horizontal
};

/// F1 = T_in / (h1 + l1 sin(theta1)).
double pinch_force(const PinchGeometry& g);

/// Two-contact enveloping state. Angles CCW positive.
struct EnvelopeGeometry {
  double T_in = 0.0;
  double k1 = 0.0;  // N*mm/rad
  double theta2 = 0.0;
  double theta3 = 0.0;
  double l2 = 0.0;
  double h2 = 0.0;
  double h3 = 0.0;
};

using Mat2 = std::array<std::array<double, 2>, 2>;

/// Maps (d theta2, d theta3) to the contact-normal displacements (d s1, d s2).
Mat2 envelope_jacobian(const EnvelopeGeometry& g);

struct EnvelopeForces {
  double F2 = 0.0;  // proximal-side contact
  double F3 = 0.0;  // signed; follows the contact normal convention
};

/// Closed forms:
///   F2 = T_in/h2 + k1 theta3 l2 cos(theta3 - theta2) / (h2 h3),  F3 = -k1 theta3 / h3.
EnvelopeForces envelope_forces(const EnvelopeGeometry& g);

/// Same forces from the row system [F2 F3] J = [T_in, -k1 theta3], solved by
/// pivoted elimination on the assembled Jacobian.
EnvelopeForces envelope_forces_numeric(const EnvelopeGeometry& g);

/// Lever-arm reconstruction for a pinch from solved geometry: moment balance about
/// `base` for a force along `normal` at `contact`, split at the distal joint.
PinchGeometry pinch_geometry_from_contact(Vec2 base, Vec2 distal_joint, Vec2 contact,
                                          Vec2 normal, double T_in);

/// Lever arms of two contacts about their joints; theta2/theta3 are the link bearings.
EnvelopeGeometry envelope_geometry_from_contacts(Vec2 proximal_joint, Vec2 intermediate_joint,
                                                 Vec2 contact1, Vec2 normal1, Vec2 contact2,
                                                 Vec2 normal2, double theta2, double theta3,
                                                 double T_in, double k1);

// ---------------------------------------------------------------------------
// Force surfaces.

enum class ForceModel { Pinch, Envelope };

struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 1;

  double at(std::size_t i) const {
    if (n <= 1) return lo;
    return i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
};

struct ForceCell {
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;   // F1 (pinch) or F2 (envelope)
  double value2 = 0.0;  // F3 (envelope); unused for pinch
  bool singular = false;
};

/// Row-major over (x, y): cell index = ix * y.n + iy.
struct ForceGrid {
  ForceModel model = ForceModel::Pinch;
  GridAxis x_axis, y_axis;
  std::vector<ForceCell> cells;

  const ForceCell& at(std::size_t ix, std::size_t iy) const { return cells[ix * y_axis.n + iy]; }
};

struct PinchSurfaceSpec {
  double T_in = 1000.0;
  double l1 = 85.27;
  GridAxis theta1{deg2rad(45.0), deg2rad(120.0), 76};  // x axis, rad
  GridAxis h1{0.0, 40.0, 41};                           // y axis, mm
};

struct EnvelopeSurfaceSpec {
  double T_in = 1000.0;
  double k1 = 500.0;
  double l2 = 70.0;
  double h2 = 40.0;
  double h3 = 20.0;
  GridAxis theta2{deg2rad(-30.0), deg2rad(60.0), 91};  // x axis, rad
  GridAxis theta3{deg2rad(-30.0), deg2rad(60.0), 91};  // y axis, rad
};

/// Dense evaluation; singular cells are flagged with NaN values, never thrown.
ForceGrid force_surface(const PinchSurfaceSpec& spec);
ForceGrid force_surface(const EnvelopeSurfaceSpec& spec);

}  // namespace scal
