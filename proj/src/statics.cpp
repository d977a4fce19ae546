#include "scalkit/statics.hpp"

#include <fmt/format.h>

#include <cmath>
#include <utility>

#include "scalkit/error.hpp"
#include "scalkit/kernels.hpp"

namespace scal {

double pinch_force(const PinchGeometry& g) {
  const double arm = g.h1 + g.l1 * std::sin(g.theta1);
  if (!(arm > kSingularTol))
    throw ScalError(ErrorCode::Singular,
                    fmt::format("pinch lever arm h1 + l1 sin(theta1) = {} is singular", arm));
  return g.T_in / arm;
}

Mat2 envelope_jacobian(const EnvelopeGeometry& g) {
  return {{{g.h2, 0.0}, {g.l2 * std::cos(g.theta3 - g.theta2), g.h3}}};
}

namespace {

void require_lever_arms(const EnvelopeGeometry& g) {
  if (!(g.h2 > kSingularTol) || !(g.h3 > kSingularTol))
    throw ScalError(ErrorCode::Singular,
                    fmt::format("envelope lever arms h2 = {}, h3 = {} are singular", g.h2, g.h3));
}

}  // namespace

EnvelopeForces envelope_forces(const EnvelopeGeometry& g) {
  require_lever_arms(g);
  const double spring = g.k1 * g.theta3;
  return {g.T_in / g.h2 + spring * g.l2 * std::cos(g.theta3 - g.theta2) / (g.h2 * g.h3),
          -spring / g.h3};
}

EnvelopeForces envelope_forces_numeric(const EnvelopeGeometry& g) {
  require_lever_arms(g);
  // [F2 F3] J = r  <=>  J^T [F2 F3]^T = r^T.
  const Mat2 j = envelope_jacobian(g);
  double a[2][3] = {{j[0][0], j[1][0], g.T_in}, {j[0][1], j[1][1], -g.k1 * g.theta3}};
  if (std::abs(a[1][0]) > std::abs(a[0][0])) std::swap(a[0], a[1]);
  if (std::abs(a[0][0]) <= kSingularTol)
    throw ScalError(ErrorCode::Singular, "envelope Jacobian is singular");
  const double m = a[1][0] / a[0][0];
  for (int k = 0; k < 3; ++k) a[1][k] -= m * a[0][k];
  if (std::abs(a[1][1]) <= kSingularTol)
    throw ScalError(ErrorCode::Singular, "envelope Jacobian is singular");
  const double f3 = a[1][2] / a[1][1];
  const double f2 = (a[0][2] - a[0][1] * f3) / a[0][0];
  return {f2, f3};
}

PinchGeometry pinch_geometry_from_contact(Vec2 base, Vec2 distal_joint, Vec2 contact,
                                          Vec2 normal, double T_in) {
  const Vec2 n = unit(normal);
  const Vec2 link = distal_joint - base;
  PinchGeometry g;
  g.T_in = T_in;
  g.l1 = norm(link);
  // Angle between the rigidized link and the force line; l1 sin(theta1) is its moment arm.
  g.theta1 = angle_between(link, n);
  g.h1 = std::abs(cross(contact - base, n)) - g.l1 * std::sin(g.theta1);
  return g;
}

EnvelopeGeometry envelope_geometry_from_contacts(Vec2 proximal_joint, Vec2 intermediate_joint,
                                                 Vec2 contact1, Vec2 normal1, Vec2 contact2,
                                                 Vec2 normal2, double theta2, double theta3,
                                                 double T_in, double k1) {
  EnvelopeGeometry g;
  g.T_in = T_in;
  g.k1 = k1;
  g.theta2 = theta2;
  g.theta3 = theta3;
  g.l2 = distance(proximal_joint, intermediate_joint);
  g.h2 = std::abs(cross(contact1 - proximal_joint, unit(normal1)));
  g.h3 = std::abs(cross(contact2 - intermediate_joint, unit(normal2)));
  return g;
}

ForceGrid force_surface(const PinchSurfaceSpec& spec) {
  return kernels::pinch_grid_parallel(spec);
}

ForceGrid force_surface(const EnvelopeSurfaceSpec& spec) {
  return kernels::envelope_grid_parallel(spec);
}

}  // namespace scal
