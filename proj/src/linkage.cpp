#include "scalkit/linkage.hpp"

#include <fmt/format.h>

#include <cmath>

#include "scalkit/error.hpp"

namespace scal {

namespace {

LinkageParams table_geometry(double l) {
  LinkageParams p;
  p.base_unit_l = l;
  p.len_AB = 6.0 * l;
  p.len_CB = 7.0 * l;
  p.len_BD = 4.0 * l;
  p.len_AE = 2.0 * l;
  p.len_BF = 2.0 * l;
  p.len_BG = 2.0 * l;
  p.len_DI = 4.0 * l;
  p.gamma = deg2rad(160.0);
  p.s_min = 5.0 * l;
  p.s_max = 11.0 * l;
  return p;
}

}  // namespace

LinkageParams scal_r_params() {
  LinkageParams p = table_geometry(10.0);
  p.alpha = deg2rad(30.0);
  p.beta = deg2rad(78.463);
  p.theta_T = deg2rad(60.0);
  p.tip_offset = 0.0;
  return p;
}

LinkageParams scal_l_params() {
  LinkageParams p = table_geometry(10.0);
  p.alpha = deg2rad(0.0);
  p.beta = deg2rad(-15.0);
  p.theta_T = deg2rad(20.0);
  p.tip_offset = deg2rad(70.0);
  return p;
}

std::vector<std::string> param_violations(const LinkageParams& p) {
  std::vector<std::string> out;
  const std::pair<const char*, double> lengths[] = {
      {"base_unit_l", p.base_unit_l}, {"len_AB", p.len_AB}, {"len_CB", p.len_CB},
      {"len_BD", p.len_BD},           {"len_AE", p.len_AE}, {"len_BF", p.len_BF},
      {"len_BG", p.len_BG},           {"len_DI", p.len_DI}};
  for (const auto& [name, v] : lengths)
    if (!(v > 0.0)) out.push_back(fmt::format("{} must be positive (got {})", name, v));
  if (!(p.s_min > 0.0))
    out.push_back(fmt::format("loop closure undefined: s_min must be positive (got {})", p.s_min));
  if (!(p.s_min < p.s_max))
    out.push_back(fmt::format("s_min ({}) must be below s_max ({})", p.s_min, p.s_max));
  if (std::abs(p.len_AB - p.len_CB) > p.s_min || p.s_max > p.len_AB + p.len_CB)
    out.push_back(fmt::format(
        "loop closure does not exist over the slot: need |AB-CB| = {} <= s_min = {} and "
        "s_max = {} <= AB+CB = {}",
        std::abs(p.len_AB - p.len_CB), p.s_min, p.s_max, p.len_AB + p.len_CB));
  const double tol = 1e-9 * std::max(1.0, p.len_AE);
  if (std::abs(p.len_AE - p.len_BF) > tol || std::abs(p.len_AE - p.len_BG) > tol)
    out.push_back(fmt::format("parallelogram short sides must match: AE={} BF={} BG={}",
                              p.len_AE, p.len_BF, p.len_BG));
  if (!(p.gamma > 0.0 && p.gamma < kPi))
    out.push_back(fmt::format("gamma must lie in (0, 180) deg (got {} deg)", rad2deg(p.gamma)));
  for (auto [name, b] : {std::pair{"branch_B", p.branch_B}, std::pair{"branch_D", p.branch_D},
                         std::pair{"branch_T", p.branch_T}})
    if (b != 1 && b != -1) out.push_back(fmt::format("{} must be +1 or -1 (got {})", name, b));
  return out;
}

std::vector<std::string> param_violations(const SpringParams& p) {
  std::vector<std::string> out;
  if (!(p.k_slot >= 0.0)) out.push_back("spring.k_slot must be non-negative");
  if (!(p.preload >= 0.0)) out.push_back("spring.preload must be non-negative");
  if (!(p.k1 >= 0.0)) out.push_back("spring.k1 must be non-negative");
  return out;
}

void require_valid(const LinkageParams& p) {
  const auto v = param_violations(p);
  if (v.empty()) return;
  std::string msg = "invalid linkage parameters:";
  for (const auto& s : v) msg += "\n  " + s;
  throw ScalError(ErrorCode::InvalidParams, msg);
}

double closure_discriminant(const LinkageParams& p, double s) {
  const double x = (s * s + p.len_AB * p.len_AB - p.len_CB * p.len_CB) / (2.0 * s);
  return p.len_AB * p.len_AB - x * x;
}

ScalConfig solve_scal(const LinkageParams& p, double s) {
  if (!(s >= p.s_min && s <= p.s_max))
    throw ScalError(ErrorCode::OutOfRange,
                    fmt::format("slot extension {} outside [{}, {}]", s, p.s_min, p.s_max));

  const Vec2 u = polar(1.0, p.beta);
  const double x = (s * s + p.len_AB * p.len_AB - p.len_CB * p.len_CB) / (2.0 * s);
  const double disc = p.len_AB * p.len_AB - x * x;
  if (disc < 1e-12 * p.len_AB * p.len_AB)
    throw ScalError(ErrorCode::DegenerateGeometry,
                    fmt::format("loop-closure circles tangent or disjoint at s = {} "
                                "(discriminant {:.3e})", s, disc));
  const double y = p.branch_B * std::sqrt(disc);

  ScalConfig c;
  c.s = s;
  c.A = {0.0, 0.0};
  c.C = s * u;
  c.B = x * u + y * perp(u);
  // CBD is one member bent at B: BD leaves B along CB's extension, turned by pi - gamma.
  const Vec2 along = unit(c.B - c.C);
  c.D = c.B + p.len_BD * rotate(along, p.branch_D * (kPi - p.gamma));
  return c;
}

double tip_bearing(const LinkageParams& p, double fold) {
  return p.alpha + fold + p.branch_T * p.theta_T + p.tip_offset;
}

ScalConfig frame_kinematics(const LinkageParams& p, const ScalConfig& core, double fold) {
  ScalConfig c = core;
  const double ae = p.alpha + fold;
  const double bg = ae + p.branch_T * p.theta_T;
  c.E = c.A + polar(p.len_AE, ae);
  c.F = c.B + (c.E - c.A);
  c.G = c.B + polar(p.len_BG, bg);
  c.H = c.D + (c.G - c.B);
  c.I = c.D + polar(p.len_DI, tip_bearing(p, fold));
  return c;
}

ScalConfig finger_config(const LinkageParams& p, double s, double fold) {
  return frame_kinematics(p, solve_scal(p, s), fold);
}

TipPose tip_pose(const LinkageParams& p, double s) {
  const ScalConfig c = finger_config(p, s);
  return {c.I, bearing(c.I - c.D)};
}

}  // namespace scal
