#include "scalkit/validate.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "scalkit/error.hpp"
#include "scalkit/kernels.hpp"
#include "scalkit/statics.hpp"

namespace scal {

namespace {

constexpr double kLengthTol = 1e-9;
constexpr double kAngleTol = 1e-9;
constexpr double kBendTol = 1e-12;

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const std::string& s : v) out += (out.empty() ? "" : "; ") + s;
  return out;
}

CheckResult bound(std::string name, double value, double limit, std::string_view unit) {
  return {std::move(name), value < limit,
          fmt::format("{:.3e} {} (limit {:.0e})", value, unit, limit)};
}

double mirror_residual(const ScalConfig& l, const ScalConfig& r) {
  double worst = 0.0;
  const Vec2 ScalConfig::*pts[] = {&ScalConfig::A, &ScalConfig::B, &ScalConfig::C,
                                   &ScalConfig::D, &ScalConfig::E, &ScalConfig::F,
                                   &ScalConfig::G, &ScalConfig::H, &ScalConfig::I};
  for (auto pt : pts) {
    const Vec2 a = l.*pt, b = r.*pt;
    worst = std::max(worst, norm(Vec2{a.x + b.x, a.y - b.y}));
  }
  return worst;
}

std::vector<Vec2> joints(const ScalConfig& c, bool frames) {
  if (frames) return {c.A, c.B, c.C, c.D, c.E, c.F, c.G, c.H, c.I};
  return {c.A, c.B, c.C, c.D};
}

void drive_checks(const ConfigDocument& doc, std::vector<CheckResult>& out) {
  const GripperAssembly g = doc.assembly();
  // With AE held in the world, the frames E-F-G-H do not swing with the core.
  const bool frames_rigid = g.mode == DriveMode::Linear;
  constexpr int kSteps = 12;
  double rigid = 0.0, mirror = 0.0;
  std::vector<double> bearings;
  std::optional<std::vector<Vec2>> ref;
  for (int k = 0; k <= kSteps; ++k) {
    const double q = g.q_min + (g.q_max - g.q_min) * k / kSteps;
    const auto pose = free_space_pose(g, {g.mode, q, g.finger.s_min, {}});
    mirror = std::max(mirror, mirror_residual(pose[0], pose[1]));
    const std::vector<Vec2> pts = joints(pose[1], frames_rigid);
    if (!ref) ref = pts;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        rigid = std::max(rigid, std::abs(distance(pts[i], pts[j]) - distance((*ref)[i], (*ref)[j])));
    for (const ScalConfig& c : pose) bearings.push_back(bearing(c.I - c.D));
  }
  out.push_back(bound(frames_rigid ? "drive rigid body (9 joints)" : "drive rigid body (core)",
                      rigid, kLengthTol, "mm"));
  out.push_back(bound("drive mirror symmetry", mirror, kLengthTol, "mm"));
  // Left and right bearings differ by the mirror; compare each side to its own first sample.
  double spread = 0.0;
  for (std::size_t i = 2; i < bearings.size(); ++i)
    spread = std::max(spread, std::abs(wrap_angle(bearings[i] - bearings[i % 2])));
  out.push_back(bound("drive tip bearing", spread, kAngleTol, "rad"));
}

void statics_checks(const ConfigDocument& doc, std::vector<CheckResult>& out) {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> angle(-kPi / 2, kPi / 2), arm(5.0, 60.0),
      link(10.0, 100.0), torque(100.0, 2000.0), unit_dist(-1.0, 1.0);
  double power = 0.0, mapping = 0.0;
  for (int i = 0; i < 10000; ++i) {
    EnvelopeGeometry e{torque(rng), doc.spring.k1, angle(rng), angle(rng), link(rng), arm(rng), arm(rng)};
    const EnvelopeForces f = envelope_forces(e);
    const EnvelopeForces n = envelope_forces_numeric(e);
    const double scale = std::max({1.0, std::abs(f.F2), std::abs(f.F3)});
    mapping = std::max({mapping, std::abs(f.F2 - n.F2) / scale, std::abs(f.F3 - n.F3) / scale});
    const Mat2 j = envelope_jacobian(e);
    const double d2 = unit_dist(rng), d3 = unit_dist(rng);
    const double ds1 = j[0][0] * d2 + j[0][1] * d3, ds2 = j[1][0] * d2 + j[1][1] * d3;
    const double input = e.T_in * d2 - e.k1 * e.theta3 * d3;
    const double contact = f.F2 * ds1 + f.F3 * ds2;
    power = std::max(power, std::abs(input - contact) / std::max(1.0, std::abs(e.T_in) + std::abs(e.k1 * e.theta3)));
  }
  out.push_back(bound("statics power balance", power, 1e-9, "rel"));
  out.push_back(bound("statics closed vs numeric", mapping, 1e-9, "rel"));

  const ForceGrid grid = force_surface(PinchSurfaceSpec{});
  const bool positive = std::all_of(grid.cells.begin(), grid.cells.end(),
                                    [](const ForceCell& c) { return !c.singular && c.value > 0.0; });
  out.push_back({"statics pinch surface", positive,
                 positive ? "all cells finite and positive" : "singular or non-positive cell"});
}

}  // namespace

std::vector<CheckResult> validate_config(const ConfigDocument& doc, std::size_t samples) {
  std::vector<CheckResult> out;
  const LinkageParams p = doc.linkage_params();
  const std::vector<std::string> lv = param_violations(p);
  out.push_back({"linkage parameters", lv.empty(), lv.empty() ? "ok" : join(lv)});
  const std::vector<std::string> sv = param_violations(doc.spring);
  out.push_back({"spring parameters", sv.empty(), sv.empty() ? "ok" : join(sv)});
  const bool drive_ok = doc.aperture > 0.0 && doc.drive.q_min <= doc.drive.q_max;
  out.push_back({"drive parameters", drive_ok, drive_ok ? "ok" : "aperture or drive range invalid"});

  const char* geometry_checks[] = {"loop closure link lengths", "bend angle", "parallelograms",
                                   "tip bearing constant",      "DH bearing constant",
                                   "branch continuity",         "D locus simple"};
  std::optional<kernels::ClosureResiduals> res;
  std::string why;
  if (!lv.empty()) {
    why = "not evaluated: invalid linkage parameters";
  } else {
    try {
      res = kernels::closure_residuals_parallel(p, samples);
    } catch (const ScalError& e) {
      why = fmt::format("{}: {}", to_string(e.code()), e.what());
    }
  }
  if (!res) {
    for (const char* name : geometry_checks) out.push_back({name, false, why});
  } else {
    out.push_back(bound(geometry_checks[0], res->link_length, kLengthTol, "mm"));
    out.push_back(bound(geometry_checks[1], res->bend_angle, kBendTol, "rad"));
    out.push_back(bound(geometry_checks[2], res->parallelogram, kLengthTol, "mm"));
    out.push_back(bound(geometry_checks[3], res->tip_bearing_stddev, kAngleTol, "rad sd"));
    out.push_back(bound(geometry_checks[4], res->dh_bearing_stddev, kAngleTol, "rad sd"));
    const double ratio = res->mean_step > 0.0 ? res->max_step / res->mean_step : 0.0;
    out.push_back({geometry_checks[5], res->mean_step > 0.0 && ratio <= 10.0,
                   fmt::format("max/mean step {:.4f} (limit 10)", ratio)});
    const TraceSweep t = trace_sweep(p, p.s_min, p.s_max, std::min<std::size_t>(samples, 601));
    const bool simple = polyline_is_simple(t.D);
    out.push_back({geometry_checks[6], simple, simple ? "no crossings" : "self-intersecting"});
  }

  if (res && drive_ok) {
    try {
      drive_checks(doc, out);
    } catch (const ScalError& e) {
      out.push_back({"drive kinematics", false, fmt::format("{}: {}", to_string(e.code()), e.what())});
    }
  } else {
    out.push_back({"drive kinematics", false, "not evaluated: invalid geometry or drive"});
  }
  statics_checks(doc, out);
  return out;
}

bool all_pass(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
}

std::string format_table(const std::vector<CheckResult>& results) {
  std::string out = fmt::format("{:<30} {:<6} {}\n", "check", "result", "detail");
  for (const CheckResult& r : results)
    out += fmt::format("{:<30} {:<6} {}\n", r.name, r.pass ? "PASS" : "FAIL", r.detail);
  return out;
}

}  // namespace scal
