#include <cmath>
#include <cstring>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "scalkit/error.hpp"
#include "scalkit/linkage.hpp"

using namespace scal;

namespace {

// Closed-form circle intersection with C on the +x axis.
Vec2 oracle_B(double s, double ab, double cb) {
  const double x = (s * s + ab * ab - cb * cb) / (2 * s);
  return {x, std::sqrt(ab * ab - x * x)};
}

// Coarse-to-fine grid search minimizing the two length residuals.
Vec2 grid_B(double s, double ab, double cb) {
  const Vec2 C{s, 0};
  Vec2 best{0, 0};
  double lo_x = -ab, hi_x = ab, lo_y = 0, hi_y = ab;
  for (int level = 0; level < 8; ++level) {
    double err = 1e300;
    for (int i = 0; i <= 200; ++i)
      for (int j = 0; j <= 200; ++j) {
        const Vec2 p{lo_x + (hi_x - lo_x) * i / 200, lo_y + (hi_y - lo_y) * j / 200};
        const double e = std::abs(norm(p) - ab) + std::abs(distance(p, C) - cb);
        if (e < err) err = e, best = p;
      }
    const double wx = (hi_x - lo_x) / 20, wy = (hi_y - lo_y) / 20;
    lo_x = best.x - wx, hi_x = best.x + wx, lo_y = best.y - wy, hi_y = best.y + wy;
  }
  return best;
}

double stddev(const std::vector<double>& v) {
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double acc = 0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / v.size());
}

double signed_angle(Vec2 a, Vec2 b) { return std::atan2(cross(a, b), dot(a, b)); }

}  // namespace

TEST_CASE("loop closure matches the circle-intersection oracle") {
  const LinkageParams p;  // base geometry, slot along +x
  for (double s : {50.0, 110.0}) {
    const ScalConfig c = solve_scal(p, s);
    const Vec2 ref = oracle_B(s, 60, 70);
    const Vec2 grid = grid_B(s, 60, 70);
    CHECK(c.B.x == doctest::Approx(ref.x).epsilon(1e-12));
    CHECK(c.B.y == doctest::Approx(ref.y).epsilon(1e-12));
    CHECK(std::abs(grid.x - c.B.x) < 1e-4);
    CHECK(std::abs(grid.y - c.B.y) < 1e-4);
    CHECK(c.C.x == doctest::Approx(s));
  }
  const ScalConfig lo = solve_scal(p, 50.0), hi = solve_scal(p, 110.0);
  CHECK(std::abs(lo.B.x - 12.0) < 1e-4);
  CHECK(std::abs(lo.B.y - 58.7878) < 1e-4);
  CHECK(std::abs(hi.B.x - 49.0909) < 1e-4);
  // The published y at s = 110 is rounded up from 34.49757; compare at its precision.
  CHECK(std::abs(hi.B.y - 34.4977) < 1.5e-4);
}

TEST_CASE("branch_B selects the side of AC") {
  LinkageParams p = scal_r_params();
  const ScalConfig up = solve_scal(p, 80.0);
  p.branch_B = -1;
  const ScalConfig down = solve_scal(p, 80.0);
  CHECK(cross(up.C - up.A, up.B - up.A) > 0);
  CHECK(cross(down.C - down.A, down.B - down.A) < 0);
}

TEST_CASE("configuration invariants over 1000 slot samples") {
  for (const LinkageParams& p : {LinkageParams{}, scal_r_params(), scal_l_params()}) {
    for (int i = 0; i < 1000; ++i) {
      const double s = p.s_min + (p.s_max - p.s_min) * i / 999.0;
      const ScalConfig c = finger_config(p, s);
      REQUIRE(std::abs(distance(c.A, c.B) - p.len_AB) < 1e-9);
      REQUIRE(std::abs(distance(c.C, c.B) - p.len_CB) < 1e-9);
      REQUIRE(std::abs(distance(c.D, c.B) - p.len_BD) < 1e-9);
      REQUIRE(std::abs(distance(c.A, c.C) - s) < 1e-9);
      REQUIRE(std::abs(std::abs(signed_angle(c.C - c.B, c.D - c.B)) - p.gamma) < 1e-12);
      REQUIRE(norm((c.F - c.E) - (c.B - c.A)) < 1e-9);
      REQUIRE(norm((c.H - c.G) - (c.D - c.B)) < 1e-9);
      REQUIRE(std::abs(angle_between(c.F - c.B, c.G - c.B) - p.theta_T) < 1e-9);
    }
  }
}

TEST_CASE("frame kinematics identity chain") {
  LinkageParams p;
  const ScalConfig c = finger_config(p, 70.0);
  CHECK(std::abs(bearing(c.H - c.D)) < 1e-12);
  CHECK(std::abs(bearing(c.E - c.A)) < 1e-12);
}

TEST_CASE("fingertip bearing is constant over the slot travel") {
  struct Case {
    LinkageParams p;
    double expected_deg;
  };
  // alpha + theta_T + tip_offset for each prototype.
  for (const Case& k : {Case{scal_r_params(), 30.0 + 60.0 + 0.0}, Case{scal_l_params(), 0.0 + 20.0 + 70.0}}) {
    std::vector<double> tip, dh;
    for (int i = 0; i < 1000; ++i) {
      const double s = k.p.s_min + (k.p.s_max - k.p.s_min) * i / 999.0;
      const ScalConfig c = finger_config(k.p, s);
      tip.push_back(bearing(c.I - c.D));
      dh.push_back(bearing(c.H - c.D));
      const TipPose t = tip_pose(k.p, s);
      REQUIRE(t.point == c.I);
    }
    CHECK(stddev(tip) < 1e-9);
    CHECK(stddev(dh) < 1e-9);
    CHECK(std::abs(tip.front() - deg2rad(k.expected_deg)) < 1e-12);
    CHECK(std::abs(tip_bearing(k.p) - deg2rad(k.expected_deg)) < 1e-12);
  }
}

TEST_CASE("D locus runs downward and outward in the base-down drawing") {
  // Linear prototype: the finger frame is the base-down schematic.
  const LinkageParams p = scal_l_params();
  const Vec2 d0 = solve_scal(p, p.s_min).D, d1 = solve_scal(p, p.s_max).D;
  CHECK(d1.x - d0.x > 0);
  CHECK(d1.y - d0.y < 0);
}

TEST_CASE("tip pose is deterministic") {
  const LinkageParams p = scal_r_params();
  const TipPose a = tip_pose(p, 77.7), b = tip_pose(p, 77.7);
  CHECK(std::memcmp(&a, &b, sizeof a) == 0);
}

TEST_CASE("slot range and tangency errors") {
  const LinkageParams p;
  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const ScalError& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code_of([&] { solve_scal(p, 49.0); }) == ErrorCode::OutOfRange);
  CHECK(code_of([&] { solve_scal(p, 110.5); }) == ErrorCode::OutOfRange);
  LinkageParams t = p;
  t.s_max = 130.0;  // |AB| + |CB|: circles tangent
  CHECK(closure_discriminant(t, 130.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(code_of([&] { solve_scal(t, 130.0); }) == ErrorCode::DegenerateGeometry);
}

TEST_CASE("parameter violations are reported") {
  LinkageParams p;
  CHECK(param_violations(p).empty());
  p.s_min = 0.0;
  p.len_CB = 60.0;
  const auto v = param_violations(p);
  REQUIRE_FALSE(v.empty());
  CHECK(v.front().find("loop closure undefined") != std::string::npos);

  LinkageParams q;
  q.len_BF = 25.0;
  CHECK_FALSE(param_violations(q).empty());
  q = {};
  q.gamma = kPi;
  CHECK_FALSE(param_violations(q).empty());
  q = {};
  q.s_max = 140.0;
  CHECK_FALSE(param_violations(q).empty());
  CHECK_THROWS_AS(require_valid(q), ScalError);

  SpringParams sp;
  sp.k_slot = -1.0;
  CHECK_FALSE(param_violations(sp).empty());
}
