#include <cstring>

#include "doctest.h"
#include "scalkit/kernels.hpp"

using namespace scal;

namespace {

bool same(const TraceSweep& a, const TraceSweep& b) {
  auto eq = [](const std::vector<Vec2>& x, const std::vector<Vec2>& y) {
    return x.size() == y.size() && std::memcmp(x.data(), y.data(), x.size() * sizeof(Vec2)) == 0;
  };
  return a.s == b.s && eq(a.B, b.B) && eq(a.D, b.D) && eq(a.I, b.I);
}

bool same(const ForceGrid& a, const ForceGrid& b) {
  if (a.cells.size() != b.cells.size()) return false;
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    const ForceCell &x = a.cells[i], &y = b.cells[i];
    if (std::memcmp(&x.x, &y.x, sizeof x.x) || std::memcmp(&x.y, &y.y, sizeof x.y) ||
        std::memcmp(&x.value, &y.value, sizeof x.value) ||
        std::memcmp(&x.value2, &y.value2, sizeof x.value2) || x.singular != y.singular)
      return false;
  }
  return true;
}

struct ThreadCap {
  explicit ThreadCap(int n) { kernels::set_thread_cap(n); }
  ~ThreadCap() { kernels::set_thread_cap(0); }
};

}  // namespace

TEST_CASE("parallel kernels reproduce the serial reference bit for bit") {
  for (int threads : {1, 2, 4, 7}) {
    ThreadCap cap(threads);
    CAPTURE(threads);
    CHECK(kernels::effective_threads() >= 1);
    const LinkageParams p = scal_r_params();
    CHECK(same(kernels::trace_sweep_serial(p, nullptr, Side::Right, 0, 50, 110, 1001),
               kernels::trace_sweep_parallel(p, nullptr, Side::Right, 0, 50, 110, 1001)));
    const GripperAssembly g = scal_l_assembly();
    CHECK(same(kernels::trace_sweep_serial(g.finger, &g, Side::Left, 30, 50, 110, 333),
               kernels::trace_sweep_parallel(g.finger, &g, Side::Left, 30, 50, 110, 333)));

    PinchSurfaceSpec ps;
    ps.theta1 = {0.0, kPi, 97};  // includes a singular row
    CHECK(same(kernels::pinch_grid_serial(ps), kernels::pinch_grid_parallel(ps)));
    const EnvelopeSurfaceSpec es;
    CHECK(same(kernels::envelope_grid_serial(es), kernels::envelope_grid_parallel(es)));

    const auto a = kernels::closure_residuals_serial(p, 1000);
    const auto b = kernels::closure_residuals_parallel(p, 1000);
    CHECK(std::memcmp(&a, &b, sizeof a) == 0);
  }
}

TEST_CASE("thread cap from the environment") {
  setenv("SCALKIT_THREADS", "3", 1);
  CHECK(kernels::thread_cap_from_env() == 3);
  setenv("SCALKIT_THREADS", "junk", 1);
  CHECK(kernels::thread_cap_from_env() == 0);
  unsetenv("SCALKIT_THREADS");
  CHECK(kernels::thread_cap_from_env() == 0);
}

TEST_CASE("errors inside a parallel sweep propagate") {
  LinkageParams p = scal_r_params();
  p.s_max = 130.0;
  CHECK_THROWS(kernels::closure_residuals_parallel(p, 100));
  CHECK_THROWS(kernels::closure_residuals_serial(p, 100));
}

TEST_CASE("closure residuals on the shipped geometry") {
  const auto r = kernels::closure_residuals_parallel(scal_l_params(), 1000);
  CHECK(r.link_length < 1e-9);
  CHECK(r.bend_angle < 1e-12);
  CHECK(r.parallelogram < 1e-9);
  CHECK(r.tip_bearing_stddev < 1e-9);
  CHECK(r.max_step <= 10 * r.mean_step);
}
