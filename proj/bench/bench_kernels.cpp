// Serial vs OpenMP timings of the sampling kernels.
// Usage: bench_kernels [repeats]; SCALKIT_THREADS caps the parallel side.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>

#include "scalkit/kernels.hpp"

using namespace scal;

namespace {

double best_ms(int repeats, const std::function<void()>& f) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

bool same_cells(const ForceGrid& a, const ForceGrid& b) {
  return std::equal(a.cells.begin(), a.cells.end(), b.cells.begin(), b.cells.end(),
                    [](const ForceCell& x, const ForceCell& y) {
                      return x.x == y.x && x.y == y.y && x.value == y.value && x.value2 == y.value2 &&
                             x.singular == y.singular;
                    });
}

bool same_trace(const TraceSweep& a, const TraceSweep& b) {
  return a.s == b.s && a.B == b.B && a.D == b.D && a.I == b.I;
}

void row(const std::string& name, double serial, double parallel, bool match) {
  fmt::print("{:<26} {:>10.3f} {:>10.3f} {:>8.2f}  {}\n", name, serial, parallel, serial / parallel,
             match ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 5;
  if (const int cap = kernels::thread_cap_from_env(); cap > 0) kernels::set_thread_cap(cap);
  fmt::print("threads {}  repeats {}\n", kernels::effective_threads(), repeats);
  fmt::print("{:<26} {:>10} {:>10} {:>8}  {}\n", "kernel", "serial ms", "omp ms", "speedup", "output");

  bool ok = true;
  const LinkageParams p = scal_r_params();
  {
    TraceSweep a, b;
    const double s = best_ms(repeats, [&] { a = kernels::trace_sweep_serial(p, nullptr, Side::Right, 0.0, p.s_min, p.s_max, 200001); });
    const double o = best_ms(repeats, [&] { b = kernels::trace_sweep_parallel(p, nullptr, Side::Right, 0.0, p.s_min, p.s_max, 200001); });
    ok = ok && same_trace(a, b);
    row("trace sweep 200001", s, o, same_trace(a, b));
  }
  {
    PinchSurfaceSpec spec;
    spec.theta1.n = 751;
    spec.h1.n = 401;
    ForceGrid a, b;
    const double s = best_ms(repeats, [&] { a = kernels::pinch_grid_serial(spec); });
    const double o = best_ms(repeats, [&] { b = kernels::pinch_grid_parallel(spec); });
    ok = ok && same_cells(a, b);
    row("pinch grid 751x401", s, o, same_cells(a, b));
  }
  {
    EnvelopeSurfaceSpec spec;
    spec.theta2.n = spec.theta3.n = 901;
    ForceGrid a, b;
    const double s = best_ms(repeats, [&] { a = kernels::envelope_grid_serial(spec); });
    const double o = best_ms(repeats, [&] { b = kernels::envelope_grid_parallel(spec); });
    ok = ok && same_cells(a, b);
    row("envelope grid 901x901", s, o, same_cells(a, b));
  }
  {
    kernels::ClosureResiduals a, b;
    const double s = best_ms(repeats, [&] { a = kernels::closure_residuals_serial(p, 200001); });
    const double o = best_ms(repeats, [&] { b = kernels::closure_residuals_parallel(p, 200001); });
    const bool m = std::memcmp(&a, &b, sizeof a) == 0;
    ok = ok && m;
    row("closure residuals 200001", s, o, m);
  }
  return ok ? 0 : 1;
}
