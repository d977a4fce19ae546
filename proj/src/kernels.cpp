#include "scalkit/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>

#include "scalkit/error.hpp"

#ifdef SCALKIT_HAVE_OPENMP
#include <omp.h>
#endif

namespace scal::kernels {

namespace {

std::atomic<int> g_thread_cap{0};

double sample_at(double lo, double hi, std::size_t i, std::size_t n) {
  if (n <= 1) return lo;
  if (i + 1 == n) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

template <class Fn>
void for_each_serial(std::size_t n, Fn&& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

template <class Fn>
void for_each_parallel(std::size_t n, Fn&& fn) {
#ifdef SCALKIT_HAVE_OPENMP
  const auto count = static_cast<long long>(n);
  const int threads = effective_threads();
  // Exceptions cannot cross the parallel region; keep the first and rethrow.
  std::exception_ptr error;
#pragma omp parallel for schedule(static) num_threads(threads)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(scalkit_kernel_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
#else
  for_each_serial(n, fn);
#endif
}

void require_samples(std::size_t n) {
  if (n < 2) throw ScalError(ErrorCode::InvalidArgument, "a sweep needs at least 2 samples");
}

TraceSweep alloc_trace(std::size_t n) {
  TraceSweep t;
  t.s.resize(n);
  t.B.resize(n);
  t.D.resize(n);
  t.I.resize(n);
  return t;
}

template <class Loop>
TraceSweep trace_sweep_impl(const LinkageParams& p, const GripperAssembly* g, Side side, double q,
                            double s_lo, double s_hi, std::size_t n, Loop loop) {
  require_samples(n);
  if (!(s_lo >= p.s_min && s_hi <= p.s_max && s_lo <= s_hi))
    throw ScalError(ErrorCode::OutOfRange, "trace range must lie within the slot travel");
  TraceSweep t = alloc_trace(n);
  loop(n, [&](std::size_t i) {
    const double s = sample_at(s_lo, s_hi, i, n);
    ScalConfig c;
    if (g != nullptr) {
      DriveState drive{g->mode, q, s, {}};
      c = finger_pose(*g, side, drive);
    } else {
      c = finger_config(p, s);
    }
    t.s[i] = s;
    t.B[i] = c.B;
    t.D[i] = c.D;
    t.I[i] = c.I;
  });
  return t;
}

template <class Loop>
ForceGrid pinch_grid_impl(const PinchSurfaceSpec& spec, Loop loop) {
  ForceGrid grid;
  grid.model = ForceModel::Pinch;
  grid.x_axis = spec.theta1;
  grid.y_axis = spec.h1;
  const std::size_t nx = spec.theta1.n, ny = spec.h1.n;
  grid.cells.resize(nx * ny);
  loop(nx * ny, [&](std::size_t k) {
    ForceCell& cell = grid.cells[k];
    cell.x = spec.theta1.at(k / ny);
    cell.y = spec.h1.at(k % ny);
    const double arm = cell.y + spec.l1 * std::sin(cell.x);
    if (arm > kSingularTol) {
      cell.value = spec.T_in / arm;
    } else {
      cell.value = std::numeric_limits<double>::quiet_NaN();
      cell.singular = true;
    }
  });
  return grid;
}

template <class Loop>
ForceGrid envelope_grid_impl(const EnvelopeSurfaceSpec& spec, Loop loop) {
  ForceGrid grid;
  grid.model = ForceModel::Envelope;
  grid.x_axis = spec.theta2;
  grid.y_axis = spec.theta3;
  const std::size_t nx = spec.theta2.n, ny = spec.theta3.n;
  grid.cells.resize(nx * ny);
  const bool singular = !(spec.h2 > kSingularTol) || !(spec.h3 > kSingularTol);
  loop(nx * ny, [&](std::size_t k) {
    ForceCell& cell = grid.cells[k];
    cell.x = spec.theta2.at(k / ny);
    cell.y = spec.theta3.at(k % ny);
    if (singular) {
      cell.value = cell.value2 = std::numeric_limits<double>::quiet_NaN();
      cell.singular = true;
      return;
    }
    const EnvelopeForces f = envelope_forces(
        {spec.T_in, spec.k1, cell.x, cell.y, spec.l2, spec.h2, spec.h3});
    cell.value = f.F2;
    cell.value2 = f.F3;
  });
  return grid;
}

struct SampleResidual {
  double link = 0.0, bend = 0.0, para = 0.0, tip = 0.0, dh = 0.0;
  Vec2 D;
};

struct Stats {
  double min = 0.0, max = 0.0, stddev = 0.0;
};

Stats stats_of(const std::vector<SampleResidual>& v, double SampleResidual::*field) {
  Stats s{v.front().*field, v.front().*field, 0.0};
  double mean = 0.0;
  for (const auto& r : v) {
    s.min = std::min(s.min, r.*field);
    s.max = std::max(s.max, r.*field);
    mean += r.*field;
  }
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (const auto& r : v) var += (r.*field - mean) * (r.*field - mean);
  s.stddev = std::sqrt(var / static_cast<double>(v.size()));
  return s;
}

template <class Loop>
ClosureResiduals closure_residuals_impl(const LinkageParams& p, std::size_t n, Loop loop) {
  require_samples(n);
  std::vector<SampleResidual> per(n);
  const double tip_ref = tip_bearing(p);
  const double dh_ref = p.alpha + p.branch_T * p.theta_T;
  loop(n, [&](std::size_t i) {
    const ScalConfig c = finger_config(p, sample_at(p.s_min, p.s_max, i, n));
    SampleResidual& r = per[i];
    r.link = std::max({std::abs(distance(c.B, c.A) - p.len_AB),
                       std::abs(distance(c.B, c.C) - p.len_CB),
                       std::abs(distance(c.D, c.B) - p.len_BD)});
    r.bend = std::abs(angle_between(c.C - c.B, c.D - c.B) - p.gamma);
    r.para = std::max(norm((c.F - c.E) - (c.B - c.A)), norm((c.H - c.G) - (c.D - c.B)));
    // Bearings relative to the analytic constants so wrap-around cannot bias the spread.
    r.tip = wrap_angle(bearing(c.I - c.D) - tip_ref);
    r.dh = wrap_angle(bearing(c.H - c.D) - dh_ref);
    r.D = c.D;
  });

  ClosureResiduals out;
  for (const auto& r : per) {
    out.link_length = std::max(out.link_length, r.link);
    out.bend_angle = std::max(out.bend_angle, r.bend);
    out.parallelogram = std::max(out.parallelogram, r.para);
  }
  const Stats tip = stats_of(per, &SampleResidual::tip);
  const Stats dh = stats_of(per, &SampleResidual::dh);
  out.tip_bearing_min = tip_ref + tip.min;
  out.tip_bearing_max = tip_ref + tip.max;
  out.tip_bearing_stddev = tip.stddev;
  out.dh_bearing_min = dh_ref + dh.min;
  out.dh_bearing_max = dh_ref + dh.max;
  out.dh_bearing_stddev = dh.stddev;
  double total = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double step = distance(per[i].D, per[i - 1].D);
    out.max_step = std::max(out.max_step, step);
    total += step;
  }
  out.mean_step = total / static_cast<double>(n - 1);
  return out;
}

constexpr auto kSerial = [](std::size_t n, auto&& fn) { for_each_serial(n, fn); };
constexpr auto kParallel = [](std::size_t n, auto&& fn) { for_each_parallel(n, fn); };

}  // namespace

void set_thread_cap(int threads) { g_thread_cap.store(std::max(threads, 0)); }
int thread_cap() { return g_thread_cap.load(); }

int thread_cap_from_env() {
  const char* env = std::getenv("SCALKIT_THREADS");
  if (env == nullptr) return 0;
  try {
    return std::max(std::stoi(env), 0);
  } catch (const std::exception&) {
    return 0;
  }
}

int effective_threads() {
#ifdef SCALKIT_HAVE_OPENMP
  const int cap = thread_cap();
  return cap > 0 ? cap : omp_get_max_threads();
#else
  return 1;
#endif
}

TraceSweep trace_sweep_serial(const LinkageParams& p, const GripperAssembly* g, Side side,
                              double q, double s_lo, double s_hi, std::size_t n) {
  return trace_sweep_impl(p, g, side, q, s_lo, s_hi, n, kSerial);
}

TraceSweep trace_sweep_parallel(const LinkageParams& p, const GripperAssembly* g, Side side,
                                double q, double s_lo, double s_hi, std::size_t n) {
  return trace_sweep_impl(p, g, side, q, s_lo, s_hi, n, kParallel);
}

ForceGrid pinch_grid_serial(const PinchSurfaceSpec& spec) { return pinch_grid_impl(spec, kSerial); }
ForceGrid pinch_grid_parallel(const PinchSurfaceSpec& spec) {
  return pinch_grid_impl(spec, kParallel);
}
ForceGrid envelope_grid_serial(const EnvelopeSurfaceSpec& spec) {
  return envelope_grid_impl(spec, kSerial);
}
ForceGrid envelope_grid_parallel(const EnvelopeSurfaceSpec& spec) {
  return envelope_grid_impl(spec, kParallel);
}

ClosureResiduals closure_residuals_serial(const LinkageParams& p, std::size_t n) {
  return closure_residuals_impl(p, n, kSerial);
}
ClosureResiduals closure_residuals_parallel(const LinkageParams& p, std::size_t n) {
  return closure_residuals_impl(p, n, kParallel);
}

}  // namespace scal::kernels
