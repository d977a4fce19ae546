#pragma once

// Sampling kernels. Every kernel has a serial reference and an OpenMP version;
// per-sample work shares nothing mutable, so both produce bit-identical output.

#include <cstddef>

#include "scalkit/drive.hpp"
#include "scalkit/linkage.hpp"
#include "scalkit/statics.hpp"

namespace scal::kernels {

/// Thread count of the parallel kernels (0 = OpenMP default).
void set_thread_cap(int threads);
int thread_cap();
/// Reads SCALKIT_THREADS; returns 0 when unset or unparsable.
int thread_cap_from_env();
/// Threads the parallel kernels will actually use.
int effective_threads();

/// `assembly == nullptr` samples in the finger frame; otherwise deployed for `side` at q.
TraceSweep trace_sweep_serial(const LinkageParams& p, const GripperAssembly* assembly, Side side,
                              double q, double s_lo, double s_hi, std::size_t n);
TraceSweep trace_sweep_parallel(const LinkageParams& p, const GripperAssembly* assembly,
                                Side side, double q, double s_lo, double s_hi, std::size_t n);

ForceGrid pinch_grid_serial(const PinchSurfaceSpec& spec);
ForceGrid pinch_grid_parallel(const PinchSurfaceSpec& spec);
ForceGrid envelope_grid_serial(const EnvelopeSurfaceSpec& spec);
ForceGrid envelope_grid_parallel(const EnvelopeSurfaceSpec& spec);

/// Worst-case invariant residuals over n uniform slot samples.
struct ClosureResiduals {
  double link_length = 0.0;   // max |‖B−A‖−AB|, |‖B−C‖−CB|, |‖D−B‖−BD|, mm
  double bend_angle = 0.0;    // max |angle(C−B, D−B) − gamma|, rad
  double parallelogram = 0.0; // max ‖(F−E)−(B−A)‖, ‖(H−G)−(D−B)‖, mm
  double tip_bearing_min = 0.0, tip_bearing_max = 0.0;  // bearing(I−D) range, rad
  double dh_bearing_min = 0.0, dh_bearing_max = 0.0;    // bearing(H−D) range, rad
  double tip_bearing_stddev = 0.0;
  double dh_bearing_stddev = 0.0;
  double max_step = 0.0;      // largest step of D between consecutive samples
  double mean_step = 0.0;
};

ClosureResiduals closure_residuals_serial(const LinkageParams& p, std::size_t n);
ClosureResiduals closure_residuals_parallel(const LinkageParams& p, std::size_t n);

}  // namespace scal::kernels
