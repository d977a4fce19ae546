#pragma once

// CSV, SVG and event-log writers. Numbers use 9 significant digits with a
// period decimal separator regardless of locale; every line ends in '\n'.

#include <cstddef>
#include <string>

#include "scalkit/contact.hpp"
#include "scalkit/drive.hpp"
#include "scalkit/statics.hpp"

namespace scal {

std::string format_number(double v);

/// Columns s,xB,yB,xD,yD,xI,yI.
std::string trace_csv(const TraceSweep& t);
std::string trace_svg(const TraceSweep& t);

/// Pinch: theta1_deg,h1_mm,F1,singular. Envelope: theta2_deg,theta3_deg,F2,F3,singular.
std::string force_csv(const ForceGrid& g);

struct ForceSummary {
  std::size_t cells = 0;
  std::size_t singular = 0;
  std::size_t argmin = 0;
  std::size_t argmax = 0;
  double min = 0.0;
  double max = 0.0;
};

/// Extremes of the primary force over non-singular cells (first index wins ties).
ForceSummary summarize(const ForceGrid& g);
std::string summary_line(const ForceGrid& g, const ForceSummary& s);

/// `q_scale` converts library drive units to the exported ones (rad -> deg).
std::string sim_csv(const SimTrace& t, double q_scale);
std::string events_log(const SimTrace& t, double q_scale);
std::string sim_svg(const SimTrace& t);

}  // namespace scal
