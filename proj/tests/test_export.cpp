#include <algorithm>
#include <clocale>
#include <cmath>
#include <limits>
#include <string>

#include "doctest.h"
#include "scalkit/export.hpp"

using namespace scal;

namespace {

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.5) == "1.5");
  CHECK(format_number(1.0 / 3.0) == "0.333333333");
  CHECK(format_number(-123456789.25) == "-123456789");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("number formatting ignores the C locale") {
  const char* old = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = old ? old : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") || std::setlocale(LC_NUMERIC, "fr_FR.UTF-8"))
    CHECK(format_number(2.5) == "2.5");
  std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST_CASE("trace csv") {
  const LinkageParams p = scal_r_params();
  const TraceSweep t = trace_sweep(p, p.s_min, p.s_max, 2);
  const std::string csv = trace_csv(t);
  CHECK(csv.rfind("s,xB,yB,xD,yD,xI,yI\n", 0) == 0);
  CHECK(lines(csv) == 3);
  CHECK(csv.back() == '\n');
  const std::string svg = trace_svg(t);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("force csv and summary") {
  PinchSurfaceSpec one;
  one.theta1 = {deg2rad(90.0), deg2rad(90.0), 1};
  one.h1 = {10.0, 10.0, 1};
  const ForceGrid g = force_surface(one);
  const std::string csv = force_csv(g);
  CHECK(lines(csv) == 2);
  CHECK(csv.find("\n90,10,") != std::string::npos);

  const ForceGrid full = force_surface(PinchSurfaceSpec{});
  const ForceSummary s = summarize(full);
  CHECK(s.cells == 76 * 41);
  CHECK(s.singular == 0);
  CHECK(s.argmax == 0);
  CHECK(s.max == full.cells[0].value);
  CHECK(summary_line(full, s).find("max=") != std::string::npos);

  const ForceGrid env = force_surface(EnvelopeSurfaceSpec{});
  CHECK(force_csv(env).rfind("theta2_deg,theta3_deg,F2,F3,singular\n", 0) == 0);

  PinchSurfaceSpec sing;
  sing.theta1 = {0.0, 0.0, 1};
  sing.h1 = {0.0, 0.0, 1};
  const ForceGrid sg = force_surface(sing);
  CHECK(summary_line(sg, summarize(sg)).find("all singular") != std::string::npos);
  CHECK(force_csv(sg).find(",nan,1\n") != std::string::npos);
}

TEST_CASE("simulation exports") {
  SimTrace t;
  t.mode = DriveMode::Rotational;
  SimFrame f;
  f.q = deg2rad(10.0);
  t.frames = {f, f};
  t.frames[1].phase = PhaseLabel::SurfaceSlide;
  t.events = {{EventKind::FirstSupportContact, deg2rad(10.0), 1}};
  t.support = HalfPlane{};
  t.objects = {Disk{{0, 30}, 30}};
  const std::string csv = sim_csv(t, rad2deg(1.0));
  CHECK(lines(csv) == 3);
  CHECK(csv.find("\n1,10,0,SurfaceSlide,") != std::string::npos);
  CHECK(events_log(t, rad2deg(1.0)) == "10\tFIRST_SUPPORT_CONTACT\n");
  const std::string svg = sim_svg(t);
  CHECK(svg.find("FIRST_SUPPORT_CONTACT") != std::string::npos);
  CHECK(svg.find("<circle") != std::string::npos);
  CHECK(events_log(SimTrace{}, 1.0).empty());
}
