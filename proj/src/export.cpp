#include "scalkit/export.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string_view>
#include <vector>

namespace scal {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0
  return fmt::format("{:.9g}", v);
}

std::string trace_csv(const TraceSweep& t) {
  std::string out = "s,xB,yB,xD,yD,xI,yI\n";
  for (std::size_t i = 0; i < t.s.size(); ++i)
    out += fmt::format("{},{},{},{},{},{},{}\n", format_number(t.s[i]), format_number(t.B[i].x),
                       format_number(t.B[i].y), format_number(t.D[i].x), format_number(t.D[i].y),
                       format_number(t.I[i].x), format_number(t.I[i].y));
  return out;
}

namespace {

struct Bounds {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;

  void add(Vec2 p) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  bool empty() const { return !(x0 <= x1); }
};

class Svg {
 public:
  explicit Svg(Bounds b, double margin = 10.0) {
    if (b.empty()) b = {-50.0, -50.0, 50.0, 50.0};
    x0_ = b.x0 - margin;
    y0_ = b.y0 - margin;
    w_ = b.x1 - b.x0 + 2 * margin;
    h_ = b.y1 - b.y0 + 2 * margin;
  }

  Bounds view() const { return {x0_, y0_, x0_ + w_, y0_ + h_}; }

  void polyline(const std::vector<Vec2>& pts, std::string_view color, double width = 0.6) {
    std::string p;
    for (const Vec2& v : pts) {
      if (!p.empty()) p += ' ';
      p += fmt::format("{},{}", num(v.x), num(-v.y));
    }
    body_ += fmt::format(
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"/>\n", p, color,
        num(width));
  }

  void polygon(const std::vector<Vec2>& pts, std::string_view fill) {
    std::string p;
    for (const Vec2& v : pts) {
      if (!p.empty()) p += ' ';
      p += fmt::format("{},{}", num(v.x), num(-v.y));
    }
    body_ += fmt::format("  <polygon points=\"{}\" fill=\"{}\" stroke=\"#555\" stroke-width=\"0.4\"/>\n",
                         p, fill);
  }

  void circle(Vec2 c, double r, std::string_view fill, std::string_view stroke = "none") {
    body_ += fmt::format(
        "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\" stroke=\"{}\" stroke-width=\"0.4\"/>\n",
        num(c.x), num(-c.y), num(r), fill, stroke);
  }

  void text(Vec2 at, std::string_view s, std::string_view color = "#222") {
    body_ += fmt::format("  <text x=\"{}\" y=\"{}\" font-size=\"4\" fill=\"{}\">{}</text>\n",
                         num(at.x), num(-at.y), color, s);
  }

  std::string str() const {
    return fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}mm\" height=\"{}mm\" "
        "viewBox=\"{} {} {} {}\">\n{}</svg>\n",
        num(w_), num(h_), num(x0_), num(-(y0_ + h_)), num(w_), num(h_), body_);
  }

 private:
  static std::string num(double v) { return format_number(v); }

  double x0_ = 0, y0_ = 0, w_ = 0, h_ = 0;
  std::string body_;
};

std::vector<Vec2> finger_outline(const ScalConfig& c) { return {c.A, c.B, c.D, c.I}; }

std::vector<Vec2> box_corners(const Box& b) {
  std::vector<Vec2> out;
  for (Vec2 s : {Vec2{-1, -1}, Vec2{1, -1}, Vec2{1, 1}, Vec2{-1, 1}})
    out.push_back(b.center + rotate({s.x * b.half_extent.x, s.y * b.half_extent.y}, b.angle));
  return out;
}

void draw_shape(Svg& svg, const Shape& s, Vec2 offset, std::string_view fill) {
  if (const auto* d = std::get_if<Disk>(&s)) {
    svg.circle(d->center + offset, d->radius, fill, "#555");
  } else if (const auto* b = std::get_if<Box>(&s)) {
    Box moved = *b;
    moved.center += offset;
    svg.polygon(box_corners(moved), fill);
  }
}

}  // namespace

std::string trace_svg(const TraceSweep& t) {
  Bounds b;
  b.add({0.0, 0.0});
  for (std::size_t i = 0; i < t.s.size(); ++i) {
    b.add(t.B[i]);
    b.add(t.D[i]);
    b.add(t.I[i]);
  }
  Svg svg(b);
  svg.polyline(t.B, "#1f5fbf");
  svg.polyline(t.D, "#c0392b");
  svg.polyline(t.I, "#2e8b57");
  if (!t.s.empty()) {
    svg.circle(t.D.front(), 1.0, "#c0392b");
    svg.text(t.B.back(), "B");
    svg.text(t.D.back(), "D");
    svg.text(t.I.back(), "I");
  }
  return svg.str();
}

std::string force_csv(const ForceGrid& g) {
  const bool pinch = g.model == ForceModel::Pinch;
  std::string out = pinch ? "theta1_deg,h1_mm,F1,singular\n" : "theta2_deg,theta3_deg,F2,F3,singular\n";
  for (const ForceCell& c : g.cells) {
    if (pinch)
      out += fmt::format("{},{},{},{}\n", format_number(rad2deg(c.x)), format_number(c.y),
                         format_number(c.value), c.singular ? 1 : 0);
    else
      out += fmt::format("{},{},{},{},{}\n", format_number(rad2deg(c.x)),
                         format_number(rad2deg(c.y)), format_number(c.value),
                         format_number(c.value2), c.singular ? 1 : 0);
  }
  return out;
}

ForceSummary summarize(const ForceGrid& g) {
  ForceSummary s;
  s.cells = g.cells.size();
  bool any = false;
  for (std::size_t i = 0; i < g.cells.size(); ++i) {
    const ForceCell& c = g.cells[i];
    if (c.singular) {
      ++s.singular;
      continue;
    }
    if (!any || c.value < s.min) {
      s.min = c.value;
      s.argmin = i;
    }
    if (!any || c.value > s.max) {
      s.max = c.value;
      s.argmax = i;
    }
    any = true;
  }
  if (!any) s.min = s.max = std::numeric_limits<double>::quiet_NaN();
  return s;
}

std::string summary_line(const ForceGrid& g, const ForceSummary& s) {
  const bool pinch = g.model == ForceModel::Pinch;
  const std::string_view name = pinch ? "F1" : "F2";
  if (s.singular == s.cells)
    return fmt::format("{}: {} cells, all singular\n", name, s.cells);
  const ForceCell& lo = g.cells[s.argmin];
  const ForceCell& hi = g.cells[s.argmax];
  auto where = [&](const ForceCell& c) {
    return pinch ? fmt::format("theta1_deg={} h1_mm={}", format_number(rad2deg(c.x)),
                               format_number(c.y))
                 : fmt::format("theta2_deg={} theta3_deg={}", format_number(rad2deg(c.x)),
                               format_number(rad2deg(c.y)));
  };
  return fmt::format("{}: cells={} singular={} min={} at {} max={} at {}\n", name, s.cells,
                     s.singular, format_number(s.min), where(lo), format_number(s.max), where(hi));
}

std::string sim_csv(const SimTrace& t, double q_scale) {
  std::string out =
      "frame,q,probe,phase,held_object,object_dx,object_dy,object_clearance";
  for (std::string_view side : {"L", "R"})
    out += fmt::format(
        ",s_{0},fold_{0},xB_{0},yB_{0},xD_{0},yD_{0},xI_{0},yI_{0},support_{0},object_{0},"
        "intermediate_{0},distal_{0}",
        side);
  out += '\n';
  for (std::size_t i = 0; i < t.frames.size(); ++i) {
    const SimFrame& f = t.frames[i];
    out += fmt::format("{},{},{},{},{},{},{},{}", i, format_number(f.q * q_scale),
                       format_number(f.probe), to_string(f.phase), f.held_object,
                       format_number(f.object_offset.x), format_number(f.object_offset.y),
                       format_number(f.object_clearance));
    for (const FingerFrame& ff : f.fingers)
      out += fmt::format(",{},{},{},{},{},{},{},{},{},{},{},{}", format_number(ff.s),
                         format_number(rad2deg(ff.fold)), format_number(ff.pose.B.x),
                         format_number(ff.pose.B.y), format_number(ff.pose.D.x),
                         format_number(ff.pose.D.y), format_number(ff.pose.I.x),
                         format_number(ff.pose.I.y), ff.support_contact ? 1 : 0,
                         ff.object_contact ? 1 : 0, ff.intermediate_contact ? 1 : 0,
                         ff.distal_contact ? 1 : 0);
    out += '\n';
  }
  return out;
}

std::string events_log(const SimTrace& t, double q_scale) {
  std::string out;
  for (const SimEvent& e : t.events)
    out += fmt::format("{}\t{}\n", format_number(e.q * q_scale), to_string(e.kind));
  return out;
}

std::string sim_svg(const SimTrace& t) {
  Bounds b;
  for (const SimFrame& f : t.frames)
    for (const FingerFrame& ff : f.fingers)
      for (Vec2 p : finger_outline(ff.pose)) b.add(p);
  for (const Shape& s : t.objects) {
    if (const auto* d = std::get_if<Disk>(&s)) {
      b.add(d->center - Vec2{d->radius, d->radius});
      b.add(d->center + Vec2{d->radius, d->radius});
    } else if (const auto* bx = std::get_if<Box>(&s)) {
      for (Vec2 c : box_corners(*bx)) b.add(c);
    }
  }
  Svg svg(b);
  if (t.support) {
    const Bounds v = svg.view();
    const Vec2 dir = perp(t.support->normal);
    const double reach = (v.x1 - v.x0) + (v.y1 - v.y0);
    svg.polyline({t.support->point - reach * dir, t.support->point + reach * dir}, "#444", 0.8);
  }
  for (const Shape& s : t.objects) draw_shape(svg, s, {}, "#eeeeee");

  for (std::size_t side = 0; side < 2; ++side) {
    std::vector<Vec2> path;
    for (const SimFrame& f : t.frames) path.push_back(f.fingers[side].pose.I);
    svg.polyline(path, "#2e8b57", 0.4);
  }

  std::size_t last = std::numeric_limits<std::size_t>::max();
  int stack = 0;
  for (const SimEvent& e : t.events) {
    if (e.frame >= t.frames.size()) continue;
    const SimFrame& f = t.frames[e.frame];
    if (e.frame != last) {
      if (f.held_object >= 0 && static_cast<std::size_t>(f.held_object) < t.objects.size())
        draw_shape(svg, t.objects[static_cast<std::size_t>(f.held_object)], f.object_offset,
                   "none");
      for (const FingerFrame& ff : f.fingers) svg.polyline(finger_outline(ff.pose), "#1f5fbf");
      last = e.frame;
      stack = 0;
    }
    svg.text(f.fingers[1].pose.I + Vec2{2.0, -5.0 * stack++}, to_string(e.kind));
  }
  return svg.str();
}

}  // namespace scal
