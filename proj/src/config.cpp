#include "scalkit/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"
#include "scalkit/error.hpp"

namespace scal {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string_view to_string(Preset p) { return p == Preset::ScalR ? "scal-r" : "scal-l"; }

std::string_view to_string(Behavior b) {
  switch (b) {
    case Behavior::PinchLift: return "pinch_lift";
    case Behavior::Envelope: return "envelope";
    case Behavior::PassiveOpen: return "passive_open";
    case Behavior::ObliqueProbe: return "oblique_probe";
  }
  return "?";
}

namespace {

std::string_view mode_name(DriveMode m) { return m == DriveMode::Rotational ? "rotational" : "linear"; }

std::string_view support_name(SupportKind k) {
  switch (k) {
    case SupportKind::None: return "none";
    case SupportKind::Flat: return "flat";
    case SupportKind::Ramp: return "ramp";
  }
  return "?";
}

std::size_t line_at(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

// Walks a parsed document, reporting problems by key path and, when the key can
// be found in the source text, by line.
class Reader {
 public:
  Reader(std::string_view what, std::string_view text) : what_(what), text_(text) {}

  json parse() const {
    try {
      return json::parse(text_);
    } catch (const json::parse_error& e) {
      throw ScalError(ErrorCode::InvalidDocument,
                      fmt::format("{}: line {}: malformed JSON ({})", what_,
                                  line_at(text_, e.byte == 0 ? 0 : e.byte - 1), e.what()));
    }
  }

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    const std::string key = path.substr(path.find_last_of('.') + 1);
    const std::size_t at = text_.find(fmt::format("\"{}\"", key));
    if (at != std::string_view::npos)
      throw ScalError(ErrorCode::InvalidDocument,
                      fmt::format("{}: line {}: {}: {}", what_, line_at(text_, at), path, msg));
    throw ScalError(ErrorCode::InvalidDocument, fmt::format("{}: {}: {}", what_, path, msg));
  }

  void require_object(const json& j, const std::string& path,
                      std::initializer_list<std::string_view> allowed) const {
    if (!j.is_object()) fail(path.empty() ? "(root)" : path, "expected an object");
    for (const auto& [key, value] : j.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
        fail(join(path, key), "unknown key");
    }
  }

  void number(const json& j, const std::string& path, std::string_view key, double& out) const {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number()) fail(join(path, key), "expected a number");
    out = v.get<double>();
  }

  void integer(const json& j, const std::string& path, std::string_view key, int& out) const {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
    out = v.get<int>();
  }

  std::string string(const json& j, const std::string& path, std::string_view key) const {
    const json& v = j.at(key);
    if (!v.is_string()) fail(join(path, key), "expected a string");
    return v.get<std::string>();
  }

  void schema(const json& root) const {
    if (!root.contains("schema_version")) fail("schema_version", "required key is missing");
    int v = 0;
    integer(root, "", "schema_version", v);
    if (v != kSchemaVersion)
      fail("schema_version", fmt::format("unsupported version {} (expected {})", v, kSchemaVersion));
  }

  static std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : fmt::format("{}.{}", path, key);
  }

 private:
  std::string_view what_;
  std::string_view text_;
};

}  // namespace

LinkageParams ConfigDocument::linkage_params() const {
  const LinkageSection& l = linkage;
  LinkageParams p;
  p.base_unit_l = l.base_unit_l;
  p.len_AB = l.len_AB;
  p.len_CB = l.len_CB;
  p.len_BD = l.len_BD;
  p.len_AE = l.len_AE;
  p.len_BF = l.len_BF;
  p.len_BG = l.len_BG;
  p.len_DI = l.len_DI;
  p.gamma = deg2rad(l.gamma_deg);
  p.s_min = l.s_min;
  p.s_max = l.s_max;
  p.alpha = deg2rad(l.alpha_deg);
  p.beta = deg2rad(l.beta_deg);
  p.theta_T = deg2rad(l.theta_T_deg);
  p.branch_B = l.branch_B;
  p.branch_D = l.branch_D;
  p.branch_T = l.branch_T;
  p.tip_offset = deg2rad(l.tip_offset_deg);
  return p;
}

double ConfigDocument::q_from_doc(double q) const {
  return drive.mode == DriveMode::Rotational ? deg2rad(q) : q;
}

double ConfigDocument::q_to_doc(double q) const {
  return drive.mode == DriveMode::Rotational ? rad2deg(q) : q;
}

double ConfigDocument::dq() const { return q_from_doc(drive.dq); }

GripperAssembly ConfigDocument::assembly() const {
  GripperAssembly g;
  g.finger = linkage_params();
  g.mode = drive.mode;
  g.aperture = aperture;
  g.core_mount = deg2rad(drive.core_mount_deg);
  g.q_min = q_from_doc(drive.q_min);
  g.q_max = q_from_doc(drive.q_max);
  return g;
}

ConfigDocument preset_document(Preset p) {
  ConfigDocument d;
  d.preset = p;
  if (p == Preset::ScalR) {
    d.linkage.alpha_deg = 30.0;
    d.linkage.beta_deg = 78.463;
    d.linkage.theta_T_deg = 60.0;
    d.linkage.tip_offset_deg = 0.0;
    d.drive = {DriveMode::Rotational, 0.0, 90.0, 0.1, -150.0};
    d.aperture = 80.0;
  } else {
    d.linkage.alpha_deg = 0.0;
    d.linkage.beta_deg = -15.0;
    d.linkage.theta_T_deg = 20.0;
    d.linkage.tip_offset_deg = 70.0;
    d.drive = {DriveMode::Linear, 0.0, 120.0, 0.1, 0.0};
    d.aperture = 180.0;
  }
  return d;
}

ConfigDocument parse_config(std::string_view text) {
  const Reader rd("config", text);
  const json root = rd.parse();
  rd.require_object(root, "", {"schema_version", "preset", "linkage", "spring", "drive", "gripper"});
  rd.schema(root);

  Preset preset = Preset::ScalR;
  if (root.contains("preset")) {
    const std::string name = rd.string(root, "", "preset");
    if (name == "scal-r") preset = Preset::ScalR;
    else if (name == "scal-l") preset = Preset::ScalL;
    else rd.fail("preset", fmt::format("unknown preset '{}' (scal-r or scal-l)", name));
  } else if (root.contains("drive") && root["drive"].is_object() && root["drive"].contains("mode") &&
             root["drive"]["mode"] == "linear") {
    preset = Preset::ScalL;
  }
  ConfigDocument d = preset_document(preset);

  if (root.contains("linkage")) {
    const json& j = root["linkage"];
    rd.require_object(j, "linkage",
                      {"base_unit_l", "len_AB", "len_CB", "len_BD", "len_AE", "len_BF", "len_BG",
                       "len_DI", "gamma_deg", "s_min", "s_max", "alpha_deg", "beta_deg",
                       "theta_T_deg", "branch_B", "branch_D", "branch_T", "tip_offset_deg"});
    LinkageSection& l = d.linkage;
    rd.number(j, "linkage", "base_unit_l", l.base_unit_l);
    rd.number(j, "linkage", "len_AB", l.len_AB);
    rd.number(j, "linkage", "len_CB", l.len_CB);
    rd.number(j, "linkage", "len_BD", l.len_BD);
    rd.number(j, "linkage", "len_AE", l.len_AE);
    rd.number(j, "linkage", "len_BF", l.len_BF);
    rd.number(j, "linkage", "len_BG", l.len_BG);
    rd.number(j, "linkage", "len_DI", l.len_DI);
    rd.number(j, "linkage", "gamma_deg", l.gamma_deg);
    rd.number(j, "linkage", "s_min", l.s_min);
    rd.number(j, "linkage", "s_max", l.s_max);
    rd.number(j, "linkage", "alpha_deg", l.alpha_deg);
    rd.number(j, "linkage", "beta_deg", l.beta_deg);
    rd.number(j, "linkage", "theta_T_deg", l.theta_T_deg);
    rd.integer(j, "linkage", "branch_B", l.branch_B);
    rd.integer(j, "linkage", "branch_D", l.branch_D);
    rd.integer(j, "linkage", "branch_T", l.branch_T);
    rd.number(j, "linkage", "tip_offset_deg", l.tip_offset_deg);
  }
  if (root.contains("spring")) {
    const json& j = root["spring"];
    rd.require_object(j, "spring", {"k_slot", "preload", "k1"});
    rd.number(j, "spring", "k_slot", d.spring.k_slot);
    rd.number(j, "spring", "preload", d.spring.preload);
    rd.number(j, "spring", "k1", d.spring.k1);
  }
  if (root.contains("drive")) {
    const json& j = root["drive"];
    rd.require_object(j, "drive", {"mode", "q_min", "q_max", "dq", "core_mount_deg"});
    if (j.contains("mode")) {
      const std::string m = rd.string(j, "drive", "mode");
      if (m == "rotational") d.drive.mode = DriveMode::Rotational;
      else if (m == "linear") d.drive.mode = DriveMode::Linear;
      else rd.fail("drive.mode", fmt::format("unknown mode '{}' (rotational or linear)", m));
    }
    rd.number(j, "drive", "q_min", d.drive.q_min);
    rd.number(j, "drive", "q_max", d.drive.q_max);
    rd.number(j, "drive", "dq", d.drive.dq);
    rd.number(j, "drive", "core_mount_deg", d.drive.core_mount_deg);
    if (!(d.drive.q_min <= d.drive.q_max)) rd.fail("drive.q_max", "must not be below q_min");
    if (!(d.drive.dq > 0.0)) rd.fail("drive.dq", "must be positive");
  }
  if (root.contains("gripper")) {
    const json& j = root["gripper"];
    rd.require_object(j, "gripper", {"aperture"});
    rd.number(j, "gripper", "aperture", d.aperture);
    if (!(d.aperture > 0.0)) rd.fail("gripper.aperture", "must be positive");
  }
  return d;
}

std::string serialize(const ConfigDocument& d) {
  const LinkageSection& l = d.linkage;
  ojson root;
  root["schema_version"] = d.schema_version;
  root["preset"] = to_string(d.preset);
  root["linkage"] = ojson{{"base_unit_l", l.base_unit_l}, {"len_AB", l.len_AB},
                          {"len_CB", l.len_CB},           {"len_BD", l.len_BD},
                          {"len_AE", l.len_AE},           {"len_BF", l.len_BF},
                          {"len_BG", l.len_BG},           {"len_DI", l.len_DI},
                          {"gamma_deg", l.gamma_deg},     {"s_min", l.s_min},
                          {"s_max", l.s_max},             {"alpha_deg", l.alpha_deg},
                          {"beta_deg", l.beta_deg},       {"theta_T_deg", l.theta_T_deg},
                          {"branch_B", l.branch_B},       {"branch_D", l.branch_D},
                          {"branch_T", l.branch_T},       {"tip_offset_deg", l.tip_offset_deg}};
  root["spring"] =
      ojson{{"k_slot", d.spring.k_slot}, {"preload", d.spring.preload}, {"k1", d.spring.k1}};
  root["drive"] = ojson{{"mode", mode_name(d.drive.mode)},
                        {"q_min", d.drive.q_min},
                        {"q_max", d.drive.q_max},
                        {"dq", d.drive.dq},
                        {"core_mount_deg", d.drive.core_mount_deg}};
  root["gripper"] = ojson{{"aperture", d.aperture}};
  return root.dump(2) + "\n";
}

ScenarioDocument parse_scenario(std::string_view text) {
  const Reader rd("scenario", text);
  const json root = rd.parse();
  rd.require_object(root, "", {"schema_version", "behavior", "environment", "approach", "thresholds"});
  rd.schema(root);
  ScenarioDocument d;

  if (!root.contains("behavior")) rd.fail("behavior", "required key is missing");
  const std::string b = rd.string(root, "", "behavior");
  if (b == "pinch_lift") d.behavior = Behavior::PinchLift;
  else if (b == "envelope") d.behavior = Behavior::Envelope;
  else if (b == "passive_open") d.behavior = Behavior::PassiveOpen;
  else if (b == "oblique_probe") d.behavior = Behavior::ObliqueProbe;
  else rd.fail("behavior", fmt::format("unknown behavior '{}'", b));

  if (root.contains("environment")) {
    const json& env = root["environment"];
    rd.require_object(env, "environment", {"support", "objects"});
    if (env.contains("support")) {
      const json& s = env["support"];
      rd.require_object(s, "environment.support", {"kind", "ramp_deg", "height"});
      if (s.contains("kind")) {
        const std::string k = rd.string(s, "environment.support", "kind");
        if (k == "none") d.support = SupportKind::None;
        else if (k == "flat") d.support = SupportKind::Flat;
        else if (k == "ramp") d.support = SupportKind::Ramp;
        else rd.fail("environment.support.kind", fmt::format("unknown support '{}'", k));
      }
      rd.number(s, "environment.support", "ramp_deg", d.ramp_deg);
      rd.number(s, "environment.support", "height", d.support_height);
      if (d.support == SupportKind::Ramp && !(std::abs(d.ramp_deg) < 45.0))
        rd.fail("environment.support.ramp_deg", "must lie in (-45, 45)");
    }
    if (env.contains("objects")) {
      const json& objs = env["objects"];
      if (!objs.is_array()) rd.fail("environment.objects", "expected an array");
      for (std::size_t i = 0; i < objs.size(); ++i) {
        const std::string path = fmt::format("environment.objects[{}]", i);
        const json& o = objs[i];
        if (!o.is_object() || !o.contains("kind")) rd.fail(path, "expected an object with a kind");
        ObjectEntry e;
        const std::string k = rd.string(o, path, "kind");
        if (k == "rectangle") {
          rd.require_object(o, path, {"kind", "width", "height", "position"});
          e.kind = ObjectKind::Rectangle;
          rd.number(o, path, "width", e.width);
          rd.number(o, path, "height", e.height);
        } else if (k == "disk") {
          rd.require_object(o, path, {"kind", "diameter", "position"});
          e.kind = ObjectKind::Disk;
          rd.number(o, path, "diameter", e.width);
          e.height = e.width;
        } else {
          rd.fail(path + ".kind", fmt::format("unknown object kind '{}'", k));
        }
        rd.number(o, path, "position", e.position);
        if (!(e.width > 0.0) || !(e.height > 0.0)) rd.fail(path, "dimensions must be positive");
        d.objects.push_back(e);
      }
    }
  }
  if (root.contains("approach")) {
    const json& a = root["approach"];
    rd.require_object(a, "approach",
                      {"base_x", "base_height", "q_start", "q_end", "probe_tilt_deg", "fold_deg",
                       "fold_step_deg", "probe_step", "probe_max"});
    rd.number(a, "approach", "base_x", d.base_x);
    rd.number(a, "approach", "base_height", d.base_height);
    if (a.contains("q_start")) {
      double v = 0.0;
      rd.number(a, "approach", "q_start", v);
      d.q_start = v;
    }
    if (a.contains("q_end")) {
      double v = 0.0;
      rd.number(a, "approach", "q_end", v);
      d.q_end = v;
    }
    rd.number(a, "approach", "probe_tilt_deg", d.probe_tilt_deg);
    rd.number(a, "approach", "fold_deg", d.fold_deg);
    rd.number(a, "approach", "fold_step_deg", d.fold_step_deg);
    rd.number(a, "approach", "probe_step", d.probe_step);
    rd.number(a, "approach", "probe_max", d.probe_max);
    if (!(d.fold_step_deg > 0.0)) rd.fail("approach.fold_step_deg", "must be positive");
    if (!(d.probe_step > 0.0)) rd.fail("approach.probe_step", "must be positive");
  }
  if (root.contains("thresholds")) {
    const json& t = root["thresholds"];
    rd.require_object(t, "thresholds",
                      {"liftoff_clearance", "secure_clearance", "pinch_angle_deg",
                       "min_incidence_deg"});
    rd.number(t, "thresholds", "liftoff_clearance", d.liftoff_clearance);
    rd.number(t, "thresholds", "secure_clearance", d.secure_clearance);
    rd.number(t, "thresholds", "pinch_angle_deg", d.pinch_angle_deg);
    rd.number(t, "thresholds", "min_incidence_deg", d.min_incidence_deg);
  }
  return d;
}

std::string serialize(const ScenarioDocument& d) {
  ojson objects = ojson::array();
  for (const ObjectEntry& e : d.objects) {
    if (e.kind == ObjectKind::Disk)
      objects.push_back(ojson{{"kind", "disk"}, {"diameter", e.width}, {"position", e.position}});
    else
      objects.push_back(ojson{{"kind", "rectangle"},
                              {"width", e.width},
                              {"height", e.height},
                              {"position", e.position}});
  }
  ojson approach{{"base_x", d.base_x}, {"base_height", d.base_height}};
  if (d.q_start) approach["q_start"] = *d.q_start;
  if (d.q_end) approach["q_end"] = *d.q_end;
  approach["probe_tilt_deg"] = d.probe_tilt_deg;
  approach["fold_deg"] = d.fold_deg;
  approach["fold_step_deg"] = d.fold_step_deg;
  approach["probe_step"] = d.probe_step;
  approach["probe_max"] = d.probe_max;

  ojson root;
  root["schema_version"] = d.schema_version;
  root["behavior"] = to_string(d.behavior);
  root["environment"] = ojson{
      {"support",
       ojson{{"kind", support_name(d.support)}, {"ramp_deg", d.ramp_deg}, {"height", d.support_height}}},
      {"objects", objects}};
  root["approach"] = approach;
  root["thresholds"] = ojson{{"liftoff_clearance", d.liftoff_clearance},
                             {"secure_clearance", d.secure_clearance},
                             {"pinch_angle_deg", d.pinch_angle_deg},
                             {"min_incidence_deg", d.min_incidence_deg}};
  return root.dump(2) + "\n";
}

Scenario to_scenario(const ScenarioDocument& d, const ConfigDocument& config) {
  const DriveMode mode = config.drive.mode;
  if (d.behavior == Behavior::Envelope && mode != DriveMode::Rotational)
    throw ScalError(ErrorCode::InvalidDocument,
                    "scenario: behavior 'envelope' requires a rotational drive");
  if ((d.behavior == Behavior::PassiveOpen || d.behavior == Behavior::ObliqueProbe) &&
      mode != DriveMode::Linear)
    throw ScalError(ErrorCode::InvalidDocument,
                    fmt::format("scenario: behavior '{}' requires a linear drive", to_string(d.behavior)));

  Scenario sc;
  sc.behavior = d.behavior;
  sc.env.support.kind = d.support;
  sc.env.support.incline = deg2rad(d.ramp_deg);
  sc.env.support.height = d.support_height;
  for (const ObjectEntry& e : d.objects) sc.env.objects.push_back({e.kind, e.width, e.height, e.position});
  sc.base_x = d.base_x;
  sc.base_height = d.base_height;
  if (d.q_start) sc.q_start = config.q_from_doc(*d.q_start);
  if (d.q_end) sc.q_end = config.q_from_doc(*d.q_end);
  sc.probe_tilt = deg2rad(d.probe_tilt_deg);
  sc.fold = deg2rad(d.fold_deg);
  sc.fold_step = deg2rad(d.fold_step_deg);
  sc.probe_step = d.probe_step;
  sc.probe_max = d.probe_max;
  sc.settings.dq = config.dq();
  sc.settings.liftoff_clearance = d.liftoff_clearance;
  sc.settings.secure_clearance = d.secure_clearance;
  sc.settings.pinch_angle = deg2rad(d.pinch_angle_deg);
  sc.settings.min_incidence = deg2rad(d.min_incidence_deg);
  return sc;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScalError(ErrorCode::InvalidDocument, fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace scal
