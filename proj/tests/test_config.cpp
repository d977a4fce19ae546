#include <string>

#include "doctest.h"
#include "scalkit/config.hpp"
#include "scalkit/error.hpp"

using namespace scal;

namespace {

std::string message_of(auto&& f) {
  try {
    f();
  } catch (const ScalError& e) {
    CHECK(e.code() == ErrorCode::InvalidDocument);
    return e.what();
  }
  FAIL("expected InvalidDocument");
  return {};
}

std::string file(const std::string& rel) { return read_file(std::string(SCALKIT_SOURCE_DIR) + "/" + rel); }

}  // namespace

TEST_CASE("config round trip is exact") {
  for (Preset p : {Preset::ScalR, Preset::ScalL}) {
    const ConfigDocument d = preset_document(p);
    const ConfigDocument back = parse_config(serialize(d));
    CHECK(back == d);
    CHECK(serialize(back) == serialize(d));
  }
  ConfigDocument odd = preset_document(Preset::ScalR);
  odd.linkage.beta_deg = 0.1 + 0.2;  // not representable in short decimal form
  odd.aperture = 1.0 / 3.0;
  CHECK(parse_config(serialize(odd)) == odd);
}

TEST_CASE("shipped configs equal the presets") {
  CHECK(parse_config(file("configs/scal_r.json")) == preset_document(Preset::ScalR));
  CHECK(parse_config(file("configs/scal_l.json")) == preset_document(Preset::ScalL));
}

TEST_CASE("missing keys come from the preset") {
  const ConfigDocument d = parse_config(R"({"schema_version": 1, "linkage": {"len_AB": 61}})");
  ConfigDocument expected = preset_document(Preset::ScalR);
  expected.linkage.len_AB = 61;
  CHECK(d == expected);
  const ConfigDocument l = parse_config(R"({"schema_version": 1, "drive": {"mode": "linear"}})");
  CHECK(l.preset == Preset::ScalL);
  CHECK(l.linkage == preset_document(Preset::ScalL).linkage);
}

TEST_CASE("library conversion of a config") {
  const ConfigDocument d = preset_document(Preset::ScalR);
  const GripperAssembly g = d.assembly();
  const GripperAssembly ref = scal_r_assembly();
  CHECK(g.finger == ref.finger);
  CHECK(g.aperture == ref.aperture);
  CHECK(g.core_mount == doctest::Approx(ref.core_mount));
  CHECK(g.q_max == doctest::Approx(ref.q_max));
  CHECK(d.dq() == doctest::Approx(deg2rad(0.1)));
  CHECK(d.q_to_doc(d.q_from_doc(37.5)) == doctest::Approx(37.5));
  CHECK(preset_document(Preset::ScalL).assembly().finger == scal_l_params());
}

TEST_CASE("diagnostics carry line numbers and key paths") {
  const std::string unknown = "{\n  \"schema_version\": 1,\n  \"linkage\": {\n    \"len_QQ\": 3\n  }\n}\n";
  const std::string m1 = message_of([&] { parse_config(unknown); });
  CHECK(m1.find("line 4") != std::string::npos);
  CHECK(m1.find("linkage.len_QQ") != std::string::npos);

  const std::string broken = "{\n  \"schema_version\": 1,\n  \"linkage\": {\n    \"len_AB\": ,\n";
  CHECK(message_of([&] { parse_config(broken); }).find("line 4") != std::string::npos);

  const std::string wrong_type = "{\n  \"schema_version\": 1,\n  \"gripper\": {\"aperture\": \"wide\"}\n}";
  const std::string m3 = message_of([&] { parse_config(wrong_type); });
  CHECK(m3.find("gripper.aperture") != std::string::npos);
  CHECK(m3.find("line 3") != std::string::npos);

  message_of([] { parse_config(R"({"schema_version": 2})"); });
  message_of([] { parse_config(R"({"preset": "scal-r"})"); });
  message_of([] { parse_config(R"({"schema_version": 1, "preset": "scal-x"})"); });
  message_of([] { parse_config(R"({"schema_version": 1, "linkage": {"branch_B": 1.5}})"); });
  message_of([] { read_file("/nonexistent/config.json"); });
}

TEST_CASE("scenario documents") {
  for (const char* name : {"pinch_lift_flat", "ramp_20", "envelope_disk", "passive_open_disk",
                           "probe_rect_vertical", "probe_rect_oblique", "empty"}) {
    CAPTURE(name);
    const ScenarioDocument d = parse_scenario(file(std::string("scenarios/") + name + ".json"));
    CHECK(parse_scenario(serialize(d)) == d);
  }
  const ScenarioDocument ramp = parse_scenario(file("scenarios/ramp_20.json"));
  CHECK(ramp.support == SupportKind::Ramp);
  CHECK(ramp.ramp_deg == 20.0);
  REQUIRE(ramp.objects.size() == 1);
  CHECK(ramp.objects[0].kind == ObjectKind::Rectangle);

  message_of([] { parse_scenario(R"({"schema_version": 1, "behavior": "juggle"})"); });
  message_of([] {
    parse_scenario(R"({"schema_version": 1, "environment": {"objects": [{"kind": "disk", "width": 3}]}})");
  });
}

TEST_CASE("behavior must suit the drive mode") {
  const ScenarioDocument env = parse_scenario(file("scenarios/envelope_disk.json"));
  const ScenarioDocument po = parse_scenario(file("scenarios/passive_open_disk.json"));
  CHECK_NOTHROW(to_scenario(env, preset_document(Preset::ScalR)));
  message_of([&] { to_scenario(env, preset_document(Preset::ScalL)); });
  message_of([&] { to_scenario(po, preset_document(Preset::ScalR)); });
}

TEST_CASE("scenario conversion uses drive units of the config") {
  const ScenarioDocument po = parse_scenario(file("scenarios/passive_open_disk.json"));
  const Scenario sc = to_scenario(po, preset_document(Preset::ScalL));
  REQUIRE(sc.q_start);
  CHECK(*sc.q_start == 70.25);
  CHECK(sc.settings.dq == 0.1);
  const ScenarioDocument env = parse_scenario(file("scenarios/envelope_disk.json"));
  CHECK(to_scenario(env, preset_document(Preset::ScalR)).fold == doctest::Approx(deg2rad(75.0)));
}
