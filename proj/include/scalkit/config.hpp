#pragma once

// JSON configuration and scenario documents. Documents keep the units they are
// written in (mm, degrees) so parse -> serialize -> parse is exact; conversion
// to library types happens in the accessors.

#include <string>
#include <string_view>

#include "scalkit/contact.hpp"
#include "scalkit/drive.hpp"
#include "scalkit/linkage.hpp"

namespace scal {

inline constexpr int kSchemaVersion = 1;

enum class Preset { ScalR, ScalL };

std::string_view to_string(Preset p);

struct LinkageSection {
  double base_unit_l = 10.0;
  double len_AB = 60.0, len_CB = 70.0, len_BD = 40.0;
  double len_AE = 20.0, len_BF = 20.0, len_BG = 20.0, len_DI = 40.0;
  double gamma_deg = 160.0;
  double s_min = 50.0, s_max = 110.0;
  double alpha_deg = 0.0, beta_deg = 0.0, theta_T_deg = 0.0;
  int branch_B = 1, branch_D = 1, branch_T = 1;
  double tip_offset_deg = 0.0;

  friend bool operator==(const LinkageSection&, const LinkageSection&) = default;
};

/// q_min, q_max and dq are in degrees (rotational) or mm (linear).
struct DriveSection {
  DriveMode mode = DriveMode::Rotational;
  double q_min = 0.0, q_max = 90.0, dq = 0.1;
  double core_mount_deg = 0.0;

  friend bool operator==(const DriveSection&, const DriveSection&) = default;
};

struct ConfigDocument {
  int schema_version = kSchemaVersion;
  Preset preset = Preset::ScalR;
  LinkageSection linkage;
  SpringParams spring;
  DriveSection drive;
  double aperture = 80.0;

  friend bool operator==(const ConfigDocument&, const ConfigDocument&) = default;

  LinkageParams linkage_params() const;
  GripperAssembly assembly() const;
  /// Drive increment in library units (rad or mm).
  double dq() const;
  /// Converts a drive input from library units to document units.
  double q_to_doc(double q) const;
  double q_from_doc(double q) const;
};

ConfigDocument preset_document(Preset p);

/// Parses a config; missing keys come from the selected preset ("preset" key, or
/// inferred from drive.mode). Throws ScalError(InvalidDocument) with a line or key path.
ConfigDocument parse_config(std::string_view text);
std::string serialize(const ConfigDocument& doc);

struct ObjectEntry {
  ObjectKind kind = ObjectKind::Rectangle;
  double width = 10.0;  // diameter for disks
  double height = 10.0;
  double position = 0.0;

  friend bool operator==(const ObjectEntry&, const ObjectEntry&) = default;
};

struct ScenarioDocument {
  int schema_version = kSchemaVersion;
  Behavior behavior = Behavior::PinchLift;
  SupportKind support = SupportKind::Flat;
  double ramp_deg = 0.0;
  double support_height = 0.0;
  std::vector<ObjectEntry> objects;
  double base_x = 0.0;
  double base_height = 110.0;
  std::optional<double> q_start;  // document units of the paired config
  std::optional<double> q_end;
  double probe_tilt_deg = 0.0;
  double fold_deg = 45.0;
  double fold_step_deg = 0.5;
  double probe_step = 0.1;
  double probe_max = 200.0;
  double liftoff_clearance = 0.5;
  double secure_clearance = 5.0;
  double pinch_angle_deg = 30.0;
  double min_incidence_deg = 5.0;

  friend bool operator==(const ScenarioDocument&, const ScenarioDocument&) = default;
};

ScenarioDocument parse_scenario(std::string_view text);
std::string serialize(const ScenarioDocument& doc);

/// Library scenario for `config`; throws InvalidDocument when the behavior does
/// not suit the drive mode.
Scenario to_scenario(const ScenarioDocument& doc, const ConfigDocument& config);

std::string_view to_string(Behavior b);

/// Reads a whole file; throws InvalidDocument when it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace scal
