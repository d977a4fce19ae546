// scalkit: trace, force, simulate and validate from the command line.
//
// Exit codes: 0 success or Secured, 1 invariant failure, 2 input error,
// 3 scenario Failed.

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "scalkit/config.hpp"
#include "scalkit/error.hpp"
#include "scalkit/export.hpp"
#include "scalkit/kernels.hpp"
#include "scalkit/validate.hpp"

namespace fs = std::filesystem;
using namespace scal;

namespace {

constexpr int kOk = 0;
constexpr int kInvariant = 1;
constexpr int kInput = 2;
constexpr int kFailed = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ConfigDocument load_config(const std::string& path) {
  if (path.empty()) return preset_document(Preset::ScalR);
  return parse_config(read_file(path));
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(fmt::format("cannot write {}", path.string()));
  out << text;
  if (!out) throw InputError(fmt::format("write failed: {}", path.string()));
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError(fmt::format("cannot create {}: {}", dir, ec.message()));
  return fs::path(dir);
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || !std::isfinite(v))
    throw InputError(fmt::format("grid: bad number '{}' in {}", s, what));
  return v;
}

GridAxis parse_axis(const std::string& spec, bool angle) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t at; (at = spec.find(':', start)) != std::string::npos; start = at + 1)
    parts.push_back(spec.substr(start, at - start));
  parts.push_back(spec.substr(start));
  if (parts.size() != 3) throw InputError(fmt::format("grid: axis '{}' is not lo:hi:n", spec));
  const double lo = parse_double(parts[0], spec), hi = parse_double(parts[1], spec);
  const double n = parse_double(parts[2], spec);
  if (n < 1 || n != std::floor(n) || n > 1e6)
    throw InputError(fmt::format("grid: count in '{}' must be an integer in [1, 1e6]", spec));
  if (lo > hi) throw InputError(fmt::format("grid: axis '{}' has lo > hi", spec));
  if (n == 1 && lo != hi) throw InputError(fmt::format("grid: single-sample axis '{}' needs lo == hi", spec));
  const double k = angle ? deg2rad(1.0) : 1.0;
  return {lo * k, hi * k, static_cast<std::size_t>(n)};
}

std::pair<GridAxis, GridAxis> parse_grid(const std::string& spec, bool y_angle) {
  const std::size_t comma = spec.find(',');
  if (comma == std::string::npos || spec.find(',', comma + 1) != std::string::npos)
    throw InputError(fmt::format("grid: '{}' is not x0:x1:nx,y0:y1:ny", spec));
  return {parse_axis(spec.substr(0, comma), true), parse_axis(spec.substr(comma + 1), y_angle)};
}

struct TraceArgs {
  std::string config, out = ".";
  std::size_t samples = 601;
  std::string frame = "deployed";
  std::optional<double> q;
};

int cmd_trace(const TraceArgs& a) {
  const ConfigDocument doc = load_config(a.config);
  const LinkageParams p = doc.linkage_params();
  if (a.samples < 1) throw InputError("--samples must be at least 1");
  TraceSweep t;
  if (a.frame == "finger") {
    t = kernels::trace_sweep_parallel(p, nullptr, Side::Right, 0.0, p.s_min, p.s_max, a.samples);
  } else {
    const GripperAssembly g = doc.assembly();
    t = kernels::trace_sweep_parallel(p, &g, Side::Right, a.q ? doc.q_from_doc(*a.q) : g.q_max, p.s_min, p.s_max,
                                      a.samples);
  }
  const fs::path dir = prepare_dir(a.out);
  write_file(dir / "trace.csv", trace_csv(t));
  write_file(dir / "trace.svg", trace_svg(t));
  return kOk;
}

struct ForceArgs {
  std::string model, config, out = ".", grid;
  std::optional<double> T_in, l1, l2, h2, h3, k1;
};

int cmd_force(const ForceArgs& a) {
  const ConfigDocument doc = load_config(a.config);
  ForceGrid grid;
  if (a.model == "pinch") {
    PinchSurfaceSpec spec;
    if (a.T_in) spec.T_in = *a.T_in;
    if (a.l1) spec.l1 = *a.l1;
    if (!a.grid.empty()) std::tie(spec.theta1, spec.h1) = parse_grid(a.grid, false);
    grid = kernels::pinch_grid_parallel(spec);
  } else {
    EnvelopeSurfaceSpec spec;
    spec.k1 = a.k1.value_or(doc.spring.k1);
    if (a.T_in) spec.T_in = *a.T_in;
    if (a.l2) spec.l2 = *a.l2;
    if (a.h2) spec.h2 = *a.h2;
    if (a.h3) spec.h3 = *a.h3;
    if (!a.grid.empty()) std::tie(spec.theta2, spec.theta3) = parse_grid(a.grid, true);
    grid = kernels::envelope_grid_parallel(spec);
  }
  const fs::path dir = prepare_dir(a.out);
  write_file(dir / "force.csv", force_csv(grid));
  fmt::print("{}", summary_line(grid, summarize(grid)));
  return kOk;
}

struct SimArgs {
  std::string config, scenario, out = ".";
};

int cmd_simulate(const SimArgs& a) {
  const ConfigDocument doc = load_config(a.config);
  const ScenarioDocument sd = parse_scenario(read_file(a.scenario));
  const Scenario sc = to_scenario(sd, doc);
  const GripperAssembly g = doc.assembly();
  const SimTrace t = run(g, sc);
  const double q_scale = doc.q_to_doc(1.0);
  const fs::path dir = prepare_dir(a.out);
  write_file(dir / "sim.csv", sim_csv(t, q_scale));
  write_file(dir / "events.log", events_log(t, q_scale));
  write_file(dir / "sim.svg", sim_svg(t));
  fmt::print("{}: {} frames, {} events, final phase {}\n", to_string(sd.behavior), t.frames.size(),
             t.events.size(), to_string(t.final_phase));
  return t.failed() ? kFailed : kOk;
}

int cmd_validate(const std::string& config) {
  const ConfigDocument doc = load_config(config);
  const std::vector<CheckResult> results = validate_config(doc);
  fmt::print("{}", format_table(results));
  const bool ok = all_pass(results);
  fmt::print("{}\n", ok ? "all checks passed" : "invariant failure");
  return ok ? kOk : kInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kinematics, contact simulation and statics for slot-constrained linkage grippers"};
  app.require_subcommand(1);
  std::optional<long long> seed;
  app.add_option("--seed", seed, "Accepted and ignored; all commands are deterministic");

  TraceArgs ta;
  auto* trace = app.add_subcommand("trace", "Sample the joint loci over the slot travel");
  trace->add_option("--config", ta.config, "Config file (default: SCAL-R preset)");
  trace->add_option("--samples", ta.samples, "Number of slot samples")->capture_default_str();
  trace->add_option("--out", ta.out, "Output directory")->capture_default_str();
  trace->add_option("--frame", ta.frame, "deployed (right finger, gripper frame) or finger (base-down)")
      ->check(CLI::IsMember({"finger", "deployed"}))
      ->capture_default_str();
  trace->add_option("--q", ta.q, "Drive input for the deployed frame, deg or mm (default: q_max)");
  trace->add_option("--seed", seed);

  ForceArgs fa;
  auto* force = app.add_subcommand("force", "Evaluate a grasp force surface on a grid");
  force->add_option("model", fa.model, "pinch or envelope")
      ->required()
      ->check(CLI::IsMember({"pinch", "envelope"}));
  force->add_option("--config", fa.config, "Config file (supplies k1)");
  force->add_option("--grid", fa.grid,
                    "x0:x1:nx,y0:y1:ny; pinch: theta1 deg, h1 mm; envelope: theta2, theta3 deg");
  force->add_option("--out", fa.out, "Output directory")->capture_default_str();
  force->add_option("--T_in", fa.T_in, "Input moment, N*mm");
  force->add_option("--l1", fa.l1, "Pinch link length, mm");
  force->add_option("--l2", fa.l2, "Envelope link length, mm");
  force->add_option("--h2", fa.h2, "Envelope lever arm, mm");
  force->add_option("--h3", fa.h3, "Envelope lever arm, mm");
  force->add_option("--k1", fa.k1, "Intermediate spring, N*mm/rad (default from config)");
  force->add_option("--seed", seed);

  SimArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Run a grasp scenario");
  simulate->add_option("--config", sa.config, "Config file (default: SCAL-R preset)");
  simulate->add_option("--scenario", sa.scenario, "Scenario file")->required();
  simulate->add_option("--out", sa.out, "Output directory")->capture_default_str();
  simulate->add_option("--seed", seed);

  std::string vconfig;
  auto* validate = app.add_subcommand("validate", "Run the invariant suite on a config");
  validate->add_option("--config", vconfig, "Config file (default: SCAL-R preset)");
  validate->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  if (const int cap = kernels::thread_cap_from_env(); cap > 0)
    kernels::set_thread_cap(std::min(cap, kernels::effective_threads()));
  try {
    if (trace->parsed()) return cmd_trace(ta);
    if (force->parsed()) return cmd_force(fa);
    if (simulate->parsed()) return cmd_simulate(sa);
    if (validate->parsed()) return cmd_validate(vconfig);
  } catch (const InputError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInput;
  } catch (const ScalError& e) {
    fmt::print(stderr, "error: {}: {}\n", to_string(e.code()), e.what());
    return kInput;
  }
  return kInput;
}
