#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "scalkit/config.hpp"

namespace scal {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Invariant suite for one configuration: parameters, loop closure, frame
/// transmission, locus continuity, drive rigidity/mirror and statics identities.
std::vector<CheckResult> validate_config(const ConfigDocument& doc, std::size_t samples = 1000);

bool all_pass(const std::vector<CheckResult>& results);
/// Fixed-width table, one row per check.
std::string format_table(const std::vector<CheckResult>& results);

}  // namespace scal
