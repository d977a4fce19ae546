#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scal {

enum class ErrorCode {
  OutOfRange,          // slot extension outside [s_min, s_max]
  DegenerateGeometry,  // loop-closure circles tangent or disjoint
  InvalidParams,       // linkage / spring parameter invariant violated
  NoSolution,          // no slot extension resolves the penetration
  BracketFailure,      // root bracket could not be established
  Singular,            // statics denominator below tolerance
  InvalidSchedule,     // drive schedule not monotone or out of range
  InvalidArgument,
  InvalidDocument,     // config / scenario document rejected
};

std::string_view to_string(ErrorCode code);

class ScalError : public std::runtime_error {
 public:
  ScalError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace scal
