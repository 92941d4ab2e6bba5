#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sp21kit {

enum class Errc {
  NonFinite,
  DivisionByNearZero,
  NonRealSelfInner,
  AtInfinity,
  OutsideDomain,
  NotSymplectic,
  IllConditioned,
  DegenerateDraw,
  ZeroInput,
  NotDiagonal,
  NotLoxodromic,
  ConstraintViolated,
  CapExceeded,
  SingularSystem,
  NonComplexTraces,
  StructureMismatch,
  ReductionFailed,
  InfeasibleSpec,
  Parse,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace sp21kit
