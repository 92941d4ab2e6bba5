#include "sp21kit/error.hpp"

namespace sp21kit {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonFinite: return "NonFinite";
    case Errc::DivisionByNearZero: return "DivisionByNearZero";
    case Errc::NonRealSelfInner: return "NonRealSelfInner";
    case Errc::AtInfinity: return "AtInfinity";
    case Errc::OutsideDomain: return "OutsideDomain";
    case Errc::NotSymplectic: return "NotSymplectic";
    case Errc::IllConditioned: return "IllConditioned";
    case Errc::DegenerateDraw: return "DegenerateDraw";
    case Errc::ZeroInput: return "ZeroInput";
    case Errc::NotDiagonal: return "NotDiagonal";
    case Errc::NotLoxodromic: return "NotLoxodromic";
    case Errc::ConstraintViolated: return "ConstraintViolated";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::NonComplexTraces: return "NonComplexTraces";
    case Errc::StructureMismatch: return "StructureMismatch";
    case Errc::ReductionFailed: return "ReductionFailed";
    case Errc::InfeasibleSpec: return "InfeasibleSpec";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace sp21kit
