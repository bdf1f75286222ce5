#include "jacring/error.hpp"

namespace jacring {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::AmbientMismatch: return "AmbientMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ContextMismatch: return "ContextMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegreeZero: return "DegreeZero";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::DegreeCapExceeded: return "DegreeCapExceeded";
    case ErrorCode::NotSmooth: return "NotSmooth";
    case ErrorCode::ZeroForm: return "ZeroForm";
    case ErrorCode::ZeroInput: return "ZeroInput";
    case ErrorCode::NonInjectiveX: return "NonInjectiveX";
    case ErrorCode::PlanNotFound: return "PlanNotFound";
    case ErrorCode::StepHypothesisFailed: return "StepHypothesisFailed";
    case ErrorCode::CoherenceFailed: return "CoherenceFailed";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotRelated: return "NotRelated";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace jacring
