#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jacring {

enum class ErrorCode {
  AmbientMismatch,
  DimensionMismatch,
  ContextMismatch,
  InvalidArgument,
  DegreeZero,
  DegreeMismatch,
  DegreeCapExceeded,
  NotSmooth,
  ZeroForm,
  ZeroInput,
  NonInjectiveX,
  PlanNotFound,
  StepHypothesisFailed,
  CoherenceFailed,
  BudgetExceeded,
  NotRelated,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace jacring
