#pragma once

#include <stdexcept>
#include <string>

namespace hyperreg {

enum class ErrorCode {
  NotSquarefree,
  IndicesCollide,
  BadIndex,
  ArcHitsBranchPoint,
  PathTooCloseToBranchPoint,
  SeedMismatch,
  CannotAvoidMarkedPoints,
  SubsetNotSeparable,
  EvenSubset,
  DegenerateLoop,
  NonTransverse,
  SingularPeriodMatrix,
  SingularSystem,
  PoleOnPath,
  NoConvergence,
  RankDeficient,
  DNotNullHomologous,
  BadSplit,
  NotInKernel,
  ConfigParse,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hyperreg
