#pragma once

#include <stdexcept>
#include <string>

namespace ddekoop {

enum class ErrorKind {
  PreconditionViolation,
  DimensionMismatch,
  NonFiniteState,
  SingularGram,
  DuplicateCenters,
  EmptyCenters,
  InconsistentTrajectories,
  InsufficientData,
  InsufficientNeighbors,
  RankDeficient,
  FitFailed,
  Io,
  Config,
};

const char* to_string(ErrorKind kind) noexcept;

/// Numerical kinds map to CLI exit code 2, the rest to 1.
bool is_numerical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorKind::PreconditionViolation, what);
}

}  // namespace ddekoop
