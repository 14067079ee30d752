#include "ddekoop/error.hpp"

namespace ddekoop {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::PreconditionViolation: return "PreconditionViolation";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFiniteState: return "NonFiniteState";
    case ErrorKind::SingularGram: return "SingularGram";
    case ErrorKind::DuplicateCenters: return "DuplicateCenters";
    case ErrorKind::EmptyCenters: return "EmptyCenters";
    case ErrorKind::InconsistentTrajectories: return "InconsistentTrajectories";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::InsufficientNeighbors: return "InsufficientNeighbors";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::FitFailed: return "FitFailed";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonFiniteState:
    case ErrorKind::SingularGram:
    case ErrorKind::DuplicateCenters:
    case ErrorKind::InsufficientData:
    case ErrorKind::InsufficientNeighbors:
    case ErrorKind::RankDeficient:
    case ErrorKind::FitFailed:
      return true;
    default:
      return false;
  }
}

}  // namespace ddekoop
