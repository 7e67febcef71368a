#include "spectra/error.hpp"

namespace spectra {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegeneratePencil: return "DegeneratePencil";
    case ErrorKind::InvalidPlane: return "InvalidPlane";
    case ErrorKind::OnSpectrum: return "OnSpectrum";
    case ErrorKind::NotDegenerate: return "NotDegenerate";
    case ErrorKind::NotDisplayed: return "NotDisplayed";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::BranchJump: return "BranchJump";
    case ErrorKind::LoopHitsSpectrum: return "LoopHitsSpectrum";
    case ErrorKind::SingularTruncation: return "SingularTruncation";
    case ErrorKind::LevelTooLarge: return "LevelTooLarge";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

}  // namespace spectra
