#pragma once

#include <stdexcept>
#include <string>

namespace spectra {

enum class ErrorKind {
  Overflow,
  Parse,
  InvalidArgument,
  DegeneratePencil,
  InvalidPlane,
  OnSpectrum,
  NotDegenerate,
  NotDisplayed,
  NonConvergent,
  BranchJump,
  LoopHitsSpectrum,
  SingularTruncation,
  LevelTooLarge,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind so the
/// CLI can render it as structured JSON.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace spectra
