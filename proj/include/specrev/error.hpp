#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace specrev {

enum class ErrorKind {
  InvalidArgument,
  InvalidAxis,
  InvalidSpectrum,
  AxisOutOfRange,
  AxisMismatch,
  DimensionMismatch,
  ParseError,
  ConfigError,
  DegenerateSpectrum,
  DegenerateReference,
  NearZeroSlope,
  DuplicateName,
  UnknownEntry,
  EmptyLibrary,
  ManifestParseError,
  MissingSpectrumFile,
  IoError,
  RankDeficient,
  NoConvergence,
  SingularSources,
  TooFewSamples,
  InfeasibleBounds,
  UnsupportedQ,
  ZeroVarianceColumn,
  FoldTooSmall,
  EmptyTestSet,
  AxisTooNarrow,
  CompositionInvalid,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Process exit code for an error kind: 2 user/input, 3 I/O, 4 numerical.
int exit_code(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace specrev
