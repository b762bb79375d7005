#include "specrev/error.hpp"

namespace specrev {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidAxis: return "InvalidAxis";
    case ErrorKind::InvalidSpectrum: return "InvalidSpectrum";
    case ErrorKind::AxisOutOfRange: return "AxisOutOfRange";
    case ErrorKind::AxisMismatch: return "AxisMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::DegenerateReference: return "DegenerateReference";
    case ErrorKind::NearZeroSlope: return "NearZeroSlope";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::UnknownEntry: return "UnknownEntry";
    case ErrorKind::EmptyLibrary: return "EmptyLibrary";
    case ErrorKind::ManifestParseError: return "ManifestParseError";
    case ErrorKind::MissingSpectrumFile: return "MissingSpectrumFile";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SingularSources: return "SingularSources";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::InfeasibleBounds: return "InfeasibleBounds";
    case ErrorKind::UnsupportedQ: return "UnsupportedQ";
    case ErrorKind::ZeroVarianceColumn: return "ZeroVarianceColumn";
    case ErrorKind::FoldTooSmall: return "FoldTooSmall";
    case ErrorKind::EmptyTestSet: return "EmptyTestSet";
    case ErrorKind::AxisTooNarrow: return "AxisTooNarrow";
    case ErrorKind::CompositionInvalid: return "CompositionInvalid";
  }
  return "Error";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::IoError:
    case ErrorKind::MissingSpectrumFile:
      return 3;
    case ErrorKind::DegenerateReference:
    case ErrorKind::NearZeroSlope:
    case ErrorKind::RankDeficient:
    case ErrorKind::NoConvergence:
    case ErrorKind::SingularSources:
    case ErrorKind::ZeroVarianceColumn:
      return 4;
    default:
      return 2;
  }
}

}  // namespace specrev
