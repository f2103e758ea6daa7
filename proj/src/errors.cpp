#include "irisfeat/errors.hpp"

namespace irisfeat {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidAnnotation: return "invalid annotation";
    case ErrorKind::DegenerateAnnotation: return "degenerate annotation";
    case ErrorKind::Io: return "I/O error";
    case ErrorKind::Config: return "config error";
    case ErrorKind::Shape: return "shape error";
    case ErrorKind::InputSize: return "input-size error";
    case ErrorKind::Tap: return "tap error";
    case ErrorKind::Format: return "format error";
    case ErrorKind::Completeness: return "completeness error";
    case ErrorKind::Parameter: return "parameter error";
    case ErrorKind::InsufficientData: return "insufficient data";
    case ErrorKind::DegenerateLabels: return "degenerate labels";
    case ErrorKind::Stratification: return "stratification error";
    case ErrorKind::DegenerateScores: return "degenerate scores";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

void rethrow_with_context(const Error& e, const std::string& context) {
  const std::string msg = context + ": " + e.message();
  switch (e.kind()) {
    case ErrorKind::InvalidAnnotation: throw InvalidAnnotationError(msg);
    case ErrorKind::DegenerateAnnotation: throw DegenerateAnnotationError(msg);
    case ErrorKind::Io: throw IoError(msg);
    case ErrorKind::Config: throw ConfigError(msg);
    case ErrorKind::Shape: throw ShapeError(msg);
    case ErrorKind::InputSize: throw InputSizeError(msg);
    case ErrorKind::Tap: throw TapError(msg);
    case ErrorKind::Format: throw FormatError(msg);
    case ErrorKind::Completeness: throw CompletenessError(msg);
    case ErrorKind::Parameter: throw ParameterError(msg);
    case ErrorKind::InsufficientData: throw InsufficientDataError(msg);
    case ErrorKind::DegenerateLabels: throw DegenerateLabelsError(msg);
    case ErrorKind::Stratification: throw StratificationError(msg);
    case ErrorKind::DegenerateScores: throw DegenerateScoresError(msg);
  }
  throw Error(e.kind(), msg);
}

}  // namespace irisfeat
