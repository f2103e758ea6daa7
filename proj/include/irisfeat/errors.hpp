#pragma once

#include <stdexcept>
#include <string>

namespace irisfeat {

enum class ErrorKind {
  InvalidAnnotation,
  DegenerateAnnotation,
  Io,
  Config,
  Shape,
  InputSize,
  Tap,
  Format,
  Completeness,
  Parameter,
  InsufficientData,
  DegenerateLabels,
  Stratification,
  DegenerateScores,
};

const char* to_string(ErrorKind kind);

// Base for every error raised by the library. what() is "<kind>: <message>".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

template <ErrorKind K>
class TypedError : public Error {
 public:
  explicit TypedError(const std::string& message) : Error(K, message) {}
};

using InvalidAnnotationError = TypedError<ErrorKind::InvalidAnnotation>;
using DegenerateAnnotationError = TypedError<ErrorKind::DegenerateAnnotation>;
using IoError = TypedError<ErrorKind::Io>;
using ConfigError = TypedError<ErrorKind::Config>;
using ShapeError = TypedError<ErrorKind::Shape>;
using InputSizeError = TypedError<ErrorKind::InputSize>;
using TapError = TypedError<ErrorKind::Tap>;
using FormatError = TypedError<ErrorKind::Format>;
using CompletenessError = TypedError<ErrorKind::Completeness>;
using ParameterError = TypedError<ErrorKind::Parameter>;
using InsufficientDataError = TypedError<ErrorKind::InsufficientData>;
using DegenerateLabelsError = TypedError<ErrorKind::DegenerateLabels>;
using StratificationError = TypedError<ErrorKind::Stratification>;
using DegenerateScoresError = TypedError<ErrorKind::DegenerateScores>;

/// Rethrows `e` as the same typed error with "<context>: " prepended.
[[noreturn]] void rethrow_with_context(const Error& e, const std::string& context);

}  // namespace irisfeat
