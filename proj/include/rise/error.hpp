#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rise {

enum class ErrorCode {
  EmptyInput,
  DomainError,
  NotSorted,
  MissingGroup,
  TooFewPoints,
  NonMonotonicInput,
  NotDetected,
  ParseError,
  ValidationError,
  EmptyFile,
  DuplicateRun,
  UnknownRun,
  UnknownAttribute,
  UnknownEnvironment,
  StoreError,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse and validation failures carry the 1-based physical line of the input.
class InputError : public Error {
 public:
  InputError(ErrorCode code, std::size_t line, std::string field, const std::string& reason);

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

// Raised by the indicator pipeline; names the stage that failed.
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const Error& cause);

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace rise
