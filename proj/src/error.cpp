#include "rise/error.hpp"

namespace rise {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "empty_input";
    case ErrorCode::DomainError: return "domain_error";
    case ErrorCode::NotSorted: return "not_sorted";
    case ErrorCode::MissingGroup: return "missing_group";
    case ErrorCode::TooFewPoints: return "too_few_points";
    case ErrorCode::NonMonotonicInput: return "non_monotonic_input";
    case ErrorCode::NotDetected: return "not_detected";
    case ErrorCode::ParseError: return "parse_error";
    case ErrorCode::ValidationError: return "validation_error";
    case ErrorCode::EmptyFile: return "empty_file";
    case ErrorCode::DuplicateRun: return "duplicate_run";
    case ErrorCode::UnknownRun: return "unknown_run";
    case ErrorCode::UnknownAttribute: return "unknown_attribute";
    case ErrorCode::UnknownEnvironment: return "unknown_environment";
    case ErrorCode::StoreError: return "store_error";
    case ErrorCode::IoError: return "io_error";
  }
  return "unknown";
}

InputError::InputError(ErrorCode code, std::size_t line, std::string field,
                       const std::string& reason)
    : Error(code, "line " + std::to_string(line) + ", " + field + ": " + reason),
      line_(line),
      field_(std::move(field)) {}

PipelineError::PipelineError(std::string stage, const Error& cause)
    : Error(cause.code(), cause.what()), stage_(std::move(stage)) {}

}  // namespace rise
