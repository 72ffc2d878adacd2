#include "perturbkit/core/error.h"

namespace pk {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownMethod: return "UnknownMethod";
    case ErrorCode::kLexError: return "LexError";
    case ErrorCode::kEmptyStream: return "EmptyStream";
    case ErrorCode::kLanguageMismatch: return "LanguageMismatch";
    case ErrorCode::kNotApplicable: return "NotApplicable";
    case ErrorCode::kUnsupportedCombination: return "UnsupportedCombination";
    case ErrorCode::kEngineFailure: return "EngineFailure";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kMalformedAnswer: return "MalformedAnswer";
    case ErrorCode::kToolchainUnavailable: return "ToolchainUnavailable";
    case ErrorCode::kCompileFailed: return "CompileFailed";
    case ErrorCode::kRunnerFailure: return "RunnerFailure";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kRegionUnavailable: return "RegionUnavailable";
    case ErrorCode::kMissingCompletion: return "MissingCompletion";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kCorpusError: return "CorpusError";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorCode code, const std::string& message,
                           std::optional<std::size_t> offset) {
  std::string out(to_string(code));
  out += ": ";
  out += message;
  if (offset) {
    out += " (at byte ";
    out += std::to_string(*offset);
    out += ")";
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> offset)
    : std::runtime_error(format_message(code, message, offset)),
      code_(code),
      offset_(offset) {}

}  // namespace pk
