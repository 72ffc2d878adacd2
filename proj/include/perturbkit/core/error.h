#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pk {

enum class ErrorCode {
  kUnknownMethod,
  kLexError,
  kEmptyStream,
  kLanguageMismatch,
  kNotApplicable,
  kUnsupportedCombination,
  kEngineFailure,
  kParseError,
  kMalformedAnswer,
  kToolchainUnavailable,
  kCompileFailed,
  kRunnerFailure,
  kTimeout,
  kRegionUnavailable,
  kMissingCompletion,
  kConfigError,
  kCorpusError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library. The code carries the error class;
// `offset` is set for errors that point into source text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> offset = std::nullopt);

  ErrorCode code() const { return code_; }
  std::optional<std::size_t> offset() const { return offset_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> offset_;
};

}  // namespace pk
