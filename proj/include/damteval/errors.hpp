#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace damteval {

enum class ErrorCode {
    DegenerateEmbedding,
    DimensionMismatch,
    EmptySystemSet,
    EmptyCorpus,
    AlignmentError,
    ConfigError,
    ParseError,
    FormatError,
    CoverageError,
    UndefinedCorrelation,
    InsufficientSystems,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so the
// CLI can report it as `ERROR <code>: <message>`.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace damteval
