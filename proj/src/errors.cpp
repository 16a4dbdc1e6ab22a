#include "damteval/errors.hpp"

namespace damteval {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DegenerateEmbedding: return "DegenerateEmbedding";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::EmptySystemSet: return "EmptySystemSet";
        case ErrorCode::EmptyCorpus: return "EmptyCorpus";
        case ErrorCode::AlignmentError: return "AlignmentError";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::FormatError: return "FormatError";
        case ErrorCode::CoverageError: return "CoverageError";
        case ErrorCode::UndefinedCorrelation: return "UndefinedCorrelation";
        case ErrorCode::InsufficientSystems: return "InsufficientSystems";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace damteval
