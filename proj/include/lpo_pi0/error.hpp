#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lpo_pi0 {

enum class ErrorCode {
    EmptyInput,
    TooFewValues,
    OutOfRange,
    NonFinite,
    InvalidRange,
    MismatchedResolution,
    InvalidP,
    TooLargeForOracle,
    PoleAtM,
    InvalidLambda,
    DegenerateSelection,
    InvalidAlpha,
    InvalidTheta,
    InvalidDelta,
    InvalidConfig,
    LengthMismatch,
    InvalidScenario,
    ParseError,
    IoError,
};

inline std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::TooFewValues: return "TooFewValues";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::MismatchedResolution: return "MismatchedResolution";
    case ErrorCode::InvalidP: return "InvalidP";
    case ErrorCode::TooLargeForOracle: return "TooLargeForOracle";
    case ErrorCode::PoleAtM: return "PoleAtM";
    case ErrorCode::InvalidLambda: return "InvalidLambda";
    case ErrorCode::DegenerateSelection: return "DegenerateSelection";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::InvalidTheta: return "InvalidTheta";
    case ErrorCode::InvalidDelta: return "InvalidDelta";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/// Library error. `index` is the offending position in the caller's input
/// when the failure refers to a single element (OutOfRange, NonFinite) or the
/// 1-based line number for ParseError.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, std::optional<std::size_t> index = std::nullopt)
        : std::runtime_error(what), code_(code), index_(index)
    {
    }

    ErrorCode code() const noexcept { return code_; }
    std::optional<std::size_t> index() const noexcept { return index_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> index_;
};

} // namespace lpo_pi0
