#ifndef VALK_ERRORS_HPP
#define VALK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace valk {

enum class ErrorCode {
    ContextMismatch,
    UndefinedSum,
    InvalidValue,
    NegativeValue,
    DivisionByZeroPoly,
    NonMonicKey,
    ZeroPolynomial,
    ZeroElement,
    GammaMismatch,
    NeedsRefinement,
    BadCertificate,
    Unstabilized,
    UnsupportedTower,
    InvalidInput,
    SchemaError,
    Inconsistent,
};

inline const char *error_name(ErrorCode c)
{
    switch (c) {
        case ErrorCode::ContextMismatch: return "ContextMismatch";
        case ErrorCode::UndefinedSum: return "UndefinedSum";
        case ErrorCode::InvalidValue: return "InvalidValue";
        case ErrorCode::NegativeValue: return "NegativeValue";
        case ErrorCode::DivisionByZeroPoly: return "DivisionByZeroPoly";
        case ErrorCode::NonMonicKey: return "NonMonicKey";
        case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
        case ErrorCode::ZeroElement: return "ZeroElement";
        case ErrorCode::GammaMismatch: return "GammaMismatch";
        case ErrorCode::NeedsRefinement: return "NeedsRefinement";
        case ErrorCode::BadCertificate: return "BadCertificate";
        case ErrorCode::Unstabilized: return "Unstabilized";
        case ErrorCode::UnsupportedTower: return "UnsupportedTower";
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::Inconsistent: return "Inconsistent";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

    /// NeedsRefinement and Unstabilized are resource limits, not bad input.
    bool is_resource_limit() const noexcept
    {
        return code_ == ErrorCode::NeedsRefinement || code_ == ErrorCode::Unstabilized;
    }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &what) { throw Error(code, what); }

} // namespace valk

#endif
