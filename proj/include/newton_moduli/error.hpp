#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace newton_moduli {

enum class ErrorCode {
    DegenerateInput,
    UnsupportedDivisor,
    NotARoot,
    InexactFactor,
    NoStrictlySemistable,
    BudgetExceeded,
    Indeterminate,
    UnstableInput,
    NondegenerateMap,
    RootFinderFailure,
    BarycenterUndefined,
    NumericalFailure,
    IndeterminateValuation,
    IndistinguishableRoots,
    UncertifiedReduction,
    UnstableCurve,
    RepeatedRoots,
    InvalidArgument,
    ParseError,
    IoError,
};

inline std::string_view error_code_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::DegenerateInput: return "degenerate_input";
    case ErrorCode::UnsupportedDivisor: return "unsupported_divisor";
    case ErrorCode::NotARoot: return "not_a_root";
    case ErrorCode::InexactFactor: return "inexact_factor";
    case ErrorCode::NoStrictlySemistable: return "no_strictly_semistable";
    case ErrorCode::BudgetExceeded: return "budget_exceeded";
    case ErrorCode::Indeterminate: return "indeterminate";
    case ErrorCode::UnstableInput: return "unstable_input";
    case ErrorCode::NondegenerateMap: return "nondegenerate_map";
    case ErrorCode::RootFinderFailure: return "root_finder_failure";
    case ErrorCode::BarycenterUndefined: return "barycenter_undefined";
    case ErrorCode::NumericalFailure: return "numerical_failure";
    case ErrorCode::IndeterminateValuation: return "indeterminate_valuation";
    case ErrorCode::IndistinguishableRoots: return "indistinguishable_roots";
    case ErrorCode::UncertifiedReduction: return "uncertified_reduction";
    case ErrorCode::UnstableCurve: return "unstable_curve";
    case ErrorCode::RepeatedRoots: return "repeated_roots";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::ParseError: return "parse_error";
    case ErrorCode::IoError: return "io_error";
    }
    return "unknown";
}

/// Library-wide exception; `code()` is stable and machine readable.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Parse failure carrying the byte offset of the offending character.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position)
        : Error(ErrorCode::ParseError, message), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

} // namespace newton_moduli
