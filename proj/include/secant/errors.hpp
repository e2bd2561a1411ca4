#pragma once

#include <stdexcept>
#include <string>

namespace secant {

enum class ErrorKind {
    Parse,
    DivisionByZero,
    Range,
    SizeMismatch,
    NotMember,
    InvalidPartition,
    NotNilpotent,
    SumMismatch,
    ZeroInput,
    ZeroVector,
    WrongRank,
    RankTooLow,
    Degenerate,
    Isotropy,
    Pairing,
    Precondition,
    SearchExhausted,
    Resource,
    Genericity,
    Eigenstructure,
    Collinearity,
    ZeroDefect,
    Verification,
};

inline const char* kind_name(ErrorKind k)
{
    switch (k) {
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::DivisionByZero: return "division by zero";
    case ErrorKind::Range: return "out of range";
    case ErrorKind::SizeMismatch: return "size mismatch";
    case ErrorKind::NotMember: return "not a member";
    case ErrorKind::InvalidPartition: return "invalid partition";
    case ErrorKind::NotNilpotent: return "not nilpotent";
    case ErrorKind::SumMismatch: return "sum mismatch";
    case ErrorKind::ZeroInput: return "zero input";
    case ErrorKind::ZeroVector: return "zero vector";
    case ErrorKind::WrongRank: return "wrong rank";
    case ErrorKind::RankTooLow: return "rank too low";
    case ErrorKind::Degenerate: return "degenerate restriction";
    case ErrorKind::Isotropy: return "isotropy violated";
    case ErrorKind::Pairing: return "pairing nonzero";
    case ErrorKind::Precondition: return "precondition violated";
    case ErrorKind::SearchExhausted: return "search exhausted";
    case ErrorKind::Resource: return "resource cap";
    case ErrorKind::Genericity: return "genericity violated";
    case ErrorKind::Eigenstructure: return "eigenstructure mismatch";
    case ErrorKind::Collinearity: return "collinearity failed";
    case ErrorKind::ZeroDefect: return "zero defect";
    case ErrorKind::Verification: return "verification failed";
    }
    return "error";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace secant
