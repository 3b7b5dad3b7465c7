#pragma once

#include <stdexcept>
#include <string>

namespace frobshot {

// Every failure the toolkit can signal. Codes group into three classes:
// invalid input, resource/guard limits, and certificate failures. The CLI
// maps these classes onto distinct process exit codes.
enum class ErrorCode {
    NotCoprime,
    TooSmall,
    Duplicate,
    ModulusTooLarge,
    DegenerateBasis,
    BasisMismatch,
    EnumerationBudgetExceeded,
    RankTooHigh,
    NotReduced,
    A1TooSmall,
    NoCoprimeTriple,
    OrderViolation,
    DependentVectors,
    CertificateFailure,
    Internal,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::NotCoprime: return "NotCoprime";
        case ErrorCode::TooSmall: return "TooSmall";
        case ErrorCode::Duplicate: return "Duplicate";
        case ErrorCode::ModulusTooLarge: return "ModulusTooLarge";
        case ErrorCode::DegenerateBasis: return "DegenerateBasis";
        case ErrorCode::BasisMismatch: return "BasisMismatch";
        case ErrorCode::EnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
        case ErrorCode::RankTooHigh: return "RankTooHigh";
        case ErrorCode::NotReduced: return "NotReduced";
        case ErrorCode::A1TooSmall: return "A1TooSmall";
        case ErrorCode::NoCoprimeTriple: return "NoCoprimeTriple";
        case ErrorCode::OrderViolation: return "OrderViolation";
        case ErrorCode::DependentVectors: return "DependentVectors";
        case ErrorCode::CertificateFailure: return "CertificateFailure";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    // Process exit code class: 2 input, 3 guard, 4 certificate, 1 internal.
    int exit_class() const noexcept {
        switch (code_) {
            case ErrorCode::ModulusTooLarge:
            case ErrorCode::EnumerationBudgetExceeded:
            case ErrorCode::RankTooHigh:
                return 3;
            case ErrorCode::CertificateFailure:
                return 4;
            case ErrorCode::Internal:
                return 1;
            default:
                return 2;
        }
    }

private:
    ErrorCode code_;
};

} // namespace frobshot
