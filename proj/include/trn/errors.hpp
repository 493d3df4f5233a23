#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace trn {

// Every failure mode the library reports. CLI maps these to exit codes.
enum class ErrorKind {
    MissingPair,
    DuplicatePair,
    SelfLoop,
    EmptySet,
    Overlap,
    ArityMismatch,
    BadPermutation,
    SpecViolatesGalaxyCondition,
    NotAStar,
    NotAGalaxy,
    NotPrime,
    TooLarge,
    TooSmall,
    ExtractorTooWeak,
    HypothesisViolated,
    PreconditionViolated,
    DomainError,
    BudgetExceeded,
    VerificationFailed,
    ParseError,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

// Raised when a search that assumed an H-free input runs into a copy of H.
// Carries the witness map (pattern vertex -> host vertex).
class FoundH : public std::runtime_error {
public:
    explicit FoundH(std::vector<int> map)
        : std::runtime_error("found a copy of the forbidden tournament"), map_(std::move(map)) {}

    const std::vector<int>& map() const { return map_; }

private:
    std::vector<int> map_;
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::MissingPair: return "MissingPair";
        case ErrorKind::DuplicatePair: return "DuplicatePair";
        case ErrorKind::SelfLoop: return "SelfLoop";
        case ErrorKind::EmptySet: return "EmptySet";
        case ErrorKind::Overlap: return "Overlap";
        case ErrorKind::ArityMismatch: return "ArityMismatch";
        case ErrorKind::BadPermutation: return "BadPermutation";
        case ErrorKind::SpecViolatesGalaxyCondition: return "SpecViolatesGalaxyCondition";
        case ErrorKind::NotAStar: return "NotAStar";
        case ErrorKind::NotAGalaxy: return "NotAGalaxy";
        case ErrorKind::NotPrime: return "NotPrime";
        case ErrorKind::TooLarge: return "TooLarge";
        case ErrorKind::TooSmall: return "TooSmall";
        case ErrorKind::ExtractorTooWeak: return "ExtractorTooWeak";
        case ErrorKind::HypothesisViolated: return "HypothesisViolated";
        case ErrorKind::PreconditionViolated: return "PreconditionViolated";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::VerificationFailed: return "VerificationFailed";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "UnknownError";
}

} // namespace trn
