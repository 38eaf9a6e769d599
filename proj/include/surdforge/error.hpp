#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace surdforge {

enum class ErrorKind {
    InvalidArgument,
    DNotPositive,
    PerfectSquare,
    PeriodLimitExceeded,
    NotInvertible,
    ModuliNotCoprime,
    TooLargeToFactor,
    EmptySequence,
    MismatchAt,
    ParityConditionFails,
    NotIntegral,
    InvalidK,
    EvenN,
    OddK,
    KnownObstruction,
    Unsupported,
    SearchExhausted,
    ParitySearchExhausted,
    VerificationFailed,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::DNotPositive: return "DNotPositive";
        case ErrorKind::PerfectSquare: return "PerfectSquare";
        case ErrorKind::PeriodLimitExceeded: return "PeriodLimitExceeded";
        case ErrorKind::NotInvertible: return "NotInvertible";
        case ErrorKind::ModuliNotCoprime: return "ModuliNotCoprime";
        case ErrorKind::TooLargeToFactor: return "TooLargeToFactor";
        case ErrorKind::EmptySequence: return "EmptySequence";
        case ErrorKind::MismatchAt: return "MismatchAt";
        case ErrorKind::ParityConditionFails: return "ParityConditionFails";
        case ErrorKind::NotIntegral: return "NotIntegral";
        case ErrorKind::InvalidK: return "InvalidK";
        case ErrorKind::EvenN: return "EvenN";
        case ErrorKind::OddK: return "OddK";
        case ErrorKind::KnownObstruction: return "KnownObstruction";
        case ErrorKind::Unsupported: return "Unsupported";
        case ErrorKind::SearchExhausted: return "SearchExhausted";
        case ErrorKind::ParitySearchExhausted: return "ParitySearchExhausted";
        case ErrorKind::VerificationFailed: return "VerificationFailed";
    }
    return "Unknown";
}

/// Every failure raised by the library. `index()` is set for MismatchAt.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message,
          std::optional<std::size_t> index = std::nullopt)
        : std::runtime_error(message), kind_(kind), index_(index) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<std::size_t> index() const noexcept { return index_; }

private:
    ErrorKind kind_;
    std::optional<std::size_t> index_;
};

}  // namespace surdforge
