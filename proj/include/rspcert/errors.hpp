#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rspcert {

enum class ErrorKind {
    InvalidArgument,
    Parse,
    ZeroColumn,
    BudgetExceeded,
    IterationLimit,
    CertificateUnavailable,
    NotNonnegative,
    NotASolution,
    Infeasible,
    Unbounded,
    NonpositiveWeight,
    NoSolutionWithin,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::ZeroColumn: return "ZeroColumn";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::IterationLimit: return "IterationLimit";
    case ErrorKind::CertificateUnavailable: return "CertificateUnavailable";
    case ErrorKind::NotNonnegative: return "NotNonnegative";
    case ErrorKind::NotASolution: return "NotASolution";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::NonpositiveWeight: return "NonpositiveWeight";
    case ErrorKind::NoSolutionWithin: return "NoSolutionWithin";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

} // namespace rspcert
