#pragma once

#include <stdexcept>
#include <string>

namespace plh {

/// Machine-readable failure category carried by every library exception.
enum class ErrorKind {
    DomainError,
    DegenerateDimension,
    DegenerateGradient,
    InconclusiveGrid,
    PreconditionViolated,
    GradientDegenerate,
    Blowup,
    ToleranceFailure,
    InsufficientWindow,
    NoBracket,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::DegenerateDimension: return "DegenerateDimension";
    case ErrorKind::DegenerateGradient: return "DegenerateGradient";
    case ErrorKind::InconclusiveGrid: return "InconclusiveGrid";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::GradientDegenerate: return "GradientDegenerate";
    case ErrorKind::Blowup: return "Blowup";
    case ErrorKind::ToleranceFailure: return "ToleranceFailure";
    case ErrorKind::InsufficientWindow: return "InsufficientWindow";
    case ErrorKind::NoBracket: return "NoBracket";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised when a hypothesis gate fails; `radius` is the first offending node
/// (NaN when the failure is not tied to a node).
class PreconditionError : public Error {
public:
    PreconditionError(const std::string& what, double radius)
        : Error(ErrorKind::PreconditionViolated, what), radius_(radius) {}

    double radius() const noexcept { return radius_; }

private:
    double radius_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace plh
