#pragma once

#include <stdexcept>
#include <string>

namespace semilag {

enum class ErrorKind {
    OutOfDomain,
    NonFiniteResult,
    EmptyCandidateSet,
    NoContraction,
    MissingTrajectory,
    UnsupportedMeasure,
    DegenerateFit,
    InvalidArgument,
    Config,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised when an implicit characteristic step fails to contract; carries the
/// contraction factor that was actually observed.
class NoContractionError : public Error {
public:
    NoContractionError(const std::string& what, double observed)
        : Error(ErrorKind::NoContraction, what), observed_(observed) {}
    double observed_factor() const noexcept { return observed_; }

private:
    double observed_;
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::OutOfDomain: return "OutOfDomain";
        case ErrorKind::NonFiniteResult: return "NonFiniteResult";
        case ErrorKind::EmptyCandidateSet: return "EmptyCandidateSet";
        case ErrorKind::NoContraction: return "NoContraction";
        case ErrorKind::MissingTrajectory: return "MissingTrajectory";
        case ErrorKind::UnsupportedMeasure: return "UnsupportedMeasure";
        case ErrorKind::DegenerateFit: return "DegenerateFit";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::Config: return "ConfigError";
    }
    return "Error";
}

}  // namespace semilag
