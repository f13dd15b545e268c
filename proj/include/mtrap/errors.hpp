#pragma once

#include <stdexcept>
#include <string>

namespace mtrap {

enum class ErrorKind {
    ZeroVector,
    NotLightlike,
    DegeneratePlane,
    OutOfDomain,
    InvalidDomain,
    NotSpacelike,
    NotMarginallyTrapped,
    InconsistentFrameEquations,
    DegenerateType,
    GaugeNotConstant,
    NoConvergence,
    CompatibilityViolated,
    MetricDriftExceeded,
    UnsupportedConfig,
    InvalidGrid,
    InvalidArgument,
    Io,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}
    ErrorKind kind() const noexcept { return kind_; }
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

}  // namespace mtrap
