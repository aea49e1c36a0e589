#pragma once

#include <stdexcept>
#include <string>

namespace ohr {

enum class ErrorKind {
    InvalidInput,
    DegenerateHedge,
    RankDeficiency,
    ConstraintViolation,
    DegenerateCovariance,
    NonInvertibleInformation,
    InvalidStart,
    Config,
    InsufficientData,
    Convergence,
};

const char* to_string(ErrorKind kind);

/// Base exception for the library. Messages are prefixed with the module
/// that raised them, e.g. "[series] duplicate date 2020-01-03".
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& module, const std::string& message)
        : std::runtime_error("[" + module + "] " + message), kind_(kind), module_(module) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& module() const noexcept { return module_; }

private:
    ErrorKind kind_;
    std::string module_;
};

}  // namespace ohr
