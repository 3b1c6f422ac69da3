#pragma once

#include <stdexcept>
#include <string>

namespace lfss {

/// Failure categories. The CLI maps them onto process exit codes.
enum class ErrorKind {
    ParameterDomain,
    InsufficientData,
    UnsupportedOrder,
    Regime,
    Window,
    Configuration,
    Tolerance,
    Precondition,
    Input,
    Ordering,
    Resolution,
    Tail,
    TruncationDomain,
    Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) throw Error(kind, what);
}

}  // namespace lfss
