#pragma once

#include <stdexcept>
#include <string>

namespace linesep {

// Error categories double as CLI exit codes.
enum class ErrorKind {
    Parse = 2,
    Precondition = 3,
    Verification = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline Error precondition_error(const std::string& what) {
    return Error(ErrorKind::Precondition, what);
}

inline Error parse_error(const std::string& what) {
    return Error(ErrorKind::Parse, what);
}

inline Error verification_error(const std::string& what) {
    return Error(ErrorKind::Verification, what);
}

}  // namespace linesep
