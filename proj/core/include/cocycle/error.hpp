#pragma once

#include <stdexcept>
#include <string>

namespace cocycle {

enum class ErrorKind {
    invalid_input,
    unsupported,
    certificate,
    overflow,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void reject(const std::string& what)
{
    throw Error(ErrorKind::invalid_input, what);
}

} // namespace cocycle
