#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace deslab {

// All recoverable failures carry a short machine-readable code ("parse",
// "io", "usage", ...) plus a human message. The CLI prints them as
// "error: <code>: <message>" on stderr.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

} // namespace deslab
