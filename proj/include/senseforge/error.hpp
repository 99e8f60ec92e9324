#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace senseforge {

// Bad user input: malformed files, inconsistent arguments. The CLI maps this
// to exit code 1; anything else escaping a command is an internal error.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : InputError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace senseforge
