#pragma once

#include <stdexcept>
#include <string>

namespace stacks {

/// Bad input: malformed files, unknown ids, invalid parameters.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Catalog parse failure carrying the 1-based line and offending field.
class ParseError : public InputError {
public:
    ParseError(std::size_t line, std::string field, const std::string& what)
        : InputError("line " + std::to_string(line) + ": " + what), line_(line), field_(std::move(field)) {}

    std::size_t line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

/// A generator postcondition failed. This is a bug, not bad input.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace stacks
