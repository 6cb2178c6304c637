#ifndef TSS_ERRORS_HPP
#define TSS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tss {

/// Malformed or inconsistent input (unknown vertex, bad file, mismatched instance).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Syntax error in a .cwe or .tss source, with a 1-based location.
class ParseError : public InputError {
public:
    ParseError(const std::string& what, int line, int column)
        : InputError(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// The expression is valid but outside what the solver accepts (partial redundancy).
class UnsupportedExpression : public InputError {
public:
    using InputError::InputError;
};

/// A configured size or memory budget was exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A dynamic-programming state that violates the precondition of an operation.
class InvalidStateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// The instance admits no solution for the requested operation.
class NoSolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tss

#endif
