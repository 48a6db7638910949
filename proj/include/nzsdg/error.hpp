#pragma once

#include <stdexcept>
#include <string>

namespace nzsdg {

// Bad argument outside an operation's domain (controls out of interval,
// undersized grid, empty schedule, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The backward solver produced a non-finite value.
class InstabilityError : public std::runtime_error {
public:
    InstabilityError(const std::string& what, int time_step)
        : std::runtime_error(what), time_step_(time_step) {}

    int time_step() const noexcept { return time_step_; }

private:
    int time_step_;
};

// An analytic oracle refused a case it cannot answer without guessing.
class OracleDeclined : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Schema violation in a JSON document; the message starts with the JSON pointer.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& pointer, const std::string& message)
        : std::runtime_error(pointer + ": " + message), pointer_(pointer) {}

    const std::string& pointer() const noexcept { return pointer_; }

private:
    std::string pointer_;
};

}  // namespace nzsdg
