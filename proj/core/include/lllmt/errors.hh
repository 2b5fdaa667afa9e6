#pragma once

#include <stdexcept>
#include <string>

namespace lllmt {

/// Malformed user input: bad file syntax, out-of-range field, inconsistent parameters.
/// The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string & what) : std::runtime_error(what) {}
    InputError(std::size_t line, const std::string & what) :
        std::runtime_error("line " + std::to_string(line) + ": " + what), _line(line) {}

    [[nodiscard]] auto line() const -> std::size_t { return _line; }

private:
    std::size_t _line = 0;
};

/// A caller broke an API contract (e.g. a resampling rule returned an event that is not true).
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string & what) : std::logic_error(what) {}
};

/// An exhaustive enumeration hit its configured cap.
class CapacityExceeded : public std::runtime_error {
public:
    explicit CapacityExceeded(const std::string & what) : std::runtime_error(what) {}
};

}
