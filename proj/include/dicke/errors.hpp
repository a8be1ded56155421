#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dicke {

/// Argument outside the domain of an operation (bad quantum numbers, unnormalized states, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to converge.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, std::ptrdiff_t index = -1)
        : std::runtime_error(what), index_(index) {}

    /// Grid point or step index at which the failure happened, -1 when not applicable.
    std::ptrdiff_t index() const noexcept { return index_; }

private:
    std::ptrdiff_t index_;
};

} // namespace dicke
