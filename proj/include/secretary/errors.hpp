#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace secretary {

// Root of every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class domain_error : public error {
public:
    using error::error;
};

// A series ran out of its term budget before the tail bound was met.
class truncation_error : public error {
public:
    using error::error;
};

// Conditioning on an event of probability zero.
class conditioning_error : public error {
public:
    using error::error;
};

// Root finder was handed an interval without a sign change.
class bracketing_error : public error {
public:
    using error::error;
};

// Input too large for an exhaustive computation.
class size_error : public error {
public:
    using error::error;
};

// Requested result exceeds what 64-bit floating point can certify.
class precision_error : public error {
public:
    using error::error;
};

// Model is not usable by the requested operation (e.g. infinite support).
class support_error : public error {
public:
    using error::error;
};

class parse_error : public error {
public:
    parse_error(const std::string& what, std::size_t position)
        : error(what + " (at position " + std::to_string(position) + ")"), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

}  // namespace secretary
