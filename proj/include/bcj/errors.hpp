#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bcj {

/// Raised when gains are (numerically) rationally dependent and labels collide.
class DegenerateGains : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when an enumeration or mixture would exceed its configured size cap.
class CapExceeded : public std::length_error {
public:
    CapExceeded(const std::string& what, std::size_t requested, std::size_t cap)
        : std::length_error(what + ": " + std::to_string(requested) + " exceeds cap " + std::to_string(cap)),
          requested_(requested),
          cap_(cap) {}

    std::size_t requested() const noexcept { return requested_; }
    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t requested_;
    std::size_t cap_;
};

}  // namespace bcj
