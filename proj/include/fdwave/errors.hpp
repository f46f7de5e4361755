#pragma once

#include <stdexcept>
#include <string>

namespace fdwave {

// Raised when the 2x2 starting-weight system degenerates (beta too close to 1,
// where the correction exponents 2-beta and 1 collide).
class DegenerateSystemError : public std::runtime_error {
public:
    explicit DegenerateSystemError(const std::string& what) : std::runtime_error(what) {}
};

// Raised by the tridiagonal solver on a zero or near-zero pivot.
class SingularSystemError : public std::runtime_error {
public:
    explicit SingularSystemError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fdwave
