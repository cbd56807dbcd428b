#pragma once

#include <stdexcept>
#include <string>

namespace qflab {

// Base for everything thrown on purpose. Messages are complete sentences so the
// CLI can surface them verbatim.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DivisionByZero : public Error {
public:
    DivisionByZero() : Error("division by zero") {}
    explicit DivisionByZero(const std::string& what) : Error(what) {}
};

// A configured resource guard (enumeration size, degree bound, ...) was hit.
// The CLI maps this to exit code 3.
class GuardExceeded : public Error {
public:
    explicit GuardExceeded(const std::string& what) : Error(what) {}
};

} // namespace qflab
