#pragma once

#include <stdexcept>
#include <string>

namespace rcmf {

// Thrown when a request exceeds a configured budget (sieve memory, search-space
// caps, quadratic-cost enumeration caps).  Distinct from std::invalid_argument,
// which is reserved for precondition violations: callers may want to retry a
// resource_error with a bigger budget, but never an invalid_argument.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace rcmf
