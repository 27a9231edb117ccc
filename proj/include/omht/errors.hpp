#pragma once

#include <stdexcept>
#include <string>

namespace omht {

// Drift matrix has an eigenvalue with non-negative real part, so no
// steady state exists. Carries the offending eigenvalue real part.
class StabilityError : public std::runtime_error {
public:
    StabilityError(const std::string& what, double max_real_part)
        : std::runtime_error(what), max_real_part_(max_real_part) {}

    double max_real_part() const { return max_real_part_; }

private:
    double max_real_part_;
};

// A solver or quadrature failed to reach its accuracy contract.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace omht
