#pragma once

#include <stdexcept>
#include <string>

namespace sl3 {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid parameters or precondition violations (general position, poles, bad ranges).
struct DomainError : Error {
    using Error::Error;
};

// A series or quadrature hit its limits before meeting the tolerance.
struct ConvergenceError : Error {
    using Error::Error;
};

// A cancelling sum lost too many significant bits for the requested precision.
struct CancellationAlarm : Error {
    double lost_bits;
    CancellationAlarm(const std::string& what, double lost) : Error(what), lost_bits(lost) {}
};

}  // namespace sl3
