#pragma once

#include "sl3/real.hpp"

namespace sl3 {

// Working precision plus tolerances. Tolerances are long double so that
// elevated contexts (thousands of bits) can still express 2^-bits.
struct PrecisionContext {
    long bits = 128;
    long double series_tol = 0;  // 0 means 2^-bits
    long double quad_tol = 0;    // 0 means min(2^-40, 2^-(bits/3))
    long max_terms = 20000;

    static PrecisionContext with_bits(long bits);
    // Default bits from SL3_PRECISION_BITS when set, else 128.
    static PrecisionContext from_env();

    long double stol() const;
    long double qtol() const;
    // Throws DomainError when an invariant fails.
    void validate() const;
    // Extra bits for a cancelling computation; the series tolerance shrinks with them.
    PrecisionContext elevated(long extra) const;

    prec_t prec() const { return static_cast<prec_t>(bits); }
    Real real(double x) const { return Real(x, prec()); }
    Real pi() const { return Real::pi(prec()); }
};

}  // namespace sl3
