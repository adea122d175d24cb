#pragma once

#include "sl3/precision.hpp"
#include "sl3/real.hpp"

namespace sl3 {

// Principal branch of log Gamma(z). Throws DomainError near the poles 0,-1,-2,...
Complex log_gamma(const Complex& z, const PrecisionContext& ctx);

// Same, at an explicit precision (no tolerance-based pole window: exact poles only).
Complex log_gamma_prec(const Complex& z, prec_t p);

// 1/Gamma(z), exactly zero at the poles.
Complex rgamma(const Complex& z, prec_t p);

// True when z is exactly a nonpositive integer.
bool is_nonpositive_integer(const Complex& z);

}  // namespace sl3
