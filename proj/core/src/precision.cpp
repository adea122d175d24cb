#include "sl3/precision.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "sl3/errors.hpp"

namespace sl3 {

PrecisionContext PrecisionContext::with_bits(long bits) {
    PrecisionContext c;
    c.bits = bits;
    c.validate();
    return c;
}

PrecisionContext PrecisionContext::from_env() {
    PrecisionContext c;
    if (const char* e = std::getenv("SL3_PRECISION_BITS")) {
        char* end = nullptr;
        long b = std::strtol(e, &end, 10);
        if (end == e || *end != '\0') throw DomainError(std::string("SL3_PRECISION_BITS is not an integer: ") + e);
        c.bits = b;
    }
    c.validate();
    return c;
}

long double PrecisionContext::stol() const {
    return series_tol > 0 ? series_tol : std::ldexp(1.0L, static_cast<int>(-bits));
}

long double PrecisionContext::qtol() const {
    if (quad_tol > 0) return quad_tol;
    return std::ldexp(1.0L, static_cast<int>(-std::max(40L, bits / 3)));
}

void PrecisionContext::validate() const {
    if (bits < 53) throw DomainError("precision bits must be >= 53, got " + std::to_string(bits));
    if (bits > 100000) throw DomainError("precision bits unreasonably large: " + std::to_string(bits));
    const long double cap = std::ldexp(1.0L, -20);
    if (!(stol() > 0 && stol() < cap)) throw DomainError("series_tol must lie in (0, 2^-20)");
    if (!(qtol() > 0 && qtol() < cap)) throw DomainError("quad_tol must lie in (0, 2^-20)");
    if (max_terms < 64) throw DomainError("max_terms must be >= 64");
}

PrecisionContext PrecisionContext::elevated(long extra) const {
    PrecisionContext c = *this;
    c.bits = bits + extra;
    c.series_tol = std::ldexp(stol(), static_cast<int>(-extra));
    c.quad_tol = qtol();
    return c;
}

}  // namespace sl3
