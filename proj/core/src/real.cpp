#include "sl3/real.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sl3 {

Real Real::parse(const std::string& s, prec_t p) {
    Real r(p);
    char* end = nullptr;
    if (!s.empty()) mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
    if (s.empty() || end == s.c_str() || *end != '\0')
        throw std::invalid_argument("not a real number: '" + s + "'");
    return r;
}

double Real::log2_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    if (!is_finite()) return std::numeric_limits<double>::infinity();
    long e = 0;
    double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
    return static_cast<double>(e) + std::log2(std::fabs(m));
}

std::string Real::str(int digits) const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return sign() > 0 ? "inf" : "-inf";
    if (is_zero()) return "0";
    mpfr_exp_t e = 0;
    char* raw = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v_, MPFR_RNDN);
    std::string m(raw);
    mpfr_free_str(raw);
    std::string out;
    if (m[0] == '-') {
        out = "-";
        m.erase(0, 1);
    }
    // mantissa is 0.ddd * 10^e ; print d.dd e(e-1)
    while (m.size() > 1 && m.back() == '0') m.pop_back();
    out += m[0];
    if (m.size() > 1) {
        out += '.';
        out.append(m, 1, std::string::npos);
    }
    long ex = static_cast<long>(e) - 1;
    if (ex != 0) out += "e" + std::to_string(ex);
    return out;
}

double Complex::log2_abs() const {
    double a = re.log2_abs(), b = im.log2_abs();
    double hi = std::max(a, b), lo = std::min(a, b);
    if (std::isinf(hi) && hi < 0) return hi;
    return hi + 0.5 * std::log2(1.0 + std::exp2(2.0 * (lo - hi)));
}

Complex& Complex::operator*=(const Complex& o) {
    Complex r = *this * o;
    *this = std::move(r);
    return *this;
}

Complex& Complex::operator/=(const Complex& o) {
    Complex r = *this / o;
    *this = std::move(r);
    return *this;
}

Complex operator*(const Complex& a, const Complex& b) {
    prec_t p = std::max(a.prec(), b.prec());
    Complex r(p);
    mpfr_fmms(r.re.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_fmma(r.im.get(), a.re.get(), b.im.get(), a.im.get(), b.re.get(), MPFR_RNDN);
    return r;
}

Complex operator/(const Complex& a, const Complex& b) {
    prec_t p = std::max(a.prec(), b.prec());
    Real d = norm(b);
    Complex r(p);
    mpfr_fmma(r.re.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_fmms(r.im.get(), a.im.get(), b.re.get(), a.re.get(), b.im.get(), MPFR_RNDN);
    r.re /= d;
    r.im /= d;
    return r;
}

Complex expi(const Real& theta) {
    Complex r(theta.prec());
    mpfr_sin_cos(r.im.get(), r.re.get(), theta.get(), MPFR_RNDN);
    return r;
}

Complex exp(const Complex& z) {
    Complex r = expi(z.im.rounded(z.prec()));
    Real m = exp(z.re.rounded(z.prec()));
    r.re *= m;
    r.im *= m;
    return r;
}

Complex log(const Complex& z) {
    if (z.is_zero()) throw std::domain_error("log of zero");
    return Complex(log(abs(z)), arg(z));
}

Complex sqrt(const Complex& z) {
    prec_t p = z.prec();
    if (z.is_zero()) return Complex(p);
    // principal branch
    Real m = abs(z);
    Real t = sqrt((m + abs(z.re)) * 0.5);
    if (z.re.sign() >= 0) {
        return Complex(t, z.im / (t * 2.0));
    }
    Real u = abs(z.im) / (t * 2.0);
    return Complex(u, z.im.sign() < 0 ? -t : t);
}

Complex sin(const Complex& z) {
    prec_t p = z.prec();
    Real s(p), c(p), sh(p), ch(p);
    mpfr_sin_cos(s.get(), c.get(), z.re.get(), MPFR_RNDN);
    mpfr_sinh_cosh(sh.get(), ch.get(), z.im.get(), MPFR_RNDN);
    return Complex(s * ch, c * sh);
}

Complex cos(const Complex& z) {
    prec_t p = z.prec();
    Real s(p), c(p), sh(p), ch(p);
    mpfr_sin_cos(s.get(), c.get(), z.re.get(), MPFR_RNDN);
    mpfr_sinh_cosh(sh.get(), ch.get(), z.im.get(), MPFR_RNDN);
    return Complex(c * ch, -(s * sh));
}

Complex pow(const Complex& z, const Complex& w) { return exp(w * log(z)); }

Complex pow(const Real& x, const Complex& mu) {
    if (x.sign() <= 0) throw std::domain_error("pow: base must be positive");
    return exp(mu * log(x));
}

}  // namespace sl3
