#pragma once

#include <mpfr.h>

#include <algorithm>
#include <complex>
#include <string>

namespace sl3 {

using prec_t = mpfr_prec_t;

// Thin owning wrapper around mpfr_t. Every value carries its own precision;
// binary operations produce the larger of the two operand precisions.
class Real {
public:
    explicit Real(prec_t p = 53) {
        mpfr_init2(v_, p);
        mpfr_set_zero(v_, 1);
    }
    Real(double x, prec_t p) {
        mpfr_init2(v_, p);
        mpfr_set_d(v_, x, MPFR_RNDN);
    }
    Real(const Real& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    static Real from_long(long x, prec_t p) {
        Real r(p);
        mpfr_set_si(r.v_, x, MPFR_RNDN);
        return r;
    }
    // Parses a decimal literal; throws std::invalid_argument on garbage.
    static Real parse(const std::string& s, prec_t p);
    static Real pi(prec_t p) {
        Real r(p);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }
    static Real two_pow(long e, prec_t p) {
        Real r(p);
        mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
        return r;
    }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    prec_t prec() const { return mpfr_get_prec(v_); }

    // Same value rounded to precision p.
    Real rounded(prec_t p) const {
        Real r(p);
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }
    // Change own precision keeping the (rounded) value.
    void set_prec_keep(prec_t p) { mpfr_prec_round(v_, p, MPFR_RNDN); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long double to_ld() const { return mpfr_get_ld(v_, MPFR_RNDN); }
    // log2|x| as a double without overflow; -inf for zero.
    double log2_abs() const;
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    bool is_integer() const { return mpfr_integer_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    long exponent() const { return mpfr_get_exp(v_); }

    // Decimal string with `digits` significant digits (0: enough for the precision).
    std::string str(int digits = 0) const;

    Real operator-() const {
        Real r(prec());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }
    Real& operator+=(const Real& o) {
        widen(o.prec());
        mpfr_add(v_, v_, o.v_, MPFR_RNDN);
        return *this;
    }
    Real& operator-=(const Real& o) {
        widen(o.prec());
        mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
        return *this;
    }
    Real& operator*=(const Real& o) {
        widen(o.prec());
        mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
        return *this;
    }
    Real& operator/=(const Real& o) {
        widen(o.prec());
        mpfr_div(v_, v_, o.v_, MPFR_RNDN);
        return *this;
    }
    Real& operator+=(double o) { mpfr_add_d(v_, v_, o, MPFR_RNDN); return *this; }
    Real& operator-=(double o) { mpfr_sub_d(v_, v_, o, MPFR_RNDN); return *this; }
    Real& operator*=(double o) { mpfr_mul_d(v_, v_, o, MPFR_RNDN); return *this; }
    Real& operator/=(double o) { mpfr_div_d(v_, v_, o, MPFR_RNDN); return *this; }
    Real& mul_2si(long e) { mpfr_mul_2si(v_, v_, e, MPFR_RNDN); return *this; }

private:
    void widen(prec_t p) {
        if (p > prec()) mpfr_prec_round(v_, p, MPFR_RNDN);
    }
    mpfr_t v_;
};

inline prec_t pmax(const Real& a, const Real& b) { return std::max(a.prec(), b.prec()); }

#define SL3_REAL_BINOP(op, fn, fnd)                                            \
    inline Real operator op(const Real& a, const Real& b) {                    \
        Real r(pmax(a, b));                                                    \
        fn(r.get(), a.get(), b.get(), MPFR_RNDN);                              \
        return r;                                                              \
    }                                                                          \
    inline Real operator op(const Real& a, double b) {                         \
        Real r(a.prec());                                                      \
        fnd(r.get(), a.get(), b, MPFR_RNDN);                                   \
        return r;                                                              \
    }

SL3_REAL_BINOP(+, mpfr_add, mpfr_add_d)
SL3_REAL_BINOP(-, mpfr_sub, mpfr_sub_d)
SL3_REAL_BINOP(*, mpfr_mul, mpfr_mul_d)
SL3_REAL_BINOP(/, mpfr_div, mpfr_div_d)
#undef SL3_REAL_BINOP

inline Real operator+(double a, const Real& b) { return b + a; }
inline Real operator*(double a, const Real& b) { return b * a; }
inline Real operator-(double a, const Real& b) {
    Real r(b.prec());
    mpfr_d_sub(r.get(), a, b.get(), MPFR_RNDN);
    return r;
}
inline Real operator/(double a, const Real& b) {
    Real r(b.prec());
    mpfr_d_div(r.get(), a, b.get(), MPFR_RNDN);
    return r;
}

inline bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()); }
inline bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()); }
inline bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()); }
inline bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.get(), b.get()); }
inline bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()); }
inline bool operator<(const Real& a, double b) { return mpfr_cmp_d(a.get(), b) < 0; }
inline bool operator>(const Real& a, double b) { return mpfr_cmp_d(a.get(), b) > 0; }
inline bool operator<=(const Real& a, double b) { return mpfr_cmp_d(a.get(), b) <= 0; }
inline bool operator>=(const Real& a, double b) { return mpfr_cmp_d(a.get(), b) >= 0; }

#define SL3_REAL_FN(name, fn)                                                  \
    inline Real name(const Real& a) {                                          \
        Real r(a.prec());                                                      \
        fn(r.get(), a.get(), MPFR_RNDN);                                       \
        return r;                                                              \
    }

SL3_REAL_FN(sqrt, mpfr_sqrt)
SL3_REAL_FN(cbrt, mpfr_cbrt)
SL3_REAL_FN(exp, mpfr_exp)
SL3_REAL_FN(expm1, mpfr_expm1)
SL3_REAL_FN(log, mpfr_log)
SL3_REAL_FN(log1p, mpfr_log1p)
SL3_REAL_FN(log2, mpfr_log2)
SL3_REAL_FN(sin, mpfr_sin)
SL3_REAL_FN(cos, mpfr_cos)
SL3_REAL_FN(sinh, mpfr_sinh)
SL3_REAL_FN(cosh, mpfr_cosh)
SL3_REAL_FN(tanh, mpfr_tanh)
SL3_REAL_FN(abs, mpfr_abs)
SL3_REAL_FN(lngamma, mpfr_lngamma)
SL3_REAL_FN(gamma, mpfr_gamma)
#undef SL3_REAL_FN

inline Real floor(const Real& a) {
    Real r(a.prec());
    mpfr_floor(r.get(), a.get());
    return r;
}
inline Real ceil(const Real& a) {
    Real r(a.prec());
    mpfr_ceil(r.get(), a.get());
    return r;
}
inline Real round(const Real& a) {
    Real r(a.prec());
    mpfr_round(r.get(), a.get());
    return r;
}
inline Real atan2(const Real& y, const Real& x) {
    Real r(pmax(y, x));
    mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
    return r;
}
inline Real hypot(const Real& a, const Real& b) {
    Real r(pmax(a, b));
    mpfr_hypot(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}
inline Real pow(const Real& a, const Real& b) {
    Real r(pmax(a, b));
    mpfr_pow(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}
inline Real pow(const Real& a, long n) {
    Real r(a.prec());
    mpfr_pow_si(r.get(), a.get(), n, MPFR_RNDN);
    return r;
}
inline Real max(const Real& a, const Real& b) { return a < b ? b : a; }
inline Real min(const Real& a, const Real& b) { return a < b ? a : b; }

class Complex {
public:
    Real re, im;

    explicit Complex(prec_t p = 53) : re(p), im(p) {}
    Complex(const Real& r) : re(r), im(r.prec()) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    Complex(double r, double i, prec_t p) : re(r, p), im(i, p) {}
    Complex(std::complex<double> z, prec_t p) : re(z.real(), p), im(z.imag(), p) {}

    prec_t prec() const { return std::max(re.prec(), im.prec()); }
    Complex rounded(prec_t p) const { return Complex(re.rounded(p), im.rounded(p)); }
    std::complex<double> to_cd() const { return {re.to_double(), im.to_double()}; }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool is_finite() const { return re.is_finite() && im.is_finite(); }
    bool is_real() const { return im.is_zero(); }
    double log2_abs() const;

    Complex operator-() const { return Complex(-re, -im); }
    Complex& operator+=(const Complex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Complex& operator-=(const Complex& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    Complex& operator*=(const Complex& o);
    Complex& operator*=(const Real& o) {
        re *= o;
        im *= o;
        return *this;
    }
    Complex& operator*=(double o) {
        re *= o;
        im *= o;
        return *this;
    }
    Complex& operator/=(const Complex& o);
    Complex& operator/=(const Real& o) {
        re /= o;
        im /= o;
        return *this;
    }
};

Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
inline Complex operator+(const Complex& a, const Complex& b) { return Complex(a.re + b.re, a.im + b.im); }
inline Complex operator-(const Complex& a, const Complex& b) { return Complex(a.re - b.re, a.im - b.im); }
inline Complex operator+(const Complex& a, const Real& b) { return Complex(a.re + b, a.im); }
inline Complex operator-(const Complex& a, const Real& b) { return Complex(a.re - b, a.im); }
inline Complex operator*(const Complex& a, const Real& b) { return Complex(a.re * b, a.im * b); }
inline Complex operator*(const Real& b, const Complex& a) { return Complex(a.re * b, a.im * b); }
inline Complex operator/(const Complex& a, const Real& b) { return Complex(a.re / b, a.im / b); }
inline Complex operator+(const Complex& a, double b) { return Complex(a.re + b, a.im); }
inline Complex operator-(const Complex& a, double b) { return Complex(a.re - b, a.im); }
inline Complex operator*(const Complex& a, double b) { return Complex(a.re * b, a.im * b); }
inline Complex operator*(double b, const Complex& a) { return Complex(a.re * b, a.im * b); }
inline Complex operator/(const Complex& a, double b) { return Complex(a.re / b, a.im / b); }

inline Complex operator+(double b, const Complex& a) { return a + b; }
inline Complex operator-(double b, const Complex& a) { return Complex(b - a.re, -a.im); }
inline Complex operator+(const Real& b, const Complex& a) { return a + b; }
inline Complex operator-(const Real& b, const Complex& a) { return Complex(b - a.re, -a.im); }

inline Complex conj(const Complex& z) { return Complex(z.re, -z.im); }
inline Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
inline Real abs(const Complex& z) { return hypot(z.re, z.im); }
inline Real arg(const Complex& z) { return atan2(z.im, z.re); }
Complex exp(const Complex& z);
Complex log(const Complex& z);
Complex sqrt(const Complex& z);
Complex sin(const Complex& z);
Complex cos(const Complex& z);
Complex pow(const Complex& z, const Complex& w);
// x^mu for real x > 0 via exp(mu log x).
Complex pow(const Real& x, const Complex& mu);
// e^{i theta}
Complex expi(const Real& theta);

}  // namespace sl3
