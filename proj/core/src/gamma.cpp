#include "sl3/gamma.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "sl3/errors.hpp"

namespace sl3 {

namespace {

// Stirling coefficients B_{2k}/(2k(2k-1)), k = 1.., cached per precision.
// B_{2k} = (-1)^{k+1} 2 (2k)! zeta(2k) / (2 pi)^{2k}.
class StirlingTable {
public:
    const Real& coeff(long k, prec_t p) {
        std::lock_guard<std::mutex> lock(mu_);
        auto& v = table_[p];
        while (static_cast<long>(v.size()) < k) {
            long j = static_cast<long>(v.size()) + 1;
            Real z(p + 16), f(p + 16), tp(p + 16);
            mpfr_zeta_ui(z.get(), 2 * j, MPFR_RNDN);
            mpfr_fac_ui(f.get(), 2 * j, MPFR_RNDN);
            tp = Real::pi(p + 16) * 2.0;
            Real b = z * f * 2.0 / pow(tp, 2 * j);
            if (j % 2 == 0) b = -b;
            b /= static_cast<double>(2 * j * (2 * j - 1));
            v.push_back(b.rounded(p));
        }
        return v[k - 1];
    }

private:
    std::mutex mu_;
    std::map<prec_t, std::vector<Real>> table_;
};

StirlingTable& stirling() {
    static StirlingTable t;
    return t;
}

Complex log_gamma_core(const Complex& z, prec_t p) {
    // shift so that |z+N| is large enough for the asymptotic series
    const double target = 0.16 * static_cast<double>(p) + 12.0;
    double zr = z.re.to_double(), zi = z.im.to_double();
    long n = 0;
    if (std::hypot(zr, zi) < target || zr < 1.0) {
        double need = std::sqrt(std::max(0.0, target * target - zi * zi));
        n = static_cast<long>(std::ceil(std::max(need, 1.0) - zr));
        if (n < 0) n = 0;
    }
    const prec_t wp = p + 24 + static_cast<prec_t>(std::log2(n + 2.0));
    Complex w = z.rounded(wp);
    Complex shift_sum(wp);
    for (long k = 0; k < n; ++k) {
        shift_sum += log(w);
        w.re += 1.0;
    }
    // (w-1/2) log w - w + log(2 pi)/2 + sum c_k / w^(2k-1)
    Complex lw = log(w);
    Complex res = (w - 0.5) * lw - w;
    Real half_log_2pi = log(Real::pi(wp) * 2.0) * 0.5;
    res.re += half_log_2pi;
    Complex winv = Complex(Real(1.0, wp)) / w;
    Complex winv2 = winv * winv;
    Complex pw = winv;
    Real tol = Real::two_pow(-static_cast<long>(wp), wp) * abs(res);
    for (long k = 1; k < 4 * static_cast<long>(p) + 100; ++k) {
        Complex term = pw * stirling().coeff(k, wp);
        res += term;
        if (abs(term) < tol) break;
        pw *= winv2;
    }
    res -= shift_sum;
    return res.rounded(p);
}

}  // namespace

bool is_nonpositive_integer(const Complex& z) {
    return z.im.is_zero() && z.re.is_integer() && z.re.sign() <= 0;
}

Complex log_gamma_prec(const Complex& z, prec_t p) {
    if (is_nonpositive_integer(z)) throw DomainError("log_gamma: pole at nonpositive integer");
    if (z.im.is_zero() && z.re.sign() > 0) {
        Real r(p);
        mpfr_lngamma(r.get(), z.re.get(), MPFR_RNDN);
        return Complex(r);
    }
    // the shifted sum can cancel against the Stirling part near the zeros of
    // log Gamma (z ~ 1, 2); retry with the lost bits added
    prec_t extra = 0;
    for (int attempt = 0; attempt < 4; ++attempt) {
        Complex v = log_gamma_core(z, p + 16 + extra);
        double mag = v.log2_abs();
        double az = std::abs(z.re.to_double()) + std::abs(z.im.to_double());
        double scale = std::log2(az + 2.0) + std::log2(std::log(az + 3.0) + 1.0) + 4.0;
        double lost = scale - mag;
        if (lost <= static_cast<double>(extra) + 8.0) return v.rounded(p);
        extra = static_cast<prec_t>(lost) + 16;
    }
    return log_gamma_core(z, p + 16 + extra).rounded(p);
}

Complex log_gamma(const Complex& z, const PrecisionContext& ctx) {
    const prec_t p = ctx.prec();
    Complex zz = z.rounded(std::max(z.prec(), p));
    // pole window: within 10*series_tol of {0,-1,-2,...}
    if (zz.re.sign() <= 0 || zz.re < 0.5) {
        Real nearest = round(zz.re);
        if (nearest <= 0.0) {
            Real d = hypot(zz.re - nearest, zz.im);
            Real win(p);
            mpfr_set_ld(win.get(), 10.0L * ctx.stol(), MPFR_RNDN);
            if (d <= win) throw DomainError("log_gamma: argument within tolerance of a pole");
        }
    }
    return log_gamma_prec(zz, p);
}

Complex rgamma(const Complex& z, prec_t p) {
    if (is_nonpositive_integer(z)) return Complex(p);
    return exp(-log_gamma_prec(z, p));
}

}  // namespace sl3
