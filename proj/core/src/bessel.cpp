#include "sl3/bessel.hpp"

#include <algorithm>
#include <cmath>

#include "sl3/errors.hpp"
#include "sl3/gamma.hpp"

namespace sl3 {

namespace {

constexpr double kLog2e = 1.4426950408889634;

double log2_tol(const PrecisionContext& ctx) { return static_cast<double>(std::log2(ctx.stol())); }

bool is_negative_integer(const Complex& nu) {
    return nu.im.is_zero() && nu.re.is_integer() && nu.re.sign() < 0;
}

}  // namespace

BesselOrder::BesselOrder(Complex v) : nu(std::move(v)) {
    double r = nu.re.to_double(), i = nu.im.to_double();
    dist_to_int = std::hypot(r - std::round(r), i);
}

Complex i_series(const Complex& nu_in, const Real& x, prec_t p, double tol_log2, long max_terms,
                 const Complex* lg1, long* terms_used) {
    if (is_negative_integer(nu_in)) return i_series(-nu_in, x, p, tol_log2, max_terms, nullptr, terms_used);
    Complex nu = nu_in.rounded(p);
    Real half = x.rounded(p);
    half.mul_2si(-1);
    Real q = half * half;

    Complex lg = lg1 ? lg1->rounded(p) : log_gamma_prec(nu + 1.0, p);
    Complex t = exp(nu * log(half) - lg);
    Complex sum = t;
    Complex den(p);
    Real r(p), nrm(p);
    int small = 0;
    long k = 1;
    for (;; ++k) {
        if (k > max_terms) throw ConvergenceError("I-Bessel series: max_terms reached");
        mpfr_add_si(den.re.get(), nu.re.get(), k, MPFR_RNDN);
        mpfr_set(den.im.get(), nu.im.get(), MPFR_RNDN);
        // t *= q / (k (k+nu)) = q conj(k+nu) / (k |k+nu|^2)
        mpfr_fmma(nrm.get(), den.re.get(), den.re.get(), den.im.get(), den.im.get(), MPFR_RNDN);
        mpfr_mul_si(nrm.get(), nrm.get(), k, MPFR_RNDN);
        mpfr_div(r.get(), q.get(), nrm.get(), MPFR_RNDN);
        mpfr_neg(den.im.get(), den.im.get(), MPFR_RNDN);
        t = t * den;
        t *= r;
        sum += t;
        if (t.log2_abs() < sum.log2_abs() + tol_log2) {
            if (++small >= 3) break;
        } else {
            small = 0;
        }
    }
    if (terms_used) *terms_used = k;
    return sum;
}

Complex bessel_i(const BesselOrder& nu, const Real& x, const PrecisionContext& ctx) {
    ctx.validate();
    if (x.sign() < 0) throw DomainError("bessel_i: x must be >= 0");
    if (x.is_zero()) {
        if (nu.nu.is_zero()) return Complex(Real(1.0, ctx.prec()));
        if (nu.nu.re.sign() > 0) return Complex(ctx.prec());
        throw DomainError("bessel_i: x = 0 requires Re(nu) >= 0");
    }
    const prec_t p = ctx.prec() + 24;
    return i_series(nu.nu, x, p, log2_tol(ctx), ctx.max_terms).rounded(ctx.prec());
}

std::vector<Complex> bessel_i_ladder(const Complex& nu, const Real& x, long count, const PrecisionContext& ctx) {
    if (count <= 0) return {};
    if (x.sign() <= 0) throw DomainError("bessel_i_ladder: x must be > 0");
    const prec_t p = ctx.prec() + 32 + static_cast<prec_t>(std::log2(count + 1.0));
    const double tol = log2_tol(ctx) - 32;
    std::vector<Complex> out(count, Complex(p));
    Complex a = i_series(nu + static_cast<double>(count), x, p, tol, ctx.max_terms);
    Complex b = i_series(nu + static_cast<double>(count - 1), x, p, tol, ctx.max_terms);
    out[count - 1] = b;
    Real two_over_x = Real(2.0, p) / x.rounded(p);
    for (long m = count - 1; m >= 1; --m) {
        // I_{mu-1} = I_{mu+1} + (2 mu / x) I_mu
        Complex mu = nu.rounded(p) + static_cast<double>(m);
        Complex next = a + (mu * two_over_x) * b;
        a = std::move(b);
        b = std::move(next);
        out[m - 1] = b;
    }
    return out;
}

BesselKEvaluator::BesselKEvaluator(const Complex& nu, const PrecisionContext& ctx) : nu_(nu), ctx_(ctx) {
    ctx_.validate();
    dist_ = BesselOrder(nu).dist_to_int;
}

Complex BesselKEvaluator::lg(int slot, const Complex& order, prec_t p) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = lg_cache_.find(slot);
    if (it == lg_cache_.end() || it->second.second.prec() < p || !(it->second.first.re == order.re) ||
        !(it->second.first.im == order.im)) {
        prec_t cp = p + 64;
        Complex v = log_gamma_prec(order.rounded(cp) + 1.0, cp);
        it = lg_cache_.insert_or_assign(slot, std::make_pair(order, std::move(v))).first;
    }
    return it->second.second;
}

Complex BesselKEvaluator::direct(const Complex& nu, const Real& x, int slot) const {
    const long b = ctx_.bits;
    const double xd = x.to_double();
    Complex s0 = sin(Real::pi(b + 64) * nu.rounded(b + 64));
    double sin_bits = std::max(0.0, -s0.log2_abs());
    long extra = static_cast<long>(std::ceil(2.0 * xd * kLog2e + sin_bits + 24 + 2 * std::log2(xd + 2)));
    const double base_tol = log2_tol(ctx_);
    Complex neg = -nu;
    for (int attempt = 0; attempt < 6; ++attempt) {
        const prec_t p = b + extra;
        const double tol = base_tol - static_cast<double>(extra);
        Complex lgp = lg(slot, nu, p);
        Complex lgm = lg(slot + 1, neg, p);
        Complex ip = i_series(nu, x, p, tol, ctx_.max_terms, is_negative_integer(nu) ? nullptr : &lgp);
        Complex im = i_series(neg, x, p, tol, ctx_.max_terms, is_negative_integer(neg) ? nullptr : &lgm);
        Complex diff = im - ip;
        double lost = std::max(ip.log2_abs(), im.log2_abs()) - diff.log2_abs();
        if (static_cast<double>(p) - lost >= static_cast<double>(b + 16)) {
            Complex sn = sin(Real::pi(p) * nu.rounded(p));
            Complex v = diff / sn;
            v *= Real::pi(p);
            v.re.mul_2si(-1);
            v.im.mul_2si(-1);
            return v.rounded(b);
        }
        extra += static_cast<long>(std::ceil(static_cast<double>(b + 16) + lost - static_cast<double>(p))) + 32;
    }
    throw ConvergenceError("K-Bessel: cancellation could not be absorbed");
}

Complex BesselKEvaluator::operator()(const Real& x) const {
    if (x.sign() <= 0) throw DomainError("bessel_k: x must be > 0");
    if (dist_ >= 0.05) return direct(nu_, x, 0);
    const prec_t p = ctx_.prec() + 32;
    Real eps = Real::two_pow(-ctx_.bits / 8, p) * 0.01;
    for (int guard = 0; guard < 20; ++guard) {
        bool ok = true;
        for (double f : {1.0, -1.0, 0.5, -0.5}) {
            if (BesselOrder(nu_ + eps * f).dist_to_int < eps.to_double() / 8) ok = false;
        }
        if (ok) break;
        eps *= 1.5;
    }
    Real h = eps * 0.5;
    Complex f1 = direct(nu_.rounded(p) + eps, x, 2) + direct(nu_.rounded(p) - eps, x, 4);
    Complex f2 = direct(nu_.rounded(p) + h, x, 6) + direct(nu_.rounded(p) - h, x, 8);
    // f(e) = (K_{nu+e} + K_{nu-e})/2 = K_nu + c e^2 + O(e^4)
    Complex r = (f2 * 4.0 - f1) / 6.0;
    return r.rounded(ctx_.prec());
}

Complex bessel_k(const BesselOrder& nu, const Real& x, const PrecisionContext& ctx) {
    return BesselKEvaluator(nu.nu, ctx)(x);
}

Real bessel_asymptotic_leading(BesselKind kind, const Real& u) {
    if (u.sign() <= 0) throw DomainError("bessel_asymptotic_leading: u must be > 0");
    const prec_t p = u.prec();
    Real pi = Real::pi(p);
    if (kind == BesselKind::I) return sqrt(1.0 / (pi * u * 2.0)) * exp(u);
    return sqrt(pi / (u * 2.0)) * exp(-u);
}

double log_bessel_i_estimate(double mu, double u) {
    mu = std::abs(mu);
    if (u <= 0) return -INFINITY;
    double eta = std::hypot(mu, u);
    return eta + mu * std::log(u / (mu + eta)) - 0.5 * std::log(2 * M_PI * eta);
}

double log_bessel_k_estimate(double nu, double u) {
    nu = std::abs(nu);
    if (u <= 0) return INFINITY;
    double eta = std::hypot(nu, u);
    return -eta + nu * std::log((nu + eta) / u) + 0.5 * std::log(M_PI / (2 * eta));
}

const std::vector<std::pair<Real, Real>>& gauss_legendre(int n, prec_t p) {
    static std::mutex mu;
    static std::map<std::pair<int, prec_t>, std::vector<std::pair<Real, Real>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, p);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const prec_t wp = p + 32;
    std::vector<std::pair<Real, Real>> nodes;
    for (int i = 1; i <= n; ++i) {
        Real x(std::cos(M_PI * (i - 0.25) / (n + 0.5)), wp);
        Real dp(wp);
        for (int it2 = 0; it2 < 200; ++it2) {
            Real p0(1.0, wp), p1 = x;
            for (int k = 2; k <= n; ++k) {
                Real p2 = (x * p1 * static_cast<double>(2 * k - 1) - p0 * static_cast<double>(k - 1)) / static_cast<double>(k);
                p0 = std::move(p1);
                p1 = std::move(p2);
            }
            dp = (x * p1 - p0) * static_cast<double>(n) / (x * x - 1.0);
            Real dx = p1 / dp;
            x -= dx;
            if (dx.is_zero() || dx.log2_abs() < x.log2_abs() - static_cast<double>(wp) + 4) {
                if (it2 > 0) break;
            }
        }
        // recompute derivative at the final node
        Real p0(1.0, wp), p1 = x;
        for (int k = 2; k <= n; ++k) {
            Real p2 = (x * p1 * static_cast<double>(2 * k - 1) - p0 * static_cast<double>(k - 1)) / static_cast<double>(k);
            p0 = std::move(p1);
            p1 = std::move(p2);
        }
        dp = (x * p1 - p0) * static_cast<double>(n) / (x * x - 1.0);
        Real w = Real(2.0, wp) / ((1.0 - x * x) * dp * dp);
        nodes.emplace_back(x.rounded(p), w.rounded(p));
    }
    return cache.emplace(key, std::move(nodes)).first->second;
}

Real product_identity_residual(const Complex& mu, const Complex& nu, const Real& x, const PrecisionContext& ctx) {
    ctx.validate();
    Complex s = mu + nu;
    if (!(s.re > -1.0)) throw DomainError("product identity needs Re(mu+nu) > -1");
    const prec_t p = ctx.prec() + 32;
    const double tol = log2_tol(ctx) - 32;
    Complex lhs = i_series(mu, x, p, tol, ctx.max_terms) * i_series(nu, x, p, tol, ctx.max_terms);

    Complex lgs = log_gamma_prec(s.rounded(p) + 1.0, p);
    Complex dmn = (mu - nu).rounded(p);
    Real pi = Real::pi(p);
    Real half_pi = pi * 0.5;
    Real two_x = x.rounded(p) * 2.0;
    const auto& gl = gauss_legendre(20, p);

    // phi = pi/2 - theta; the integrand behaves like (sin phi)^(mu+nu) at phi = 0
    auto panel = [&](const Real& a, const Real& b) {
        Complex acc(p);
        Real mid = (a + b) * 0.5, hw = (b - a) * 0.5;
        for (const auto& [t, w] : gl) {
            Real phi = mid + hw * t;
            Real arg = two_x * sin(phi);
            Complex iv = is_nonpositive_integer(s + 1.0) ? i_series(s, arg, p, tol, ctx.max_terms)
                                                         : i_series(s, arg, p, tol, ctx.max_terms, &lgs);
            Complex c = cos(dmn * (half_pi - phi));
            acc += (iv * c) * (w * hw);
        }
        return acc;
    };

    const double qtol = static_cast<double>(std::log2(ctx.qtol()));
    const double sr = std::clamp(s.re.to_double(), -0.9, 1.0);
    const int grade = std::clamp(static_cast<int>(std::ceil((-qtol + 10) / (1.0 + sr))), 4, 400);

    Complex prev(p);
    bool have_prev = false;
    for (int level = 0; level <= 9; ++level) {
        const long panels = 1L << level;
        Real width = half_pi / static_cast<double>(panels);
        Complex total(p);
        for (long j = 1; j < panels; ++j) total += panel(width * static_cast<double>(j), width * static_cast<double>(j + 1));
        // geometric grading of the first panel toward phi = 0
        Real hi = width;
        for (int g = 0; g < grade; ++g) {
            Real lo = hi * 0.5;
            total += panel(lo, hi);
            hi = std::move(lo);
        }
        total += panel(Real(0.0, p), hi);
        if (have_prev) {
            Complex d = total - prev;
            if (d.log2_abs() <= qtol + std::max(0.0, total.log2_abs())) {
                Complex rhs = total * (Real(2.0, p) / pi);
                return abs(lhs - rhs).rounded(ctx.prec());
            }
        }
        prev = std::move(total);
        have_prev = true;
    }
    throw ConvergenceError("product identity quadrature did not converge");
}

bool order_monotonicity_check(const std::vector<double>& sigma_in, const std::vector<double>& t_in,
                              const std::vector<double>& x, const PrecisionContext& ctx) {
    std::vector<double> sigma = sigma_in, t = t_in;
    std::sort(sigma.begin(), sigma.end());
    std::sort(t.begin(), t.end());
    for (double s : sigma)
        if (!(s > 0)) throw DomainError("order_monotonicity_check: sigma must be > 0");
    for (double xv : x)
        if (!(xv > 0)) throw DomainError("order_monotonicity_check: x must be > 0");
    for (double xv : x) {
        Real xr(xv, ctx.prec());
        std::vector<std::vector<Real>> a(sigma.size());
        for (size_t i = 0; i < sigma.size(); ++i)
            for (double tv : t) a[i].push_back(abs(bessel_i(BesselOrder(sigma[i], tv, ctx.prec()), xr, ctx)));
        for (size_t i = 0; i + 1 < sigma.size(); ++i)
            for (size_t j = 0; j < t.size(); ++j)
                if (!(a[i + 1][j] < a[i][j])) return false;
        for (size_t i = 0; i < sigma.size(); ++i)
            for (size_t j = 0; j + 1 < t.size(); ++j)
                if (!(a[i][j + 1] >= a[i][j])) return false;
    }
    return true;
}

}  // namespace sl3
