#include "sl3/whittaker.hpp"

#include <cmath>
#include <limits>

#include "sl3/bessel.hpp"
#include "sl3/errors.hpp"
#include "sl3/gamma.hpp"

namespace sl3 {

namespace {

constexpr double kLog2e = 1.4426950408889634;
constexpr double kLn2 = 0.6931471805599453;

void require_general_position(const SatakeParameter& lam, const char* who) {
    if (!in_general_position(lam, 1e-12))
        throw DomainError(std::string(who) + ": lambda is not in general position (some l_i - l_j is an even integer)");
}

// log2 of (2^-a + 2^-b)
double log2_add(double a, double b) {
    double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log2(1.0 + std::exp2(lo - hi));
}

// Number of m-terms after which the (double) estimate of the M-series terms stays
// drops below the peak by `drop` nats for three consecutive indices.
long m_series_guess(double lq, double ar, double n1r, double n2r, double u1, double u2, double drop, long cap) {
    double best = -std::numeric_limits<double>::infinity();
    int below = 0;
    for (long m = 0; m < cap; ++m) {
        double md = static_cast<double>(m);
        double lt = md * lq - std::lgamma(md + 1) - std::lgamma(md + ar + 1) + log_bessel_i_estimate(md + n1r, u1) +
                    log_bessel_i_estimate(md + n2r, u2);
        best = std::max(best, lt);
        if (m > 2 && lt < best - drop) {
            if (++below >= 3) return m + 1;
        } else {
            below = 0;
        }
    }
    return cap;
}

}  // namespace

Complex m_whittaker(const SatakeParameter& lam, const TorusPoint& p, const PrecisionContext& ctx, EvalInfo* info) {
    ctx.validate();
    require_general_position(lam, "m_whittaker");
    const prec_t wp = ctx.prec() + 32;
    const Real y1 = p.y1.rounded(wp), y2 = p.y2.rounded(wp);
    const Complex l1 = lam[0].rounded(wp), l2 = lam[1].rounded(wp), l3 = lam[2].rounded(wp);
    const Real pi = Real::pi(wp);
    const Complex nu1 = (l1 - l2) * 0.5, nu2 = (l2 - l3) * 0.5, al = (l1 - l3) * 0.5;

    Complex den = sin(pi * nu1) * sin(pi * nu2) * sin(-(pi * al));
    Complex pref = Complex(pi * pi * pi) / den;
    pref *= y1 * y2;

    const Real py1 = pi * y1, py2 = pi * y2;
    Complex c0 = exp(-(l3 * 0.5) * log(py1) + (l1 * 0.5) * log(py2) - log_gamma_prec(al + 1.0, wp + 16));
    const Real q = py1 * py2;
    const Real u1 = py1 * 2.0, u2 = py2 * 2.0;

    const double tol = static_cast<double>(std::log2(ctx.stol()));
    long n = m_series_guess(std::log(q.to_double()), al.re.to_double(), nu1.re.to_double(), nu2.re.to_double(),
                            u1.to_double(), u2.to_double(), (ctx.bits + 40) * kLn2, ctx.max_terms);
    for (;;) {
        if (n > ctx.max_terms) throw ConvergenceError("m_whittaker: series did not converge within max_terms");
        std::vector<Complex> ia = bessel_i_ladder(nu1, u1, n, ctx);
        std::vector<Complex> ib = bessel_i_ladder(nu2, u2, n, ctx);
        Complex sum(wp), c = c0;
        double maxl = -std::numeric_limits<double>::infinity();
        std::vector<double> tl(n);
        for (long m = 0; m < n; ++m) {
            if (m > 0) {
                // c_m = c_{m-1} q / (m (m + al))
                c *= q;
                c /= (al + static_cast<double>(m)) * static_cast<double>(m);
            }
            Complex t = c * ia[m] * ib[m];
            tl[m] = t.log2_abs();
            maxl = std::max(maxl, tl[m]);
            sum += t;
        }
        double sl = sum.log2_abs();
        bool ok = n >= 3;
        for (long m = std::max(0L, n - 3); m < n && ok; ++m) ok = tl[m] < sl + tol;
        if (!ok) {
            n *= 2;
            continue;
        }
        Complex v = pref * sum;
        if (info) {
            double lost = std::max(0.0, maxl - sl);
            info->working_bits = wp;
            info->lost_bits = lost;
            info->terms = n;
            info->est_error_bits = log2_add(lost - static_cast<double>(wp) + 6, -static_cast<double>(ctx.bits));
        }
        return v.rounded(ctx.prec());
    }
}

Complex m_degen_a1(const SatakeParameter& lam, const TorusPoint& p, const PrecisionContext& ctx) {
    ctx.validate();
    const prec_t wp = ctx.prec() + 16;
    const Complex l1 = lam[0].rounded(wp), l2 = lam[1].rounded(wp), l3 = lam[2].rounded(wp);
    Complex pw = exp((1.0 - l3 * 0.5) * log(p.y1.rounded(wp)) + (1.0 - l3) * log(p.y2.rounded(wp)));
    Real u = Real::pi(wp) * p.y1.rounded(wp) * 2.0;
    Complex iv = bessel_i(BesselOrder((l1 - l2) * 0.5), u, ctx.with_bits(wp));
    return (pw * iv).rounded(ctx.prec());
}

Complex m_degen_a2(const SatakeParameter& lam, const TorusPoint& p, const PrecisionContext& ctx) {
    ctx.validate();
    const prec_t wp = ctx.prec() + 16;
    const Complex l1 = lam[0].rounded(wp), l2 = lam[1].rounded(wp), l3 = lam[2].rounded(wp);
    Complex pw = exp((l1 + 1.0) * log(p.y1.rounded(wp)) + (l1 * 0.5 + 1.0) * log(p.y2.rounded(wp)));
    Real u = Real::pi(wp) * p.y2.rounded(wp) * 2.0;
    Complex iv = bessel_i(BesselOrder((l2 - l3) * 0.5), u, ctx.with_bits(wp));
    return (pw * iv).rounded(ctx.prec());
}

namespace {

// Shared body of the two degenerate W functions. `first` selects the alpha_1 version.
Complex w_degen(const SatakeParameter& lam, const TorusPoint& p, DegenRoute route, const PrecisionContext& ctx,
                EvalInfo* info, bool first) {
    ctx.validate();
    const Real& y = first ? p.y1 : p.y2;
    const Complex nu = first ? (lam[0] - lam[1]) * 0.5 : (lam[1] - lam[2]) * 0.5;
    if (route == DegenRoute::closed_form) {
        const prec_t wp = ctx.prec() + 16;
        Complex pw = first ? exp((1.0 - lam[2].rounded(wp) * 0.5) * log(p.y1.rounded(wp)) +
                                 (1.0 - lam[2].rounded(wp)) * log(p.y2.rounded(wp)))
                           : exp((lam[0].rounded(wp) + 1.0) * log(p.y1.rounded(wp)) +
                                 (lam[0].rounded(wp) * 0.5 + 1.0) * log(p.y2.rounded(wp)));
        Real u = Real::pi(wp) * y.rounded(wp) * 2.0;
        Complex kv = bessel_k(BesselOrder(nu.rounded(wp)), u, ctx.with_bits(wp));
        if (info) {
            info->working_bits = wp;
            info->lost_bits = 0;
            info->terms = 0;
            info->est_error_bits = -static_cast<double>(ctx.bits - 2);
        }
        return (pw * kv).rounded(ctx.prec());
    }
    BesselOrder bo(nu);
    if (bo.dist_to_int < 1e-12)
        throw DomainError("w_degen combination route needs a non-integral Bessel order");
    const long extra = static_cast<long>(std::ceil(4 * M_PI * y.to_double() * kLog2e)) + 32;
    PrecisionContext wc = ctx.elevated(extra);
    const prec_t wp = wc.prec();
    SatakeParameter other = weyl_apply(first ? WeylElement::s12() : WeylElement::s23(), lam);
    Complex a = first ? m_degen_a1(lam, p, wc) : m_degen_a2(lam, p, wc);
    Complex b = first ? m_degen_a1(other, p, wc) : m_degen_a2(other, p, wc);
    Complex diff = a - b;
    double lost = std::max(a.log2_abs(), b.log2_abs()) - diff.log2_abs();
    if (static_cast<double>(wp) - lost < static_cast<double>(ctx.bits + 16))
        throw CancellationAlarm("degenerate W combination lost " + std::to_string(static_cast<long>(lost)) +
                                    " bits of " + std::to_string(static_cast<long>(wp)),
                                lost);
    // sin(pi (l2 - l1)/2) for alpha_1, sin(pi (l3 - l2)/2) for alpha_2; both are sin(-pi nu)
    Complex s = sin(-(Real::pi(wp) * nu.rounded(wp)));
    Complex v = diff * (Real::pi(wp) * 0.5) / s;
    if (info) {
        info->working_bits = wp;
        info->lost_bits = lost;
        info->terms = 0;
        info->est_error_bits = log2_add(lost - static_cast<double>(wp) + 4, -static_cast<double>(ctx.bits));
    }
    return v.rounded(ctx.prec());
}

}  // namespace

Complex w_degen_a1(const SatakeParameter& lam, const TorusPoint& p, DegenRoute route, const PrecisionContext& ctx,
                   EvalInfo* info) {
    return w_degen(lam, p, route, ctx, info, true);
}

Complex w_degen_a2(const SatakeParameter& lam, const TorusPoint& p, DegenRoute route, const PrecisionContext& ctx,
                   EvalInfo* info) {
    return w_degen(lam, p, route, ctx, info, false);
}

namespace {

struct VtPiece {
    const BesselKEvaluator& K;
    Real a, b;    // K(a sqrt(1+x)) K(b sqrt(1+1/x))
    Complex e;    // x^(e-1) dx
    double nu_re;
};

// Tanh-sinh node: x = 1/(1+exp(-2s)), s = (pi/2) sinh t, dx/dt = (pi/4) cosh t / cosh^2 s
struct TsNode {
    Real x, w;
};

TsNode ts_node(double t, prec_t p) {
    Real tt(t, p);
    Real pi = Real::pi(p);
    Real s = pi * sinh(tt) * 0.5;
    Real ch = cosh(s);
    Real x = 1.0 / (exp(s * -2.0) + 1.0);
    Real w = pi * cosh(tt) * 0.25 / (ch * ch);
    return {x, w};
}

double piece_log_estimate(const VtPiece& pc, double x, double w) {
    double a = pc.a.to_double(), b = pc.b.to_double();
    return std::log(w) + log_bessel_k_estimate(pc.nu_re, a * std::sqrt(1 + x)) +
           log_bessel_k_estimate(pc.nu_re, b * std::sqrt(1 + 1 / x)) + (pc.e.re.to_double() - 1) * std::log(x);
}

Complex piece_value(const VtPiece& pc, const TsNode& nd, prec_t p) {
    Real ka = pc.a * sqrt(nd.x + 1.0);
    Real kb = pc.b * sqrt(1.0 / nd.x + 1.0);
    Complex v = pc.K(ka) * pc.K(kb);
    v *= exp((pc.e - 1.0) * log(nd.x)).rounded(p);
    return v * nd.w;
}

// Refines until two levels agree to qtol; returns the integral over (0,1).
Complex vt_integrate(const VtPiece& pc, prec_t p, double qbits, long& nodes, double& est_bits) {
    // t range where the weights are not yet negligible
    double T = std::log(2.0 * (qbits + 40) * kLn2 / M_PI) + 1.0;
    double h = 0.5;
    Complex S(p);
    bool have = false;
    const double drop = (qbits + 24) * kLn2;
    for (int level = 0; level < 12; ++level) {
        // new abscissae at this level: all j h at level 0, odd j afterwards
        long jmax = static_cast<long>(std::ceil(T / h));
        long step = level == 0 ? 1 : 2;
        long start = level == 0 ? 0 : 1;
        std::vector<double> ts;
        for (long j = start; j <= jmax; j += step) {
            ts.push_back(j * h);
            if (j != 0) ts.push_back(-j * h);
        }
        // skip nodes far below the largest one
        std::vector<double> est(ts.size());
        double best = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < ts.size(); ++i) {
            double s = M_PI / 2 * std::sinh(ts[i]);
            double x = 1.0 / (1.0 + std::exp(-2 * s));
            double w = M_PI / 4 * std::cosh(ts[i]) / (std::cosh(s) * std::cosh(s));
            est[i] = (x > 0 && w > 0) ? piece_log_estimate(pc, x, w) : -std::numeric_limits<double>::infinity();
            if (!std::isfinite(est[i])) est[i] = -std::numeric_limits<double>::infinity();
            best = std::max(best, est[i]);
        }
        Complex add(p);
        for (size_t i = 0; i < ts.size(); ++i) {
            if (est[i] < best - drop) continue;
            add += piece_value(pc, ts_node(ts[i], p), p);
            ++nodes;
        }
        Complex next(p);
        if (!have) {
            next = add * Real(h, p);
        } else {
            next = S * 0.5 + add * Real(h, p);
        }
        if (have && h <= 0.125) {
            double diff = (next - S).log2_abs() - next.log2_abs();
            if (diff <= -qbits) {
                est_bits = diff;
                return next;
            }
        }
        S = std::move(next);
        have = true;
        h *= 0.5;
    }
    throw ConvergenceError("w_vt: tanh-sinh quadrature did not reach quad_tol");
}

}  // namespace

Complex w_vt(const SatakeParameter& lam, const TorusPoint& p, const PrecisionContext& ctx, EvalInfo* info) {
    ctx.validate();
    const double qbits = -static_cast<double>(std::log2(ctx.qtol()));
    const long kbits = std::max<long>(64, std::min<long>(ctx.bits, static_cast<long>(std::ceil(qbits)) + 32));
    PrecisionContext kc = ctx.with_bits(kbits);
    const prec_t wp = kbits + 16;
    const Complex l1 = lam[0].rounded(wp), l2 = lam[1].rounded(wp), l3 = lam[2].rounded(wp);
    const Complex nu = (l1 - l3) * 0.5;
    const Complex e = l2 * 0.75;
    BesselKEvaluator K(nu, kc);
    const Real pi = Real::pi(wp);
    const Real u1 = pi * p.y1.rounded(wp) * 2.0, u2 = pi * p.y2.rounded(wp) * 2.0;
    long nodes = 0;
    double ea = 0, eb = 0;
    VtPiece A{K, u1, u2, -e, nu.re.to_double()};
    VtPiece B{K, u2, u1, e, nu.re.to_double()};
    Complex ia = vt_integrate(A, wp, qbits, nodes, ea);
    Complex ib = vt_integrate(B, wp, qbits, nodes, eb);
    Complex pw = exp((1.0 - l2 * 0.5) * log(p.y1.rounded(wp)) + (l2 * 0.5 + 1.0) * log(p.y2.rounded(wp)));
    Complex v = pw * (ia + ib) * 4.0;
    if (info) {
        info->working_bits = kbits;
        info->lost_bits = 0;
        info->terms = nodes;
        info->est_error_bits = std::max({ea, eb, -static_cast<double>(kbits - 8)});
    }
    return v.rounded(ctx.prec());
}

long weylsum_extra_bits(const TorusPoint& p) {
    double a = std::cbrt(p.y1.to_double() * p.y1.to_double()) + std::cbrt(p.y2.to_double() * p.y2.to_double());
    return static_cast<long>(std::ceil(4 * M_PI * std::pow(a, 1.5) * kLog2e)) + 64;
}

Complex w_weylsum(const SatakeParameter& lam, const TorusPoint& p, const PrecisionContext& ctx, EvalInfo* info) {
    ctx.validate();
    require_general_position(lam, "w_weylsum");
    PrecisionContext wc = ctx.elevated(weylsum_extra_bits(p));
    Complex sum(wc.prec());
    double maxl = -std::numeric_limits<double>::infinity();
    long terms = 0;
    for (const auto& w : WeylElement::all()) {
        EvalInfo mi;
        Complex m = m_whittaker(weyl_apply(w, lam), p, wc, &mi);
        terms += mi.terms;
        maxl = std::max(maxl, m.log2_abs());
        sum += m;
    }
    double lost = maxl - sum.log2_abs();
    double working = static_cast<double>(wc.bits);
    if (working - lost < static_cast<double>(ctx.bits + 16))
        throw CancellationAlarm("w_weylsum lost " + std::to_string(static_cast<long>(lost)) + " of " +
                                    std::to_string(wc.bits) + " working bits",
                                lost);
    if (info) {
        info->working_bits = wc.bits;
        info->lost_bits = lost;
        info->terms = terms;
        info->est_error_bits = log2_add(lost - working + 8, -static_cast<double>(ctx.bits));
    }
    return sum.rounded(ctx.prec());
}

bool w_real_bound_check(const SatakeParameter& lam, const TorusPoint& p, const PrecisionContext& ctx) {
    SatakeParameter re = lam.real_part();
    Complex w = w_vt(lam, p, ctx);
    Complex wr = w_vt(re, p, ctx);
    return abs(w) <= abs(wr) * (1.0 + 1e-6) && wr.re > 0.0;
}

Complex m_leading_asym(const SatakeParameter& lam, long k, long l, const Real& t) {
    (void)k;
    if (!(t >= 1.0)) throw DomainError("m_leading_asym needs t >= 1");
    if (l == 0) throw DomainError("m_leading_asym needs l != 0");
    prec_t p = std::max(t.prec(), lam.prec());
    Complex e = (lam[0].rounded(p) + 1.0) * -1.5 * log(t.rounded(p));
    e += Complex(Real::pi(p) * 2.0 * static_cast<double>(std::labs(l)) * t.rounded(p));
    return exp(e);
}

Complex apply_transformation_law(const Complex& value, long k, long l, const Real& x, const Real& y) {
    prec_t p = std::max({value.prec(), x.prec(), y.prec()});
    Real ph = x.rounded(p) * static_cast<double>(k) + y.rounded(p) * static_cast<double>(l);
    ph -= floor(ph);
    return value * expi(Real::pi(p) * 2.0 * ph);
}

}  // namespace sl3
