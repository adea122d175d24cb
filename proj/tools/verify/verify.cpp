#include "verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "sl3/asymptotics.hpp"
#include "sl3/bessel.hpp"
#include "sl3/errors.hpp"
#include "sl3/fourier.hpp"
#include "sl3/hecke.hpp"
#include "sl3/whittaker.hpp"

namespace sl3::verify {

namespace {

constexpr long kBits = 128;

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double rel(const Complex& a, const Complex& b) { return (abs(a - b) / abs(b)).to_double(); }

// least-squares slope of ys against xs
double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double n = xs.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

CheckResult bessel_closed_forms() {
    auto ctx = PrecisionContext::with_bits(kBits);
    const prec_t hp = 2 * kBits;
    double worst = 0;
    for (double x : {0.1, 1.0, 2.0, 10.0, 50.0}) {
        Real xr(x, kBits), xh(x, hp);
        BesselOrder half(0.5, 0, kBits);
        Complex i = bessel_i(half, xr, ctx), k = bessel_k(half, xr, ctx);
        // I_{1/2} = sqrt(2/(pi x)) sinh x, K_{1/2} = sqrt(pi/(2x)) e^-x
        Real ic = sqrt(Real(2.0, hp) / (Real::pi(hp) * xh)) * sinh(xh);
        Real kc = sqrt(Real::pi(hp) / (xh * 2.0)) * exp(-xh);
        worst = std::max({worst, rel(i, Complex(ic, Real(hp))), rel(k, Complex(kc, Real(hp)))});
    }
    return {1, "", worst <= 1e-12, fmt("max relative error %.3g (limit 1e-12)", worst)};
}

CheckResult bessel_product_identity() {
    auto ctx = PrecisionContext::with_bits(kBits);
    std::vector<Complex> mus = {Complex(0.3, 0, kBits), Complex(0.5, 0.4, kBits), Complex(1.2, -0.3, kBits)};
    std::vector<Complex> nus = {Complex(0.0, 0, kBits), Complex(0.7, 0.2, kBits), Complex(2.1, 0.5, kBits)};
    double worst = 0;
    int n = 0;
    for (const auto& mu : mus)
        for (const auto& nu : nus)
            for (double x : {0.5, 2.0, 5.0}) {
                worst = std::max(worst, product_identity_residual(mu, nu, Real(x, kBits), ctx).to_double());
                ++n;
            }
    return {2, "", worst <= 1e-10, fmt("%d lattice points, max residual %.3g (limit 1e-10)", n, worst)};
}

CheckResult bessel_monotonicity() {
    auto ctx = PrecisionContext::with_bits(kBits);
    std::vector<double> sig = {0.1, 0.5, 1.0, 2.0, 3.0}, t = {0.0, 0.5, 1.0, 2.0, 3.0}, x = {0.5, 2.0, 5.0};
    bool ok = order_monotonicity_check(sig, t, x, ctx);
    return {3, "", ok, ok ? "5x5x3 grid, 0 violations" : "violation found on the 5x5x3 grid"};
}

CheckResult degenerate_routes() {
    auto ctx = PrecisionContext::with_bits(kBits);
    auto l1 = SatakeParameter::parse("0.4,0.1,auto", kBits);
    auto l2 = SatakeParameter::parse("0.3+0.2i,0.1-0.2i,auto", kBits);
    const std::pair<double, double> pts[] = {{1.5, 0.7}, {0.6, 1.2}, {2.0, 2.0}, {0.8, 0.4}, {3.0, 1.1}};
    double worst = 0;
    int n = 0;
    for (int i = 0; i < 5; ++i) {
        TorusPoint p(pts[i].first, pts[i].second, kBits);
        const auto& lam = i % 2 ? l2 : l1;
        // alternate the two simple roots so both routes get five points each way
        auto a = i < 3 ? w_degen_a1(lam, p, DegenRoute::combination, ctx) : w_degen_a2(lam, p, DegenRoute::combination, ctx);
        auto b = i < 3 ? w_degen_a1(lam, p, DegenRoute::closed_form, ctx) : w_degen_a2(lam, p, DegenRoute::closed_form, ctx);
        auto c = i < 3 ? w_degen_a2(lam, p, DegenRoute::combination, ctx) : w_degen_a1(lam, p, DegenRoute::combination, ctx);
        auto d = i < 3 ? w_degen_a2(lam, p, DegenRoute::closed_form, ctx) : w_degen_a1(lam, p, DegenRoute::closed_form, ctx);
        worst = std::max({worst, rel(a, b), rel(c, d)});
        n += 2;
    }
    return {4, "", worst <= 1e-9, fmt("%d points, max relative difference %.3g (limit 1e-9)", n, worst)};
}

CheckResult central_cross_validation() {
    auto ctx = PrecisionContext::with_bits(kBits);
    std::vector<SatakeParameter> lams = {SatakeParameter::parse("0.4,0.1,-0.5", kBits),
                                         SatakeParameter::parse("0.3+0.2i,0.1-0.2i,auto", kBits)};
    double worst = 0;
    int alarms = 0, n = 0;
    for (const auto& lam : lams)
        for (double a : {0.5, 1.0, 2.0})
            for (double b : {0.5, 1.0, 2.0}) {
                TorusPoint p(a, b, kBits);
                try {
                    worst = std::max(worst, rel(w_weylsum(lam, p, ctx), w_vt(lam, p, ctx)));
                } catch (const CancellationAlarm&) {
                    ++alarms;
                }
                ++n;
            }
    return {5, "", alarms == 0 && worst <= 1e-6,
            fmt("%d points, max relative difference %.3g (limit 1e-6), %d alarms", n, worst, alarms)};
}

CheckResult real_bound() {
    auto ctx = PrecisionContext::with_bits(kBits);
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> re(-0.4, 0.4), im(-1.5, 1.5), y(0.5, 2.0);
    int n = 0, bound_fail = 0, pos_fail = 0;
    while (n < 20) {
        auto lam = SatakeParameter::from_two(Complex(re(rng), im(rng), kBits), Complex(re(rng), im(rng), kBits));
        if (!in_general_position(lam, 1e-2)) continue;
        TorusPoint p(y(rng), y(rng), kBits);
        if (!w_real_bound_check(lam, p, ctx)) ++bound_fail;
        Complex w = w_vt(lam.real_part(), p, ctx);
        if (!(w.re > 0) || abs(w.im) > 1e-10) ++pos_fail;
        ++n;
    }
    return {6, "", bound_fail == 0 && pos_fail == 0,
            fmt("%d samples, %d bound violations, %d non-positive real-lambda values", n, bound_fail, pos_fail)};
}

CheckResult nilpotency() {
    const std::pair<double, double> pts[] = {{1, 1}, {4, 1}, {1, 4}, {2.5, 0.3}, {0.2, 0.2}};
    double res = 0, match = 0, pair_err = 0;
    bool counts = true;
    for (auto [a, b] : pts) {
        auto sols = nilpotent_triples(Real(a, kBits), Real(b, kBits));
        if (sols.size() != 6) counts = false;
        std::vector<bool> used(7, false);
        for (const auto& s : sols) {
            res = std::max({res, std::abs(s.res_trace), std::abs(s.res_minors), std::abs(s.res_det)});
            std::complex<double> d = s.diff().to_cd();
            // multiset match: nearest unused label
            int best = 0;
            double bd = 1e300;
            for (int m = 1; m <= 6; ++m)
                if (!used[m] && std::abs(label_difference(m, a, b) - d) < bd) {
                    bd = std::abs(label_difference(m, a, b) - d);
                    best = m;
                }
            if (best) used[best] = true;
            match = std::max(match, bd);
        }
        if (a == 1 && b == 1) {
            std::vector<double> real;
            for (const auto& s : sols)
                if (std::abs(s.diff().im.to_double()) < 1e-10) real.push_back(s.diff().re.to_double());
            std::sort(real.begin(), real.end());
            if (real.size() != 2)
                pair_err = 1;
            else
                pair_err = std::max(std::abs(real[0] + std::sqrt(8.0)), std::abs(real[1] - std::sqrt(8.0)));
        }
    }
    bool ok = counts && res <= 1e-8 && match <= 1e-8 && pair_err <= 1e-10;
    return {7, "", ok,
            fmt("6 solutions at 5 points: %s; residual %.3g; label match %.3g; real pair at (1,1) off by %.3g",
                counts ? "yes" : "no", res, match, pair_err)};
}

CheckResult decay_rate() {
    auto ctx = PrecisionContext::with_bits(kBits);
    auto lam = SatakeParameter::parse("0.4,0.1,auto", kBits);
    std::vector<std::pair<double, double>> grid;
    for (double t = 3.0; t <= 6.0 + 1e-9; t += 0.5) grid.push_back({t, t});
    for (double a : {1.0, 2.0, 4.0})
        for (double b : {1.0, 3.0, 6.0})
            if (a != b) grid.push_back({a, b});
    auto r = envelope_check(lam, grid, ctx);
    bool ok = r.rate_in_corridor && r.rate_near_prediction;
    return {8, "", ok,
            fmt("rate %.5g vs %.5g (%+.2f%%), corridor [%.4g, %.4g]", r.rate, r.predicted_rate,
                100 * (r.rate / r.predicted_rate - 1), r.corridor_lo, r.corridor_hi)};
}

CheckResult m_growth() {
    auto ctx = PrecisionContext::with_bits(kBits);
    auto lam = SatakeParameter::parse("0.4,0.1,auto", kBits);
    std::string detail;
    bool ok = true;
    for (long l : {1L, 2L}) {
        std::vector<double> ts, logs;
        for (double t = 5; t <= 20 + 1e-9; t += 1.25) {
            Real tr(t, kBits);
            Real lt = tr * static_cast<double>(l);
            TorusPoint p(1 / (tr * tr), lt);
            ts.push_back(t);
            logs.push_back(log(abs(m_whittaker(lam, p, ctx))).to_double());
        }
        double s = slope(ts, logs), pred = 2 * M_PI * l;
        ok = ok && std::abs(s / pred - 1) <= 0.05;
        detail += fmt("%sl=%ld slope %.5g vs %.5g (%+.2f%%)", detail.empty() ? "" : "; ", l, s, pred, 100 * (s / pred - 1));
    }
    return {9, "", ok, detail};
}

CheckResult projection_round_trip() {
    auto ctx = PrecisionContext::with_bits(64);
    auto lam = SatakeParameter::parse("0.4,0.1,auto", 64);
    CoefficientModel m(lam);
    m.set_ckl(1, 1, Complex(1, 0, 64));
    m.truncation = {1, 1, 20};
    const std::pair<double, double> pts[] = {{1.0, 1.0}, {0.8, 1.3}, {1.5, 0.9}};
    double worst = 0, leak = 0;
    for (auto [a, b] : pts) {
        GroupPoint g{Real(0, 64), Real(0, 64), Real(0, 64), TorusPoint(a, b, 64)};
        KernelCache cache;
        Complex p = project_k0l(m, 1, 1, g, 64, ctx, &cache);
        worst = std::max(worst, rel(p, w_vt(lam, g.a, ctx)));
        leak = std::max({leak, abs(project_k0l(m, 5, 7, g, 64, ctx, &cache)).to_double(),
                         abs(project_k0l(m, 2, 1, g, 64, ctx, &cache)).to_double()});
    }
    return {10, "", worst <= 1e-6 && leak <= 1e-6,
            fmt("3 torus points, max relative error %.3g, max leakage %.3g (limits 1e-6)", worst, leak)};
}

CheckResult majorants() {
    std::string detail;
    bool ok = true;
    for (auto [x, y] : {std::pair{0.0, 1.0}, std::pair{0.0, std::sqrt(3.0) / 2}}) {
        auto r = majorant_sums(x, y, y);
        bool finite = std::isfinite(r.S1) && std::isfinite(r.S2) && std::isfinite(r.S3);
        ok = ok && finite && r.ok();
        detail += fmt("%s(%g,%.4g,%.4g): S1 %.6g<=%.3g last %.1g, S2 %.6g last %.1g, S3 %.6g last %.1g",
                      detail.empty() ? "" : "; ", x, y, y, r.S1, r.S1_env_cosets, r.S1_last, r.S2, r.S2_last, r.S3,
                      r.S3_last);
    }
    return {11, "", ok, detail};
}

CheckResult gamma_bracket() {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> lsmall(1, 40);
    std::uniform_real_distribution<double> logratio(0, std::log(1e6)), y(0.01, 0.99), y2(0.5, 5), sign(-1, 1);
    int viol = 0;
    for (int i = 0; i < 100; ++i) {
        long l = lsmall(rng);
        long k = std::max(l, std::lround(l * std::exp(logratio(rng))));
        if (sign(rng) < 0) k = -k;
        if (sign(rng) < 0) l = -l;
        double y1 = y(rng);
        (void)y2(rng);  // y2 does not enter the bracket
        try {
            CosetRep r = gamma_select(k, l, y1);
            double root = std::cbrt(std::abs(static_cast<double>(k) / l));
            double d = std::hypot(r.c * y1, static_cast<double>(r.d));
            if (r.a * r.d - r.b * r.c != 1 || !(0.5 * root < d && d < 2 * root)) ++viol;
        } catch (const std::logic_error&) {
            ++viol;
        }
    }
    return {12, "", viol == 0, fmt("100 samples, %d violations", viol)};
}

Schedule random_schedule(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> idx(1, 30), num(-9, 9), den(1, 5), cnt(1, 8);
    Schedule s;
    long n = cnt(rng);
    for (long i = 0; i < n; ++i) {
        mpq_class v(num(rng), den(rng));
        v.canonicalize();
        if (v != 0) s.entries[idx(rng)] = v;
    }
    return s;
}

CheckResult hecke_exactness() {
    int eq = 0, ne = 0;
    for (long n = 1; n <= 50; ++n)
        for (long m = 1; m <= 50; ++m)
            (hecke_apply(n, QExpansion::monomial(-m)) == hecke_brute_oracle(n, m) ? eq : ne)++;
    std::mt19937_64 rng(99);
    int sym_fail = 0;
    for (int i = 0; i < 10; ++i) {
        Schedule c = random_schedule(rng), e = random_schedule(rng);
        if (hecke_combo(c, e, 120) != hecke_combo(e, c, 120)) ++sym_fail;
    }
    int comm_fail = 0;
    QExpansion gen = QExpansion::monomial(-1);
    for (long n = 1; n <= 30; ++n)
        for (long m = n + 1; m <= 30; ++m)
            if (hecke_apply(n, hecke_apply(m, gen)) != hecke_apply(m, hecke_apply(n, gen))) ++comm_fail;
    return {13, "", ne == 0 && sym_fail == 0 && comm_fail == 0,
            fmt("%d/2500 oracle equalities, %d/10 symmetry failures, %d commutation failures", eq, sym_fail,
                comm_fail)};
}

CheckResult cos_witness() {
    auto reps = coset_enumerate(100);
    double worst = 1e300;
    int exact_zero = 0;
    for (long k = -50; k <= 50; ++k) {
        for (const auto& r : reps) {
            auto [num, den] = theta_gamma_fraction(r);
            // 2 cos(2 pi k num/den) = 0 iff 4 k num / den is an odd integer
            long t = 4 * k * num;
            if (t % den == 0 && ((t / den) % 2 != 0)) ++exact_zero;
            worst = std::min(worst, std::abs(2 * std::cos(2 * M_PI * k * theta_gamma(r))));
        }
        if (k != 0 && !cos_nonvanishing_check(k, reps)) ++exact_zero;
    }
    return {14, "", exact_zero == 0 && worst > 1e-12,
            fmt("%zu cosets x 101 values of k, min |2cos| %.3g, exact zeros %d", reps.size(), worst, exact_zero)};
}

}  // namespace

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list = {
        {1, "bessel", "Bessel half-integer closed forms", bessel_closed_forms},
        {2, "bessel", "Bessel product identity", bessel_product_identity},
        {3, "bessel", "I order monotonicity", bessel_monotonicity},
        {4, "whittaker", "degenerate two-route agreement", degenerate_routes},
        {5, "whittaker", "Weyl sum vs double integral", central_cross_validation},
        {6, "whittaker", "real-part bound and positivity", real_bound},
        {7, "asymptotics", "nilpotency system", nilpotency},
        {8, "asymptotics", "diagonal decay rate", decay_rate},
        {9, "whittaker", "M growth rate", m_growth},
        {10, "fourier", "projection round trip", projection_round_trip},
        {11, "fourier", "majorant certification", majorants},
        {12, "fourier", "gamma selection bracket", gamma_bracket},
        {13, "hecke", "Hecke exactness", hecke_exactness},
        {14, "core", "cos nonvanishing witness", cos_witness},
    };
    return list;
}

std::vector<std::string> suite_names() { return {"bessel", "whittaker", "asymptotics", "fourier", "hecke", "core", "all"}; }

bool is_suite(const std::string& name) {
    auto s = suite_names();
    return std::find(s.begin(), s.end(), name) != s.end();
}

std::string format_line(const CheckResult& r, bool timing) {
    std::string s = fmt("[%s] %2d %s: %s", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(), r.detail.c_str());
    if (timing) s += fmt(" (%.1fs)", r.seconds);
    return s;
}

std::vector<CheckResult> run_suite(const std::string& suite, std::ostream* out, bool timing) {
    if (!is_suite(suite)) throw DomainError("unknown suite \"" + suite + "\"");
    std::vector<CheckResult> results;
    for (const auto& c : criteria()) {
        if (suite != "all" && c.suite != suite) continue;
        auto t0 = std::chrono::steady_clock::now();
        CheckResult r;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("threw: ") + e.what();
        }
        r.id = c.id;
        r.title = c.title;
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (out) *out << format_line(r, timing) << std::endl;
        results.push_back(r);
    }
    return results;
}

}  // namespace sl3::verify
