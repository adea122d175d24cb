#include "sl3/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sl3/errors.hpp"
#include "sl3/whittaker.hpp"

namespace sl3 {

namespace {

struct Tri {
    Complex p1, p2, p3;
};

// (y1^{2/3} + w y2^{2/3})^{3/2}, w = 1, e^{-2 pi i/3}, e^{2 pi i/3}; principal branch
Complex branch_value(int which, const Real& y1, const Real& y2, prec_t p) {
    Real a = cbrt(y1.rounded(p) * y1.rounded(p));
    Real b = cbrt(y2.rounded(p) * y2.rounded(p));
    Complex z(a + b);
    if (which != 0) {
        Real ang = Real::pi(p) * (which == 1 ? -2.0 : 2.0) / 3.0;
        z = Complex(a) + expi(ang) * b;
    }
    return exp(log(z) * 1.5);
}

// label m -> (sign, which)
std::pair<int, int> label_form(int m) {
    switch (m) {
        case 1: return {1, 0};
        case 2: return {-1, 1};
        case 3: return {-1, 2};
        case 4: return {1, 1};
        case 5: return {1, 2};
        case 6: return {-1, 0};
        default: throw DomainError("label must be in 1..6");
    }
}

Complex label_diff_mp(int m, const Real& y1, const Real& y2, prec_t p) {
    auto [sg, which] = label_form(m);
    Complex v = branch_value(which, y1, y2, p);
    return sg > 0 ? v : -v;
}

struct Sys {
    Real a, b;  // y1^2, y2^2
};

void residual(const Tri& t, const Sys& s, Complex& f1, Complex& f2, Complex& f3) {
    f1 = t.p1 + t.p2 + t.p3;
    f2 = t.p1 * t.p2 + t.p1 * t.p3 + t.p2 * t.p3 + (s.a + s.b);
    f3 = t.p1 * t.p2 * t.p3 + t.p1 * s.b + t.p3 * s.a;
}

double residual_norm(const Tri& t, const Sys& s) {
    Complex f1, f2, f3;
    residual(t, s, f1, f2, f3);
    return std::max({f1.log2_abs(), f2.log2_abs(), f3.log2_abs()});
}

Complex det3(const Complex m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

bool newton(Tri& t, const Sys& s, prec_t p) {
    double scale = std::log2(1.0 + s.a.to_double() + s.b.to_double());
    double target = scale * 1.5 - static_cast<double>(p) + 12;
    for (int it = 0; it < 80; ++it) {
        Complex f[3];
        residual(t, s, f[0], f[1], f[2]);
        double r = std::max({f[0].log2_abs(), f[1].log2_abs(), f[2].log2_abs()});
        if (r <= target) return true;
        Complex one(Real(1.0, p));
        Complex J[3][3] = {{one, one, one},
                           {t.p2 + t.p3, t.p1 + t.p3, t.p1 + t.p2},
                           {t.p2 * t.p3 + s.b, t.p1 * t.p3, t.p1 * t.p2 + s.a}};
        Complex D = det3(J);
        if (D.is_zero()) return false;
        Complex dx[3];
        for (int c = 0; c < 3; ++c) {
            Complex M[3][3];
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) M[i][j] = j == c ? f[i] : J[i][j];
            dx[c] = det3(M) / D;
        }
        t.p1 -= dx[0];
        t.p2 -= dx[1];
        t.p3 -= dx[2];
    }
    return false;
}

// p2 = -s, p1 = (s - d)/2, p3 = (s + d)/2 where s solves the minor and determinant conditions
Tri seed_from_diff(const Complex& d, const Sys& sy, prec_t p) {
    Real Y = sy.a + sy.b, D = sy.a - sy.b;
    Complex d2 = d * d;
    std::vector<Complex> cand;
    Complex den = Complex(Y) + d2 * 2.0;
    if (den.log2_abs() > std::log2(Y.to_double()) - 20) cand.push_back(-(d * D * 3.0) / den);
    Complex r = sqrt((Complex(Y * 4.0) - d2) / 3.0);
    cand.push_back(r);
    cand.push_back(-r);
    Tri best;
    double bestr = std::numeric_limits<double>::infinity();
    for (const auto& sc : cand) {
        Tri t{(sc - d) * 0.5, -sc, (sc + d) * 0.5};
        double rr = residual_norm(t, sy);
        if (rr < bestr) {
            bestr = rr;
            best = t;
        }
    }
    (void)p;
    return best;
}

double tri_distance(const Tri& a, const Tri& b) {
    return std::max({(a.p1 - b.p1).log2_abs(), (a.p2 - b.p2).log2_abs(), (a.p3 - b.p3).log2_abs()});
}

bool all_distinct(const std::vector<Tri>& v, double floor_log2) {
    for (size_t i = 0; i < v.size(); ++i)
        for (size_t j = i + 1; j < v.size(); ++j)
            if (tri_distance(v[i], v[j]) < floor_log2) return false;
    return true;
}

std::vector<Tri> solve_seeded(const Real& y1, const Real& y2, prec_t p, const std::vector<Tri>* seeds) {
    Sys sy{y1.rounded(p) * y1.rounded(p), y2.rounded(p) * y2.rounded(p)};
    std::vector<Tri> out;
    for (int m = 1; m <= 6; ++m) {
        Tri t = seeds ? (*seeds)[m - 1] : seed_from_diff(label_diff_mp(m, y1, y2, p), sy, p);
        if (!newton(t, sy, p)) throw ConvergenceError("nilpotent_triples: Newton did not converge");
        out.push_back(t);
    }
    return out;
}

}  // namespace

std::complex<double> label_difference(int m, double y1, double y2) {
    return label_diff_mp(m, Real(y1, 64), Real(y2, 64), 64).to_cd();
}

std::vector<NilpotentTriple> nilpotent_triples(const Real& y1, const Real& y2, prec_t p) {
    if (!(y1 > 0.0) || !(y2 > 0.0)) throw DomainError("nilpotent_triples: y1, y2 must be positive");
    const prec_t wp = p + 32;
    double scale = std::log2(1.0 + y1.to_double() + y2.to_double());
    double floor_log2 = scale - 30;  // about 1e-9 relative
    std::vector<Tri> sol = solve_seeded(y1, y2, wp, nullptr);
    if (!all_distinct(sol, floor_log2)) {
        // two labels share p3 - p1 here; follow the solutions in from y1 > y2
        Real yp = y1.rounded(wp) * (1.0 + 1e-6);
        std::vector<Tri> near = solve_seeded(yp, y2, wp, nullptr);
        if (!all_distinct(near, floor_log2)) throw ConvergenceError("nilpotent_triples: could not separate solutions");
        sol = solve_seeded(y1, y2, wp, &near);
        if (!all_distinct(sol, floor_log2 - 10)) throw ConvergenceError("nilpotent_triples: continuation merged solutions");
    }
    Sys sy{y1.rounded(wp) * y1.rounded(wp), y2.rounded(wp) * y2.rounded(wp)};
    std::vector<NilpotentTriple> out;
    for (int m = 1; m <= 6; ++m) {
        const Tri& t = sol[m - 1];
        Complex want = label_diff_mp(m, y1, y2, wp);
        Complex got = t.p3 - t.p1;
        if ((got - want).log2_abs() > scale - 27)
            throw ConvergenceError("nilpotent_triples: solution does not match its label");
        Complex f1, f2, f3;
        residual(t, sy, f1, f2, f3);
        NilpotentTriple nt;
        nt.label = m;
        nt.p1 = t.p1.rounded(p);
        nt.p2 = t.p2.rounded(p);
        nt.p3 = t.p3.rounded(p);
        nt.res_trace = abs(f1).to_double();
        nt.res_minors = abs(f2).to_double();
        nt.res_det = abs(f3).to_double();
        out.push_back(std::move(nt));
    }
    return out;
}

std::complex<double> phi_log_asym(int m, double y1, double y2) {
    if (!(y1 > 0) || !(y2 > 0)) throw DomainError("phi_log_asym: y1, y2 must be positive");
    return 2.0 * M_PI * label_difference(m, y1, y2);
}

std::complex<double> phi_asym_specialized(int m, long k, long l, long c, long d, double t) {
    if (m < 1 || m > 3) throw DomainError("phi_asym_specialized: m must be 1, 2 or 3");
    if (k == 0 || l == 0) throw DomainError("phi_asym_specialized: k, l must be nonzero");
    if (c == 0 && d == 0) throw DomainError("phi_asym_specialized: (c, d) must be nonzero");
    const double r = std::sqrt(static_cast<double>(c * c + d * d));
    const double al = std::fabs(static_cast<double>(l)), ak = std::fabs(static_cast<double>(k));
    std::complex<double> coef;
    if (m == 1) coef = 1.5;
    else if (m == 2) coef = std::complex<double>(-0.75, 0.75 * std::sqrt(3.0));
    else coef = std::complex<double>(-0.75, -0.75 * std::sqrt(3.0));
    return 2 * M_PI * t * t * t * al * r + 2 * M_PI * t * coef * std::cbrt(al) * std::cbrt(ak * ak) / r;
}

double sigma(double r) {
    if (!(r > 0)) throw DomainError("sigma needs r > 0");
    double q = std::cbrt(r * r);
    return std::sqrt(q + 2) / r + std::sqrt((q + 2) / (q + 1));
}

double sigma_derivative(double r) {
    if (!(r > 0)) throw DomainError("sigma_derivative needs r > 0");
    double q = std::cbrt(r * r);
    double num = std::pow(r, 5.0 / 3.0) * std::pow(q + 1, -1.5) + 2 * q + 6;
    return -num / (3 * r * r * std::sqrt(q + 2));
}

EnvelopeReport envelope_check(const SatakeParameter& lam, const std::vector<std::pair<double, double>>& grid,
                              const PrecisionContext& ctx) {
    if (!lam.is_real()) throw DomainError("envelope_check needs real lambda");
    if (grid.size() < 4) throw DomainError("envelope_check needs at least 4 grid points");
    EnvelopeReport rep;
    const double c0 = 2 * M_PI * (std::sqrt(3.0) + std::sqrt(1.5));
    rep.predicted_rate = 2 * M_PI * std::pow(2.0, 1.5);
    rep.corridor_lo = 4 * M_PI;
    rep.corridor_hi = 2 * c0;
    for (const auto& [a, b] : grid) {
        if (a < 1 || b < 1 || a > 6 || b > 6) throw DomainError("envelope_check grid must lie in [1,6]^2");
        Complex w = w_weylsum(lam, TorusPoint(a, b, ctx.prec()), ctx);
        rep.rows.push_back({a, b, log(abs(w)).to_double()});
    }
    // diagonal slope
    std::vector<std::pair<double, double>> diag;
    for (const auto& r : rep.rows)
        if (std::fabs(r.y1 - r.y2) < 1e-12) diag.push_back({r.y1, -r.log_w});
    if (diag.size() >= 2) {
        double n = diag.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, y] : diag) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        rep.rate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    rep.rate_in_corridor = rep.rate >= rep.corridor_lo && rep.rate <= rep.corridor_hi;
    rep.rate_near_prediction = std::fabs(rep.rate / rep.predicted_rate - 1) <= 0.05;

    // fit on the half of the grid nearest the origin, verify everywhere
    std::vector<EnvelopeRow> sorted = rep.rows;
    std::sort(sorted.begin(), sorted.end(),
              [](const EnvelopeRow& u, const EnvelopeRow& v) { return u.y1 + u.y2 < v.y1 + v.y2; });
    std::vector<EnvelopeRow> fit(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2));
    auto margin = [&](int N, double rate, bool upper, double& logc) {
        // bound(y) = logc - N log(y1 y2) - rate (y1 + y2)
        auto g = [&](const EnvelopeRow& r) { return r.log_w + N * std::log(r.y1 * r.y2) + rate * (r.y1 + r.y2); };
        logc = upper ? -INFINITY : INFINITY;
        for (const auto& r : fit) logc = upper ? std::max(logc, g(r)) : std::min(logc, g(r));
        double m = INFINITY;
        for (const auto& r : rep.rows) m = std::min(m, upper ? logc - g(r) : g(r) - logc);
        return m;
    };
    rep.min_upper_margin = -INFINITY;
    for (int N = 0; N <= 12; ++N) {
        double lc;
        double m = margin(N, M_PI, true, lc);
        if (m > rep.min_upper_margin) {
            rep.min_upper_margin = m;
            rep.n_upper = N;
            rep.log_c_upper = lc;
        }
        if (m >= 0) break;
    }
    rep.min_lower_margin = -INFINITY;
    for (int N = 0; N <= 12; ++N) {
        double lc;
        double m = margin(N, c0, false, lc);
        if (m > rep.min_lower_margin) {
            rep.min_lower_margin = m;
            rep.n_lower = N;
            rep.log_c_lower = lc;
        }
        if (m >= 0) break;
    }
    rep.upper_ok = rep.min_upper_margin >= 0;
    rep.lower_ok = rep.min_lower_margin >= 0;
    return rep;
}

}  // namespace sl3
