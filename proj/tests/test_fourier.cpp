#include <doctest.h>

#include <array>
#include <cmath>
#include <numeric>

#include "sl3/errors.hpp"
#include "sl3/fourier.hpp"
#include "sl3/whittaker.hpp"

using namespace sl3;

namespace {

constexpr prec_t P = 64;

double rel(const Complex& a, const Complex& b) { return (abs(a - b) / abs(b)).to_double(); }

GroupPoint gp(double x, double y, double z, double y1, double y2) {
    return GroupPoint{Real(x, P), Real(y, P), Real(z, P), TorusPoint(y1, y2, P)};
}

CoefficientModel single_mode(double bound) {
    CoefficientModel m(SatakeParameter::parse("0.4,0.1,auto", P));
    m.set_ckl(1, 1, Complex(1, 0, P));
    m.truncation = {1, 1, bound};
    return m;
}

using Mat = std::array<std::array<double, 3>, 3>;

Mat mul(const Mat& a, const Mat& b) {
    Mat c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
}

// Iwasawa coordinates (x, y, z, y1, y2) of diag(gamma, 1) n(x,y,z) a by Gram-Schmidt
std::array<double, 5> translated(long a, long b, long c, long d, double x, double y, double z, double y1, double y2) {
    Mat n{{{1, x, z}, {0, 1, y}, {0, 0, 1}}};
    Mat t{{{std::cbrt(y1 * y1 * y2), 0, 0}, {0, std::cbrt(y2 / y1), 0}, {0, 0, 1 / std::cbrt(y1 * y2 * y2)}}};
    Mat gam{{{double(a), double(b), 0}, {double(c), double(d), 0}, {0, 0, 1}}};
    Mat g = mul(gam, mul(n, t));
    auto dot = [](const std::array<double, 3>& u, const std::array<double, 3>& v) {
        return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    };
    std::array<double, 3> k3 = g[2], k2 = g[1], k1 = g[0];
    double a33 = std::sqrt(dot(k3, k3));
    for (auto& v : k3) v /= a33;
    double r23 = dot(k2, k3);
    for (int i = 0; i < 3; ++i) k2[i] -= r23 * k3[i];
    double a22 = std::sqrt(dot(k2, k2));
    for (auto& v : k2) v /= a22;
    double r12 = dot(k1, k2), r13 = dot(k1, k3);
    for (int i = 0; i < 3; ++i) k1[i] -= r12 * k2[i] + r13 * k3[i];
    double a11 = std::sqrt(dot(k1, k1));
    return {r12 / a22, r23 / a33, r13 / a33, a11 / a22, a22 / a33};
}

}  // namespace

TEST_CASE("trivial models") {
    auto ctx = PrecisionContext::with_bits(P);
    auto lam = SatakeParameter::parse("0.4,0.1,auto", P);
    CoefficientModel empty(lam);
    CHECK(empty.empty());
    CHECK(synthesize(empty, gp(0.1, 0.2, 0.3, 1, 1), ctx).value.is_zero());

    CoefficientModel c0(lam);
    c0.set_c00(WeylElement::identity(), Complex(1, 0, P));
    Complex want = torus_character(TorusPoint(1.3, 0.8, P), lam, true);
    for (auto [x, y, z] : {std::array{0.0, 0.0, 0.0}, {0.3, -0.2, 0.45}})
        CHECK(rel(synthesize(c0, gp(x, y, z, 1.3, 0.8), ctx).value, want) < 1e-15);
}

TEST_CASE("coefficient sign symmetry is enforced") {
    CoefficientModel m(SatakeParameter::parse("0.4,0.1,auto", P));
    m.set_ckl(2, 1, Complex(1, 0, P));
    CHECK_NOTHROW(m.set_ckl(-2, 1, Complex(1, 0, P)));
    CHECK_THROWS_AS(m.set_ckl(2, -1, Complex(2, 0, P)), DomainError);
    CHECK_THROWS_AS(m.set_dk0(1, 4, Complex(1, 0, P)), DomainError);
    CHECK(m.max_k() == 2);
    CHECK(m.max_l() == 1);
}

TEST_CASE("single mode equals the coset sum built from the double integral") {
    auto ctx = PrecisionContext::with_bits(P);
    auto lam = SatakeParameter::parse("0.4,0.1,auto", P);
    const double x = 0.1, y = 0.2, z = 0.3, y1 = 1.0, y2 = 1.0, bound = 4;
    auto res = synthesize(single_mode(bound), gp(x, y, z, y1, y2), ctx);
    Complex want(P);
    long B = static_cast<long>(bound);
    for (long c = -B; c <= B; ++c)
        for (long d = -B; d <= B; ++d) {
            if (c * c + d * d > bound * bound || std::gcd(c, d) != 1) continue;
            auto r = CosetRep::from_cd(c, d);
            auto h = translated(r.a, r.b, c, d, x, y, z, y1, y2);
            Complex w = w_vt(lam, TorusPoint(h[3], h[4], P), ctx);
            for (long k : {-1L, 1L}) {
                double ph = 2 * M_PI * (k * h[0] + h[1]);
                want += w * Complex(std::cos(ph), std::sin(ph), P);
            }
        }
    CHECK(rel(res.value, want) < 1e-10);
}

TEST_CASE("the reported tail bounds the change from enlarging the coset range") {
    auto ctx = PrecisionContext::with_bits(P);
    auto g = gp(0, 0, 0, 1, 1);
    auto a = synthesize(single_mode(20), g, ctx), b = synthesize(single_mode(30), g, ctx);
    CHECK(a.tail_bound < 1e-6);
    CHECK(abs(a.value - b.value).to_double() <= a.tail_bound);
    CHECK(b.tail_bound <= a.tail_bound);
}

TEST_CASE("a shared cache reproduces uncached values") {
    auto ctx = PrecisionContext::with_bits(P);
    auto m = single_mode(6);
    auto g = gp(0.2, 0.1, 0.0, 1.1, 0.9);
    KernelCache cache;
    auto a = synthesize(m, g, ctx, &cache);
    long filled = cache.size();
    auto b = synthesize(m, g, ctx, &cache);
    CHECK(filled > 0);
    CHECK(cache.size() == filled);
    CHECK(a.value.re == b.value.re);
    CHECK(a.value.im == synthesize(m, g, ctx).value.im);
}

TEST_CASE("factorized projections agree with node-by-node quadrature") {
    auto ctx = PrecisionContext::with_bits(P);
    CoefficientModel m(SatakeParameter::parse("0.3+0.2i,0.1-0.2i,auto", P));
    m.set_ckl(1, 1, Complex(1, 0, P));
    m.set_ckl(1, 2, Complex(0.5, 0.25, P));
    m.set_dk0(1, 2, Complex(0.3, 0, P));
    m.set_c00(WeylElement::s12(), Complex(1, 0, P));
    m.truncation = {1, 2, 3};
    auto g = gp(0.15, 0.05, 0.2, 1.2, 0.9);
    KernelCache cache;
    Evaluatable F = [&](const GroupPoint& h) { return synthesize(m, h, ctx, &cache).value; };
    const int order = 4;
    for (auto [k, l] : {std::pair{1L, 1L}, {-1L, 2L}, {0L, 0L}, {1L, 0L}}) {
        Complex a = project_k0l(F, k, l, g, order), b = project_k0l(m, k, l, g, order, ctx, &cache);
        CHECK(abs(a - b).to_double() <= 1e-15 * (1 + abs(b).to_double()));
    }
    for (auto [mm, nn] : {std::pair{0L, 1L}, {1L, 1L}, {0L, 0L}, {2L, 1L}}) {
        Complex a = project_mn(F, mm, nn, g, order), b = project_mn(m, mm, nn, g, order, ctx, &cache);
        CHECK(abs(a - b).to_double() <= 1e-15 * (1 + abs(b).to_double()));
    }
}

TEST_CASE("round trip, sign symmetry and leakage of project_k0l") {
    auto ctx = PrecisionContext::with_bits(P);
    auto lam = SatakeParameter::parse("0.4,0.1,auto", P);
    auto m = single_mode(20);
    for (auto [a, b] : {std::pair{1.0, 1.0}, {0.7, 1.4}}) {
        auto g = gp(0, 0, 0, a, b);
        KernelCache cache;
        Complex p = project_k0l(m, 1, 1, g, 64, ctx, &cache);
        CHECK(rel(p, w_vt(lam, g.a, ctx)) < 1e-12);
        CHECK(rel(project_k0l(m, -1, 1, g, 64, ctx, &cache), p) < 1e-15);
        CHECK(abs(project_k0l(m, 5, 7, g, 64, ctx, &cache)).to_double() < 1e-20);
    }
}

TEST_CASE("a constant model projects only to (0,0)") {
    auto ctx = PrecisionContext::with_bits(P);
    CoefficientModel m(SatakeParameter::parse("0.4,0.1,auto", P));
    m.set_c00(WeylElement::identity(), Complex(2, 0, P));
    auto g = gp(0.1, 0.2, 0.3, 1, 1);
    Evaluatable F = [&](const GroupPoint& h) { return synthesize(m, h, ctx).value; };
    CHECK(abs(project_mn(F, 0, 0, g, 4) - synthesize(m, g, ctx).value).to_double() < 1e-15);
    CHECK(abs(project_mn(F, 1, 0, g, 4)).to_double() < 1e-15);
    CHECK(abs(project_mn(F, 0, 3, g, 4)).to_double() < 1e-15);
}

TEST_CASE("projection at (m,n) = (2,4) equals projection at (0,2) of the translate") {
    auto ctx = PrecisionContext::with_bits(P);
    CoefficientModel m(SatakeParameter::parse("0.4,0.1,auto", P));
    m.set_ckl(1, 2, Complex(1, 0, P));
    m.truncation = {1, 2, 2.5};
    auto g = gp(0.1, 0.2, 0.3, 1.1, 0.8);
    KernelCache cache;
    Evaluatable F = [&](const GroupPoint& h) { return synthesize(m, h, ctx, &cache).value; };
    const int order = 16;
    Complex lhs = project_mn(F, 2, 4, g, order);
    Complex rhs = project_mn(F, 0, 2, translate(CosetRep::from_cd(1, 2), g), order);
    CHECK(abs(lhs).to_double() > 1e-16);
    CHECK(rel(lhs, rhs) < 1e-12);
}

TEST_CASE("moderate growth of a decaying model, exponential growth with an M mode") {
    auto ctx = PrecisionContext::with_bits(P);
    auto lam = SatakeParameter::parse("0.4,0.1,auto", P);
    // fit C t^N on the first half of the ray, test it on the second half
    auto holds = [](const std::vector<double>& ts, const std::vector<double>& logs, double N) {
        size_t half = ts.size() / 2;
        double logc = -1e300;
        for (size_t i = 0; i < half; ++i) logc = std::max(logc, logs[i] - N * std::log(ts[i]));
        for (size_t i = half; i < ts.size(); ++i)
            if (logs[i] > logc + N * std::log(ts[i]) + 1e-9) return false;
        return true;
    };

    CoefficientModel dec(lam);
    dec.set_ckl(1, 1, Complex(1, 0, P));
    dec.set_ckl(2, 1, Complex(0.5, 0, P));
    dec.set_ckl(1, 2, Complex(0.25, 0, P));
    dec.truncation = {2, 2, 8};
    std::vector<double> ts, logs;
    for (double t = 1; t <= 5 + 1e-9; t += 0.5) {
        ts.push_back(t);
        logs.push_back(log(abs(synthesize(dec, gp(0.1, 0.2, 0.3, t, t), ctx).value)).to_double());
    }
    CHECK(holds(ts, logs, 3));

    CoefficientModel grow(lam);
    grow.set_mklw(1, 1, WeylElement::identity(), Complex(1, 0, P));
    grow.truncation = {1, 1, 3};
    CHECK(grow.has_growing_modes());
    ts.clear();
    logs.clear();
    for (double t = 2; t <= 9 + 1e-9; t += 1) {
        auto r = synthesize(grow, gp(0, 0, 0, 1 / (t * t), t), ctx);
        CHECK(std::isinf(r.tail_bound));
        ts.push_back(t);
        logs.push_back(log(abs(r.value)).to_double());
    }
    CHECK_FALSE(holds(ts, logs, 3));
    CHECK_FALSE(holds(ts, logs, 10));
    // faster than linear: the (c, d) = (1, 0) coset feeds y1 = t^2 into M
    double s1 = logs[2] - logs[0], s2 = logs.back() - logs[logs.size() - 3];
    CHECK(s1 > 4 * M_PI);
    CHECK(s2 > s1);
}

TEST_CASE("gamma_select") {
    auto r = gamma_select(1, 1, 0.5);
    CHECK((r.c == 0 && r.d == 1));
    r = gamma_select(1000, 1, 0.5);
    CHECK((r.c == 1 && r.d == 10));
    CHECK(std::hypot(0.5, 10.0) > 5);
    r = gamma_select(-7, 7, 0.9);
    CHECK((r.c == 0 && r.d == 1));
    // |k/l| = 27 exactly: the ceiling of the cube root is 3, not 4
    r = gamma_select(27, 1, 0.3);
    CHECK(r.d == 3);
    r = gamma_select(28, 1, 0.3);
    CHECK(r.d == 4);
    CHECK_THROWS_AS(gamma_select(1, 2, 0.5), DomainError);
    CHECK_THROWS_AS(gamma_select(0, 1, 0.5), DomainError);
    CHECK_THROWS_AS(gamma_select(4, 1, 1.5), DomainError);
}

namespace {

// direct sums over coprime (c, d), c != 0, of the three majorant families
struct Brute {
    double s1 = 0, s2 = 0, s3 = 0;
};

Brute brute_majorants(double x, double y1, double y2, double B, long K2) {
    Brute out;
    auto for_cosets = [&](double bound, auto&& fn) {
        long cm = static_cast<long>(bound / y1) + 1, dm = static_cast<long>(bound + std::abs(x) * cm) + 1;
        for (long c = -cm; c <= cm; ++c)
            for (long d = -dm; d <= dm; ++d) {
                if (c == 0 || std::gcd(c, d) != 1) continue;
                double dl = std::hypot(c * x + d, c * y1);
                if (dl <= bound) fn(dl);
            }
    };
    auto term = [&](double k, double l, double dl) {
        return std::exp(std::cbrt(k) * std::cbrt(l * l) / 8 - k * y1 / (4 * dl * dl) - l * y2 * dl / 4);
    };
    for_cosets(B, [&](double dl) {
        long K1 = static_cast<long>(std::floor(27 * y2 * y2 * y2 * dl * dl * dl + 1e-9));
        for (long l = 1; l <= K1; ++l)
            for (long k = l; k <= K1; ++k) out.s1 += term(k, l, dl);
        // k < l: the coefficient exponent is l^{1/3} k^{2/3} / 8
        long lmax = static_cast<long>(std::ceil(80 / (y2 * dl / 4 - 1.0 / 8)));
        for (long l = 2; l <= lmax; ++l)
            for (long k = 1; k < l; ++k)
                out.s3 += std::exp(std::cbrt(static_cast<double>(k * k * l)) / 8 - k * y1 / (4 * dl * dl) - l * y2 * dl / 4);
    });
    double dmax = std::cbrt(static_cast<double>(K2)) / (3 * y2);
    for_cosets(dmax, [&](double dl) {
        for (long k = 1; k <= K2; ++k) {
            if (!(dl < std::cbrt(static_cast<double>(k)) / (3 * y2))) continue;
            for (long l = 1; l <= k; ++l) out.s2 += term(k, l, dl);
        }
    });
    return out;
}

}  // namespace

TEST_CASE("majorant sums against direct summation") {
    for (auto [x, y] : {std::pair{0.0, 1.0}, {0.3, std::sqrt(3.0) / 2}}) {
        auto r = majorant_sums(x, y, y, {3.0, 300});
        auto b = brute_majorants(x, y, y, 3.0, 300);
        CHECK(r.S1 == doctest::Approx(b.s1).epsilon(1e-9));
        CHECK(r.S2 == doctest::Approx(b.s2).epsilon(1e-12));
        CHECK(r.S3 == doctest::Approx(b.s3).epsilon(1e-12));
        CHECK(r.S1 <= r.S1_env_cosets);
        CHECK(r.S1_env_cosets <= r.S1_env_lattice);
        CHECK(r.S3 <= r.S3_env);
        CHECK(r.S3_exponent_excess < 0);
    }
    CHECK_THROWS_AS(majorant_sums(0.7, 1, 1), DomainError);
    CHECK_THROWS_AS(majorant_sums(0, 0.5, 1), DomainError);
}
