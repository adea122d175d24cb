#include <doctest.h>

#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "sl3/algebra.hpp"
#include "sl3/errors.hpp"

using namespace sl3;

namespace {

using Mat = std::array<std::array<double, 3>, 3>;

Mat mul(const Mat& a, const Mat& b) {
    Mat c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
}

Mat group_matrix(double x, double y, double z, double y1, double y2) {
    Mat n{{{1, x, z}, {0, 1, y}, {0, 0, 1}}};
    Mat a{{{std::cbrt(y1 * y1 * y2), 0, 0}, {0, std::cbrt(y2 / y1), 0}, {0, 0, 1 / std::cbrt(y1 * y2 * y2)}}};
    return mul(n, a);
}

struct Coords {
    double x, y, z, y1, y2;
};

// g = (n a) k by Gram-Schmidt on the rows from the bottom up
Coords iwasawa(const Mat& g) {
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

TEST_CASE("Weyl group: closure, inverses, and the action on lambda") {
    const auto& all = WeylElement::all();
    CHECK(all[0] == WeylElement::identity());
    std::set<std::string> names;
    for (const auto& w : all) {
        names.insert(w.name());
        CHECK(WeylElement::from_name(w.name()) == w);
        CHECK(w * w.inverse() == WeylElement::identity());
        CHECK(all[w.index()] == w);
        for (const auto& v : all) {
            bool found = false;
            for (const auto& u : all) found = found || (u == w * v);
            CHECK(found);
        }
    }
    CHECK(names.size() == 6);
    CHECK_THROWS_AS(WeylElement::from_name("(1234)"), DomainError);

    auto lam = SatakeParameter::parse("0.4,0.1,auto", 128);
    for (const auto& w : all)
        for (const auto& v : all) {
            auto a = weyl_apply(w * v, lam), b = weyl_apply(w, weyl_apply(v, lam));
            for (int i = 0; i < 3; ++i) CHECK(a[i].re == b[i].re);
        }
    // (w lam)_i = lam_{w^-1(i)}: the 3-cycle 1->2->3->1 moves lam_1 into slot 2
    auto c = weyl_apply(WeylElement::c123(), lam);
    CHECK(c[1].re == lam[0].re);
}

TEST_CASE("Satake parameters sum to zero exactly") {
    auto lam = SatakeParameter::parse("0.4,0.1,auto", 128);
    for (const auto& w : WeylElement::all()) {
        auto l = weyl_apply(w, lam).rounded(532);
        Complex s = l[0] + l[1] + l[2];
        CHECK(s.is_zero());
    }
    CHECK_THROWS_AS(SatakeParameter::parse("0.4,0.1,0.4", 128), DomainError);
    CHECK(in_general_position(lam, 1e-6));
    CHECK_FALSE(in_general_position(SatakeParameter::parse("1,-1,auto", 128), 1e-6));
    auto d = lam.dual();
    CHECK(d[0].re == -lam[2].re);
}

TEST_CASE("translate agrees with Gram-Schmidt on the explicit matrix") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.5, 0.5), y(0.4, 2.5);
    for (int trial = 0; trial < 30; ++trial) {
        double x = u(rng), yy = u(rng), z = u(rng), y1 = y(rng), y2 = y(rng);
        GroupPoint g{Real(x, 128), Real(yy, 128), Real(z, 128), TorusPoint(y1, y2, 128)};
        for (const auto& r : coset_enumerate(4)) {
            Mat gam{{{double(r.a), double(r.b), 0}, {double(r.c), double(r.d), 0}, {0, 0, 1}}};
            Coords want = iwasawa(mul(gam, group_matrix(x, yy, z, y1, y2)));
            GroupPoint h = translate(r, g);
            CHECK(h.x.to_double() == doctest::Approx(want.x).epsilon(1e-10));
            CHECK(h.y.to_double() == doctest::Approx(want.y).epsilon(1e-10));
            CHECK(h.z.to_double() == doctest::Approx(want.z).epsilon(1e-10));
            CHECK(h.a.y1.to_double() == doctest::Approx(want.y1).epsilon(1e-10));
            CHECK(h.a.y2.to_double() == doctest::Approx(want.y2).epsilon(1e-10));
        }
    }
}

TEST_CASE("coset enumeration matches a brute-force count") {
    for (double bound : {1.0, 5.0, 12.5}) {
        auto reps = coset_enumerate(bound);
        long want = 0;
        long B = static_cast<long>(bound);
        for (long c = -B; c <= B; ++c)
            for (long d = -B; d <= B; ++d)
                if (c * c + d * d <= bound * bound && std::gcd(c, d) == 1) ++want;
        CHECK(static_cast<long>(reps.size()) == want);
        for (size_t i = 0; i < reps.size(); ++i) {
            const auto& r = reps[i];
            CHECK(r.a * r.d - r.b * r.c == 1);
            if (i) CHECK(reps[i - 1].norm2() <= r.norm2());
        }
    }
    auto e = CosetRep::from_cd(0, 1);
    CHECK((e.a == 1 && e.b == 0));
    CHECK_THROWS_AS(CosetRep::from_cd(2, 4), DomainError);
}

TEST_CASE("theta and the cosine witness") {
    auto r = CosetRep::from_cd(3, 5);
    auto [num, den] = theta_gamma_fraction(r);
    CHECK(den == 34);
    CHECK(static_cast<double>(num) / den == doctest::Approx(theta_gamma(r)));
    CHECK(theta_gamma(CosetRep::from_cd(0, 1)) == 0);
    CHECK(cos_nonvanishing_check(2, coset_enumerate(20)));
    // c^2 + d^2 is never divisible by 4 for coprime (c, d), so 4 k theta is never an odd integer
    for (const auto& rep : coset_enumerate(40)) CHECK(rep.norm2() % 4 != 0);
}

TEST_CASE("contragredient swaps the torus coordinates") {
    TorusPoint p(0.7, 1.9, 128);
    auto q = contragredient_torus(p);
    CHECK(q.y1 == p.y2);
    CHECK(q.y2 == p.y1);
}

TEST_CASE("torus character of rho-shifted zero is the modular factor") {
    // lambda = 0 shifted by rho = (1, 0, -1): a^rho = y1 y2
    TorusPoint p(1.7, 0.6, 128);
    auto zero = SatakeParameter::parse("0,0,0", 128);
    Complex v = torus_character(p, zero, true);
    CHECK(v.re.to_double() == doctest::Approx(1.7 * 0.6).epsilon(1e-14));
    CHECK(std::abs(v.im.to_double()) < 1e-30);
}
