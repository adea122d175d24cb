#include <doctest.h>

#include <cmath>
#include <complex>

#include "sl3/asymptotics.hpp"
#include "sl3/errors.hpp"

using namespace sl3;

namespace {

using C = std::complex<double>;
using M3 = std::array<std::array<C, 3>, 3>;

M3 mul(const M3& a, const M3& b) {
    M3 c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
}

}  // namespace

TEST_CASE("each solution is a nilpotent matrix") {
    for (auto [a, b] : {std::pair{1.0, 1.0}, {0.6, 2.2}, {3.0, 0.4}}) {
        for (const auto& s : nilpotent_triples(Real(a, 128), Real(b, 128))) {
            M3 n{{{s.p1.to_cd(), C(a * a), 0}, {C(-1), s.p2.to_cd(), C(b * b)}, {0, C(-1), s.p3.to_cd()}}};
            M3 n3 = mul(n, mul(n, n));
            double worst = 0;
            for (auto& row : n3)
                for (auto& v : row) worst = std::max(worst, std::abs(v));
            CHECK(worst < 1e-12);
        }
    }
}

TEST_CASE("labels: six distinct differences matching the closed forms") {
    double a = 0.6, b = 2.2;
    auto sols = nilpotent_triples(Real(a, 128), Real(b, 128));
    REQUIRE(sols.size() == 6);
    for (const auto& s : sols) {
        CHECK(s.label >= 1);
        CHECK(s.label <= 6);
        CHECK(std::abs(s.diff().to_cd() - label_difference(s.label, a, b)) < 1e-12);
        CHECK(std::abs(phi_log_asym(s.label, a, b) - 2 * M_PI * label_difference(s.label, a, b)) < 1e-12);
    }
    for (size_t i = 0; i < sols.size(); ++i)
        for (size_t j = i + 1; j < sols.size(); ++j) CHECK(sols[i].label != sols[j].label);
}

TEST_CASE("the real pair at (1,1) is +-2^{3/2}") {
    int real = 0;
    for (const auto& s : nilpotent_triples(Real(1.0, 128), Real(1.0, 128))) {
        if (std::abs(s.diff().im.to_double()) > 1e-20) continue;
        ++real;
        CHECK(std::abs(std::abs(s.diff().re.to_double()) - std::sqrt(8.0)) < 1e-15);
    }
    CHECK(real == 2);
}

TEST_CASE("sigma and its derivative") {
    for (double r : {0.3, 1.0, 2.5}) {
        double h = 1e-6;
        CHECK(sigma_derivative(r) == doctest::Approx((sigma(r + h) - sigma(r - h)) / (2 * h)).epsilon(1e-6));
    }
}

TEST_CASE("envelope check on a small grid") {
    auto lam = SatakeParameter::parse("0.4,0.1,auto", 96);
    std::vector<std::pair<double, double>> grid = {{3, 3}, {4, 4}, {5, 5}, {6, 6}, {1, 3}, {4, 1}};
    auto r = envelope_check(lam, grid, PrecisionContext::with_bits(96));
    CHECK(r.rows.size() == grid.size());
    CHECK(r.rate_in_corridor);
    CHECK(r.rate == doctest::Approx(r.predicted_rate).epsilon(0.05));
    CHECK(r.predicted_rate == doctest::Approx(2 * M_PI * std::sqrt(8.0)));
}
