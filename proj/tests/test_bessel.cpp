#include <doctest.h>

#include <cmath>

#include "sl3/bessel.hpp"
#include "sl3/errors.hpp"
#include "sl3/gamma.hpp"

using namespace sl3;

namespace {

double rel(const Complex& a, const Complex& b) { return (abs(a - b) / abs(b)).to_double(); }

}  // namespace

TEST_CASE("half-integer orders against elementary closed forms") {
    auto ctx = PrecisionContext::with_bits(128);
    for (double x : {0.1, 1.0, 7.5, 40.0}) {
        Real xr(x, 256);
        // I_{3/2} = sqrt(2/(pi x)) (cosh x - sinh x / x), K_{3/2} = sqrt(pi/(2x)) e^-x (1 + 1/x)
        Real i32 = sqrt(Real(2.0, 256) / (Real::pi(256) * xr)) * (cosh(xr) - sinh(xr) / xr);
        Real k32 = sqrt(Real::pi(256) / (xr * 2.0)) * exp(-xr) * (1 + 1 / xr);
        CHECK(rel(bessel_i(BesselOrder(1.5, 0, 128), Real(x, 128), ctx), Complex(i32, Real(256))) < 1e-30);
        CHECK(rel(bessel_k(BesselOrder(1.5, 0, 128), Real(x, 128), ctx), Complex(k32, Real(256))) < 1e-30);
    }
}

TEST_CASE("Wronskian I_nu K_{nu+1} + I_{nu+1} K_nu = 1/x at complex order") {
    auto ctx = PrecisionContext::with_bits(128);
    for (auto [re, im] : {std::pair{0.3, 0.2}, {0.0, 1.7}, {1.25, -0.4}}) {
        for (double x : {0.5, 3.0, 12.0}) {
            // nu + 1 formed in MPFR: re + 1 in double is not exact for re = 0.3
            Complex nu(re, im, 128);
            BesselOrder n0(nu), n1(nu + 1.0);
            Real xr(x, 128);
            Complex w = bessel_i(n0, xr, ctx) * bessel_k(n1, xr, ctx) + bessel_i(n1, xr, ctx) * bessel_k(n0, xr, ctx);
            Complex want(1 / xr, Real(128));
            CHECK(rel(w, want) < 1e-28);
        }
    }
}

TEST_CASE("K is even in the order, including near integers") {
    auto ctx = PrecisionContext::with_bits(128);
    Real x(2.0, 128);
    for (auto [re, im] : {std::pair{0.37, 0.2}, {1.0, 0.0}, {2.0 + 1e-3, 0.0}, {0.0, 0.0}}) {
        Complex a = bessel_k(BesselOrder(re, im, 128), x, ctx), b = bessel_k(BesselOrder(-re, -im, 128), x, ctx);
        CHECK(rel(a, b) < 1e-25);
    }
    // K_1(2) and K_0(1) to 20 digits
    CHECK(bessel_k(BesselOrder(1.0, 0, 128), x, ctx).re.to_double() == doctest::Approx(0.13986588181652242728).epsilon(1e-15));
    CHECK(bessel_k(BesselOrder(0.0, 0, 128), Real(1.0, 128), ctx).re.to_double() ==
          doctest::Approx(0.42102443824070833334).epsilon(1e-15));
}

TEST_CASE("ladder agrees with direct series") {
    auto ctx = PrecisionContext::with_bits(128);
    Complex nu(0.3, 0.2, 128);
    Real x(5.0, 128);
    auto lad = bessel_i_ladder(nu, x, 12, ctx);
    for (int m : {0, 5, 11}) CHECK(rel(lad[m], bessel_i(BesselOrder(nu + static_cast<double>(m)), x, ctx)) < 1e-30);
}

TEST_CASE("log-gamma matches MPFR on the real axis and the reflection formula") {
    auto ctx = PrecisionContext::with_bits(128);
    for (double v : {0.5, 3.7, 21.25}) {
        Complex lg = log_gamma(Complex(v, 0, 128), ctx);
        Real want = lngamma(Real(v, 128));
        CHECK(((lg.re - want) / want).to_double() == doctest::Approx(0).epsilon(1e-30));
    }
    // |Gamma(iy)|^2 = pi / (y sinh(pi y))
    Real y(1.3, 128);
    Complex lg = log_gamma(Complex(Real(128), y), ctx);
    Real want = log(Real::pi(128) / (y * sinh(Real::pi(128) * y))) / 2.0;
    CHECK(std::abs((lg.re - want).to_double()) < 1e-30);
}

TEST_CASE("product identity and monotonicity helpers") {
    auto ctx = PrecisionContext::with_bits(128);
    CHECK(product_identity_residual(Complex(0.4, 0.7, 128), Complex(0.4, -0.7, 128), Real(2.0, 128), ctx).to_double() <
          1e-20);
    CHECK(order_monotonicity_check({0.2, 1.0}, {0.0, 1.0}, {1.0}, ctx));
}

TEST_CASE("domain errors") {
    auto ctx = PrecisionContext::with_bits(128);
    CHECK_THROWS_AS(bessel_k(BesselOrder(0.5, 0, 128), Real(-1.0, 128), ctx), DomainError);
    CHECK_THROWS_AS(PrecisionContext::with_bits(4).validate(), DomainError);
}
