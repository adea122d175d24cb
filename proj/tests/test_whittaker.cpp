#include <doctest.h>

#include <cmath>

#include "sl3/errors.hpp"
#include "sl3/whittaker.hpp"

using namespace sl3;

namespace {

double rel(const Complex& a, const Complex& b) { return (abs(a - b) / abs(b)).to_double(); }

}  // namespace

TEST_CASE("Weyl sum and double integral agree") {
    auto ctx = PrecisionContext::with_bits(96);
    auto lam = SatakeParameter::parse("0.3+0.2i,0.1-0.2i,auto", 96);
    for (auto [a, b] : {std::pair{0.7, 1.3}, {2.5, 0.5}}) {
        TorusPoint p(a, b, 96);
        CHECK(rel(w_weylsum(lam, p, ctx), w_vt(lam, p, ctx)) < 1e-9);
    }
}

TEST_CASE("W depends on lambda only through its Weyl orbit") {
    auto ctx = PrecisionContext::with_bits(96);
    auto lam = SatakeParameter::parse("0.4,0.1,auto", 96);
    TorusPoint p(1.1, 0.8, 96);
    Complex w0 = w_vt(lam, p, ctx);
    for (const auto& w : WeylElement::all()) CHECK(rel(w_vt(weyl_apply(w, lam), p, ctx), w0) < 1e-10);
}

TEST_CASE("contragredient: W at the dual parameter with swapped coordinates") {
    auto ctx = PrecisionContext::with_bits(96);
    auto lam = SatakeParameter::parse("0.3+0.2i,0.1-0.2i,auto", 96);
    TorusPoint p(0.9, 1.6, 96);
    CHECK(rel(w_vt(lam.dual(), contragredient_torus(p), ctx), w_vt(lam, p, ctx)) < 1e-10);
}

TEST_CASE("W at real lambda is real and positive") {
    auto ctx = PrecisionContext::with_bits(96);
    auto lam = SatakeParameter::parse("0.4,0.1,auto", 96);
    for (auto [a, b] : {std::pair{0.5, 0.5}, {1.0, 3.0}, {3.0, 1.0}}) {
        Complex w = w_vt(lam, TorusPoint(a, b, 96), ctx);
        CHECK(w.re > 0);
        CHECK(abs(w.im).to_double() < 1e-20);
    }
    CHECK(w_real_bound_check(SatakeParameter::parse("0.2+0.9i,-0.1-0.3i,auto", 96), TorusPoint(1.2, 0.7, 96), ctx));
}

TEST_CASE("degenerate kernels: combination and closed form") {
    auto ctx = PrecisionContext::with_bits(128);
    auto lam = SatakeParameter::parse("0.3+0.2i,0.1-0.2i,auto", 128);
    TorusPoint p(1.5, 0.7, 128);
    CHECK(rel(w_degen_a1(lam, p, DegenRoute::combination, ctx), w_degen_a1(lam, p, DegenRoute::closed_form, ctx)) < 1e-20);
    CHECK(rel(w_degen_a2(lam, p, DegenRoute::combination, ctx), w_degen_a2(lam, p, DegenRoute::closed_form, ctx)) < 1e-20);
}

TEST_CASE("M approaches its leading asymptotic along a_{t^-2, l t}") {
    auto ctx = PrecisionContext::with_bits(128);
    auto lam = SatakeParameter::parse("0.4,0.1,auto", 128);
    // log of the ratio should flatten out: its drift per unit t shrinks as t grows
    auto lr = [&](double t) {
        Real tr(t, 128);
        Complex m = m_whittaker(lam, TorusPoint(1 / (tr * tr), tr), ctx);
        return (log(abs(m)) - log(abs(m_leading_asym(lam, 1, 1, tr)))).to_double();
    };
    double d1 = std::abs(lr(10) - lr(8)), d2 = std::abs(lr(30) - lr(28));
    CHECK(d2 < d1);
    CHECK(d2 < 0.02);
}

TEST_CASE("transformation law multiplies by the character") {
    Complex v(2.0, 0.0, 128);
    Complex r = apply_transformation_law(v, 3, 2, Real(0.25, 128), Real(0.125, 128));
    // e^{2 pi i (3/4 + 1/4)} = 1
    CHECK(std::abs(r.re.to_double() - 2) < 1e-30);
    CHECK(std::abs(r.im.to_double()) < 1e-30);
}

TEST_CASE("diagnostics are filled in") {
    auto ctx = PrecisionContext::with_bits(128);
    auto lam = SatakeParameter::parse("0.4,0.1,auto", 128);
    EvalInfo info;
    w_weylsum(lam, TorusPoint(2.0, 2.0, 128), ctx, &info);
    CHECK(info.lost_bits > 0);
    CHECK(info.working_bits > 128);
    CHECK(info.est_error_bits < -100);
    CHECK(weylsum_extra_bits(TorusPoint(2.0, 2.0, 128)) > 0);
}
