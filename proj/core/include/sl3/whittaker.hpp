#pragma once

#include "sl3/algebra.hpp"
#include "sl3/precision.hpp"

namespace sl3 {

// Diagnostics filled in by the evaluators when requested.
struct EvalInfo {
    double est_error_bits = 0;  // log2 of the estimated relative error (negative)
    long working_bits = 0;
    double lost_bits = 0;  // cancellation, log2(max term / result)
    long terms = 0;        // series terms or quadrature nodes
};

// Non-decaying M_lambda on the torus (the I-Bessel double series).
Complex m_whittaker(const SatakeParameter& lam, const TorusPoint& p, const PrecisionContext& ctx,
                    EvalInfo* info = nullptr);

Complex m_degen_a1(const SatakeParameter& lam, const TorusPoint& p, const PrecisionContext& ctx);
Complex m_degen_a2(const SatakeParameter& lam, const TorusPoint& p, const PrecisionContext& ctx);

enum class DegenRoute { combination, closed_form };

// combination: (pi/2)(M(lam) - M(s lam)) / sin, computed above the cancellation floor
// closed_form: power factors times one K-Bessel value
Complex w_degen_a1(const SatakeParameter& lam, const TorusPoint& p, DegenRoute route, const PrecisionContext& ctx,
                   EvalInfo* info = nullptr);
Complex w_degen_a2(const SatakeParameter& lam, const TorusPoint& p, DegenRoute route, const PrecisionContext& ctx,
                   EvalInfo* info = nullptr);

// Decaying W_lambda from the double K-Bessel integral.
Complex w_vt(const SatakeParameter& lam, const TorusPoint& p, const PrecisionContext& ctx, EvalInfo* info = nullptr);

// Extra working bits used by w_weylsum at p.
long weylsum_extra_bits(const TorusPoint& p);

// Decaying W_lambda as the sum of M over the Weyl orbit. Throws CancellationAlarm when
// fewer than bits + 16 significant bits survive the cancellation.
Complex w_weylsum(const SatakeParameter& lam, const TorusPoint& p, const PrecisionContext& ctx,
                  EvalInfo* info = nullptr);

// |W_lam(p)| <= W_{Re lam}(p) (1 + 1e-6), both sides from w_vt.
bool w_real_bound_check(const SatakeParameter& lam, const TorusPoint& p, const PrecisionContext& ctx);

// t^{-3(l1+1)/2} exp(2 pi |l| t); k enters only through the evaluation point a_{k t^-2, l t}.
Complex m_leading_asym(const SatakeParameter& lam, long k, long l, const Real& t);

// value * e^{2 pi i (k x + l y)}
Complex apply_transformation_law(const Complex& value, long k, long l, const Real& x, const Real& y);

}  // namespace sl3
