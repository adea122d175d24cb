#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "sl3/precision.hpp"
#include "sl3/real.hpp"

namespace sl3 {

struct BesselOrder {
    Complex nu;
    double dist_to_int = 0;  // |nu - nearest integer|

    explicit BesselOrder(Complex v);
    BesselOrder(double re, double im, prec_t p) : BesselOrder(Complex(re, im, p)) {}
};

// I_nu(x) from the power series; x = 0 is allowed for Re(nu) >= 0.
Complex bessel_i(const BesselOrder& nu, const Real& x, const PrecisionContext& ctx);

// K_nu(x) = (pi/2)(I_{-nu} - I_nu)/sin(pi nu). The working precision is raised
// by the cancellation between the two I values (about 2x log2(e) bits). Orders
// within 0.05 of an integer are evaluated by symmetric averaging at nu +- eps
// with one Richardson step.
Complex bessel_k(const BesselOrder& nu, const Real& x, const PrecisionContext& ctx);

// I_{nu+m}(x), m = 0..count-1, from two series values at the top and the
// downward three-term recurrence (stable for I).
std::vector<Complex> bessel_i_ladder(const Complex& nu, const Real& x, long count, const PrecisionContext& ctx);

// Raw series sum at precision p with relative tolerance 2^tol_log2.
// lg1 may carry log Gamma(nu+1) at precision >= p to skip recomputation.
Complex i_series(const Complex& nu, const Real& x, prec_t p, double tol_log2, long max_terms,
                 const Complex* lg1 = nullptr, long* terms_used = nullptr);

// Fixed-order K evaluator that caches log Gamma(1 +- nu) across arguments.
class BesselKEvaluator {
public:
    BesselKEvaluator(const Complex& nu, const PrecisionContext& ctx);
    Complex operator()(const Real& x) const;
    const Complex& order() const { return nu_; }

private:
    Complex direct(const Complex& nu, const Real& x, int slot) const;
    Complex lg(int slot, const Complex& nu, prec_t p) const;

    Complex nu_;
    PrecisionContext ctx_;
    double dist_;
    mutable std::mutex mu_;
    // slot -> (order, log Gamma(1+order) at the cached precision)
    mutable std::map<int, std::pair<Complex, Complex>> lg_cache_;
};

enum class BesselKind { I, K };

// Leading large-u term: sqrt(1/(2 pi u)) e^u for I, sqrt(pi/(2u)) e^-u for K.
Real bessel_asymptotic_leading(BesselKind kind, const Real& u);

// Rough log|I_mu(u)| and log|K_nu(u)| (natural log) for truncation and skip
// decisions only; real part of the order is used.
double log_bessel_i_estimate(double mu_re, double u);
double log_bessel_k_estimate(double nu_re, double u);

// |I_mu(x) I_nu(x) - (2/pi) int_0^{pi/2} I_{mu+nu}(2x cos t) cos((mu-nu) t) dt|
Real product_identity_residual(const Complex& mu, const Complex& nu, const Real& x, const PrecisionContext& ctx);

// |I_{s+it}(x)| strictly decreasing in s and nondecreasing in t on the grid.
bool order_monotonicity_check(const std::vector<double>& sigma, const std::vector<double>& t,
                              const std::vector<double>& x, const PrecisionContext& ctx);

// Gauss-Legendre nodes/weights on [-1,1] at precision p (cached).
const std::vector<std::pair<Real, Real>>& gauss_legendre(int n, prec_t p);

}  // namespace sl3
