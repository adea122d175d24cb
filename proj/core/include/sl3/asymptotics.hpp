#pragma once

#include <complex>
#include <vector>

#include "sl3/algebra.hpp"
#include "sl3/precision.hpp"

namespace sl3 {

// [[p1, y1^2, 0], [-1, p2, y2^2], [0, -1, p3]] nilpotent
struct NilpotentTriple {
    int label = 0;  // 1..6
    Complex p1, p2, p3;
    // characteristic-polynomial coefficients: trace, sum of principal 2x2 minors, determinant
    double res_trace = 0, res_minors = 0, res_det = 0;
    Complex diff() const { return p3 - p1; }
};

// Labeled p3 - p1 values, principal branch of (.)^(3/2); label 1..6.
std::complex<double> label_difference(int m, double y1, double y2);

// The six solutions, labeled by matching p3 - p1 against label_difference.
// On coincident labels (y1 == y2) the assignment follows continuity from y1 > y2.
std::vector<NilpotentTriple> nilpotent_triples(const Real& y1, const Real& y2, prec_t p = 128);

// 2 pi (p3 - p1) for label m
std::complex<double> phi_log_asym(int m, double y1, double y2);

// exponent of the large-t asymptotics at a_{k/(c^2+d^2), l t^3 sqrt(c^2+d^2)}, m = 1..3
std::complex<double> phi_asym_specialized(int m, long k, long l, long c, long d, double t);

double sigma(double r);
double sigma_derivative(double r);

struct EnvelopeRow {
    double y1, y2, log_w;
};

struct EnvelopeReport {
    std::vector<EnvelopeRow> rows;
    // diagonal decay: least-squares slope of -log|W(a_{t,t})| over the diagonal rows
    double rate = 0;
    double predicted_rate = 0;  // 2 pi 2^{3/2}
    double corridor_lo = 0, corridor_hi = 0;  // 4 pi, 2 c0
    bool rate_in_corridor = false;
    bool rate_near_prediction = false;  // within 5%
    // (y1 y2)^-N e^{-pi(y1+y2)} upper and (y1 y2)^-N e^{-c0(y1+y2)} lower envelopes,
    // constants fitted on the lower half of the grid and checked on all of it
    int n_upper = 0, n_lower = 0;
    double log_c_upper = 0, log_c_lower = 0;
    double min_upper_margin = 0, min_lower_margin = 0;  // log of bound / |W| (resp. |W| / bound)
    bool upper_ok = false, lower_ok = false;
    bool ok() const { return rate_in_corridor && rate_near_prediction && upper_ok && lower_ok; }
};

// grid: torus points with y1, y2 in [1, 6]; diagonal points enter the rate fit
EnvelopeReport envelope_check(const SatakeParameter& lam, const std::vector<std::pair<double, double>>& grid,
                              const PrecisionContext& ctx);

}  // namespace sl3
