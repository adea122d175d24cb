#pragma once

#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "sl3/algebra.hpp"
#include "sl3/precision.hpp"

namespace sl3 {

struct Truncation {
    long k_max = 4;            // |k| <= k_max
    long l_max = 4;            // 1 <= l <= l_max
    double coset_bound = 30;   // cosets with c^2 + d^2 <= coset_bound^2
};

// Synthetic Fourier data. Coefficients are stored under (|k|, |l|); the setters reject
// a second value for the same magnitudes, so c(k,l) = c(-k,l) = c(k,-l) always holds.
// j = 1, 2, 3 in the degenerate maps selects lambda, (123) lambda, (321) lambda.
class CoefficientModel {
public:
    explicit CoefficientModel(SatakeParameter lam) : lam_(std::move(lam)) {}

    const SatakeParameter& lam() const { return lam_; }
    Truncation truncation;

    void set_c00(const WeylElement& w, const Complex& v);
    void set_dk0(long k, int j, const Complex& v);
    void set_d0l(long l, int j, const Complex& v);
    void set_ckl(long k, long l, const Complex& v);
    void set_mklw(long k, long l, const WeylElement& w, const Complex& v);

    const std::map<WeylElement, Complex>& c00() const { return c00_; }
    const std::map<std::pair<long, int>, Complex>& dk0() const { return dk0_; }
    const std::map<std::pair<long, int>, Complex>& d0l() const { return d0l_; }
    const std::map<std::pair<long, long>, Complex>& ckl() const { return ckl_; }
    const std::map<std::tuple<long, long, int>, Complex>& mklw() const { return mklw_; }

    bool empty() const;
    bool has_growing_modes() const { return !mklw_.empty(); }
    // largest |k| and l with a nonzero entry
    long max_k() const;
    long max_l() const;

private:
    SatakeParameter lam_;
    std::map<WeylElement, Complex> c00_;
    std::map<std::pair<long, int>, Complex> dk0_;
    std::map<std::pair<long, int>, Complex> d0l_;
    std::map<std::pair<long, long>, Complex> ckl_;
    std::map<std::tuple<long, long, int>, Complex> mklw_;  // w by WeylElement::index()
};

// WeylElement for the degenerate index j = 1, 2, 3
WeylElement degenerate_weyl(int j);

struct SynthResult {
    Complex value;
    double tail_bound = 0;  // skipped terms plus cosets beyond the bound; +inf with growing modes
    long terms = 0;         // kernel evaluations actually summed
};

// Memo of kernel values keyed on the exact torus argument; share it between calls
// at related points (projections, grids).
class KernelCache {
public:
    bool find(const std::string& key, Complex& out) const;
    void put(const std::string& key, const Complex& v);
    size_t size() const { return map_.size(); }

private:
    std::map<std::string, Complex> map_;
};

// First line of the Piatetski-Shapiro/Shalika expansion at g = n(x,y,z) a_{y1,y2}:
// constant term, the k-sum of degenerate alpha_1 terms, then l outer, gamma, k inner.
SynthResult synthesize(const CoefficientModel& model, const GroupPoint& g, const PrecisionContext& ctx,
                       KernelCache* cache = nullptr);

using Evaluatable = std::function<Complex(const GroupPoint&)>;

// n(x,y,z) * g in Iwasawa coordinates
GroupPoint left_unipotent(const Real& x, const Real& y, const Real& z, const GroupPoint& g);

// Trapezoid rule with `order` points per circle.
Complex project_mn(const Evaluatable& F, long m, long n, const GroupPoint& g, int order);
Complex project_k0l(const Evaluatable& F, long k, long l, const GroupPoint& g, int order);

// The same trapezoid sums applied to synthesize(model), with the y and z node sums done
// in closed form. Agrees with the generic routines up to kernel rounding.
Complex project_mn(const CoefficientModel& model, long m, long n, const GroupPoint& g, int order,
                   const PrecisionContext& ctx, KernelCache* cache = nullptr);
Complex project_k0l(const CoefficientModel& model, long k, long l, const GroupPoint& g, int order,
                    const PrecisionContext& ctx, KernelCache* cache = nullptr);

// (c, d) = (0, 1) when |k/l| < 8, else (1, ceil(|k/l|^{1/3})), completed to determinant one.
// Throws std::logic_error if 1/2 |k/l|^{1/3} < delta(gamma, i y1) < 2 |k/l|^{1/3} fails.
CosetRep gamma_select(long k, long l, double y1);

struct MajorantTruncation {
    double coset_delta = 0;  // cosets with |c z + d| <= this in S1 and S3; 0 picks a default
    long s2_kmax = 0;        // k range of S2; 0 picks a default
};

struct MajorantReport {
    double x = 0, y1 = 0, y2 = 0;
    double coset_delta = 0;
    long s2_kmax = 0;
    long cosets = 0;  // coprime (c, d), c != 0, within coset_delta

    double S1 = 0, S2 = 0, S3 = 0;
    // relative contribution of the last tenth of each truncation range
    double S1_last = 0, S2_last = 0, S3_last = 0;

    double S1_env_cosets = 0;  // sum over the same cosets of (3 y2 delta)^6 exp(-(18 y2 - sqrt(6/y1)) delta / 72)
    double S1_env_lattice = 0;  // (3 y2)^6 sum over nonzero lattice vectors of |v|^6 e^{-|v|/12}
    double S2_env_count = 0;    // sum_k k N(z, k^{1/3}/(3 y2)) exp(-9/8 k^{1/3} y1 y2^2)
    double S2_env_closed = 0;   // sum_k k^{5/3} y2^-2 exp(-27/64 sqrt(3) k^{1/3}), up to a constant
    double S3_env = 0;          // sum over cosets and l > 0 of l exp(l/8 - l y2 delta / 4)

    // max over computed S3 terms with l delta >= 1 of log(term) + (l/16) y2 delta
    double S3_exponent_excess = 0;
    long S3_exponent_samples = 0;

    bool s1_ok = false, s2_ok = false, s3_ok = false;
    bool ok() const { return s1_ok && s2_ok && s3_ok; }
};

// Needs |x| <= 1/2 and y1, y2 >= sqrt(3)/2.
MajorantReport majorant_sums(double x, double y1, double y2, const MajorantTruncation& t = {});

}  // namespace sl3
