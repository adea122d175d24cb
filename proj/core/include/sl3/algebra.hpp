#pragma once

#include <array>
#include <string>
#include <vector>

#include "sl3/precision.hpp"
#include "sl3/real.hpp"

namespace sl3 {

// lambda = (l1, l2, l3) with l1 + l2 + l3 = 0.
class SatakeParameter {
public:
    // Rejects |l1 + l2 + l3| > 2^-(prec - 8).
    SatakeParameter(Complex l1, Complex l2, Complex l3);
    // l3 = -l1 - l2
    static SatakeParameter from_two(const Complex& l1, const Complex& l2);
    static SatakeParameter rho(prec_t p);
    // "a,b,c" with complex literals like 0.3+0.2i; the third may be "auto".
    static SatakeParameter parse(const std::string& text, prec_t p);

    const Complex& operator[](int i) const { return l_[i]; }
    prec_t prec() const;
    SatakeParameter rounded(prec_t p) const;
    SatakeParameter real_part() const;
    bool is_real() const;
    // (-l3, -l2, -l1): the parameter of the contragredient
    SatakeParameter dual() const;
    SatakeParameter operator+(const SatakeParameter& o) const;
    std::string str(int digits = 20) const;

private:
    std::array<Complex, 3> l_;
};

Complex parse_complex(const std::string& s, prec_t p);

// Permutation of {0,1,2}; perm[i] is the image of i.
struct WeylElement {
    std::array<int, 3> perm{0, 1, 2};

    static WeylElement identity() { return {}; }
    static WeylElement s12() { return {{1, 0, 2}}; }
    static WeylElement s23() { return {{0, 2, 1}}; }
    static WeylElement s13() { return {{2, 1, 0}}; }
    static WeylElement c123() { return {{1, 2, 0}}; }  // 1->2->3->1
    static WeylElement c321() { return {{2, 0, 1}}; }  // 1->3->2->1
    static const std::array<WeylElement, 6>& all();

    WeylElement inverse() const;
    // (a*b)(i) = a(b(i))
    WeylElement operator*(const WeylElement& b) const;
    bool operator==(const WeylElement& o) const { return perm == o.perm; }
    bool operator<(const WeylElement& o) const { return perm < o.perm; }
    // "e", "(12)", "(23)", "(13)", "(123)", "(321)"
    std::string name() const;
    static WeylElement from_name(const std::string& s);
    int index() const;  // position in all()
};

// (w lam)_i = lam_{w^-1(i)}
SatakeParameter weyl_apply(const WeylElement& w, const SatakeParameter& lam);

bool in_general_position(const SatakeParameter& lam, double tol);

struct TorusPoint {
    Real y1, y2;
    TorusPoint(Real a, Real b);
    TorusPoint(double a, double b, prec_t p) : TorusPoint(Real(a, p), Real(b, p)) {}
    prec_t prec() const { return std::max(y1.prec(), y2.prec()); }
    TorusPoint rounded(prec_t p) const { return {y1.rounded(p), y2.rounded(p)}; }
};

// a^mu with a = diag(y1^{2/3} y2^{1/3}, y1^{-1/3} y2^{1/3}, y1^{-1/3} y2^{-2/3}), mu = lam (+ rho).
Complex torus_character(const TorusPoint& p, const SatakeParameter& lam, bool shift_by_rho);

struct CosetRep {
    long a = 1, b = 0, c = 0, d = 1;

    // Completes (c, d) with gcd 1 to determinant one: 0 <= a < |c| when c != 0, a = d when c = 0.
    static CosetRep from_cd(long c, long d);
    long norm2() const { return c * c + d * d; }
};

// |c tau + d|, tau = tx + i ty
Real delta(const CosetRep& rep, const Real& tx, const Real& ty);

TorusPoint iwasawa_translate(const CosetRep& rep, const Real& x, const TorusPoint& p);

// n(x,y,z) a_{y1,y2}, n(x,y,z) = [[1,x,z],[0,1,y],[0,0,1]]
struct GroupPoint {
    Real x, y, z;
    TorusPoint a;
};

// Iwasawa coordinates of diag(gamma, 1) g.
GroupPoint translate(const CosetRep& rep, const GroupPoint& g);

// (ac + bd) / (c^2 + d^2), also as an exact fraction num/den
double theta_gamma(const CosetRep& rep);
std::pair<long, long> theta_gamma_fraction(const CosetRep& rep);

bool cos_nonvanishing_check(long k, const std::vector<CosetRep>& reps);

TorusPoint contragredient_torus(const TorusPoint& p);

// All coprime (c, d), both signs, with c^2 + d^2 <= bound^2; sorted by (c^2+d^2, c, d).
std::vector<CosetRep> coset_enumerate(double norm_bound);

}  // namespace sl3
