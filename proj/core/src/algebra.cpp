#include "sl3/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sl3/errors.hpp"

namespace sl3 {

static Real exact_neg_sum(const Real& a, const Real& b) {
    if (a.is_zero()) return -b;
    if (b.is_zero()) return -a;
    long hi = std::max(a.exponent(), b.exponent());
    long lo = std::min(a.exponent() - static_cast<long>(a.prec()), b.exponent() - static_cast<long>(b.prec()));
    prec_t need = static_cast<prec_t>(std::max<long>(hi - lo + 2, pmax(a, b)));
    Real r(need);
    mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
    mpfr_neg(r.get(), r.get(), MPFR_RNDN);
    return r;
}

SatakeParameter::SatakeParameter(Complex l1, Complex l2, Complex l3) : l_{std::move(l1), std::move(l2), std::move(l3)} {
    prec_t p = prec();
    // compare exactly: a sum that merely rounds to zero at p bits is not good enough
    Complex e(exact_neg_sum(l_[0].re, l_[1].re), exact_neg_sum(l_[0].im, l_[1].im));
    if (mpfr_equal_p(e.re.get(), l_[2].re.get()) && mpfr_equal_p(e.im.get(), l_[2].im.get())) return;
    Complex s = l_[2].rounded(e.prec() + 2) - e;
    double lim = -static_cast<double>(p - 8);
    if (s.log2_abs() > lim) throw DomainError("Satake parameter must sum to zero, got sum " + s.re.str(6) + "+" + s.im.str(6) + "i");
    // Snap l3 to -(l1 + l2) exactly; the Weyl-orbit cancellation in W needs an exact zero sum.
    l_[2] = e;
}

SatakeParameter SatakeParameter::from_two(const Complex& l1, const Complex& l2) {
    return SatakeParameter(l1, l2, -(l1 + l2));
}

SatakeParameter SatakeParameter::rho(prec_t p) {
    return SatakeParameter(Complex(1, 0, p), Complex(0, 0, p), Complex(-1, 0, p));
}

prec_t SatakeParameter::prec() const {
    return std::max({l_[0].prec(), l_[1].prec(), l_[2].prec()});
}

SatakeParameter SatakeParameter::rounded(prec_t p) const {
    // the constructor re-snaps l3 exactly
    return SatakeParameter(l_[0].rounded(p), l_[1].rounded(p), l_[2].rounded(p));
}

SatakeParameter SatakeParameter::real_part() const {
    prec_t p = prec();
    return SatakeParameter(Complex(l_[0].re), Complex(l_[1].re), Complex(l_[2].re)).rounded(p);
}

bool SatakeParameter::is_real() const {
    return l_[0].im.is_zero() && l_[1].im.is_zero() && l_[2].im.is_zero();
}

SatakeParameter SatakeParameter::dual() const { return SatakeParameter(-l_[2], -l_[1], -l_[0]); }

SatakeParameter SatakeParameter::operator+(const SatakeParameter& o) const {
    return SatakeParameter(l_[0] + o.l_[0], l_[1] + o.l_[1], l_[2] + o.l_[2]);
}

std::string SatakeParameter::str(int digits) const {
    std::string out;
    for (int i = 0; i < 3; ++i) {
        if (i) out += ",";
        out += l_[i].re.str(digits);
        if (!l_[i].im.is_zero()) {
            std::string im = l_[i].im.str(digits);
            out += (im[0] == '-' ? "" : "+") + im + "i";
        }
    }
    return out;
}

static std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t"), b = s.find_last_not_of(" \t");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

Complex parse_complex(const std::string& raw, prec_t p) {
    std::string s = trim(raw);
    if (s.empty()) throw DomainError("empty complex literal");
    if (s.back() != 'i' && s.back() != 'j') return Complex(Real::parse(s, p), Real(p));
    std::string body = s.substr(0, s.size() - 1);
    // split at the last sign that is not part of an exponent
    size_t cut = std::string::npos;
    for (size_t k = body.size(); k-- > 1;) {
        char ch = body[k];
        if ((ch == '+' || ch == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            cut = k;
            break;
        }
    }
    try {
        if (cut == std::string::npos) {
            if (body.empty() || body == "+") return Complex(Real(p), Real(1.0, p));
            if (body == "-") return Complex(Real(p), Real(-1.0, p));
            return Complex(Real(p), Real::parse(body, p));
        }
        std::string re = body.substr(0, cut), im = body.substr(cut);
        Real imv(p);
        if (im == "+") imv = Real(1.0, p);
        else if (im == "-") imv = Real(-1.0, p);
        else imv = Real::parse(im[0] == '+' ? im.substr(1) : im, p);
        return Complex(Real::parse(re, p), imv);
    } catch (const std::invalid_argument&) {
        throw DomainError("bad complex literal '" + raw + "'");
    }
}

SatakeParameter SatakeParameter::parse(const std::string& text, prec_t p) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(trim(item));
    if (parts.size() != 3) throw DomainError("lambda needs three comma-separated entries");
    Complex a = parse_complex(parts[0], p), b = parse_complex(parts[1], p);
    if (parts[2] == "auto") return from_two(a, b);
    try {
        return SatakeParameter(a, b, parse_complex(parts[2], p));
    } catch (const std::invalid_argument&) {
        throw DomainError("bad lambda entry '" + parts[2] + "'");
    }
}

const std::array<WeylElement, 6>& WeylElement::all() {
    static const std::array<WeylElement, 6> els{identity(), s12(), s23(), s13(), c123(), c321()};
    return els;
}

WeylElement WeylElement::inverse() const {
    WeylElement r;
    for (int i = 0; i < 3; ++i) r.perm[perm[i]] = i;
    return r;
}

WeylElement WeylElement::operator*(const WeylElement& b) const {
    WeylElement r;
    for (int i = 0; i < 3; ++i) r.perm[i] = perm[b.perm[i]];
    return r;
}

std::string WeylElement::name() const {
    static const char* names[] = {"e", "(12)", "(23)", "(13)", "(123)", "(321)"};
    return names[index()];
}

WeylElement WeylElement::from_name(const std::string& s) {
    for (const auto& w : all())
        if (w.name() == s) return w;
    if (s == "(231)") return c123();
    if (s == "(132)") return c321();
    if (s == "(21)") return s12();
    if (s == "(32)") return s23();
    if (s == "(31)") return s13();
    if (s == "id" || s == "1") return identity();
    throw DomainError("unknown Weyl element '" + s + "'");
}

int WeylElement::index() const {
    const auto& a = all();
    for (int i = 0; i < 6; ++i)
        if (a[i].perm == perm) return i;
    throw Error("invalid permutation");
}

SatakeParameter weyl_apply(const WeylElement& w, const SatakeParameter& lam) {
    WeylElement inv = w.inverse();
    return SatakeParameter(lam[inv.perm[0]], lam[inv.perm[1]], lam[inv.perm[2]]);
}

bool in_general_position(const SatakeParameter& lam, double tol) {
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            std::complex<double> d = (lam[i] - lam[j]).to_cd();
            double n = 2.0 * std::round(d.real() / 2.0);
            if (std::abs(d - n) <= tol) return false;
        }
    return true;
}

TorusPoint::TorusPoint(Real a, Real b) : y1(std::move(a)), y2(std::move(b)) {
    if (!(y1 > 0.0) || !(y2 > 0.0)) throw DomainError("torus coordinates must be positive");
}

Complex torus_character(const TorusPoint& p, const SatakeParameter& lam, bool shift_by_rho) {
    prec_t pr = std::max(p.prec(), lam.prec());
    Real L1 = log(p.y1.rounded(pr)), L2 = log(p.y2.rounded(pr));
    // log a_i
    Real a1 = (L1 * 2.0 + L2) / 3.0;
    Real a2 = (L2 - L1) / 3.0;
    Real a3 = -(L1 + L2 * 2.0) / 3.0;
    Complex e = lam[0].rounded(pr) * a1 + lam[1].rounded(pr) * a2 + lam[2].rounded(pr) * a3;
    if (shift_by_rho) e += Complex(a1 - a3);
    return exp(e);
}

static long ext_gcd(long a, long b, long& x, long& y) {
    if (b == 0) {
        x = a >= 0 ? 1 : -1;
        y = 0;
        return std::labs(a);
    }
    long x1, y1;
    long g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

CosetRep CosetRep::from_cd(long c, long d) {
    if (std::gcd(c, d) != 1) throw DomainError("coset bottom row must be coprime");
    CosetRep r;
    r.c = c;
    r.d = d;
    if (c == 0) {
        r.a = d;
        r.b = 0;
        return r;
    }
    // a d == 1 mod |c|
    long x, y;
    ext_gcd(d, std::labs(c), x, y);
    long m = std::labs(c);
    long a = ((x % m) + m) % m;
    if (m == 1) a = 0;
    r.a = a;
    r.b = (a * d - 1) / c;
    return r;
}

Real delta(const CosetRep& rep, const Real& tx, const Real& ty) {
    Real re = tx * static_cast<double>(rep.c) + static_cast<double>(rep.d);
    Real im = ty * static_cast<double>(rep.c);
    return hypot(re, im);
}

TorusPoint iwasawa_translate(const CosetRep& rep, const Real& x, const TorusPoint& p) {
    prec_t pr = std::max(p.prec(), x.prec());
    Real dl = delta(rep, x.rounded(pr), p.y1.rounded(pr));
    return TorusPoint(p.y1.rounded(pr) / (dl * dl), p.y2.rounded(pr) * dl);
}

GroupPoint translate(const CosetRep& rep, const GroupPoint& g) {
    prec_t pr = std::max({g.x.prec(), g.y.prec(), g.z.prec(), g.a.prec()});
    const Real& y1 = g.a.y1;
    double a = rep.a, b = rep.b, c = rep.c, d = rep.d;
    // Re(gamma tau) = ((a x + b)(c x + d) + a c y1^2) / |c tau + d|^2
    Real cx = g.x.rounded(pr) * c + d;
    Real den = cx * cx + (y1 * c) * (y1 * c);
    Real nx = ((g.x.rounded(pr) * a + b) * cx + (y1 * y1) * (a * c)) / den;
    Real ny = g.z.rounded(pr) * c + g.y * d;
    Real nz = g.z.rounded(pr) * a + g.y * b;
    TorusPoint t = iwasawa_translate(rep, g.x, g.a);
    return GroupPoint{nx, ny, nz, t};
}

std::pair<long, long> theta_gamma_fraction(const CosetRep& rep) {
    long num = rep.a * rep.c + rep.b * rep.d;
    long den = rep.c * rep.c + rep.d * rep.d;
    long g = std::gcd(num, den);
    if (g == 0) g = 1;
    return {num / g, den / g};
}

double theta_gamma(const CosetRep& rep) {
    return static_cast<double>(rep.a * rep.c + rep.b * rep.d) / static_cast<double>(rep.c * rep.c + rep.d * rep.d);
}

bool cos_nonvanishing_check(long k, const std::vector<CosetRep>& reps) {
    if (k == 0) throw DomainError("cos_nonvanishing_check needs k != 0");
    for (const auto& r : reps) {
        auto [num, den] = theta_gamma_fraction(r);
        // reduce k*theta mod 1 exactly before taking the cosine
        long m = ((k % den) * (num % den)) % den;
        if (m < 0) m += den;
        double v = 2.0 * std::cos(2.0 * M_PI * static_cast<double>(m) / static_cast<double>(den));
        if (!(std::fabs(v) > 1e-12)) return false;
    }
    return true;
}

TorusPoint contragredient_torus(const TorusPoint& p) { return TorusPoint(p.y2, p.y1); }

std::vector<CosetRep> coset_enumerate(double norm_bound) {
    if (!(norm_bound >= 1)) throw DomainError("coset_enumerate needs norm_bound >= 1");
    long R = static_cast<long>(std::floor(norm_bound));
    double b2 = norm_bound * norm_bound;
    std::vector<CosetRep> out;
    for (long c = -R; c <= R; ++c)
        for (long d = -R; d <= R; ++d) {
            if (static_cast<double>(c * c + d * d) > b2) continue;
            if (std::gcd(c, d) != 1) continue;
            out.push_back(CosetRep::from_cd(c, d));
        }
    std::sort(out.begin(), out.end(), [](const CosetRep& u, const CosetRep& v) {
        if (u.norm2() != v.norm2()) return u.norm2() < v.norm2();
        if (u.c != v.c) return u.c < v.c;
        return u.d < v.d;
    });
    return out;
}

}  // namespace sl3
