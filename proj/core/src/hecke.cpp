#include "sl3/hecke.hpp"

#include <cctype>
#include <climits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "sl3/errors.hpp"

namespace sl3 {

QExpansion QExpansion::monomial(long e, const mpq_class& c) {
    QExpansion f;
    f.add(e, c);
    return f;
}

void QExpansion::add(long e, const mpq_class& c) {
    if (c == 0) return;
    auto it = c_.find(e);
    if (it == c_.end()) {
        c_.emplace(e, c);
        return;
    }
    it->second += c;
    if (it->second == 0) c_.erase(it);
}

mpq_class QExpansion::coeff(long e) const {
    auto it = c_.find(e);
    return it == c_.end() ? mpq_class(0) : it->second;
}

QExpansion& QExpansion::operator+=(const QExpansion& o) {
    for (const auto& [e, c] : o.c_) add(e, c);
    return *this;
}

namespace {

struct Cursor {
    const std::string& s;
    size_t i = 0;
    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char ch) {
        skip();
        if (i < s.size() && s[i] == ch) {
            ++i;
            return true;
        }
        return false;
    }
    bool at_digit() {
        skip();
        return i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]));
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw DomainError("q-expansion: " + what + " at position " + std::to_string(i) + " in \"" + s + "\"");
    }
    mpz_class integer() {
        skip();
        size_t b = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (b == i) fail("expected digits");
        return mpz_class(s.substr(b, i - b));
    }
    long exponent() {
        bool paren = eat('('), brace = !paren && eat('{');
        int sg = 1;
        if (eat('-'))
            sg = -1;
        else
            eat('+');
        mpz_class v = integer();
        if (!v.fits_slong_p()) fail("exponent out of range");
        if (paren && !eat(')')) fail("expected ')'");
        if (brace && !eat('}')) fail("expected '}'");
        return sg * v.get_si();
    }
};

}  // namespace

QExpansion QExpansion::parse(const std::string& text) {
    Cursor cur{text};
    QExpansion f;
    cur.skip();
    if (cur.i == text.size()) throw DomainError("q-expansion: empty input");
    bool first = true;
    while (true) {
        cur.skip();
        if (cur.i == text.size()) break;
        int sg = 1;
        if (cur.eat('-'))
            sg = -1;
        else if (!cur.eat('+') && !first)
            cur.fail("expected '+' or '-'");
        first = false;
        mpq_class c = 1;
        bool have_c = false;
        if (cur.at_digit()) {
            mpz_class num = cur.integer(), den = 1;
            if (cur.eat('/')) den = cur.integer();
            if (den == 0) cur.fail("zero denominator");
            c = mpq_class(num, den);
            c.canonicalize();
            have_c = true;
            cur.eat('*');
        }
        long e = 0;
        if (cur.eat('q')) {
            e = 1;
            if (cur.eat('^')) e = cur.exponent();
        } else if (!have_c) {
            cur.fail("expected a coefficient or q");
        }
        f.add(e, sg * c);
    }
    return f;
}

std::string QExpansion::str() const {
    if (c_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : c_) {
        mpq_class a = abs(c);
        if (first)
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        first = false;
        if (e == 0) {
            out += a.get_str();
            continue;
        }
        if (a != 1) out += a.get_str();
        out += "q";
        if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
}

QExpansion hecke_apply(long n, const QExpansion& f) {
    if (n < 1) throw DomainError("hecke_apply: n must be >= 1");
    QExpansion out;
    for (const auto& [e, c] : f.terms()) {
        long g = std::gcd(e, n);  // gcd(0, n) = n
        for (long d = 1; d <= g; ++d)
            if (g % d == 0) out.add(e / d * (n / d), c * d);
    }
    return out;
}

namespace {

using Poly = std::vector<mpz_class>;  // coefficients, low degree first

void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// a mod b for monic b
Poly poly_mod(Poly a, const Poly& b) {
    trim(a);
    size_t db = b.size() - 1;
    while (a.size() > db) {
        mpz_class lead = a.back();
        size_t shift = a.size() - 1 - db;
        for (size_t i = 0; i <= db; ++i) a[shift + i] -= lead * b[i];
        trim(a);
    }
    return a;
}

// exact division by a monic divisor
Poly poly_div(Poly a, const Poly& b) {
    trim(a);
    size_t db = b.size() - 1;
    if (a.size() <= db) return {};
    Poly q(a.size() - db);
    while (a.size() > db) {
        mpz_class lead = a.back();
        size_t shift = a.size() - 1 - db;
        q[shift] = lead;
        for (size_t i = 0; i <= db; ++i) a[shift + i] -= lead * b[i];
        trim(a);
    }
    if (!a.empty()) throw std::logic_error("cyclotomic division left a remainder");
    return q;
}

const Poly& cyclotomic(long d) {
    static std::map<long, Poly> memo;
    auto it = memo.find(d);
    if (it != memo.end()) return it->second;
    Poly p(d + 1);
    p[0] = -1;
    p[d] = 1;
    for (long e = 1; e < d; ++e)
        if (d % e == 0) p = poly_div(p, cyclotomic(e));
    return memo.emplace(d, p).first->second;
}

}  // namespace

QExpansion hecke_brute_oracle(long n, long m) {
    if (n < 1 || m < 1) throw DomainError("hecke_brute_oracle: n, m must be >= 1");
    QExpansion out;
    for (long d = 1; d <= n; ++d) {
        if (n % d) continue;
        long a = n / d;
        // q^{-m(az+b)/d} = q^{-ma/d} zeta_d^{-mb}; collect the zeta_d powers over b
        Poly s(d);
        for (long b = 0; b < d; ++b) {
            long r = ((-m * b) % d + d) % d;
            s[r] += 1;
        }
        Poly red = poly_mod(s, cyclotomic(d));
        if (red.empty()) continue;
        if (red.size() != 1) throw std::logic_error("root-of-unity sum is not rational");
        if ((m * a) % d) throw std::logic_error("nonzero term with fractional exponent");
        out.add(-(m * a) / d, mpq_class(red[0]));
    }
    return out;
}

mpq_class Schedule::at(long n) const {
    auto it = entries.find(n);
    return it == entries.end() ? mpq_class(0) : it->second;
}

std::map<long, mpq_class> hecke_combo(const Schedule& cn, const Schedule& polar, long k_max) {
    if (k_max < 1) throw DomainError("hecke_combo: k_max must be >= 1");
    if (!cn.complete && !polar.complete)
        throw DomainError("hecke_combo: the sum over d is infinite unless c_n or e_m has finite support");
    for (const Schedule* s : {&cn, &polar})
        for (const auto& [i, v] : s->entries)
            if (i < 1) throw DomainError("hecke_combo: indices must be >= 1");
    auto known = [](const Schedule& s, long i) { return s.complete || i <= s.known_up_to; };
    std::map<long, mpq_class> f;
    // m = d m', n = d n' with m' n' = k
    for (long k = 1; k <= k_max; ++k) {
        mpq_class acc = 0;
        for (long np = 1; np <= k; ++np) {
            if (k % np) continue;
            long mp = k / np;
            // d runs until the complete side runs out of support
            long dmax = LONG_MAX;
            if (cn.complete) dmax = std::min(dmax, cn.support_max() / np);
            if (polar.complete) dmax = std::min(dmax, polar.support_max() / mp);
            for (long d = 1; d <= dmax; ++d) {
                long n = d * np, m = d * mp;
                bool kc = known(cn, n), ke = known(polar, m);
                if ((kc && cn.at(n) == 0) || (ke && polar.at(m) == 0)) continue;
                if (!kc || !ke)
                    throw DomainError("hecke_combo: f_" + std::to_string(k) + " needs c_" + std::to_string(n) +
                                      " and e_" + std::to_string(m) + ", beyond the supplied support");
                acc += cn.at(n) * polar.at(m) * d;
            }
        }
        if (acc != 0) f.emplace(k, acc);
    }
    return f;
}

}  // namespace sl3
