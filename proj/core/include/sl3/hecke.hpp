#pragma once

#include <gmpxx.h>

#include <map>
#include <string>

namespace sl3 {

// Finite formal q-series with rational coefficients, exponents of either sign.
class QExpansion {
public:
    QExpansion() = default;
    static QExpansion monomial(long e, const mpq_class& c = 1);
    // "q^-2", "3q^-1 + 2 - 1/2 q^{4}", "q^(-8)+2*q^-2"
    static QExpansion parse(const std::string& text);

    void add(long e, const mpq_class& c);
    mpq_class coeff(long e) const;
    const std::map<long, mpq_class>& terms() const { return c_; }
    bool empty() const { return c_.empty(); }

    std::string str() const;
    bool operator==(const QExpansion& o) const { return c_ == o.c_; }
    bool operator!=(const QExpansion& o) const { return !(*this == o); }
    QExpansion& operator+=(const QExpansion& o);

private:
    std::map<long, mpq_class> c_;  // no zero entries
};

// H_n: q^e -> sum over d | gcd(e, n) of d q^{e n / d^2}; linear in f. n >= 1.
QExpansion hecke_apply(long n, const QExpansion& f);

// sum over a d = n, b mod d of q^{-m(a z + b)/d}, with the root-of-unity sums reduced
// exactly modulo the cyclotomic polynomial
QExpansion hecke_brute_oracle(long n, long m);

// A coefficient sequence indexed by n >= 1. Entries above known_up_to are unknown
// unless complete is set, in which case they are zero.
struct Schedule {
    std::map<long, mpq_class> entries;
    long known_up_to = 0;
    bool complete = true;

    mpq_class at(long n) const;
    long support_max() const { return entries.empty() ? 0 : entries.rbegin()->first; }
};

// f_k = sum over m n = k d^2 with d | m, d | n of c_n e_m d, for 1 <= k <= k_max.
// Throws DomainError if some f_k depends on an unknown entry, or if neither side is complete.
std::map<long, mpq_class> hecke_combo(const Schedule& cn, const Schedule& polar, long k_max);

}  // namespace sl3
