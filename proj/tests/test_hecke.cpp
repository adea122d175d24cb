#include <doctest.h>

#include <numeric>
#include <random>

#include "sl3/errors.hpp"
#include "sl3/hecke.hpp"

using namespace sl3;

namespace {

// f_k straight from the triple sum over (m, n, d) with m n = k d^2, d | m, d | n
std::map<long, mpq_class> combo_oracle(const Schedule& c, const Schedule& e, long kmax) {
    std::map<long, mpq_class> f;
    for (const auto& [n, cn] : c.entries)
        for (const auto& [m, em] : e.entries)
            for (long d = 1; d <= std::gcd(m, n); ++d) {
                if (m % d || n % d) continue;
                long k = (m / d) * (n / d);
                if (k <= kmax) f[k] += cn * em * d;
            }
    for (auto it = f.begin(); it != f.end();) it = it->second == 0 ? f.erase(it) : std::next(it);
    return f;
}

}  // namespace

TEST_CASE("Hecke operators on monomials") {
    auto q = [](const char* s) { return QExpansion::parse(s); };
    CHECK(hecke_apply(2, q("q^-1")) == q("q^-2"));
    CHECK(hecke_apply(4, q("q^-2")) == q("q^-8 + 2q^-2"));
    CHECK(hecke_apply(3, q("q^-3")) == q("q^-9 + 3q^-1"));
    // constant term: sum of divisors
    CHECK(hecke_apply(6, q("1")) == q("12"));
    // positive powers follow the same divisor formula
    CHECK(hecke_apply(2, q("q^2")) == q("q^4 + 2q"));
    auto f = q("3q^-4 - 1/2 q^-1 + 7 + 2/3 q^5");
    CHECK(hecke_apply(1, f) == f);
    CHECK_THROWS_AS(hecke_apply(0, f), DomainError);
}

TEST_CASE("brute-force oracle") {
    CHECK(hecke_brute_oracle(2, 1) == QExpansion::parse("q^-2"));
    CHECK(hecke_brute_oracle(3, 3) == QExpansion::parse("q^-9 + 3q^-1"));
    for (long n = 1; n <= 24; ++n)
        for (long m = 1; m <= 24; ++m) CHECK(hecke_brute_oracle(n, m) == hecke_apply(n, QExpansion::monomial(-m)));
}

TEST_CASE("coprime indices multiply; operators commute on q^-1") {
    for (long n = 1; n <= 20; ++n)
        for (long m = 1; m <= 20; ++m) {
            if (std::gcd(m, n) == 1) CHECK(hecke_apply(n, QExpansion::monomial(-m)) == QExpansion::monomial(-m * n));
            auto g = QExpansion::monomial(-1);
            CHECK(hecke_apply(n, hecke_apply(m, g)) == hecke_apply(m, hecke_apply(n, g)));
        }
}

TEST_CASE("formal combinations") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> idx(1, 24), num(-7, 7), den(1, 4);
    for (int t = 0; t < 25; ++t) {
        Schedule c, e;
        for (int i = 0; i < 6; ++i) {
            mpq_class a(num(rng), den(rng)), b(num(rng), den(rng));
            a.canonicalize();
            b.canonicalize();
            if (a != 0) c.entries[idx(rng)] = a;
            if (b != 0) e.entries[idx(rng)] = b;
        }
        CHECK(hecke_combo(c, e, 200) == combo_oracle(c, e, 200));
        CHECK(hecke_combo(c, e, 200) == hecke_combo(e, c, 200));
    }
    Schedule c;
    c.entries = {{1, 2}, {3, mpq_class(1, 3)}, {4, -1}};
    Schedule gen;
    gen.entries = {{1, 1}};
    auto f = hecke_combo(c, gen, 10);
    CHECK(f == c.entries);
    Schedule id;
    id.entries = {{1, 1}};
    CHECK(hecke_combo(id, c, 10) == c.entries);
}

TEST_CASE("truncated polar parts: the dependency set is checked") {
    Schedule c;
    c.entries = {{1, 1}, {2, 1}};
    Schedule e;
    e.entries = {{1, 1}, {2, 5}};
    e.complete = false;
    e.known_up_to = 4;
    // f_2 reaches e_4 through d = 2; f_3 needs e_6, past what is known
    CHECK_NOTHROW(hecke_combo(c, e, 2));
    CHECK_THROWS_AS(hecke_combo(c, e, 3), DomainError);
    Schedule inc = c;
    inc.complete = false;
    inc.known_up_to = 2;
    CHECK_THROWS_AS(hecke_combo(inc, e, 1), DomainError);
}

TEST_CASE("q-expansion parsing and printing") {
    auto f = QExpansion::parse("q^(-8)+2*q^-2 - 1/2 q^{4} + 3 - q");
    CHECK(f.coeff(-8) == 1);
    CHECK(f.coeff(-2) == 2);
    CHECK(f.coeff(4) == mpq_class(-1, 2));
    CHECK(f.coeff(0) == 3);
    CHECK(f.coeff(1) == -1);
    CHECK(QExpansion::parse(f.str()) == f);
    CHECK(QExpansion::parse("q - q").empty());
    CHECK_THROWS_AS(QExpansion::parse(""), DomainError);
    CHECK_THROWS_AS(QExpansion::parse("q^"), DomainError);
    CHECK_THROWS_AS(QExpansion::parse("2 3"), DomainError);
    CHECK_THROWS_AS(QExpansion::parse("1/0 q"), DomainError);
}
