#include "sl3/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sl3/errors.hpp"
#include "sl3/whittaker.hpp"

namespace sl3 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_j(int j) {
    if (j < 1 || j > 3) throw DomainError("degenerate index j must be 1, 2 or 3");
}

template <class Map, class Key>
void put_symmetric(Map& m, const Key& key, const Complex& v, const char* what) {
    auto it = m.find(key);
    if (it != m.end()) {
        if (!(it->second.re == v.re && it->second.im == v.im))
            throw DomainError(std::string(what) + ": conflicting values for the same |k|, |l| (sign symmetry)");
        return;
    }
    if (v.is_zero()) return;
    m.emplace(key, v);
}

std::string key_of(const Real& r) {
    mpfr_exp_t e;
    char* s = mpfr_get_str(nullptr, &e, 16, 0, r.get(), MPFR_RNDN);
    std::string out(s);
    mpfr_free_str(s);
    return out + "@" + std::to_string(static_cast<long>(e));
}

std::string key_of(const char* kind, long a, long b, const TorusPoint& p) {
    return std::string(kind) + std::to_string(a) + ":" + std::to_string(b) + ":" + key_of(p.y1) + ":" + key_of(p.y2);
}

// log of the (y1^2 + y1^-2)(y2^2 + y2^-2) e^{-2 pi (y1 + y2)} envelope for |W|
double w_envelope_log(double Y1, double Y2) {
    auto f = [](double y) { return std::log(y * y + 1.0 / (y * y)); };
    return f(Y1) + f(Y2) - 2 * M_PI * (Y1 + Y2);
}

// log of |Y1^{1+mu1} Y2^{1+mu1/2} K(2 pi Y2)| from the large-argument K asymptotics, with slack
double degen_a2_log(double mu1, double Y1, double Y2) {
    return (1 + mu1) * std::log(Y1) + (1 + mu1 / 2) * std::log(Y2) - 2 * M_PI * Y2 - 0.5 * std::log(4 * Y2) + 2.0;
}

double cabs_d(const Complex& z) { return std::abs(z.to_cd()); }

// kernel values for one Fourier mode of the model
struct ModeEval {
    const CoefficientModel& m;
    const PrecisionContext& ctx;
    KernelCache* cache;
    long evals = 0;

    Complex cached(const std::string& key, const std::function<Complex()>& f) {
        Complex v;
        if (cache && cache->find(key, v)) return v;
        v = f();
        ++evals;
        if (cache) cache->put(key, v);
        return v;
    }

    Complex constant(const TorusPoint& a) {
        Complex s(ctx.prec());
        for (const auto& [w, c] : m.c00()) s += c * torus_character(a, weyl_apply(w, m.lam()), true);
        return s;
    }

    // sum_j d(K,0;j) W^{a1}_{w_j lam}(a_{K y1, y2})
    Complex alpha1(long K, const TorusPoint& a) {
        Complex s(ctx.prec());
        TorusPoint q(a.y1 * static_cast<double>(K), a.y2);
        for (int j = 1; j <= 3; ++j) {
            auto it = m.dk0().find({K, j});
            if (it == m.dk0().end()) continue;
            Complex w = cached(key_of("A1", j, 0, q), [&] {
                return w_degen_a1(weyl_apply(degenerate_weyl(j), m.lam()), q, DegenRoute::closed_form, ctx);
            });
            s += it->second * w;
        }
        return s;
    }

    // coset mode (K, l) at the translated torus point a
    Complex coset_mode(long K, long l, const TorusPoint& a) {
        Complex s(ctx.prec());
        const double dl = static_cast<double>(l);
        if (K == 0) {
            TorusPoint q(a.y1, a.y2 * dl);
            for (int j = 1; j <= 3; ++j) {
                auto it = m.d0l().find({l, j});
                if (it == m.d0l().end()) continue;
                Complex w = cached(key_of("A2", j, 0, q), [&] {
                    return w_degen_a2(weyl_apply(degenerate_weyl(j), m.lam()), q, DegenRoute::closed_form, ctx);
                });
                s += it->second * w;
            }
            return s;
        }
        TorusPoint q(a.y1 * static_cast<double>(K), a.y2 * dl);
        auto it = m.ckl().find({K, l});
        if (it != m.ckl().end()) {
            Complex w = cached(key_of("W", 0, 0, q), [&] { return w_weylsum(m.lam(), q, ctx); });
            s += it->second * w;
        }
        for (const auto& w : WeylElement::all()) {
            auto mt = m.mklw().find({K, l, w.index()});
            if (mt == m.mklw().end()) continue;
            Complex v = cached(key_of("M", w.index(), 0, q), [&] { return m_whittaker(weyl_apply(w, m.lam()), q, ctx); });
            s += mt->second * v;
        }
        return s;
    }

    // upper estimate of log|coset_mode|; +inf when a growing mode is involved
    double coset_mode_log(long K, long l, double Y1, double Y2) const {
        double best = -kInf;
        if (K == 0) {
            for (int j = 1; j <= 3; ++j) {
                auto it = m.d0l().find({l, j});
                if (it == m.d0l().end()) continue;
                double mu1 = weyl_apply(degenerate_weyl(j), m.lam())[0].re.to_double();
                best = std::max(best, std::log(3 * cabs_d(it->second)) + degen_a2_log(mu1, Y1, Y2 * l));
            }
            return best;
        }
        for (const auto& w : WeylElement::all())
            if (m.mklw().count({K, l, w.index()})) return kInf;
        auto it = m.ckl().find({K, l});
        if (it != m.ckl().end()) best = std::log(cabs_d(it->second)) + w_envelope_log(Y1 * K, Y2 * l);
        return best;
    }
};

// smallest eigenvalue of the form (c x + d)^2 + c^2 y1^2 in (c, d)
double lattice_form_min(double x, double y1) {
    double a = x * x + y1 * y1, b = x, c = 1.0;
    double tr = a + c, det = a * c - b * b;
    return (tr - std::sqrt(std::max(0.0, tr * tr - 4 * det))) / 2;
}

// Envelope estimate for the cosets beyond the bound: lattice vectors of norm r have
// density 2 pi r / y1.
double excluded_tail(const CoefficientModel& m, long K, long l, double x, double y1, double y2, double bound) {
    double R = std::sqrt(lattice_form_min(x, y1)) * bound;
    double coef = 0;
    bool degen = K == 0;
    if (degen) {
        for (int j = 1; j <= 3; ++j) {
            auto it = m.d0l().find({l, j});
            if (it != m.d0l().end()) coef += cabs_d(it->second);
        }
    } else {
        auto it = m.ckl().find({K, l});
        if (it != m.ckl().end()) coef = cabs_d(it->second);
    }
    if (coef == 0) return 0;
    // Y1 < 1 out there, so the smallest Re lambda_i gives the largest power
    double mu1 = kInf;
    for (int i = 0; i < 3; ++i) mu1 = std::min(mu1, m.lam()[i].re.to_double());
    // Simpson over [R, R + span]; beyond that the integrand is below e^{-80} of its start
    double span = 80.0 / (2 * M_PI * l * y2) + 1.0;
    const int n = 400;
    double h = span / n, s = 0;
    for (int i = 0; i <= n; ++i) {
        double r = R + i * h;
        double Y1 = (degen ? 1.0 : static_cast<double>(K)) * y1 / (r * r), Y2 = l * y2 * r;
        double lg = degen ? degen_a2_log(mu1, Y1, Y2) : w_envelope_log(Y1, Y2);
        double v = 2 * M_PI * r / y1 * std::exp(lg);
        s += v * (i == 0 || i == n ? 1 : (i % 2 ? 4 : 2));
    }
    return coef * s * h / 3;
}

bool divides(long n, long v) { return v % n == 0; }

}  // namespace

WeylElement degenerate_weyl(int j) {
    check_j(j);
    return j == 1 ? WeylElement::identity() : j == 2 ? WeylElement::c123() : WeylElement::c321();
}

void CoefficientModel::set_c00(const WeylElement& w, const Complex& v) { put_symmetric(c00_, w, v, "c00"); }

void CoefficientModel::set_dk0(long k, int j, const Complex& v) {
    check_j(j);
    if (k == 0) throw DomainError("dk0 needs k != 0");
    put_symmetric(dk0_, std::make_pair(std::labs(k), j), v, "dk0");
}

void CoefficientModel::set_d0l(long l, int j, const Complex& v) {
    check_j(j);
    if (l == 0) throw DomainError("d0l needs l != 0");
    put_symmetric(d0l_, std::make_pair(std::labs(l), j), v, "d0l");
}

void CoefficientModel::set_ckl(long k, long l, const Complex& v) {
    if (k == 0 || l == 0) throw DomainError("ckl needs k, l != 0");
    put_symmetric(ckl_, std::make_pair(std::labs(k), std::labs(l)), v, "ckl");
}

void CoefficientModel::set_mklw(long k, long l, const WeylElement& w, const Complex& v) {
    if (k == 0 || l == 0) throw DomainError("mklw needs k, l != 0");
    put_symmetric(mklw_, std::make_tuple(std::labs(k), std::labs(l), w.index()), v, "mklw");
}

bool CoefficientModel::empty() const {
    return c00_.empty() && dk0_.empty() && d0l_.empty() && ckl_.empty() && mklw_.empty();
}

long CoefficientModel::max_k() const {
    long r = 0;
    for (const auto& e : dk0_) r = std::max(r, e.first.first);
    for (const auto& e : ckl_) r = std::max(r, e.first.first);
    for (const auto& e : mklw_) r = std::max(r, std::get<0>(e.first));
    return r;
}

long CoefficientModel::max_l() const {
    long r = 0;
    for (const auto& e : d0l_) r = std::max(r, e.first.first);
    for (const auto& e : ckl_) r = std::max(r, e.first.second);
    for (const auto& e : mklw_) r = std::max(r, std::get<1>(e.first));
    return r;
}

bool KernelCache::find(const std::string& key, Complex& out) const {
    auto it = map_.find(key);
    if (it == map_.end()) return false;
    out = it->second;
    return true;
}

void KernelCache::put(const std::string& key, const Complex& v) { map_[key] = v; }

namespace {

bool has_coset_mode(const CoefficientModel& m, long K, long l) {
    if (K == 0) {
        for (int j = 1; j <= 3; ++j)
            if (m.d0l().count({l, j})) return true;
        return false;
    }
    if (m.ckl().count({K, l})) return true;
    for (int w = 0; w < 6; ++w)
        if (m.mklw().count({K, l, w})) return true;
    return false;
}

bool has_alpha1_mode(const CoefficientModel& m, long K) {
    for (int j = 1; j <= 3; ++j)
        if (m.dk0().count({K, j})) return true;
    return false;
}

void check_truncation(const Truncation& t) {
    if (t.k_max < 0 || t.l_max < 0) throw DomainError("truncation bounds must be nonnegative");
    if (!(t.coset_bound >= 1) || !std::isfinite(t.coset_bound)) throw DomainError("coset_bound must be finite and >= 1");
}

}  // namespace

SynthResult synthesize(const CoefficientModel& model, const GroupPoint& g, const PrecisionContext& ctx,
                       KernelCache* cache) {
    ctx.validate();
    const Truncation& tr = model.truncation;
    check_truncation(tr);
    SynthResult res;
    res.value = Complex(ctx.prec());
    if (model.empty()) return res;

    KernelCache local;
    ModeEval ev{model, ctx, cache ? cache : &local};
    Complex total(ctx.prec());
    double maxlog = -kInf;
    auto note = [&](const Complex& v) {
        if (!v.is_zero()) maxlog = std::max(maxlog, std::log(cabs_d(v)));
    };

    Complex c0 = ev.constant(g.a);
    note(c0);
    total += c0;
    for (long k = -tr.k_max; k <= tr.k_max; ++k) {
        if (k == 0 || !has_alpha1_mode(model, std::labs(k))) continue;
        Complex v = apply_transformation_law(ev.alpha1(std::labs(k), g.a), k, 0, g.x, g.y);
        note(v);
        total += v;
    }

    const double cut = (static_cast<double>(ctx.bits) + 8) * std::log(2.0);
    const double x = g.x.to_double(), y1 = g.a.y1.to_double(), y2 = g.a.y2.to_double();
    std::vector<CosetRep> reps = coset_enumerate(tr.coset_bound);
    std::vector<GroupPoint> moved;
    moved.reserve(reps.size());
    for (const auto& r : reps) moved.push_back(translate(r, g));

    double tail = 0;
    for (long l = 1; l <= tr.l_max; ++l) {
        for (size_t i = 0; i < reps.size(); ++i) {
            const GroupPoint& h = moved[i];
            const double Y1 = h.a.y1.to_double(), Y2 = h.a.y2.to_double();
            for (long k = -tr.k_max; k <= tr.k_max; ++k) {
                const long K = std::labs(k);
                if (!has_coset_mode(model, K, l)) continue;
                double est = ev.coset_mode_log(K, l, Y1, Y2);
                if (std::isfinite(est) && std::isfinite(maxlog) && est < maxlog - cut) {
                    tail += std::exp(est);
                    continue;
                }
                Complex v = apply_transformation_law(ev.coset_mode(K, l, h.a), k, l, h.x, h.y);
                note(v);
                total += v;
            }
        }
        for (long k = -tr.k_max; k <= tr.k_max; ++k) {
            const long K = std::labs(k);
            if (!has_coset_mode(model, K, l)) continue;
            if (K > 0 && model.mklw().size()) {
                bool growing = false;
                for (int w = 0; w < 6; ++w) growing = growing || model.mklw().count({K, l, w});
                if (growing) tail = kInf;
            }
            if (std::isfinite(tail)) tail += excluded_tail(model, K, l, x, y1, y2, tr.coset_bound);
        }
    }
    res.value = total;
    res.tail_bound = tail;
    res.terms = ev.evals;
    return res;
}

GroupPoint left_unipotent(const Real& x, const Real& y, const Real& z, const GroupPoint& g) {
    // n(x,y,z) n(x',y',z') = n(x + x', y + y', z + z' + x y')
    return GroupPoint{g.x + x, g.y + y, g.z + z + x * g.y, g.a};
}

namespace {

void check_order(int order) {
    if (order < 1) throw DomainError("quadrature order must be >= 1");
}

Real node(int i, int n, prec_t p) {
    Real r = Real::from_long(i, p);
    r /= static_cast<double>(n);
    return r;
}

// e^{-2 pi i (a u + b v)} at nodes u = i/n, v = j/n, exact reduction of the phase
Complex node_char(long a, int i, long b, int j, int n, prec_t p) {
    long num = ((a * i + b * j) % n + n) % n;
    Real th = Real::from_long(-num, p);
    th /= static_cast<double>(n);
    return expi(Real::pi(p) * 2.0 * th);
}

}  // namespace

Complex project_mn(const Evaluatable& F, long m, long n, const GroupPoint& g, int order) {
    check_order(order);
    const prec_t p = std::max(g.a.prec(), g.x.prec());
    Complex s(p);
    Real zero(p);
    for (int j = 0; j < order; ++j)      // y
        for (int i = 0; i < order; ++i) {  // z
            GroupPoint h = left_unipotent(zero, node(j, order, p), node(i, order, p), g);
            s += F(h) * node_char(m, i, n, j, order, p);
        }
    return s / static_cast<double>(order * order);
}

Complex project_k0l(const Evaluatable& F, long k, long l, const GroupPoint& g, int order) {
    check_order(order);
    const prec_t p = std::max(g.a.prec(), g.x.prec());
    Complex s(p);
    for (int i = 0; i < order; ++i)          // x
        for (int j = 0; j < order; ++j) {      // y
            Complex cz(p);
            Complex ch = node_char(k, i, l, j, order, p);
            for (int q = 0; q < order; ++q)  // z
                cz += F(left_unipotent(node(i, order, p), node(j, order, p), node(q, order, p), g));
            s += cz * ch;
        }
    return s / static_cast<double>(order) / static_cast<double>(order * order);
}

Complex project_mn(const CoefficientModel& model, long m, long n, const GroupPoint& g, int order,
                   const PrecisionContext& ctx, KernelCache* cache) {
    check_order(order);
    ctx.validate();
    const Truncation& tr = model.truncation;
    check_truncation(tr);
    ModeEval ev{model, ctx, cache};
    Complex total(ctx.prec());
    // the constant and alpha_1 terms do not depend on y, z
    if (divides(order, m) && divides(order, n)) {
        total += ev.constant(g.a);
        for (long k = -tr.k_max; k <= tr.k_max; ++k) {
            if (k == 0 || !has_alpha1_mode(model, std::labs(k))) continue;
            total += apply_transformation_law(ev.alpha1(std::labs(k), g.a), k, 0, g.x, g.y);
        }
    }
    std::vector<CosetRep> reps = coset_enumerate(tr.coset_bound);
    for (long l = 1; l <= tr.l_max; ++l)
        for (const auto& r : reps) {
            // z-sum of e^{2 pi i (l c - m) z}, y-sum of e^{2 pi i (l d - n) y}
            if (!divides(order, l * r.c - m) || !divides(order, l * r.d - n)) continue;
            GroupPoint h = translate(r, g);
            for (long k = -tr.k_max; k <= tr.k_max; ++k) {
                const long K = std::labs(k);
                if (!has_coset_mode(model, K, l)) continue;
                total += apply_transformation_law(ev.coset_mode(K, l, h.a), k, l, h.x, h.y);
            }
        }
    return total;
}

Complex project_k0l(const CoefficientModel& model, long k0, long l0, const GroupPoint& g, int order,
                    const PrecisionContext& ctx, KernelCache* cache) {
    check_order(order);
    ctx.validate();
    const Truncation& tr = model.truncation;
    check_truncation(tr);
    const prec_t p = ctx.prec();
    ModeEval ev{model, ctx, cache};
    std::vector<CosetRep> reps = coset_enumerate(tr.coset_bound);
    Complex total(p);
    Real zero(p);
    for (int i = 0; i < order; ++i) {
        GroupPoint gi = left_unipotent(node(i, order, p), zero, zero, g);
        Complex at(p);
        if (divides(order, l0)) {
            at += ev.constant(gi.a);
            for (long k = -tr.k_max; k <= tr.k_max; ++k) {
                if (k == 0 || !has_alpha1_mode(model, std::labs(k))) continue;
                at += apply_transformation_law(ev.alpha1(std::labs(k), gi.a), k, 0, gi.x, gi.y);
            }
        }
        for (long l = 1; l <= tr.l_max; ++l)
            for (const auto& r : reps) {
                if (!divides(order, l * r.c) || !divides(order, l * r.d - l0)) continue;
                GroupPoint h = translate(r, gi);
                for (long k = -tr.k_max; k <= tr.k_max; ++k) {
                    const long K = std::labs(k);
                    if (!has_coset_mode(model, K, l)) continue;
                    at += apply_transformation_law(ev.coset_mode(K, l, h.a), k, l, h.x, h.y);
                }
            }
        total += at * node_char(k0, i, 0, 0, order, p);
    }
    return total / static_cast<double>(order);
}

CosetRep gamma_select(long k, long l, double y1) {
    if (k == 0 || l == 0) throw DomainError("gamma_select needs k, l != 0");
    const long ak = std::labs(k), al = std::labs(l);
    if (ak < al) throw DomainError("gamma_select needs |k| >= |l|");
    if (!(y1 > 0 && y1 < 1)) throw DomainError("gamma_select needs 0 < y1 < 1");
    CosetRep r;
    if (ak < 8 * al) {
        r = CosetRep::from_cd(0, 1);
    } else {
        // ceil((|k|/|l|)^{1/3}) in integers: least n with n^3 |l| >= |k|
        long n = static_cast<long>(std::cbrt(static_cast<double>(ak) / static_cast<double>(al)));
        while (n > 1 && (n - 1) * (n - 1) * (n - 1) * al >= ak) --n;
        while (n * n * n * al < ak) ++n;
        r = CosetRep::from_cd(1, n);
    }
    const double ratio = std::cbrt(static_cast<double>(ak) / static_cast<double>(al));
    const double dl = std::hypot(static_cast<double>(r.c) * y1, static_cast<double>(r.d));
    if (!(0.5 * ratio < dl && dl < 2 * ratio))
        throw std::logic_error("gamma_select: delta outside (|k/l|^{1/3}/2, 2|k/l|^{1/3})");
    return r;
}

namespace {

struct CosetDelta {
    long c, d;
    double delta;
};

// coprime (c, d) with c > 0 and |c z + d| <= bound; (-c, -d) has the same delta
std::vector<CosetDelta> cosets_by_delta(double x, double y1, double bound, bool c_nonzero) {
    std::vector<CosetDelta> out;
    long cmax = static_cast<long>(std::floor(bound / y1));
    for (long c = c_nonzero ? 1 : 0; c <= cmax; ++c) {
        double rest = bound * bound - (c * y1) * (c * y1);
        if (rest < 0) continue;
        double w = std::sqrt(rest);
        long dlo = static_cast<long>(std::ceil(-c * x - w)), dhi = static_cast<long>(std::floor(-c * x + w));
        for (long d = dlo; d <= dhi; ++d) {
            if (c == 0 && d <= 0) continue;
            if (std::gcd(c, d) != 1) continue;
            double dl = std::hypot(c * x + d, c * y1);
            if (dl <= bound) out.push_back({c, d, dl});
        }
    }
    std::sort(out.begin(), out.end(), [](const CosetDelta& a, const CosetDelta& b) {
        if (a.delta != b.delta) return a.delta < b.delta;
        if (a.c != b.c) return a.c < b.c;
        return a.d < b.d;
    });
    return out;
}

// Gauss-Legendre nodes on [-1, 1]
struct GL16 {
    double x[16], w[16];
    GL16() {
        const int n = 16;
        for (int i = 0; i < n; ++i) {
            double z = std::cos(M_PI * (i + 0.75) / (n + 0.5)), pp = 0;
            for (int it = 0; it < 100; ++it) {
                double p1 = 1, p2 = 0;
                for (int j = 1; j <= n; ++j) {
                    double p3 = p2;
                    p2 = p1;
                    p1 = ((2 * j - 1) * z * p2 - (j - 1) * p3) / j;
                }
                pp = n * (z * p1 - p2) / (z * z - 1);
                double dz = p1 / pp;
                z -= dz;
                if (std::fabs(dz) < 1e-16) break;
            }
            x[i] = z;
            w[i] = 2 / ((1 - z * z) * pp * pp);
        }
    }
};

const GL16& gl16() {
    static const GL16 g;
    return g;
}

// sum_{k=a}^{b} exp(al k^{1/3} - be k + off): direct for short ranges, otherwise direct
// head plus Euler-Maclaurin (integral in u = k^{1/3}, two correction terms)
double concave_sum(long a, long b, double al, double be, double off) {
    if (b < a) return 0;
    auto f = [&](double k) { return std::exp(al * std::cbrt(k) - be * k + off); };
    const long head = 64;
    if (b - a <= 4 * head) {
        double s = 0;
        for (long k = a; k <= b; ++k) s += f(static_cast<double>(k));
        return s;
    }
    double s = 0;
    for (long k = a; k < a + head; ++k) s += f(static_cast<double>(k));
    const double A = static_cast<double>(a + head), B = static_cast<double>(b);
    // integral of 3 u^2 exp(al u - be u^3 + off) over [A^{1/3}, B^{1/3}]
    const double ua = std::cbrt(A), ub = std::cbrt(B);
    const int panels = 48;
    const GL16& q = gl16();
    double integ = 0, h = (ub - ua) / panels;
    for (int p = 0; p < panels; ++p) {
        double mid = ua + (p + 0.5) * h;
        for (int i = 0; i < 16; ++i) {
            double u = mid + 0.5 * h * q.x[i];
            integ += q.w[i] * 0.5 * h * 3 * u * u * std::exp(al * u - be * u * u * u + off);
        }
    }
    auto df = [&](double k) { return f(k) * (al / (3 * std::cbrt(k * k)) - be); };
    s += integ + 0.5 * (f(A) + f(B)) + (df(B) - df(A)) / 12.0;
    return s;
}

}  // namespace

MajorantReport majorant_sums(double x, double y1, double y2, const MajorantTruncation& t) {
    const double lo = std::sqrt(3.0) / 2;
    if (!(std::fabs(x) <= 0.5)) throw DomainError("majorant_sums needs |x| <= 1/2");
    if (!(y1 >= lo - 1e-15 && y2 >= lo - 1e-15)) throw DomainError("majorant_sums needs y1, y2 >= sqrt(3)/2");
    MajorantReport rep;
    rep.x = x;
    rep.y1 = y1;
    rep.y2 = y2;

    const double rate1 = (18 * y2 - std::sqrt(6 / y1)) / 72;
    double excess = -kInf;
    long samples = 0;

    // S1 over one coset: 0 < l <= k <= 27 y2^3 delta^3
    auto s1_coset = [&](double dl) {
        const double be = y1 / (4 * dl * dl);
        const long K1 = static_cast<long>(std::floor(27 * y2 * y2 * y2 * dl * dl * dl + 1e-9));
        double c1 = 0, first = 0;
        for (long l = 1; l <= K1; ++l) {
            const double al = std::cbrt(static_cast<double>(l * l)) / 8, off = -l * y2 * dl / 4;
            // peak of al k^{1/3} - be k bounds every term of this l
            double kstar = std::pow(al / (3 * be), 1.5);
            double peak = (kstar >= l ? al * std::cbrt(kstar) - be * kstar : al * std::cbrt(double(l)) - be * l) + off;
            if (l > 1 && peak + std::log(static_cast<double>(K1)) < std::log(first) - 40) break;
            double v = concave_sum(l, K1, al, be, off);
            if (l == 1) first = std::max(v, std::exp(peak));
            c1 += v;
        }
        return c1;
    };
    // S3 over one coset: 0 < k < l; `probe` records the exponent test
    auto s3_coset = [&](double dl, bool probe) {
        const double be = y1 / (4 * dl * dl), r = std::exp(1.0 / 8 - y2 * dl / 4);
        double c3 = 0;
        for (long l = 2;; ++l) {
            // every term with this l is at most exp(l/8 - l y2 delta/4)
            double rl = std::pow(r, static_cast<double>(l));
            if (rl < 1e-300 || l * rl < 1e-30 * c3) break;
            double cl = std::cbrt(static_cast<double>(l));
            for (long k = 1; k < l; ++k) {
                double e = std::cbrt(static_cast<double>(k * k)) * cl / 8 - k * be - l * y2 * dl / 4;
                c3 += std::exp(e);
                if (probe && l * dl >= 1 && (k == 1 || k == l - 1 || k == l / 2)) {
                    excess = std::max(excess, e + l * y2 * dl / 16);
                    ++samples;
                }
            }
        }
        return c3;
    };

    double B = t.coset_delta;
    if (B <= 0) {
        // first radius where the cosets in its last tenth (about 0.6 * 2 pi B * 0.1 B / y1 of them,
        // both signs) carry less than 1e-12 of the innermost coset's share
        const double dmin = std::sqrt(lattice_form_min(x, y1));
        const double ref1 = s1_coset(std::max(dmin, y1)), ref3 = s3_coset(std::max(dmin, y1), false);
        B = 10;
        for (;; B += 10) {
            double n = 0.6 * 2 * M_PI * B * 0.1 * B / y1;
            if (n * s1_coset(0.9 * B) < 1e-12 * ref1 && n * s3_coset(0.9 * B, false) < 1e-12 * ref3) break;
        }
    }
    rep.coset_delta = B;
    // In S2 every l-term is at most exp(-Cs k / delta^2) (its maximum over real l), so a
    // coset contributes only when delta^2 > Cs k / 46; past the k where that window closes
    // nothing is left above e^-46.
    const double Cs = (54 * y1 * y2 * y2 - 1) / (216 * y2 * y2);
    long K2 = t.s2_kmax;
    if (K2 <= 0) K2 = static_cast<long>(1.2 * std::pow(46 / (9 * y2 * y2 * Cs), 3)) + 100;
    rep.s2_kmax = K2;

    std::vector<CosetDelta> cos = cosets_by_delta(x, y1, B, true);
    rep.cosets = static_cast<long>(2 * cos.size());
    const double last_from = 0.9 * B;

    // weight 2 for (c, d) and (-c, -d)
    double s1 = 0, s1_last = 0, s3 = 0, s3_last = 0, env1 = 0, env3 = 0;
    for (const auto& cd : cos) {
        const double dl = cd.delta;
        double c1 = s1_coset(dl);
        s1 += 2 * c1;
        if (dl > last_from) s1_last += 2 * c1;
        env1 += 2 * std::pow(3 * y2 * dl, 6) * std::exp(-rate1 * dl);

        double r = std::exp(1.0 / 8 - y2 * dl / 4);
        env3 += 2 * r / ((1 - r) * (1 - r));
        double c3 = s3_coset(dl, true);
        s3 += 2 * c3;
        if (dl > last_from) s3_last += 2 * c3;
    }
    rep.S1 = s1;
    rep.S3 = s3;
    rep.S1_last = s1 > 0 ? s1_last / s1 : 0;
    rep.S3_last = s3 > 0 ? s3_last / s3 : 0;
    rep.S1_env_cosets = env1;
    rep.S3_env = env3;
    rep.S3_exponent_excess = excess;
    rep.S3_exponent_samples = samples;

    // (3 y2)^6 sum over all nonzero lattice vectors; radius where |v|^7 e^{-|v|/12} is negligible
    {
        double R = 100;
        while (7 * std::log(R) - R / 12 > -40) R += 50;
        R = std::max(R, B);
        double s = 0;
        long cmax = static_cast<long>(std::floor(R / y1));
        for (long c = -cmax; c <= cmax; ++c) {
            double rest = R * R - (c * y1) * (c * y1);
            if (rest < 0) continue;
            double w = std::sqrt(rest);
            long dlo = static_cast<long>(std::ceil(-c * x - w)), dhi = static_cast<long>(std::floor(-c * x + w));
            for (long d = dlo; d <= dhi; ++d) {
                if (c == 0 && d == 0) continue;
                double v = std::hypot(c * x + d, c * y1);
                double v3 = v * v * v;
                s += v3 * v3 * std::exp(-v / 12);
            }
        }
        rep.S1_env_lattice = std::pow(3 * y2, 6) * s;
    }

    // S2: k > 0, cosets with delta < k^{1/3} / (3 y2), 0 < l <= k
    {
        const double dmax = std::cbrt(static_cast<double>(K2)) / (3 * y2);
        std::vector<CosetDelta> c2 = cosets_by_delta(x, y1, dmax, true);
        // all nonzero lattice vectors for N(z, T), sorted by length
        std::vector<double> lat;
        long cmax = static_cast<long>(std::floor(dmax / y1));
        for (long c = -cmax; c <= cmax; ++c) {
            double rest = dmax * dmax - (c * y1) * (c * y1);
            if (rest < 0) continue;
            double w = std::sqrt(rest);
            long dlo = static_cast<long>(std::ceil(-c * x - w)), dhi = static_cast<long>(std::floor(-c * x + w));
            for (long d = dlo; d <= dhi; ++d)
                if (c != 0 || d != 0) lat.push_back(std::hypot(c * x + d, c * y1));
        }
        std::sort(lat.begin(), lat.end());
        double s2 = 0, s2_last = 0, e7a = 0, e7b = 0;
        const long last_k = static_cast<long>(std::ceil(0.9 * K2));
        for (long k = 1; k <= K2; ++k) {
            const double kc = std::cbrt(static_cast<double>(k)), T = kc / (3 * y2);
            double ck = 0;
            const double dlo = std::sqrt(Cs * k / 46);
            auto from = std::lower_bound(c2.begin(), c2.end(), dlo,
                                         [](const CosetDelta& a, double v) { return a.delta < v; });
            for (auto it = from; it != c2.end(); ++it) {
                const CosetDelta& cd = *it;
                if (!(cd.delta < T)) break;
                const double dl = cd.delta, base = -k * y1 / (4 * dl * dl);
                auto term = [&](long l) {
                    return std::exp(kc * std::cbrt(static_cast<double>(l * l)) / 8 + base - l * y2 * dl / 4);
                };
                // concave in l: walk out from the maximizer
                long ls = std::clamp(static_cast<long>(std::llround(k / std::pow(3 * y2 * dl, 3))), 1L, k);
                double peak = term(ls), sum = peak;
                for (long l = ls + 1; l <= k; ++l) {
                    double v = term(l);
                    sum += v;
                    if (v < 1e-17 * peak) break;
                }
                for (long l = ls - 1; l >= 1; --l) {
                    double v = term(l);
                    sum += v;
                    if (v < 1e-17 * peak) break;
                }
                ck += 2 * sum;
            }
            s2 += ck;
            if (k >= last_k) s2_last += ck;
            long N = std::lower_bound(lat.begin(), lat.end(), T) - lat.begin();
            e7a += static_cast<double>(k) * N * std::exp(-9.0 / 8 * kc * y1 * y2 * y2);
            e7b += std::pow(static_cast<double>(k), 5.0 / 3) / (y2 * y2) * std::exp(-27.0 / 64 * std::sqrt(3.0) * kc);
        }
        rep.S2 = s2;
        rep.S2_last = s2 > 0 ? s2_last / s2 : 0;
        rep.S2_env_count = e7a;
        rep.S2_env_closed = 2 * e7b;  // k != 0
    }

    auto finite = [](double v) { return std::isfinite(v) && v >= 0; };
    rep.s1_ok = finite(rep.S1) && rep.S1_last < 1e-8 && rep.S1 <= rep.S1_env_cosets && rep.S1_env_cosets <= rep.S1_env_lattice;
    rep.s2_ok = finite(rep.S2) && rep.S2_last < 1e-8 && rep.S2 <= rep.S2_env_count;
    rep.s3_ok = finite(rep.S3) && rep.S3_last < 1e-8 && rep.S3 <= rep.S3_env && rep.S3_exponent_excess < 0;
    return rep;
}

}  // namespace sl3
