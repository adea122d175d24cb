#include <benchmark/benchmark.h>

#include "sl3/bessel.hpp"
#include "sl3/fourier.hpp"
#include "sl3/hecke.hpp"
#include "sl3/whittaker.hpp"

using namespace sl3;

static void BM_BesselK(benchmark::State& st) {
    auto bits = static_cast<prec_t>(st.range(0));
    auto ctx = PrecisionContext::with_bits(bits);
    BesselOrder nu(0.3, 0.2, bits);
    Real x(3.5, bits);
    for (auto _ : st) benchmark::DoNotOptimize(bessel_k(nu, x, ctx));
}
BENCHMARK(BM_BesselK)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);

static void BM_WeylSum(benchmark::State& st) {
    auto bits = static_cast<prec_t>(st.range(0));
    auto ctx = PrecisionContext::with_bits(bits);
    auto lam = SatakeParameter::parse("0.3+0.2i,0.1-0.2i,auto", bits);
    TorusPoint p(1.2, 0.9, bits);
    for (auto _ : st) benchmark::DoNotOptimize(w_weylsum(lam, p, ctx));
}
BENCHMARK(BM_WeylSum)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_DoubleIntegral(benchmark::State& st) {
    auto ctx = PrecisionContext::with_bits(96);
    auto lam = SatakeParameter::parse("0.3+0.2i,0.1-0.2i,auto", 96);
    TorusPoint p(1.2, 0.9, 96);
    for (auto _ : st) benchmark::DoNotOptimize(w_vt(lam, p, ctx));
}
BENCHMARK(BM_DoubleIntegral)->Unit(benchmark::kMillisecond);

static void BM_Synthesize(benchmark::State& st) {
    const prec_t P = 96;
    auto ctx = PrecisionContext::with_bits(P);
    CoefficientModel m(SatakeParameter::parse("0.4,0.1,auto", P));
    m.set_ckl(1, 1, Complex(1, 0, P));
    m.set_ckl(2, 1, Complex(0.5, 0, P));
    m.truncation = {2, 1, static_cast<double>(st.range(0))};
    GroupPoint g{Real(0.1, P), Real(0.2, P), Real(0.3, P), TorusPoint(1.0, 1.0, P)};
    // fresh cache each round, so kernel evaluations are timed too
    for (auto _ : st) {
        KernelCache cache;
        benchmark::DoNotOptimize(synthesize(m, g, ctx, &cache));
    }
}
BENCHMARK(BM_Synthesize)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_Majorants(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(majorant_sums(0, 1, 1));
}
BENCHMARK(BM_Majorants)->Unit(benchmark::kMillisecond);

static void BM_Hecke(benchmark::State& st) {
    auto f = QExpansion::parse("q^-3 - 1/2 q^-2 + 5 q^-1");
    long n = st.range(0);
    for (auto _ : st) benchmark::DoNotOptimize(hecke_apply(n, f));
}
BENCHMARK(BM_Hecke)->Arg(12)->Arg(360)->Arg(5040);

static void BM_HeckeCombo(benchmark::State& st) {
    Schedule c, e;
    for (long n = 1; n <= 40; ++n) c.entries[n] = mpq_class(1, n);
    e.entries = {{1, 1}, {2, mpq_class(1, 3)}};
    for (auto _ : st) benchmark::DoNotOptimize(hecke_combo(c, e, st.range(0)));
}
BENCHMARK(BM_HeckeCombo)->Arg(40)->Arg(400);
BENCHMARK_MAIN();
