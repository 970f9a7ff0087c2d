#include <benchmark/benchmark.h>

#include "haarfree/exprparse/parser.hpp"
#include "haarfree/freelimit/moment_engine.hpp"
#include "haarfree/fubm/density.hpp"
#include "haarfree/rmt/ensembles.hpp"
#include "haarfree/rmt/spectral.hpp"

using namespace haarfree;

static void HermitianEigenvalues(benchmark::State& state) {
    const auto N = state.range(0);
    rmt::Philox rng(1);
    const ComplexMatrix U = rmt::sample_haar_unitary(N, rng);
    const ComplexMatrix A = U + U.adjoint();
    for (auto _ : state) benchmark::DoNotOptimize(rmt::eigvals_hermitian(A));
}
BENCHMARK(HermitianEigenvalues)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void HaarSample(benchmark::State& state) {
    const auto N = state.range(0);
    rmt::Philox rng(2);
    for (auto _ : state) benchmark::DoNotOptimize(rmt::sample_haar_unitary(N, rng));
}
BENCHMARK(HaarSample)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

// Fresh engine each iteration so the word cache does not hide the recursion.
static void FreeMomentTwoSymbols(benchmark::State& state) {
    const auto P = parse::parse("U1 + U1' + U2 + U2'", 2, 0);
    poly::Polynomial Pk = poly::Polynomial::one(P.alphabet());
    for (int k = 0; k < state.range(0); ++k) Pk = Pk * P;
    for (auto _ : state) {
        freelim::MomentEngine engine(freelim::AlphabetAssignment::haar(2));
        benchmark::DoNotOptimize(engine.tau_poly(Pk));
    }
}
BENCHMARK(FreeMomentTwoSymbols)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BrownianDensity(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(fubm::SpectralDensity(8.0, static_cast<int>(state.range(0))).kappa());
}
BENCHMARK(BrownianDensity)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
