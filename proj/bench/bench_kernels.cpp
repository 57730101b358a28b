// Serial reference implementations against the library kernels, run with
// Exec::serial and Exec::parallel.

#include <benchmark/benchmark.h>

#include "caprimes/certifier.hpp"
#include "caprimes/oracle.hpp"
#include "caprimes/reference.hpp"

using namespace caprimes;

namespace {

const SparseIntMatrix& matrix(int n) {
    static const auto m4 = build_matrix(4, Tuple({1, 2, 3}), GTable(4)).matrix;
    static const auto m5 = build_matrix(5, Tuple({1, 2, 3, 5}), GTable(5)).matrix;
    return n == 4 ? m4 : m5;
}

constexpr std::uint64_t kPrime = 1'000'000'007;

void BM_RankModP_Reference(benchmark::State& s) {
    const auto& m = matrix(static_cast<int>(s.range(0)));
    for (auto _ : s) benchmark::DoNotOptimize(reference::rank_mod_p(m, kPrime));
}

void BM_RankModP_Serial(benchmark::State& s) {
    const auto& m = matrix(static_cast<int>(s.range(0)));
    for (auto _ : s) benchmark::DoNotOptimize(rank_mod_p(m, kPrime, Exec::serial));
}

void BM_RankModP_Parallel(benchmark::State& s) {
    const auto& m = matrix(static_cast<int>(s.range(0)));
    for (auto _ : s) benchmark::DoNotOptimize(rank_mod_p(m, kPrime, Exec::parallel));
}

void BM_RankQ_Reference(benchmark::State& s) {
    const auto& m = matrix(4);
    for (auto _ : s) benchmark::DoNotOptimize(reference::rank_rational(m));
}

void BM_RankQ_Bareiss(benchmark::State& s) {
    const auto& m = matrix(4);
    for (auto _ : s) benchmark::DoNotOptimize(rank_over_rationals(m, s.range(0) ? Exec::parallel : Exec::serial));
}

void BM_MinorGcd_Reference(benchmark::State& s) {
    const auto& m = matrix(4);
    for (auto _ : s) benchmark::DoNotOptimize(reference::minor_gcd_exhaustive(m));
}

void BM_MinorGcd_Exhaustive(benchmark::State& s) {
    const auto& m = matrix(4);
    for (auto _ : s)
        benchmark::DoNotOptimize(minor_gcd_exhaustive(m, 10'000, s.range(0) ? Exec::parallel : Exec::serial));
}

void BM_MinorGcd_Modular(benchmark::State& s) {
    const auto& m = matrix(static_cast<int>(s.range(0)));
    const Integer minor = nonzero_maximal_minor(m).value;
    for (auto _ : s) benchmark::DoNotOptimize(minor_gcd_modular(m, minor));
}

void BM_Search_Reference(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(reference::search_counterexamples(5, 5));
}

void BM_Search(benchmark::State& s) {
    for (auto _ : s)
        benchmark::DoNotOptimize(
            search_counterexamples(5, 5, 1, kDefaultSearchBudget, s.range(0) ? Exec::parallel : Exec::serial));
}

void BM_BadPrimes_Reference(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(reference::bad_primes(4, {}));
}

void BM_BadPrimes(benchmark::State& s) {
    RunOptions o;
    o.jobs = static_cast<int>(s.range(0));
    o.symmetry = false;
    for (auto _ : s) benchmark::DoNotOptimize(bad_primes(4, o));
}

}  // namespace

BENCHMARK(BM_RankModP_Reference)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RankModP_Serial)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RankModP_Parallel)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RankQ_Reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RankQ_Bareiss)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MinorGcd_Reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MinorGcd_Exhaustive)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MinorGcd_Modular)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Search_Reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Search)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BadPrimes_Reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BadPrimes)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
