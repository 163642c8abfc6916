#include <random>

#include <benchmark/benchmark.h>

#include "cgnet/activation.hpp"
#include "cgnet/cg_product.hpp"
#include "cgnet/sht.hpp"
#include "cgnet/so3.hpp"

namespace {

cgnet::CovariantActivation random_activation(const cgnet::ActivationType& type, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    auto a = cgnet::CovariantActivation::zeros(type);
    for (auto& p : a.parts) {
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            const double re = normal(rng);
            p.data()[i] = {re, normal(rng)};
        }
    }
    return a;
}

// Arguments: band limit L, uniform fragment count tau.
void BM_CgNonlinearity(benchmark::State& state) {
    const int L = static_cast<int>(state.range(0));
    const int tau = static_cast<int>(state.range(1));
    const auto type = cgnet::ActivationType::uniform(L, tau);
    const cgnet::CGTable table(L);
    const cgnet::CGLayout layout(type, L, cgnet::PairPolicy::Unordered);
    const auto input = random_activation(type, 7);
    std::uint64_t madds = 0;
    for (auto _ : state) {
        madds = 0;
        benchmark::DoNotOptimize(cgnet::cg_product(input, table, layout, &madds));
    }
    state.counters["madds"] = static_cast<double>(madds);
    state.counters["N"] = static_cast<double>(type.scalar_count());
}
BENCHMARK(BM_CgNonlinearity)->Args({3, 8})->Args({3, 16})->Args({3, 32})->Args({5, 4})->Args({5, 8});

void BM_WignerD(benchmark::State& state) {
    const int ell = static_cast<int>(state.range(0));
    const cgnet::EulerAngles r{0.3, 1.1, -0.7};
    for (auto _ : state) benchmark::DoNotOptimize(cgnet::wigner_D(ell, r));
}
BENCHMARK(BM_WignerD)->Arg(2)->Arg(6)->Arg(12);

void BM_ForwardSht(benchmark::State& state) {
    const int b = static_cast<int>(state.range(0));
    cgnet::SphericalSignal signal;
    signal.bandwidth = b;
    signal.channels.push_back(cgnet::ComplexMatrix::Random(2 * b, 2 * b));
    for (auto _ : state) benchmark::DoNotOptimize(cgnet::forward_sht(signal, b - 1));
}
BENCHMARK(BM_ForwardSht)->Arg(8)->Arg(16)->Arg(32);

}  // namespace
BENCHMARK_MAIN();
