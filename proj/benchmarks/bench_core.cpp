#include <benchmark/benchmark.h>

#include "qml/datasets.hpp"
#include "qml/kernel.hpp"
#include "qml/linalg.hpp"
#include "qml/qnn.hpp"

using namespace qml;

namespace {

StateVector random_state(uint32_t n, uint64_t seed) {
    Rng rng = substream(seed, {0});
    return haar_state(n, rng);
}

void BM_PauliProduct(benchmark::State& state) {
    Rng rng = substream(1, {0});
    const uint32_t n = 16;
    PauliString p(n, uniform_index(rng, uint64_t{1} << (2 * n)));
    PauliString q(n, uniform_index(rng, uint64_t{1} << (2 * n)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(pauli_product(p, q));
    }
}
BENCHMARK(BM_PauliProduct);

void BM_PauliRotation(benchmark::State& state) {
    const uint32_t n = static_cast<uint32_t>(state.range(0));
    StateVector s = random_state(n, 2);
    PauliString h(n, 0b0110110110);
    for (auto _ : state) {
        apply_pauli_rotation(s, PauliString(n, h.index() & ((uint64_t{1} << (2 * n)) - 1)), 0.3);
        benchmark::DoNotOptimize(s.amp(0));
    }
    state.SetItemsProcessed(state.iterations() * (int64_t{1} << n));
}
BENCHMARK(BM_PauliRotation)->Arg(8)->Arg(10)->Arg(12);

void BM_PauliCoefficient(benchmark::State& state) {
    const uint32_t n = static_cast<uint32_t>(state.range(0));
    StateVector s = random_state(n, 3);
    PauliString p = PauliString::identity(n).with(0, 1).with(n - 1, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pauli_coefficient(s, p));
    }
}
BENCHMARK(BM_PauliCoefficient)->Arg(8)->Arg(12);

void BM_Jacobian(benchmark::State& state) {
    const uint32_t n = 8;
    const int depth = static_cast<int>(state.range(0));
    Rng rng = substream(4, {0});
    WindowAssignment wins = make_windows(n, 3, Connectivity::OneDCyclic, rng);
    Ansatz ansatz = sample_ansatz(n, 3, depth, wins, HamiltonianFamily::XYZ, rng);
    LocalZObservable obs = sample_coeffs(n, 1.0, rng);
    std::vector<StateVector> states;
    for (int i = 0; i < 8; ++i) states.push_back(random_state(n, 40 + i));
    std::vector<double> theta(depth, 0.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(jacobian(ansatz, theta, states, obs));
    }
}
BENCHMARK(BM_Jacobian)->Arg(40)->Arg(160);

void BM_SymEig(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng = substream(5, {0});
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) m.at(i, j) = normal(rng);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(sym_eig(m));
    }
}
BENCHMARK(BM_SymEig)->Arg(16)->Arg(64);

void BM_GramMatrix(benchmark::State& state) {
    std::vector<StateVector> states;
    for (int i = 0; i < 32; ++i) states.push_back(random_state(10, 60 + i));
    for (auto _ : state) {
        benchmark::DoNotOptimize(gram_matrix(states));
    }
}
BENCHMARK(BM_GramMatrix);

void BM_FldcState(benchmark::State& state) {
    const uint32_t n = 10;
    uint64_t i = 0;
    for (auto _ : state) {
        Rng rng = substream(7, {i++});
        benchmark::DoNotOptimize(fldc_state(n, 4, rng));
    }
}
BENCHMARK(BM_FldcState);

}  // namespace

BENCHMARK_MAIN();
