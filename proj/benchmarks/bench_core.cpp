// Microbenchmarks for the hot paths: forward pass, fitness evaluation,
// one BP epoch, a short EA run.

#include <benchmark/benchmark.h>

#include "nnlab/bp.hpp"
#include "nnlab/dataset.hpp"
#include "nnlab/ea.hpp"
#include "nnlab/eval.hpp"
#include "nnlab/network.hpp"

using namespace nnlab;

namespace {

Topology topo(std::size_t i, std::size_t h, std::size_t o) {
    Topology t;
    t.n_inputs = i;
    t.hidden_sizes = {h};
    t.n_outputs = o;
    return t;
}

void BM_forward_982(benchmark::State& state) {
    const Network net = init_weights(topo(9, 8, 2), 1);
    const std::vector<double> input(9, 0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(forward_output(net, input));
    }
}
BENCHMARK(BM_forward_982);

void BM_fitness_blobs(benchmark::State& state) {
    const Topology t = topo(2, 6, 2);
    const Dataset d = gen_synthetic(SyntheticKind::Blobs, 200, 1);
    const Chromosome c = encode(init_weights(t, 1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fitness(c, d, t));
    }
}
BENCHMARK(BM_fitness_blobs);

void BM_bp_epoch_blobs(benchmark::State& state) {
    const Topology t = topo(2, 6, 2);
    const Dataset d = gen_synthetic(SyntheticKind::Blobs, 200, 1);
    BPConfig cfg;
    Network net = init_weights(t, 1);
    Gradients velocity = zero_gradients(net);
    for (auto _ : state) {
        bp_epoch(net, d, cfg, velocity);
    }
}
BENCHMARK(BM_bp_epoch_blobs);

void BM_evolve_xor_50gen(benchmark::State& state) {
    const Topology t = topo(2, 4, 2);
    const Dataset d = gen_synthetic(SyntheticKind::Xor, 4, 0);
    EAConfig cfg;
    cfg.generations = 50;
    cfg.population_size = 10;
    for (auto _ : state) {
        cfg.seed = static_cast<std::uint64_t>(state.iterations());
        benchmark::DoNotOptimize(evolve(t, d, cfg));
    }
}
BENCHMARK(BM_evolve_xor_50gen);

} // namespace

BENCHMARK_MAIN();
