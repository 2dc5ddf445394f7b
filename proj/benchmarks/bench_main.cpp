#include <benchmark/benchmark.h>

#include <random>

#include "xchain/consensus.hpp"
#include "xchain/format.hpp"
#include "xchain/sim.hpp"
#include "xchain/topology.hpp"

using namespace xchain;

namespace {

std::vector<ChainId> ids(std::size_t n) {
    std::vector<ChainId> out;
    for (std::uint32_t i = 1; i <= n; ++i) out.push_back(ChainId{i});
    return out;
}

void BM_PowMine(benchmark::State& state) {
    const std::vector<std::uint8_t> prefix{'b', 'e', 'n', 'c', 'h'};
    const auto bits = static_cast<unsigned>(state.range(0));
    std::uint64_t start = 0;
    for (auto _ : state) {
        auto nonce = pow_mine(prefix, bits, start, std::uint64_t{1} << 24);
        benchmark::DoNotOptimize(nonce);
        start = nonce ? *nonce + 1 : start + (std::uint64_t{1} << 24);
    }
}
BENCHMARK(BM_PowMine)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_StronglyConnected(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    // Ring plus random chords, kept under the degree cap.
    TopologyGraph g = build_topology(TopologyKind::Ring, ids(n), std::nullopt, 4);
    std::mt19937 rng(3);
    std::uniform_int_distribution<std::uint32_t> pick(1, static_cast<std::uint32_t>(n));
    for (std::size_t i = 0; i < n; ++i) {
        Edge e{ChainId{pick(rng)}, ChainId{pick(rng)}};
        if (e.from != e.to && g.out_degree(e.from) < 4 && !g.has_edge(e)) g.add_edge(e);
    }
    for (auto _ : state) benchmark::DoNotOptimize(is_strongly_connected(g));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_StronglyConnected)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_Transf(benchmark::State& state) {
    const auto chains = ids(2);
    const TopologyGraph g = build_topology(TopologyKind::Full, chains);
    std::map<ChainId, FormatSpec> specs;
    for (auto c : chains) specs.emplace(c, variant_format(FormatId{c.value}));
    const auto reg = registry_for(g, specs);
    Transaction tx;
    tx.sender = "alice";
    tx.receiver = "bob";
    tx.amount = 42;
    tx.kind = TxKind::CrossChain;
    tx.origin_chain = ChainId{1};
    tx = finalize_original(tx, specs.at(ChainId{1}));
    for (auto _ : state) benchmark::DoNotOptimize(transf(tx, FormatId{1}, FormatId{2}, reg));
}
BENCHMARK(BM_Transf);

void BM_SimulationTick(benchmark::State& state) {
    Scenario s = preset(state.range(0) == 0 ? "s1_ring" : "s1_router");
    s.duration_ticks = 1u << 30;
    Simulation sim(s);
    for (int i = 0; i < 20; ++i) sim.step();
    for (auto _ : state) sim.step();
}
BENCHMARK(BM_SimulationTick)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
