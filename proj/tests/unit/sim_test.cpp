#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "xchain/error.hpp"
#include "xchain/sim.hpp"

using namespace xchain;
using fx::C;

namespace {

Scenario small_ring(std::uint32_t n = 3, double rate = 600, Tick duration = 120) {
    Scenario s;
    s.name = "small_ring";
    s.topology.kind = TopologyKind::Ring;
    for (std::uint32_t i = 1; i <= n; ++i) {
        s.topology.nodes.push_back(C(i));
        ChainSpec c;
        c.id = C(i);
        c.consensus = fx::pow_config(8);
        s.chains.push_back(c);
        if (rate > 0) s.workloads.push_back({C(i), rate, TxKind::CrossChain, std::nullopt, 1, 100});
    }
    s.duration_ticks = duration;
    s.seed = 5;
    return s;
}

}  // namespace

TEST(Workload, PoissonArrivalsMatchPmf) {
    Scenario s = small_ring(2, 0);
    s.workloads.push_back({C(1), 3000, TxKind::Internal, std::nullopt, 1, 100});
    WorkloadGenerator gen(s);
    std::map<unsigned, std::uint64_t> counts;
    const int ticks = 10000;
    double sum = 0;
    for (Tick t = 1; t <= ticks; ++t) {
        const auto n = static_cast<unsigned>(gen.inject(t).size());
        ++counts[n];
        sum += n;
    }
    EXPECT_NEAR(sum / ticks, 50.0, 0.5);
    // Chi-square over bins with expected count >= 5, tails pooled.
    const double mean = 50.0;
    double chi2 = 0, lo_p = 0, hi_p = 0;
    std::uint64_t lo_n = 0, hi_n = 0;
    int bins = 0;
    const unsigned lo = 33, hi = 68;
    for (unsigned k = 0; k < lo; ++k) {
        lo_p += oracle::poisson_pmf(k, mean);
        lo_n += counts[k];
    }
    for (unsigned k = lo; k <= hi; ++k) {
        const double e = ticks * oracle::poisson_pmf(k, mean);
        chi2 += (counts[k] - e) * (counts[k] - e) / e;
        ++bins;
    }
    hi_p = 1.0;
    for (unsigned k = 0; k <= hi; ++k) hi_p -= oracle::poisson_pmf(k, mean);
    for (const auto& [k, c] : counts)
        if (k > hi) hi_n += c;
    for (auto [n, p] : {std::pair{lo_n, lo_p}, std::pair{hi_n, hi_p}}) {
        const double e = ticks * p;
        chi2 += (n - e) * (n - e) / e;
        ++bins;
    }
    EXPECT_LT(chi2, oracle::chi_square_critical_001(bins - 1));
}

TEST(Workload, ZeroRateProducesNothing) {
    Scenario s = small_ring(3, 0);
    WorkloadGenerator gen(s);
    for (Tick t = 1; t <= 100; ++t) EXPECT_TRUE(gen.inject(t).empty());
}

TEST(Workload, PairedInjectionIsMutual) {
    Scenario s = small_ring(4, 0);
    s.injections.push_back({5, {C(1), C(3)}, 10});
    WorkloadGenerator gen(s);
    EXPECT_TRUE(gen.inject(4).empty());
    const auto txs = gen.inject(5);
    ASSERT_EQ(txs.size(), 2u);
    EXPECT_EQ(txs[0].chain, C(1));
    EXPECT_EQ(txs[1].chain, C(3));
    EXPECT_EQ(txs[0].tx.dependency, (Dependency{C(3), txs[1].tx.tx_id}));
    EXPECT_EQ(txs[1].tx.dependency, (Dependency{C(1), txs[0].tx.tx_id}));
}

TEST(Workload, PairedWorkloadAlwaysComesInTwos) {
    Scenario s = small_ring(3, 0);
    s.workloads.push_back({C(1), 600, TxKind::CrossChain, C(2), 1, 100});
    WorkloadGenerator gen(s);
    for (Tick t = 1; t <= 50; ++t) {
        const auto txs = gen.inject(t);
        ASSERT_EQ(txs.size() % 2, 0u);
        for (std::size_t i = 0; i < txs.size(); i += 2) {
            EXPECT_EQ(txs[i].chain, C(1));
            EXPECT_EQ(txs[i + 1].chain, C(2));
            EXPECT_EQ(txs[i].tx.dependency->origin_tx_id, txs[i + 1].tx.tx_id);
        }
    }
}

TEST(Scenario, ValidationErrors) {
    auto s = small_ring();
    s.workloads[0].rate_per_minute = 100;
    EXPECT_THROW(validate(s), InputError);
    s.allow_any_rate = true;
    EXPECT_NO_THROW(validate(s));
    s = small_ring();
    s.workloads[0].rate_per_minute = 6000;
    EXPECT_THROW(validate(s), InputError);
    s = small_ring();
    s.workloads.push_back({C(9), 300});
    EXPECT_THROW(validate(s), InputError);
    s = small_ring();
    s.injections.push_back({0, {C(1)}, 1});
    EXPECT_THROW(validate(s), InputError);
    s = small_ring();
    s.chains.pop_back();
    EXPECT_THROW(validate(s), InputError);
}

TEST(Simulation, RefusesDisconnectedTopology) {
    auto s = small_ring();
    s.topology.kind.reset();
    s.topology.edges = {{C(1), C(2)}, {C(1), C(3)}};
    EXPECT_THROW(Simulation{s}, DomainError);
}

TEST(Simulation, IdleRunIsHeartbeatOnly) {
    const auto log = run(small_ring(3, 0, 50));
    EXPECT_TRUE(log.propagation.empty());
    ASSERT_EQ(log.flow.size(), 150u);
    for (const auto& f : log.flow) {
        EXPECT_EQ(f.bytes_out, 64u);
        EXPECT_EQ(f.bytes_in, 64u);
    }
}

TEST(Simulation, ZeroDurationGivesEmptyLog) {
    const auto log = run(small_ring(3, 600, 0));
    EXPECT_TRUE(log.flow.empty());
    EXPECT_TRUE(log.blocks.empty());
}

TEST(Simulation, DeterministicForSeed) {
    const auto a = run(small_ring());
    const auto b = run(small_ring());
    EXPECT_EQ(flow_csv(a), flow_csv(b));
    EXPECT_EQ(propagation_csv(a), propagation_csv(b));
    EXPECT_EQ(balances_csv(a), balances_csv(b));
    EXPECT_EQ(blocks_csv(a), blocks_csv(b));
    auto other = small_ring();
    other.seed = 6;
    EXPECT_NE(blocks_csv(run(other)), blocks_csv(a));
}

TEST(Simulation, InvariantsHoldEveryTick) {
    auto s = small_ring(3, 600, 150);
    s.chains[2].consensus = fx::pos_config(6);
    s.chains[2].consensus.pos_block_interval = 3;
    s.workloads.push_back({C(1), 300, TxKind::CrossChain, C(3), 1, 50});
    Simulation sim(s);
    std::map<ChainId, std::vector<PosAccount>> prev_weights;
    while (!sim.finished()) {
        sim.step();
        for (const auto& [id, chain] : sim.network().chains()) {
            ASSERT_TRUE(hash_chain_intact(chain.blocks()));
            ASSERT_EQ(scan_sealed_index(chain.blocks()), chain.sealed_index());
            ASSERT_EQ(chain.circulating(), chain.initial_supply() + chain.minted());
            if (chain.consensus().kind == ConsensusKind::PoS) {
                auto& prev = prev_weights[id];
                if (!prev.empty()) {
                    std::uint64_t dropped = 0;
                    for (std::size_t k = 0; k < prev.size(); ++k) {
                        ASSERT_LE(chain.pos_weights()[k].weight, prev[k].weight);
                        dropped += prev[k].weight - chain.pos_weights()[k].weight;
                    }
                    ASSERT_LE(dropped, effective_weight_decrement(chain.consensus()));
                }
                prev = chain.pos_weights();
            }
        }
    }
    EXPECT_TRUE(sim.log().faults.empty());
    for (const auto& c : sim.log().confirmations) {
        EXPECT_TRUE(c.foreign_verified);
        EXPECT_TRUE(c.local_valid);
    }
}

TEST(Simulation, EventualTotalPropagation) {
    // One transaction per chain must cover every chain within
    // diameter x (sync period + mean block interval) x 4 ticks.
    for (std::uint32_t n = 2; n <= 6; ++n) {
        auto s = small_ring(n, 0);
        s.duration_ticks = (n - 1) * (1 + kDefaultTargetBlockInterval) * 4;
        Simulation sim(s);
        std::vector<CrossKey> keys;
        for (std::uint32_t c = 1; c <= n; ++c) {
            const auto tx = fx::cross_tx(sim.network().format_of(C(c)), C(c), user_address(C(c), 0),
                                         user_address(C(c), 1), 3, c);
            keys.push_back(*tx.cross_key());
            sim.submit(C(c), tx);
        }
        sim.run();
        for (const auto& [id, chain] : sim.network().chains())
            for (const auto& k : keys) EXPECT_TRUE(chain.contains_crosschain(k.origin, k.tx)) << n << " chains";
    }
}

TEST(Simulation, MembershipProposalsApplyAtTickBoundaries) {
    auto s = small_ring(3, 300, 60);
    s.topology.selection_accounts = {"a", "b", "c"};
    MembershipProposal add;
    add.proposer = "a";
    add.target_edge = {C(1), C(3)};
    add.agreements = {"a", "b"};
    s.topology.proposals.push_back({20, add});
    MembershipProposal weak = add;
    weak.target_edge = {C(2), C(1)};
    weak.agreements = {"a"};
    s.topology.proposals.push_back({30, weak});
    Simulation sim(s);
    sim.run();
    ASSERT_EQ(sim.log().membership.size(), 2u);
    EXPECT_EQ(sim.log().membership[0].status, ProposalStatus::Applied);
    EXPECT_EQ(sim.log().membership[0].tick, 20u);
    EXPECT_EQ(sim.log().membership[1].status, ProposalStatus::Rejected);
    EXPECT_TRUE(sim.network().topology().has_edge({C(1), C(3)}));
    EXPECT_FALSE(sim.network().topology().has_edge({C(2), C(1)}));
}

TEST(Presets, AllNamedPresetsValidate) {
    for (const char* name : {"s1_router", "s1_ring", "s2_router", "s2_ring", "fig12_indirect", "fig14_direct"}) {
        const Scenario s = preset(name);
        EXPECT_NO_THROW(validate(s)) << name;
        EXPECT_TRUE(is_strongly_connected(build_graph(s.topology))) << name;
    }
    EXPECT_THROW(preset("nope"), InputError);
}

TEST(Presets, BridgeScenarioReachesEveryChain) {
    const Scenario s = preset("fig7_bridge");
    const auto log = run(s);
    std::set<Hash256> ids;
    for (const auto& i : log.injections) ids.insert(i.tx);
    ASSERT_EQ(ids.size(), 5u);
    for (const auto& id : ids) EXPECT_EQ(confirmation_depth(log.propagation, id), 6u);
}
