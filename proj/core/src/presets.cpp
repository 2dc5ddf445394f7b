#include <cstdio>

#include "xchain/error.hpp"
#include "xchain/sim.hpp"

namespace xchain {

namespace {

// Desk-scale PoW: 12 leading zero bits with 820 nonces per tick gives a mean
// block interval of about 5 ticks.
constexpr unsigned kPresetDifficulty = 12;
constexpr std::uint64_t kPresetBudget = 820;
constexpr double kPresetRate = 3000.0;  // tx per minute per chain

ConsensusConfig pow_config(std::uint64_t budget = kPresetBudget) {
    ConsensusConfig c;
    c.kind = ConsensusKind::PoW;
    c.pow_difficulty_bits = kPresetDifficulty;
    c.pow_nonce_budget = budget;
    return c;
}

// 16 accounts whose initial assets grow linearly.
ConsensusConfig pos_config(ChainId chain) {
    ConsensusConfig c;
    c.kind = ConsensusKind::PoS;
    for (std::uint64_t k = 0; k < 16; ++k) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "c%u.s%02llu", chain.value, static_cast<unsigned long long>(k));
        c.pos_accounts.push_back({buf, 1000 * (k + 1)});
    }
    c.pos_block_interval = kDefaultTargetBlockInterval;
    return c;
}

std::vector<ChainId> ids(std::initializer_list<std::uint32_t> xs) {
    std::vector<ChainId> out;
    for (auto x : xs) out.emplace_back(x);
    return out;
}

Scenario base(std::string name, const std::vector<ChainId>& chains) {
    Scenario s;
    s.name = std::move(name);
    s.seed = 42;
    s.topology.nodes = chains;
    s.topology.selection_accounts = {"sel-a", "sel-b", "sel-c", "sel-d"};
    for (auto id : chains) {
        ChainSpec c;
        c.id = id;
        c.consensus = pow_config();
        s.chains.push_back(c);
        s.security.per_chain[id] = 0.1;
    }
    s.security_sets.push_back(chains);
    return s;
}

Scenario flow_scenario(std::string name, TopologyKind kind, bool with_pos) {
    Scenario s = base(std::move(name), ids({1, 2, 3}));
    s.topology.kind = kind;
    if (kind == TopologyKind::Star) s.topology.hub = ChainId{1};
    if (with_pos) s.chains[2].consensus = pos_config(ChainId{3});
    for (const auto& c : s.chains) s.workloads.push_back({c.id, kPresetRate, TxKind::CrossChain, std::nullopt, 1, 100});
    s.duration_ticks = 600;
    return s;
}

Scenario fig12_indirect() {
    Scenario s = base("fig12_indirect", ids({1, 2, 3, 4}));
    s.topology.kind = TopologyKind::Ring;
    // Chains 2 and 4 have no workload of their own and only relay.
    s.injections.push_back({5, ids({1, 3}), 10});
    s.duration_ticks = 200;
    return s;
}

Scenario fig14_direct() {
    Scenario s = base("fig14_direct", ids({1, 2, 3, 4}));
    s.topology.kind = TopologyKind::Ring;
    // Chain 3 has the weakest hashing resources.
    s.chains[2].consensus = pow_config(kPresetBudget / 2);
    s.injections.push_back({5, ids({1, 2, 3, 4}), 10});
    s.duration_ticks = 200;
    return s;
}

Scenario fig7_bridge() {
    Scenario s = base("fig7_bridge", ids({1, 2, 3, 4, 5, 6}));
    // Two groups {1,2,3} and {4,5} joined only through bridge chain 6.
    s.topology.edges = {{ChainId{1}, ChainId{2}}, {ChainId{2}, ChainId{3}}, {ChainId{3}, ChainId{1}},
                        {ChainId{4}, ChainId{5}}, {ChainId{5}, ChainId{4}}, {ChainId{1}, ChainId{6}},
                        {ChainId{6}, ChainId{1}}, {ChainId{4}, ChainId{6}}, {ChainId{6}, ChainId{4}}};
    for (std::uint32_t c = 1; c <= 5; ++c) s.injections.push_back({5, ids({c}), 10});
    s.duration_ticks = 300;
    return s;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"s1_router", "s1_ring", "s2_router", "s2_ring", "fig12_indirect", "fig14_direct", "fig7_bridge"};
}

Scenario preset(std::string_view name) {
    if (name == "s1_router") return flow_scenario("s1_router", TopologyKind::Star, false);
    if (name == "s1_ring") return flow_scenario("s1_ring", TopologyKind::Ring, false);
    if (name == "s2_router") return flow_scenario("s2_router", TopologyKind::Star, true);
    if (name == "s2_ring") return flow_scenario("s2_ring", TopologyKind::Ring, true);
    if (name == "fig12_indirect") return fig12_indirect();
    if (name == "fig14_direct") return fig14_direct();
    if (name == "fig7_bridge") return fig7_bridge();
    throw InputError("unknown preset '" + std::string(name) + "'");
}

}  // namespace xchain
