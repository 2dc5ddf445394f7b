#pragma once

#include <gtest/gtest.h>

#include <limits>
#include <string>
#include <vector>

#include "xchain/chain.hpp"
#include "xchain/consensus.hpp"
#include "xchain/format.hpp"
#include "xchain/propagation.hpp"
#include "xchain/topology.hpp"

namespace fx {

using namespace xchain;

inline ChainId C(std::uint32_t v) { return ChainId{v}; }

inline ConsensusConfig pow_config(unsigned bits = 8) {
    ConsensusConfig c;
    c.kind = ConsensusKind::PoW;
    c.pow_difficulty_bits = bits;
    return c;
}

inline ConsensusConfig pos_config(std::size_t accounts = 4, std::uint64_t decrement = 0) {
    ConsensusConfig c;
    c.kind = ConsensusKind::PoS;
    for (std::size_t i = 0; i < accounts; ++i)
        c.pos_accounts.push_back({"v" + std::to_string(i), 100 * (i + 1)});
    c.pos_weight_decrement = decrement;
    c.pos_block_interval = 1;
    return c;
}

inline ChainConfig chain_config(std::uint32_t id, ConsensusConfig cons = pow_config()) {
    ChainConfig cfg;
    cfg.id = ChainId{id};
    cfg.consensus = std::move(cons);
    cfg.format = FormatId{id};
    cfg.node_count = 2;
    cfg.balances = {{"alice", 1000}, {"bob", 1000}};
    return cfg;
}

inline Transaction internal_tx(const FormatSpec& spec, std::string sender, std::string receiver, std::uint64_t amount,
                               std::uint64_t nonce) {
    Transaction tx;
    tx.sender = std::move(sender);
    tx.receiver = std::move(receiver);
    tx.amount = amount;
    tx.nonce = nonce;
    tx.kind = TxKind::Internal;
    tx.format_id = spec.id;
    return finalize_original(tx, spec);
}

inline Transaction cross_tx(const FormatSpec& spec, ChainId origin, std::string sender, std::string receiver,
                            std::uint64_t amount, std::uint64_t nonce,
                            std::optional<Dependency> dependency = std::nullopt) {
    Transaction tx;
    tx.sender = std::move(sender);
    tx.receiver = std::move(receiver);
    tx.amount = amount;
    tx.nonce = nonce;
    tx.kind = TxKind::CrossChain;
    tx.origin_chain = origin;
    tx.dependency = dependency;
    tx.format_id = spec.id;
    return finalize_original(tx, spec);
}

// Seals the next block of `s` from its mempool under its own consensus.
inline Block seal_next(const ChainState& s, Tick tick) {
    const auto& cfg = s.consensus();
    const std::string sealer = cfg.kind == ConsensusKind::PoS ? s.next_pos_sealer() : "miner";
    Block b = s.assemble_candidate(tick, sealer, 1000);
    if (cfg.kind == ConsensusKind::PoW) {
        const auto prefix = header_prefix(b);
        auto nonce = pow_mine(prefix, cfg.pow_difficulty_bits, 0, std::numeric_limits<std::uint32_t>::max());
        EXPECT_TRUE(nonce.has_value());
        b.nonce = *nonce;
        b.block_hash = hash_with_nonce(prefix, b.nonce);
    }
    return b;
}

inline Block seal_and_append(ChainState& s, Tick tick, std::vector<BalanceChange>* changes = nullptr) {
    Block b = seal_next(s, tick);
    s.append_block(b, changes);
    return b;
}

inline std::vector<ChainId> ids(std::initializer_list<std::uint32_t> vs) {
    std::vector<ChainId> out;
    for (auto v : vs) out.push_back(ChainId{v});
    return out;
}

inline TopologyGraph graph(std::initializer_list<std::uint32_t> nodes,
                           std::initializer_list<std::pair<std::uint32_t, std::uint32_t>> edges,
                           std::size_t cap = kDefaultMaxOutDegree) {
    TopologyGraph g(cap);
    for (auto n : nodes) g.add_node(ChainId{n});
    for (auto [a, b] : edges) g.add_edge({ChainId{a}, ChainId{b}});
    return g;
}

inline std::map<ChainId, FormatSpec> variant_formats(const std::vector<ChainId>& chains) {
    std::map<ChainId, FormatSpec> out;
    for (auto id : chains) out.emplace(id, variant_format(FormatId{id.value}));
    return out;
}

}  // namespace fx
