#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "xchain/chain.hpp"
#include "xchain/consensus.hpp"
#include "xchain/format.hpp"
#include "xchain/topology.hpp"

namespace xchain {

inline constexpr std::uint64_t kDefaultHeartbeatBytes = 64;

// Progress of `observer` through the chain of `source`. (observer, source) is
// an edge of the topology.
struct SyncCursor {
    ChainId observer;
    ChainId source;
    std::uint64_t last_seen_height = 0;
    Tick period_ticks = 1;
};

struct PropagationEvent {
    Tick tick = 0;
    Hash256 origin_tx_id;
    ChainId origin_chain;
    ChainId sealed_on;
    std::uint32_t hop_count = 0;

    bool operator==(const PropagationEvent&) const = default;
};

struct SyncDelta {
    std::vector<Block> blocks;
    std::uint64_t bytes = 0;
    std::uint64_t next_height = 0;
};

// Bytes a block occupies on the wire: header plus every transaction encoded
// in the chain's own format.
std::uint64_t block_wire_size(const Block& b, const FormatSpec& spec);

// Blocks of `source` above the cursor. `wire_sizes[h]` is the wire size of
// source block h. Bytes are the delta's wire size times `fan_out`, or the
// heartbeat when there is nothing new. The cursor is not modified.
SyncDelta sync_step(const SyncCursor& cursor, const ChainState& source, std::span<const std::uint64_t> wire_sizes,
                    std::size_t fan_out, std::uint64_t heartbeat_bytes = kDefaultHeartbeatBytes);

// Every block links to the replica's tip and is valid under the source's
// consensus.
bool validate_copied_chain(std::span<const Block> blocks, const ForeignVerifier& replica);

// Cross-chain transactions of `blocks`, in block order.
std::vector<Transaction> extract_crosschain(std::span<const Block> blocks);

struct ConfirmResult {
    std::size_t queued = 0;
    std::size_t duplicates = 0;
    std::vector<std::string> faults;
};

// Translates each transaction from the source's format into the observer's
// and queues it for sealing unless a copy already exists or is pending.
// `source_hops` gives the hop count at which the source sealed each key.
ConfirmResult confirm_and_seal(ChainState& observer, std::span<const Transaction> txs, const TransformRegistry& reg,
                               FormatId source_format, ChainId source_chain,
                               const std::map<CrossKey, std::uint32_t>& source_hops);

struct FlowCounter {
    std::uint64_t bytes_out = 0;
    std::uint64_t bytes_in = 0;
};

struct SealedBlock {
    ChainId chain;
    std::uint64_t height = 0;
    Hash256 hash;
    std::string sealer;
    std::size_t tx_count = 0;
    std::size_t crosschain_copies = 0;
};

// Instrumentation of the two confirmations a relayed copy went through.
struct ConfirmationCheck {
    ChainId chain;
    CrossKey key;
    std::optional<ChainId> verified_under;
    bool foreign_verified = false;  // source block passed the neighbor's consensus
    bool local_valid = false;       // sealing block passed this chain's consensus
};

struct TickReport {
    Tick tick = 0;
    std::map<ChainId, FlowCounter> flow;
    std::vector<PropagationEvent> events;
    std::vector<SealedBlock> blocks;
    std::vector<ConfirmationCheck> confirmations;
    std::vector<BalanceChange> balance_changes;
    std::vector<Settlement> settlements;
    std::vector<std::string> faults;
};

struct NetworkOptions {
    Tick sync_period_ticks = 1;
    // Sync rounds per due tick for PoS observers, which spend no time hashing.
    unsigned pos_sync_rounds = 2;
    std::uint64_t heartbeat_bytes = kDefaultHeartbeatBytes;
    std::size_t max_block_txs = 20000;
    std::uint64_t seed = 0;
};

// All blockchains of a scenario plus the direct connections between them.
class Network {
public:
    // Throws DomainError when the topology is not strongly connected.
    Network(TopologyGraph topology, const std::vector<ChainConfig>& chains, std::map<ChainId, FormatSpec> formats,
            NetworkOptions options = {});

    // Queues a transaction created on `chain` (hop 0). The transaction must be
    // in that chain's format.
    SubmitResult submit_original(ChainId chain, Transaction tx);

    // One simulation tick: every due sync on every edge against start-of-tick
    // state, then one mining opportunity per chain.
    TickReport propagate_tick(Tick tick);

    // Releases escrow on every chain whose dependencies have arrived.
    void settle_dependencies(Tick tick, TickReport& report);

    // Replaces the connection graph between ticks. Cursors of retained edges
    // keep their progress; new edges start from genesis.
    void set_topology(TopologyGraph topology);

    const TopologyGraph& topology() const noexcept { return topology_; }
    const TransformRegistry& registry() const noexcept { return registry_; }
    const std::map<ChainId, ChainState>& chains() const noexcept { return chains_; }
    const ChainState& chain(ChainId id) const;
    const FormatSpec& format_of(ChainId id) const { return formats_.at(id); }
    const std::map<Edge, SyncCursor>& cursors() const noexcept { return cursors_; }
    const std::map<CrossKey, std::uint32_t>& hops(ChainId id) const { return hops_.at(id); }

    static std::string miner_address(ChainId id) { return "miner-" + to_string(id); }

private:
    void rebuild_replicas();
    void sync_edge(const Edge& edge, TickReport& report);
    void mine(ChainState& chain, Tick tick, TickReport& report);
    bool locally_valid(const ChainState& chain, const Block& b) const;

    TopologyGraph topology_;
    std::map<ChainId, FormatSpec> formats_;
    TransformRegistry registry_;
    NetworkOptions options_;
    std::map<ChainId, ChainState> chains_;
    std::map<Edge, SyncCursor> cursors_;
    std::map<Edge, ForeignVerifier> verifiers_;
    std::map<ChainId, std::vector<std::uint64_t>> wire_sizes_;
    std::map<ChainId, std::map<CrossKey, std::uint32_t>> hops_;
    std::map<ChainId, std::uint64_t> nonce_counters_;
    // Keys taken from deltas that passed the source's consensus, per edge.
    std::map<Edge, std::set<CrossKey>> verified_keys_;
};

}  // namespace xchain
