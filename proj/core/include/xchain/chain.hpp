#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xchain/block.hpp"
#include "xchain/consensus.hpp"

namespace xchain {

inline constexpr std::uint64_t kDefaultCrosschainReward = 1;

// A transaction waiting to be sealed. Copies relayed from a neighbor record
// which neighbor's consensus validated the block they were taken from.
struct MempoolEntry {
    Transaction tx;
    std::optional<ChainId> verified_under;
    std::uint32_t hop = 0;
};

enum class SubmitResult { Queued, AlreadySealed, AlreadyPending };

enum class BalanceReason { Debit, Credit, Escrow, Settle, Reward };

std::string to_string(BalanceReason r);

struct BalanceChange {
    Tick tick = 0;
    ChainId chain;
    std::string account;
    std::int64_t delta = 0;
    std::uint64_t balance = 0;  // after the change
    BalanceReason reason = BalanceReason::Debit;
    Hash256 tx;  // transaction that caused the change
};

// One cross-chain transaction sealed by append_block.
struct SealedCrosschain {
    CrossKey key;
    bool is_origin = false;
    std::optional<ChainId> verified_under;
    std::uint32_t hop = 0;
};

struct PendingSettlement {
    Hash256 tx;
    std::string receiver;
    std::uint64_t amount = 0;
    Dependency dependency;
    Tick sealed_at = 0;
};

struct Settlement {
    PendingSettlement entry;
    Tick settled_at = 0;
};

struct ChainConfig {
    ChainId id;
    ConsensusConfig consensus;
    FormatId format;
    std::size_t node_count = 1;
    std::map<std::string, std::uint64_t> balances;
    std::uint64_t crosschain_reward = kDefaultCrosschainReward;
};

// One blockchain's replica: hash chain, account ledger, mempool, escrow and
// the index of sealed cross-chain transactions.
class ChainState {
public:
    explicit ChainState(ChainConfig cfg);

    ChainId id() const noexcept { return cfg_.id; }
    FormatId format() const noexcept { return cfg_.format; }
    std::size_t node_count() const noexcept { return cfg_.node_count; }
    const ConsensusConfig& consensus() const noexcept { return cfg_.consensus; }
    const ChainConfig& config() const noexcept { return cfg_; }

    const std::vector<Block>& blocks() const noexcept { return blocks_; }
    const Block& tip() const noexcept { return blocks_.back(); }
    std::uint64_t height() const noexcept { return blocks_.back().height; }

    const std::map<std::string, std::uint64_t>& balances() const noexcept { return balances_; }
    std::uint64_t balance(const std::string& account) const;
    const std::vector<PosAccount>& pos_weights() const noexcept { return pos_weights_; }

    const std::vector<MempoolEntry>& mempool() const noexcept { return mempool_; }
    SubmitResult submit(MempoolEntry entry);

    bool contains_crosschain(ChainId origin, const Hash256& origin_tx) const {
        return sealed_index_.contains(CrossKey{origin, origin_tx});
    }
    const std::set<CrossKey>& sealed_index() const noexcept { return sealed_index_; }

    // Block built from the mempool in arrival order, skipping entries the
    // sender cannot fund; nonce 0, hashes filled in.
    Block assemble_candidate(Tick timestamp, const std::string& sealer, std::size_t max_txs) const;

    // Sealer chosen by this chain's own consensus for the next block (PoS only).
    const std::string& next_pos_sealer() const { return pos_select(pos_weights_); }

    // Throws BlockRejected and leaves the state unchanged when `b` does not
    // extend the tip or is invalid under this chain's consensus.
    std::vector<SealedCrosschain> append_block(const Block& b, std::vector<BalanceChange>* changes = nullptr);

    // Releases escrow for every sealed transaction whose dependency is now
    // present in the sealed index.
    std::vector<Settlement> settle(Tick now, std::vector<BalanceChange>* changes = nullptr);
    const std::vector<PendingSettlement>& escrow() const noexcept { return escrow_; }

    std::uint64_t escrow_total() const noexcept;
    std::uint64_t initial_supply() const noexcept { return initial_supply_; }
    std::uint64_t minted() const noexcept { return minted_; }
    // balances + escrow
    std::uint64_t circulating() const noexcept;

private:
    void check_block(const Block& b) const;
    void credit(const std::string& account, std::uint64_t amount, Tick tick, BalanceReason reason, const Hash256& tx,
                std::vector<BalanceChange>* changes);

    ChainConfig cfg_;
    std::uint64_t decrement_;
    std::vector<Block> blocks_;
    std::map<std::string, std::uint64_t> balances_;
    std::vector<PosAccount> pos_weights_;
    std::vector<MempoolEntry> mempool_;
    std::set<CrossKey> pending_keys_;
    std::set<Hash256> pending_internal_;
    std::set<CrossKey> sealed_index_;
    std::vector<PendingSettlement> escrow_;
    std::uint64_t initial_supply_ = 0;
    std::uint64_t minted_ = 0;
};

// Index recomputed by scanning every block.
std::set<CrossKey> scan_sealed_index(const std::vector<Block>& blocks);

// Every block hash and parent link recomputes.
bool hash_chain_intact(const std::vector<Block>& blocks);

// Longest candidate valid under `cfg`; ties go to the smallest tip hash.
// Returns the index into `candidates`. Throws InputError when empty and
// DomainError when no candidate is valid.
std::size_t select_main_chain(const std::vector<std::vector<Block>>& candidates, const ConsensusConfig& cfg);

// Line-delimited JSON export: one object per block, then one per account balance.
std::string dump_chain(const ChainState& s);

}  // namespace xchain
