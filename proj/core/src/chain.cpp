#include "xchain/chain.hpp"

#include <algorithm>
#include <json.hpp>

#include "xchain/error.hpp"

namespace xchain {

std::string to_string(BalanceReason r) {
    switch (r) {
        case BalanceReason::Debit: return "debit";
        case BalanceReason::Credit: return "credit";
        case BalanceReason::Escrow: return "escrow";
        case BalanceReason::Settle: return "settle";
        case BalanceReason::Reward: return "reward";
    }
    return "?";
}

ChainState::ChainState(ChainConfig cfg)
    : cfg_(std::move(cfg)),
      decrement_(effective_weight_decrement(cfg_.consensus)),
      balances_(cfg_.balances),
      pos_weights_(initial_pos_weights(cfg_.consensus)) {
    validate(cfg_.consensus);
    if (cfg_.node_count == 0) throw InputError("node_count must be positive");
    if (cfg_.consensus.kind == ConsensusKind::PoS)
        for (const auto& a : cfg_.consensus.pos_accounts) balances_.try_emplace(a.address, a.weight);
    for (const auto& [_, v] : balances_) initial_supply_ += v;
    blocks_.push_back(genesis_block(cfg_.id));
}

std::uint64_t ChainState::balance(const std::string& account) const {
    auto it = balances_.find(account);
    return it == balances_.end() ? 0 : it->second;
}

SubmitResult ChainState::submit(MempoolEntry entry) {
    check_well_formed(entry.tx);
    if (entry.tx.format_id != cfg_.format)
        throw InputError("transaction in format " + to_string(entry.tx.format_id) + " submitted to chain " +
                         to_string(cfg_.id));
    if (auto key = entry.tx.cross_key()) {
        if (sealed_index_.contains(*key)) return SubmitResult::AlreadySealed;
        if (!pending_keys_.insert(*key).second) return SubmitResult::AlreadyPending;
    } else if (!pending_internal_.insert(entry.tx.tx_id).second) {
        return SubmitResult::AlreadyPending;
    }
    mempool_.push_back(std::move(entry));
    return SubmitResult::Queued;
}

namespace {
bool is_local_origin(const Transaction& tx, ChainId self) {
    return tx.kind == TxKind::Internal || (tx.origin_chain && *tx.origin_chain == self);
}
}  // namespace

Block ChainState::assemble_candidate(Tick timestamp, const std::string& sealer, std::size_t max_txs) const {
    std::vector<Transaction> txs;
    std::map<std::string, std::uint64_t> spent;
    for (const auto& e : mempool_) {
        if (txs.size() >= max_txs) break;
        const auto& tx = e.tx;
        if (is_local_origin(tx, cfg_.id)) {
            auto& s = spent[tx.sender];
            if (balance(tx.sender) < s + tx.amount) continue;
            s += tx.amount;
        }
        txs.push_back(tx);
    }
    return make_block(height() + 1, tip().block_hash, timestamp, std::move(txs), sealer);
}

void ChainState::check_block(const Block& b) const {
    if (b.height != height() + 1) throw BlockRejected("block height does not extend the tip");
    if (b.prev_hash != tip().block_hash) throw BlockRejected("block prev_hash does not match the tip");
    if (!hashes_consistent(b)) throw BlockRejected("block hash does not recompute from its contents");
    if (cfg_.consensus.kind == ConsensusKind::PoW) {
        if (leading_zero_bits(b.block_hash) < cfg_.consensus.pow_difficulty_bits)
            throw BlockRejected("block hash does not meet the PoW difficulty");
    } else if (b.sealer != pos_select(pos_weights_)) {
        throw BlockRejected("PoS block sealed by an account without maximum weight");
    }

    std::set<CrossKey> seen;
    std::map<std::string, std::uint64_t> spent;
    for (const auto& tx : b.transactions) {
        try {
            check_well_formed(tx);
        } catch (const InputError& e) {
            throw BlockRejected(e.what());
        }
        if (tx.format_id != cfg_.format) throw BlockRejected("transaction not in the chain's format");
        if (auto key = tx.cross_key()) {
            if (sealed_index_.contains(*key) || !seen.insert(*key).second)
                throw BlockRejected("duplicate cross-chain transaction " + key->tx.to_hex());
        }
        if (is_local_origin(tx, cfg_.id)) {
            auto& s = spent[tx.sender];
            if (balance(tx.sender) < s + tx.amount) throw BlockRejected("sender " + tx.sender + " cannot fund transaction");
            s += tx.amount;
        }
    }
}

void ChainState::credit(const std::string& account, std::uint64_t amount, Tick tick, BalanceReason reason,
                        const Hash256& tx, std::vector<BalanceChange>* changes) {
    auto& bal = balances_[account];
    bal += amount;
    if (changes) changes->push_back({tick, cfg_.id, account, static_cast<std::int64_t>(amount), bal, reason, tx});
}

std::vector<SealedCrosschain> ChainState::append_block(const Block& b, std::vector<BalanceChange>* changes) {
    check_block(b);

    std::map<CrossKey, const MempoolEntry*> provenance;
    for (const auto& e : mempool_)
        if (auto key = e.tx.cross_key()) provenance.emplace(*key, &e);

    std::vector<SealedCrosschain> sealed;
    const Tick tick = b.timestamp;
    for (const auto& tx : b.transactions) {
        const bool origin = is_local_origin(tx, cfg_.id);
        if (origin) {
            auto& bal = balances_[tx.sender];
            bal -= tx.amount;
            const auto reason = tx.is_crosschain() && tx.dependency ? BalanceReason::Escrow : BalanceReason::Debit;
            if (changes)
                changes->push_back({tick, cfg_.id, tx.sender, -static_cast<std::int64_t>(tx.amount), bal, reason, tx.tx_id});
            if (tx.is_crosschain() && tx.dependency)
                escrow_.push_back({tx.tx_id, tx.receiver, tx.amount, *tx.dependency, tick});
            else
                credit(tx.receiver, tx.amount, tick, BalanceReason::Credit, tx.tx_id, changes);
        }
        if (auto key = tx.cross_key()) {
            sealed_index_.insert(*key);
            SealedCrosschain rec{*key, origin, std::nullopt, 0};
            if (auto it = provenance.find(*key); it != provenance.end()) {
                rec.verified_under = it->second->verified_under;
                rec.hop = it->second->hop;
            }
            sealed.push_back(rec);
            if (!origin && cfg_.crosschain_reward > 0) {
                minted_ += cfg_.crosschain_reward;
                credit(b.sealer, cfg_.crosschain_reward, tick, BalanceReason::Reward, tx.tx_id, changes);
            }
        }
    }
    if (cfg_.consensus.kind == ConsensusKind::PoS)
        pos_weights_ = pos_update_after_seal(std::move(pos_weights_), b.sealer, decrement_);
    blocks_.push_back(b);

    std::set<Hash256> included;
    for (const auto& tx : b.transactions)
        if (!tx.cross_key()) included.insert(tx.tx_id);
    std::erase_if(mempool_, [&](const MempoolEntry& e) {
        if (auto key = e.tx.cross_key()) {
            if (!sealed_index_.contains(*key)) return false;
            pending_keys_.erase(*key);
            return true;
        }
        if (!included.contains(e.tx.tx_id)) return false;
        pending_internal_.erase(e.tx.tx_id);
        return true;
    });
    return sealed;
}

std::vector<Settlement> ChainState::settle(Tick now, std::vector<BalanceChange>* changes) {
    std::vector<Settlement> done;
    std::vector<PendingSettlement> still;
    for (auto& p : escrow_) {
        if (contains_crosschain(p.dependency.chain, p.dependency.origin_tx_id)) {
            credit(p.receiver, p.amount, now, BalanceReason::Settle, p.tx, changes);
            done.push_back({p, now});
        } else {
            still.push_back(std::move(p));
        }
    }
    escrow_ = std::move(still);
    return done;
}

std::uint64_t ChainState::escrow_total() const noexcept {
    std::uint64_t total = 0;
    for (const auto& p : escrow_) total += p.amount;
    return total;
}

std::uint64_t ChainState::circulating() const noexcept {
    std::uint64_t total = escrow_total();
    for (const auto& [_, v] : balances_) total += v;
    return total;
}

std::set<CrossKey> scan_sealed_index(const std::vector<Block>& blocks) {
    std::set<CrossKey> out;
    for (const auto& b : blocks)
        for (const auto& tx : b.transactions)
            if (auto key = tx.cross_key()) out.insert(*key);
    return out;
}

bool hash_chain_intact(const std::vector<Block>& blocks) {
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (!hashes_consistent(blocks[i])) return false;
        if (i == 0) continue;
        if (blocks[i].prev_hash != blocks[i - 1].block_hash || blocks[i].height != blocks[i - 1].height + 1) return false;
    }
    return true;
}

std::size_t select_main_chain(const std::vector<std::vector<Block>>& candidates, const ConsensusConfig& cfg) {
    if (candidates.empty()) throw InputError("select_main_chain needs at least one candidate");
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto& c = candidates[i];
        if (c.empty() || c.front().height != 0 || !hashes_consistent(c.front())) continue;
        ForeignVerifier v(cfg, c.front());
        if (!v.accept(std::span(c).subspan(1))) continue;
        if (!best) {
            best = i;
            continue;
        }
        const auto& cur = candidates[*best];
        if (c.size() > cur.size() || (c.size() == cur.size() && c.back().block_hash < cur.back().block_hash)) best = i;
    }
    if (!best) throw DomainError("no valid candidate chain");
    return *best;
}

std::string dump_chain(const ChainState& s) {
    std::string out;
    for (const auto& b : s.blocks()) {
        nlohmann::json txs = nlohmann::json::array();
        for (const auto& tx : b.transactions) {
            nlohmann::json t{{"tx_id", tx.tx_id.to_hex()},
                             {"sender", tx.sender},
                             {"receiver", tx.receiver},
                             {"amount", tx.amount},
                             {"nonce", tx.nonce},
                             {"kind", tx.is_crosschain() ? "crosschain" : "internal"},
                             {"format", tx.format_id.value}};
            if (tx.origin_chain) t["origin_chain"] = tx.origin_chain->value;
            if (tx.origin_tx_id) t["origin_tx_id"] = tx.origin_tx_id->to_hex();
            if (tx.dependency)
                t["dependency"] = {{"chain", tx.dependency->chain.value}, {"origin_tx_id", tx.dependency->origin_tx_id.to_hex()}};
            txs.push_back(std::move(t));
        }
        nlohmann::json line{{"type", "block"},
                            {"chain", s.id().value},
                            {"height", b.height},
                            {"hash", b.block_hash.to_hex()},
                            {"prev_hash", b.prev_hash.to_hex()},
                            {"timestamp", b.timestamp},
                            {"sealer", b.sealer},
                            {"nonce", b.nonce},
                            {"transactions", std::move(txs)}};
        out += line.dump();
        out += '\n';
    }
    for (const auto& [account, bal] : s.balances()) {
        nlohmann::json line{{"type", "balance"}, {"chain", s.id().value}, {"account", account}, {"balance", bal}};
        out += line.dump();
        out += '\n';
    }
    return out;
}

}  // namespace xchain
