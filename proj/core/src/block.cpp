#include "xchain/block.hpp"

#include "xchain/error.hpp"

namespace xchain {

std::optional<CrossKey> Transaction::cross_key() const {
    if (kind != TxKind::CrossChain || !origin_chain || !origin_tx_id) return std::nullopt;
    return CrossKey{*origin_chain, *origin_tx_id};
}

void check_well_formed(const Transaction& tx) {
    if (tx.kind == TxKind::CrossChain) {
        if (!tx.origin_chain || !tx.origin_tx_id)
            throw InputError("cross-chain transaction without origin chain or origin tx id");
    } else if (tx.origin_chain || tx.origin_tx_id) {
        throw InputError("internal transaction carries cross-chain origin fields");
    }
}

std::vector<std::uint8_t> serialize(const Transaction& tx) {
    ByteWriter w;
    w.hash(tx.tx_id);
    w.str(tx.sender);
    w.str(tx.receiver);
    w.u64(tx.amount);
    w.u64(tx.nonce);
    w.u8(static_cast<std::uint8_t>(tx.kind));
    w.u8(tx.origin_chain ? 1 : 0);
    w.u32(tx.origin_chain ? tx.origin_chain->value : 0);
    w.u8(tx.origin_tx_id ? 1 : 0);
    w.hash(tx.origin_tx_id.value_or(Hash256{}));
    w.u8(tx.dependency ? 1 : 0);
    w.u32(tx.dependency ? tx.dependency->chain.value : 0);
    w.hash(tx.dependency ? tx.dependency->origin_tx_id : Hash256{});
    w.u32(tx.format_id.value);
    return std::move(w).take();
}

Hash256 compute_tx_root(const std::vector<Transaction>& txs) {
    std::vector<Hash256> leaves;
    leaves.reserve(txs.size());
    for (const auto& tx : txs) leaves.push_back(sha256(serialize(tx)));
    return merkle_root(std::move(leaves));
}

std::vector<std::uint8_t> header_prefix(const Block& b) {
    ByteWriter w;
    w.u64(b.height);
    w.hash(b.prev_hash);
    w.u64(b.timestamp);
    w.hash(b.tx_root);
    w.str(b.sealer);
    return std::move(w).take();
}

Hash256 hash_with_nonce(const std::vector<std::uint8_t>& prefix, std::uint64_t nonce) {
    std::vector<std::uint8_t> buf;
    buf.reserve(prefix.size() + 8);
    buf.insert(buf.end(), prefix.begin(), prefix.end());
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(nonce >> (8 * i)));
    return sha256(buf);
}

Hash256 compute_block_hash(const Block& b) { return hash_with_nonce(header_prefix(b), b.nonce); }

Block make_block(std::uint64_t height, const Hash256& prev_hash, Tick timestamp, std::vector<Transaction> txs,
                 std::string sealer, std::uint64_t nonce) {
    Block b;
    b.height = height;
    b.prev_hash = prev_hash;
    b.timestamp = timestamp;
    b.transactions = std::move(txs);
    b.tx_root = compute_tx_root(b.transactions);
    b.sealer = std::move(sealer);
    b.nonce = nonce;
    b.block_hash = compute_block_hash(b);
    return b;
}

bool hashes_consistent(const Block& b) {
    return compute_tx_root(b.transactions) == b.tx_root && compute_block_hash(b) == b.block_hash;
}

Block genesis_block(ChainId id) { return make_block(0, Hash256{}, 0, {}, "genesis-" + to_string(id)); }

}  // namespace xchain
