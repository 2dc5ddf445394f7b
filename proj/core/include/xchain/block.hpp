#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xchain/hash.hpp"
#include "xchain/ids.hpp"

namespace xchain {

enum class TxKind : std::uint8_t { Internal = 0, CrossChain = 1 };

// Identity of a cross-chain transaction across every blockchain it reaches.
struct CrossKey {
    ChainId origin;
    Hash256 tx;

    auto operator<=>(const CrossKey&) const = default;
};

// The associated transaction that must reach this transaction's origin chain
// before its receiver is credited.
struct Dependency {
    ChainId chain;
    Hash256 origin_tx_id;

    auto operator<=>(const Dependency&) const = default;
};

struct Transaction {
    Hash256 tx_id;
    std::string sender;
    std::string receiver;
    std::uint64_t amount = 0;  // canonical asset units
    std::uint64_t nonce = 0;   // per-sender sequence number
    TxKind kind = TxKind::Internal;
    std::optional<ChainId> origin_chain;
    std::optional<Hash256> origin_tx_id;
    std::optional<Dependency> dependency;
    FormatId format_id;

    bool operator==(const Transaction&) const = default;

    bool is_crosschain() const noexcept { return kind == TxKind::CrossChain; }
    // Present for well-formed cross-chain transactions.
    std::optional<CrossKey> cross_key() const;
};

// Checks the kind/origin field pairing. Throws InputError.
void check_well_formed(const Transaction& tx);

// Canonical binary serialization binding every field; used for block bodies.
std::vector<std::uint8_t> serialize(const Transaction& tx);

struct Block {
    std::uint64_t height = 0;
    Hash256 prev_hash;
    Tick timestamp = 0;
    Hash256 tx_root;
    std::string sealer;
    std::uint64_t nonce = 0;
    std::vector<Transaction> transactions;
    Hash256 block_hash;

    bool operator==(const Block&) const = default;
};

Hash256 compute_tx_root(const std::vector<Transaction>& txs);

// Header bytes without the trailing nonce. The block hash is
// sha256(header_prefix || nonce as u64 little-endian).
std::vector<std::uint8_t> header_prefix(const Block& b);
Hash256 hash_with_nonce(const std::vector<std::uint8_t>& prefix, std::uint64_t nonce);
Hash256 compute_block_hash(const Block& b);

// Fills tx_root and block_hash for the given contents.
Block make_block(std::uint64_t height, const Hash256& prev_hash, Tick timestamp, std::vector<Transaction> txs,
                 std::string sealer, std::uint64_t nonce = 0);

// tx_root and block_hash both recompute from the contents.
bool hashes_consistent(const Block& b);

// Genesis of chain `id`: height 0, zero parent, no transactions.
Block genesis_block(ChainId id);

}  // namespace xchain
