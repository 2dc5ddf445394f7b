#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xchain/block.hpp"
#include "xchain/topology.hpp"

namespace xchain {

// Canonical transaction fields, in canonical order.
inline constexpr std::array<std::string_view, 9> kCanonicalFields = {
    "tx_id", "sender", "receiver", "amount", "nonce", "kind", "origin_chain", "origin_tx_id", "dependency"};

// How one blockchain lays out a transaction: which local name each canonical
// field carries, the order fields appear in, and how many local amount units
// make one canonical unit.
struct FormatSpec {
    FormatId id;
    std::vector<std::string> field_order;              // permutation of kCanonicalFields
    std::map<std::string, std::string> field_names;    // canonical -> local
    std::uint64_t amount_unit_scale = 1;

    bool operator==(const FormatSpec&) const = default;
};

// Throws InputError when the order is not a permutation, names are missing,
// not injective or unusable in the encoding, or the scale is zero.
void validate(const FormatSpec& spec);

// Canonical order and names, scale 1.
FormatSpec identity_format(FormatId id);

// Deterministic non-trivial format for chain `id`: rotated field order,
// chain-specific field names and a power-of-ten amount scale.
FormatSpec variant_format(FormatId id);

// One "name=value" line per field in spec order; amount in local units.
std::string encode(const Transaction& tx, const FormatSpec& spec);
// Inverse of encode. Throws InputError on malformed bytes.
Transaction decode(std::string_view bytes, const FormatSpec& spec);

// Content hash of `tx` in `spec`'s encoding. The tx id itself, the
// dependency reference and, for an original, its origin id are blanked so the
// hash is well defined before those fields are known.
Hash256 content_id(const Transaction& tx, const FormatSpec& spec);

// Sets tx_id (and origin_tx_id for cross-chain originals) from content_id.
Transaction finalize_original(Transaction tx, const FormatSpec& spec);

// Format-independent view used to compare a transaction with its copies.
struct CanonicalTx {
    std::string sender;
    std::string receiver;
    std::uint64_t amount = 0;
    std::uint64_t nonce = 0;
    TxKind kind = TxKind::Internal;
    std::optional<ChainId> origin_chain;
    std::optional<Hash256> origin_tx_id;
    std::optional<Dependency> dependency;

    bool operator==(const CanonicalTx&) const = default;
};

CanonicalTx canonical_projection(const Transaction& tx);

// Translator from the format of a source blockchain into the format of the
// blockchain that directly connects to it.
struct TransformEntry {
    Edge edge;  // (observer, source)
    FormatSpec from;
    FormatSpec to;
};

class TransformRegistry {
public:
    using Key = std::pair<FormatId, FormatId>;

    void add(TransformEntry entry);

    bool contains(FormatId from, FormatId to) const { return entries_.contains({from, to}); }
    const TransformEntry* find(FormatId from, FormatId to) const;
    std::size_t size() const noexcept { return entries_.size(); }
    const std::map<Key, TransformEntry>& entries() const noexcept { return entries_; }

private:
    std::map<Key, TransformEntry> entries_;
};

// One translator per directed edge (observer, source), converting the
// source's format into the observer's. Throws InputError when a blockchain has
// no spec or two blockchains share a FormatId.
TransformRegistry registry_for(const TopologyGraph& g, const std::map<ChainId, FormatSpec>& specs);

// Re-expresses `tx` from format `from` into `to`. Throws InputError when
// tx.format_id != from and TransformRefused when no translator is registered
// for the pair.
Transaction transf(const Transaction& tx, FormatId from, FormatId to, const TransformRegistry& reg);

}  // namespace xchain
