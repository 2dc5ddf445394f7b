#include "xchain/format.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <set>

#include "xchain/error.hpp"

namespace xchain {

namespace {

bool usable_name(const std::string& s) {
    return !s.empty() && s.find_first_of("=\n") == std::string::npos;
}

std::uint64_t parse_u64(std::string_view s, const char* what) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw InputError(std::string("malformed ") + what);
    return v;
}

std::string value_of(const Transaction& tx, std::string_view field, const FormatSpec& spec) {
    if (field == "tx_id") return tx.tx_id.to_hex();
    if (field == "sender") return tx.sender;
    if (field == "receiver") return tx.receiver;
    if (field == "amount") {
        if (tx.amount > std::numeric_limits<std::uint64_t>::max() / spec.amount_unit_scale)
            throw InputError("amount overflows the local unit scale");
        return std::to_string(tx.amount * spec.amount_unit_scale);
    }
    if (field == "nonce") return std::to_string(tx.nonce);
    if (field == "kind") return tx.is_crosschain() ? "X" : "I";
    if (field == "origin_chain") return tx.origin_chain ? to_string(*tx.origin_chain) : "-";
    if (field == "origin_tx_id") return tx.origin_tx_id ? tx.origin_tx_id->to_hex() : "-";
    if (field == "dependency")
        return tx.dependency ? to_string(tx.dependency->chain) + ":" + tx.dependency->origin_tx_id.to_hex() : "-";
    throw InputError("unknown canonical field " + std::string(field));
}

void assign(Transaction& tx, std::string_view field, std::string_view value, const FormatSpec& spec) {
    if (field == "tx_id") {
        tx.tx_id = Hash256::from_hex(value);
    } else if (field == "sender") {
        tx.sender = value;
    } else if (field == "receiver") {
        tx.receiver = value;
    } else if (field == "amount") {
        auto local = parse_u64(value, "amount");
        if (local % spec.amount_unit_scale != 0) throw InputError("amount is not a whole canonical unit");
        tx.amount = local / spec.amount_unit_scale;
    } else if (field == "nonce") {
        tx.nonce = parse_u64(value, "nonce");
    } else if (field == "kind") {
        if (value == "X")
            tx.kind = TxKind::CrossChain;
        else if (value == "I")
            tx.kind = TxKind::Internal;
        else
            throw InputError("malformed kind");
    } else if (field == "origin_chain") {
        if (value != "-") tx.origin_chain = ChainId{static_cast<std::uint32_t>(parse_u64(value, "origin_chain"))};
    } else if (field == "origin_tx_id") {
        if (value != "-") tx.origin_tx_id = Hash256::from_hex(value);
    } else if (field == "dependency") {
        if (value == "-") return;
        auto colon = value.find(':');
        if (colon == std::string_view::npos) throw InputError("malformed dependency");
        tx.dependency = Dependency{ChainId{static_cast<std::uint32_t>(parse_u64(value.substr(0, colon), "dependency"))},
                                   Hash256::from_hex(value.substr(colon + 1))};
    }
}

}  // namespace

void validate(const FormatSpec& spec) {
    if (spec.amount_unit_scale == 0) throw InputError("amount_unit_scale must be at least 1");
    std::vector<std::string> sorted_order = spec.field_order;
    std::sort(sorted_order.begin(), sorted_order.end());
    std::vector<std::string> canonical(kCanonicalFields.begin(), kCanonicalFields.end());
    std::sort(canonical.begin(), canonical.end());
    if (sorted_order != canonical) throw InputError("field_order is not a permutation of the canonical fields");
    std::set<std::string> locals;
    for (auto field : kCanonicalFields) {
        auto it = spec.field_names.find(std::string(field));
        if (it == spec.field_names.end()) throw InputError("no local name for field " + std::string(field));
        if (!usable_name(it->second)) throw InputError("unusable local name for field " + std::string(field));
        if (!locals.insert(it->second).second) throw InputError("local field names are not injective");
    }
    if (spec.field_names.size() != kCanonicalFields.size()) throw InputError("field_names has unknown entries");
}

FormatSpec identity_format(FormatId id) {
    FormatSpec s;
    s.id = id;
    for (auto f : kCanonicalFields) {
        s.field_order.emplace_back(f);
        s.field_names.emplace(std::string(f), std::string(f));
    }
    return s;
}

FormatSpec variant_format(FormatId id) {
    FormatSpec s;
    s.id = id;
    const std::size_t n = kCanonicalFields.size();
    const std::size_t shift = id.value % n;
    for (std::size_t i = 0; i < n; ++i) s.field_order.emplace_back(kCanonicalFields[(i + shift) % n]);
    const std::string prefix = "f" + to_string(id) + "_";
    for (auto f : kCanonicalFields) s.field_names.emplace(std::string(f), prefix + std::string(f));
    static constexpr std::uint64_t scales[] = {1, 10, 100};
    s.amount_unit_scale = scales[id.value % 3];
    return s;
}

std::string encode(const Transaction& tx, const FormatSpec& spec) {
    std::string out;
    out.reserve(320);
    for (const auto& field : spec.field_order) {
        auto value = value_of(tx, field, spec);
        if (value.find('\n') != std::string::npos) throw InputError("field value contains a newline");
        out += spec.field_names.at(field);
        out += '=';
        out += value;
        out += '\n';
    }
    return out;
}

Transaction decode(std::string_view bytes, const FormatSpec& spec) {
    Transaction tx;
    tx.format_id = spec.id;
    std::size_t pos = 0;
    for (const auto& field : spec.field_order) {
        auto nl = bytes.find('\n', pos);
        if (nl == std::string_view::npos) throw InputError("truncated transaction encoding");
        auto line = bytes.substr(pos, nl - pos);
        pos = nl + 1;
        auto eq = line.find('=');
        if (eq == std::string_view::npos) throw InputError("malformed transaction field");
        if (line.substr(0, eq) != spec.field_names.at(field))
            throw InputError("unexpected field " + std::string(line.substr(0, eq)) + " in format " + to_string(spec.id));
        assign(tx, field, line.substr(eq + 1), spec);
    }
    if (pos != bytes.size()) throw InputError("trailing bytes after transaction encoding");
    check_well_formed(tx);
    return tx;
}

Hash256 content_id(const Transaction& tx, const FormatSpec& spec) {
    Transaction blank = tx;
    if (!blank.origin_tx_id || *blank.origin_tx_id == blank.tx_id) blank.origin_tx_id.reset();
    blank.tx_id = Hash256{};
    blank.dependency.reset();
    if (blank.kind == TxKind::CrossChain && !blank.origin_tx_id) blank.origin_tx_id = Hash256{};
    return sha256(encode(blank, spec));
}

Transaction finalize_original(Transaction tx, const FormatSpec& spec) {
    tx.format_id = spec.id;
    tx.origin_tx_id.reset();
    tx.tx_id = Hash256{};
    const Hash256 id = content_id(tx, spec);
    tx.tx_id = id;
    if (tx.kind == TxKind::CrossChain) tx.origin_tx_id = id;
    return tx;
}

CanonicalTx canonical_projection(const Transaction& tx) {
    return {tx.sender, tx.receiver, tx.amount, tx.nonce, tx.kind, tx.origin_chain, tx.origin_tx_id, tx.dependency};
}

void TransformRegistry::add(TransformEntry entry) {
    Key key{entry.from.id, entry.to.id};
    entries_.insert_or_assign(key, std::move(entry));
}

const TransformEntry* TransformRegistry::find(FormatId from, FormatId to) const {
    auto it = entries_.find({from, to});
    return it == entries_.end() ? nullptr : &it->second;
}

TransformRegistry registry_for(const TopologyGraph& g, const std::map<ChainId, FormatSpec>& specs) {
    std::set<FormatId> ids;
    for (auto node : g.nodes()) {
        auto it = specs.find(node);
        if (it == specs.end()) throw InputError("no format spec for blockchain " + to_string(node));
        validate(it->second);
        if (!ids.insert(it->second.id).second)
            throw InputError("format id " + to_string(it->second.id) + " is shared by two blockchains");
    }
    TransformRegistry reg;
    for (const auto& e : g.edges()) reg.add({e, specs.at(e.to), specs.at(e.from)});
    return reg;
}

Transaction transf(const Transaction& tx, FormatId from, FormatId to, const TransformRegistry& reg) {
    if (tx.format_id != from)
        throw InputError("transaction is in format " + to_string(tx.format_id) + ", not " + to_string(from));
    const TransformEntry* entry = reg.find(from, to);
    if (!entry)
        throw TransformRefused("no translator from format " + to_string(from) + " to " + to_string(to) +
                               " (blockchains are not directly connected)");
    Transaction out = decode(encode(tx, entry->from), entry->from);
    out.format_id = entry->to.id;
    out.tx_id = Hash256{};
    out.tx_id = content_id(out, entry->to);
    return out;
}

}  // namespace xchain
