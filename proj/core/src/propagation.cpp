#include "xchain/propagation.hpp"

#include <algorithm>

#include "xchain/error.hpp"

namespace xchain {

std::uint64_t block_wire_size(const Block& b, const FormatSpec& spec) {
    // prefix + nonce + block hash
    std::uint64_t size = header_prefix(b).size() + 8 + 32;
    for (const auto& tx : b.transactions) size += encode(tx, spec).size();
    return size;
}

SyncDelta sync_step(const SyncCursor& cursor, const ChainState& source, std::span<const std::uint64_t> wire_sizes,
                    std::size_t fan_out, std::uint64_t heartbeat_bytes) {
    SyncDelta delta;
    const auto& blocks = source.blocks();
    delta.next_height = std::max(cursor.last_seen_height, source.height());
    for (std::uint64_t h = cursor.last_seen_height + 1; h <= source.height(); ++h) {
        delta.blocks.push_back(blocks[h]);
        delta.bytes += wire_sizes[h] * fan_out;
    }
    if (delta.blocks.empty()) delta.bytes = heartbeat_bytes;
    return delta;
}

bool validate_copied_chain(std::span<const Block> blocks, const ForeignVerifier& replica) {
    return replica.validate(blocks);
}

std::vector<Transaction> extract_crosschain(std::span<const Block> blocks) {
    std::vector<Transaction> out;
    for (const auto& b : blocks)
        for (const auto& tx : b.transactions)
            if (tx.is_crosschain()) out.push_back(tx);
    return out;
}

ConfirmResult confirm_and_seal(ChainState& observer, std::span<const Transaction> txs, const TransformRegistry& reg,
                               FormatId source_format, ChainId source_chain,
                               const std::map<CrossKey, std::uint32_t>& source_hops) {
    ConfirmResult result;
    for (const auto& tx : txs) {
        auto key = tx.cross_key();
        if (!key) {
            result.faults.push_back("malformed cross-chain transaction " + tx.tx_id.to_hex());
            continue;
        }
        if (observer.contains_crosschain(key->origin, key->tx)) {
            ++result.duplicates;
            continue;
        }
        Transaction local;
        try {
            local = transf(tx, source_format, observer.format(), reg);
        } catch (const DomainError& e) {
            result.faults.push_back(e.what());
            continue;
        }
        std::uint32_t hop = 1;
        if (auto it = source_hops.find(*key); it != source_hops.end()) hop = it->second + 1;
        if (observer.submit({std::move(local), source_chain, hop}) == SubmitResult::Queued)
            ++result.queued;
        else
            ++result.duplicates;
    }
    return result;
}

Network::Network(TopologyGraph topology, const std::vector<ChainConfig>& chains,
                 std::map<ChainId, FormatSpec> formats, NetworkOptions options)
    : topology_(std::move(topology)), formats_(std::move(formats)), options_(options) {
    if (options_.sync_period_ticks == 0) throw InputError("sync period must be positive");
    if (!is_strongly_connected(topology_)) throw DomainError("topology is not strongly connected");
    for (const auto& cfg : chains) {
        if (!topology_.has_node(cfg.id)) throw InputError("chain " + to_string(cfg.id) + " is not in the topology");
        auto fmt = formats_.find(cfg.id);
        if (fmt == formats_.end()) throw InputError("no format spec for chain " + to_string(cfg.id));
        if (fmt->second.id != cfg.format) throw InputError("chain " + to_string(cfg.id) + " format id mismatch");
        auto [it, inserted] = chains_.emplace(cfg.id, ChainState(cfg));
        if (!inserted) throw InputError("duplicate chain " + to_string(cfg.id));
        wire_sizes_[cfg.id].push_back(block_wire_size(it->second.tip(), fmt->second));
        hops_[cfg.id];
        // Per-chain nonce stream; only determinism matters, not unpredictability.
        nonce_counters_[cfg.id] = (options_.seed * 0x9E3779B97F4A7C15ULL) ^ (std::uint64_t{cfg.id.value} << 40);
    }
    for (auto node : topology_.nodes())
        if (!chains_.contains(node)) throw InputError("topology node " + to_string(node) + " has no chain config");
    registry_ = registry_for(topology_, formats_);
    rebuild_replicas();
}

const ChainState& Network::chain(ChainId id) const {
    auto it = chains_.find(id);
    if (it == chains_.end()) throw InputError("unknown chain " + to_string(id));
    return it->second;
}

void Network::rebuild_replicas() {
    std::map<Edge, SyncCursor> cursors;
    std::map<Edge, ForeignVerifier> verifiers;
    for (const auto& e : topology_.edges()) {
        if (auto it = cursors_.find(e); it != cursors_.end()) {
            cursors.emplace(e, it->second);
            verifiers.emplace(e, verifiers_.at(e));
            continue;
        }
        const auto& source = chains_.at(e.to);
        cursors.emplace(e, SyncCursor{e.from, e.to, 0, options_.sync_period_ticks});
        verifiers.emplace(e, ForeignVerifier(source.consensus(), source.blocks().front()));
    }
    cursors_ = std::move(cursors);
    verifiers_ = std::move(verifiers);
}

void Network::set_topology(TopologyGraph topology) {
    if (!is_strongly_connected(topology)) throw DomainError("topology is not strongly connected");
    if (topology.nodes() != topology_.nodes()) throw InputError("topology change may not add or remove blockchains");
    registry_ = registry_for(topology, formats_);
    topology_ = std::move(topology);
    rebuild_replicas();
}

SubmitResult Network::submit_original(ChainId chain, Transaction tx) {
    auto it = chains_.find(chain);
    if (it == chains_.end()) throw InputError("unknown chain " + to_string(chain));
    if (tx.is_crosschain() && (!tx.origin_chain || *tx.origin_chain != chain))
        throw InputError("cross-chain original must name its own chain as origin");
    return it->second.submit({std::move(tx), std::nullopt, 0});
}

void Network::sync_edge(const Edge& edge, TickReport& report) {
    auto& cursor = cursors_.at(edge);
    auto& verifier = verifiers_.at(edge);
    auto& observer = chains_.at(edge.from);
    const auto& source = chains_.at(edge.to);

    SyncDelta delta = sync_step(cursor, source, wire_sizes_.at(edge.to), observer.node_count(), options_.heartbeat_bytes);
    report.flow[edge.to].bytes_out += delta.bytes;
    report.flow[edge.from].bytes_in += delta.bytes;
    if (delta.blocks.empty()) return;

    if (!verifier.accept(delta.blocks)) {
        report.faults.push_back("chain " + to_string(edge.from) + " discarded an invalid delta from chain " +
                                to_string(edge.to));
        return;
    }
    cursor.last_seen_height = delta.next_height;
    auto txs = extract_crosschain(delta.blocks);
    auto& verified = verified_keys_[edge];
    for (const auto& tx : txs)
        if (auto key = tx.cross_key()) verified.insert(*key);
    auto result = confirm_and_seal(observer, txs, registry_, source.format(), source.id(), hops_.at(edge.to));
    for (auto& f : result.faults) report.faults.push_back(std::move(f));
}

bool Network::locally_valid(const ChainState& chain, const Block& b) const {
    if (b.prev_hash != chain.tip().block_hash || b.height != chain.height() + 1) return false;
    if (chain.consensus().kind == ConsensusKind::PoW) return pow_verify(b, chain.consensus().pow_difficulty_bits);
    return verify_foreign_block(b, chain.consensus(), chain.pos_weights());
}

void Network::mine(ChainState& chain, Tick tick, TickReport& report) {
    // Nothing to seal: an idle chain only exchanges heartbeats.
    if (chain.mempool().empty()) return;
    const auto& cfg = chain.consensus();
    std::optional<Block> block;
    if (cfg.kind == ConsensusKind::PoW) {
        const std::uint64_t budget = effective_nonce_budget(cfg);
        auto& counter = nonce_counters_.at(chain.id());
        Block candidate = chain.assemble_candidate(tick, miner_address(chain.id()), options_.max_block_txs);
        auto prefix = header_prefix(candidate);
        auto nonce = pow_mine(prefix, cfg.pow_difficulty_bits, counter, budget);
        counter += budget;
        if (nonce) {
            candidate.nonce = *nonce;
            candidate.block_hash = hash_with_nonce(prefix, *nonce);
            block = std::move(candidate);
        }
    } else if (tick % cfg.pos_block_interval == 0) {
        block = chain.assemble_candidate(tick, chain.next_pos_sealer(), options_.max_block_txs);
    }
    if (!block) return;

    const bool local_ok = locally_valid(chain, *block);
    auto sealed = chain.append_block(*block, &report.balance_changes);
    wire_sizes_.at(chain.id()).push_back(block_wire_size(*block, formats_.at(chain.id())));

    auto& hops = hops_.at(chain.id());
    std::size_t copies = 0;
    for (const auto& s : sealed) {
        hops.emplace(s.key, s.hop);
        report.events.push_back({tick, s.key.tx, s.key.origin, chain.id(), s.hop});
        if (s.is_origin) continue;
        ++copies;
        ConfirmationCheck check{chain.id(), s.key, s.verified_under, false, local_ok};
        if (s.verified_under) {
            auto v = verified_keys_.find({chain.id(), *s.verified_under});
            check.foreign_verified = v != verified_keys_.end() && v->second.contains(s.key);
        }
        report.confirmations.push_back(check);
    }
    report.blocks.push_back({chain.id(), block->height, block->block_hash, block->sealer, block->transactions.size(), copies});
}

void Network::settle_dependencies(Tick tick, TickReport& report) {
    for (auto& [_, chain] : chains_) {
        auto done = chain.settle(tick, &report.balance_changes);
        report.settlements.insert(report.settlements.end(), done.begin(), done.end());
    }
}

TickReport Network::propagate_tick(Tick tick) {
    TickReport report;
    report.tick = tick;
    for (const auto& [id, _] : chains_) report.flow[id];

    if (tick % options_.sync_period_ticks == 0) {
        for (const auto& [edge, _] : cursors_) {
            const bool pos = chains_.at(edge.from).consensus().kind == ConsensusKind::PoS;
            const unsigned rounds = pos ? std::max(1u, options_.pos_sync_rounds) : 1u;
            for (unsigned r = 0; r < rounds; ++r) sync_edge(edge, report);
        }
    }
    for (auto& [_, chain] : chains_) mine(chain, tick, report);
    return report;
}

}  // namespace xchain
