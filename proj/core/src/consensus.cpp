#include "xchain/consensus.hpp"

#include <algorithm>

#include "xchain/error.hpp"

namespace xchain {

std::string to_string(ConsensusKind k) { return k == ConsensusKind::PoW ? "pow" : "pos"; }

void validate(const ConsensusConfig& cfg) {
    if (cfg.kind == ConsensusKind::PoW) {
        if (cfg.pow_difficulty_bits < 1 || cfg.pow_difficulty_bits > 255)
            throw InputError("pow_difficulty_bits must be in [1, 255]");
        return;
    }
    if (cfg.pos_accounts.empty()) throw InputError("PoS consensus requires at least one account");
    if (cfg.pos_block_interval == 0) throw InputError("pos_block_interval must be positive");
    for (std::size_t i = 0; i < cfg.pos_accounts.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.pos_accounts.size(); ++j)
            if (cfg.pos_accounts[i].address == cfg.pos_accounts[j].address)
                throw InputError("duplicate PoS account " + cfg.pos_accounts[i].address);
}

std::uint64_t effective_nonce_budget(const ConsensusConfig& cfg) {
    if (cfg.pow_nonce_budget > 0) return cfg.pow_nonce_budget;
    if (cfg.pow_difficulty_bits >= 63) return std::uint64_t{1} << 62;
    return std::max<std::uint64_t>(1, (std::uint64_t{1} << cfg.pow_difficulty_bits) / kDefaultTargetBlockInterval);
}

std::uint64_t effective_weight_decrement(const ConsensusConfig& cfg) {
    if (cfg.pos_weight_decrement > 0) return cfg.pos_weight_decrement;
    if (cfg.pos_accounts.empty()) return 1;
    std::uint64_t total = 0;
    for (const auto& a : cfg.pos_accounts) total += a.weight;
    return std::max<std::uint64_t>(1, total / cfg.pos_accounts.size() / 4);
}

std::vector<PosAccount> initial_pos_weights(const ConsensusConfig& cfg) { return cfg.pos_accounts; }

std::optional<std::uint64_t> pow_mine(const std::vector<std::uint8_t>& header_prefix, unsigned difficulty_bits,
                                      std::uint64_t nonce_start, std::uint64_t nonce_budget) {
    std::vector<std::uint8_t> buf(header_prefix);
    const std::size_t at = buf.size();
    buf.resize(at + 8);
    for (std::uint64_t i = 0; i < nonce_budget; ++i) {
        const std::uint64_t nonce = nonce_start + i;
        for (int k = 0; k < 8; ++k) buf[at + k] = static_cast<std::uint8_t>(nonce >> (8 * k));
        if (leading_zero_bits(sha256(buf)) >= difficulty_bits) return nonce;
    }
    return std::nullopt;
}

bool pow_verify(const Block& b, unsigned difficulty_bits) {
    return hashes_consistent(b) && leading_zero_bits(b.block_hash) >= difficulty_bits;
}

const std::string& pos_select(std::span<const PosAccount> accounts) {
    if (accounts.empty()) throw InputError("pos_select on an empty roster");
    const PosAccount* best = &accounts.front();
    for (const auto& a : accounts.subspan(1))
        if (a.weight > best->weight || (a.weight == best->weight && a.address < best->address)) best = &a;
    return best->address;
}

std::vector<PosAccount> pos_update_after_seal(std::vector<PosAccount> accounts, const std::string& sealer,
                                              std::uint64_t decrement) {
    auto it = std::find_if(accounts.begin(), accounts.end(), [&](const auto& a) { return a.address == sealer; });
    if (it == accounts.end()) throw InputError("unknown PoS sealer " + sealer);
    it->weight = it->weight > decrement ? it->weight - decrement : 0;
    return accounts;
}

bool verify_foreign_block(const Block& b, const ConsensusConfig& cfg, std::span<const PosAccount> weights_before) {
    if (cfg.kind == ConsensusKind::PoW) return pow_verify(b, cfg.pow_difficulty_bits);
    if (!hashes_consistent(b) || weights_before.empty()) return false;
    return b.sealer == pos_select(weights_before);
}

ForeignVerifier::ForeignVerifier(ConsensusConfig cfg, const Block& genesis)
    : cfg_(std::move(cfg)),
      decrement_(effective_weight_decrement(cfg_)),
      weights_(initial_pos_weights(cfg_)),
      height_(genesis.height),
      tip_hash_(genesis.block_hash) {}

bool ForeignVerifier::validate(std::span<const Block> blocks) const {
    ForeignVerifier probe = *this;
    return probe.accept(blocks);
}

bool ForeignVerifier::accept(std::span<const Block> blocks) {
    auto weights = weights_;
    auto height = height_;
    auto tip = tip_hash_;
    for (const auto& b : blocks) {
        if (b.prev_hash != tip || b.height != height + 1) return false;
        if (!verify_foreign_block(b, cfg_, weights)) return false;
        if (cfg_.kind == ConsensusKind::PoS) weights = pos_update_after_seal(std::move(weights), b.sealer, decrement_);
        height = b.height;
        tip = b.block_hash;
    }
    weights_ = std::move(weights);
    height_ = height;
    tip_hash_ = tip;
    return true;
}

}  // namespace xchain
