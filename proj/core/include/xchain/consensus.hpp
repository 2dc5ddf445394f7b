#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xchain/block.hpp"

namespace xchain {

enum class ConsensusKind { PoW, PoS };

std::string to_string(ConsensusKind k);

inline constexpr unsigned kDefaultDifficultyBits = 16;
inline constexpr std::uint64_t kDefaultTargetBlockInterval = 5;  // ticks

struct PosAccount {
    std::string address;
    std::uint64_t weight = 0;

    bool operator==(const PosAccount&) const = default;
};

struct ConsensusConfig {
    ConsensusKind kind = ConsensusKind::PoW;

    // PoW: required leading zero bits of the block hash, and the number of
    // nonces tried per tick. A budget of 0 means "derive from difficulty" so
    // the mean block interval is kDefaultTargetBlockInterval ticks.
    unsigned pow_difficulty_bits = kDefaultDifficultyBits;
    std::uint64_t pow_nonce_budget = 0;

    // PoS: roster with initial assets (weight = asset), the weight removed
    // from a sealer per block (0 means mean initial weight / 4), and the
    // number of ticks between sealing opportunities.
    std::vector<PosAccount> pos_accounts;
    std::uint64_t pos_weight_decrement = 0;
    std::uint64_t pos_block_interval = kDefaultTargetBlockInterval;
};

// Throws InputError when the configuration is unusable.
void validate(const ConsensusConfig& cfg);

std::uint64_t effective_nonce_budget(const ConsensusConfig& cfg);
std::uint64_t effective_weight_decrement(const ConsensusConfig& cfg);
std::vector<PosAccount> initial_pos_weights(const ConsensusConfig& cfg);

// First nonce in [nonce_start, nonce_start + nonce_budget) whose hash has at
// least `difficulty_bits` leading zero bits.
std::optional<std::uint64_t> pow_mine(const std::vector<std::uint8_t>& header_prefix, unsigned difficulty_bits,
                                      std::uint64_t nonce_start, std::uint64_t nonce_budget);

bool pow_verify(const Block& b, unsigned difficulty_bits);

// Max weight wins; ties go to the lexicographically smallest address.
// Throws InputError on an empty roster.
const std::string& pos_select(std::span<const PosAccount> accounts);

// Sealer's weight drops by `decrement`, floored at zero. Throws InputError for
// an unknown sealer.
std::vector<PosAccount> pos_update_after_seal(std::vector<PosAccount> accounts, const std::string& sealer,
                                              std::uint64_t decrement);

// Validity of a block under a blockchain's own consensus. For PoS the caller
// supplies the roster weights in force before the block.
bool verify_foreign_block(const Block& b, const ConsensusConfig& cfg, std::span<const PosAccount> weights_before = {});

// Replica of another blockchain's consensus view: tip linkage plus the PoS
// weight history, advanced block by block.
class ForeignVerifier {
public:
    ForeignVerifier(ConsensusConfig cfg, const Block& genesis);

    // Checks linkage and consensus validity of `blocks` in order without
    // mutating the replica.
    bool validate(std::span<const Block> blocks) const;
    // Validates then advances; returns false (and leaves state unchanged)
    // when any block fails.
    bool accept(std::span<const Block> blocks);

    const ConsensusConfig& config() const noexcept { return cfg_; }
    std::uint64_t height() const noexcept { return height_; }
    const Hash256& tip_hash() const noexcept { return tip_hash_; }
    const std::vector<PosAccount>& weights() const noexcept { return weights_; }

private:
    ConsensusConfig cfg_;
    std::uint64_t decrement_;
    std::vector<PosAccount> weights_;
    std::uint64_t height_;
    Hash256 tip_hash_;
};

}  // namespace xchain
