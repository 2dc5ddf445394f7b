#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "xchain/hash.hpp"
#include "xchain/ids.hpp"
#include "xchain/propagation.hpp"

namespace xchain {

// Probability that an adversary can fake a transaction on each blockchain.
struct BreakProbabilities {
    std::map<ChainId, double> per_chain;
};

// Throws DomainError for values outside [0, 1] or NaN.
void validate(const BreakProbabilities& ps);

// Product of p_i over `chains`: a fake must succeed on every chain holding a
// copy. Throws InputError for an empty set or an unknown chain.
double fake_probability(const BreakProbabilities& ps, const std::vector<ChainId>& chains);

// Product of (1 - p_i): no chain was broken.
double intact_probability(const BreakProbabilities& ps, const std::vector<ChainId>& chains);

// 1 - prod(1 - p_i) - prod(p_i): some but not all copies differ, so the
// inconsistency between blockchains is observable.
double detect_probability(const BreakProbabilities& ps, const std::vector<ChainId>& chains);

// Number of distinct chains holding a sealed copy of `origin_tx_id`.
std::size_t confirmation_depth(const std::vector<PropagationEvent>& trace, const Hash256& origin_tx_id);

struct SamplingEstimate {
    double estimate = 0.0;
    double std_error = 0.0;  // binomial standard deviation of the estimate
    std::uint64_t trials = 0;
};

// Monte-Carlo estimate of detect_probability: each trial breaks every chain
// independently with its p_i and counts the trial when the broken set is
// neither empty nor all chains.
SamplingEstimate verify_detection_by_sampling(const BreakProbabilities& ps, const std::vector<ChainId>& chains,
                                              std::uint64_t trials, std::uint64_t seed);

}  // namespace xchain
