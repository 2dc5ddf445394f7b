#include "xchain/security.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "xchain/error.hpp"

namespace xchain {

namespace {

// Products over more chains than this are accumulated in log space.
constexpr std::size_t kLogSpaceThreshold = 30;

std::vector<double> gather(const BreakProbabilities& ps, const std::vector<ChainId>& chains) {
    if (chains.empty()) throw InputError("chain set must not be empty");
    std::vector<double> out;
    out.reserve(chains.size());
    for (auto id : chains) {
        auto it = ps.per_chain.find(id);
        if (it == ps.per_chain.end()) throw InputError("no break probability for chain " + to_string(id));
        const double p = it->second;
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("break probability of chain " + to_string(id) + " is outside [0, 1]");
        out.push_back(p);
    }
    return out;
}

double product(const std::vector<double>& xs) {
    if (xs.size() <= kLogSpaceThreshold) {
        double prod = 1.0;
        for (double x : xs) prod *= x;
        return prod;
    }
    double log_sum = 0.0;
    for (double x : xs) {
        if (x == 0.0) return 0.0;
        log_sum += std::log(x);
    }
    return std::exp(log_sum);
}

}  // namespace

void validate(const BreakProbabilities& ps) {
    for (const auto& [id, p] : ps.per_chain)
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("break probability of chain " + to_string(id) + " is outside [0, 1]");
}

double fake_probability(const BreakProbabilities& ps, const std::vector<ChainId>& chains) {
    return product(gather(ps, chains));
}

double intact_probability(const BreakProbabilities& ps, const std::vector<ChainId>& chains) {
    auto xs = gather(ps, chains);
    for (auto& x : xs) x = 1.0 - x;
    return product(xs);
}

double detect_probability(const BreakProbabilities& ps, const std::vector<ChainId>& chains) {
    // One chain can never disagree with itself; the subtraction would leave
    // rounding noise.
    if (gather(ps, chains).size() == 1) return 0.0;
    return std::max(0.0, 1.0 - intact_probability(ps, chains) - fake_probability(ps, chains));
}

std::size_t confirmation_depth(const std::vector<PropagationEvent>& trace, const Hash256& origin_tx_id) {
    std::set<ChainId> chains;
    for (const auto& e : trace)
        if (e.origin_tx_id == origin_tx_id) chains.insert(e.sealed_on);
    return chains.size();
}

SamplingEstimate verify_detection_by_sampling(const BreakProbabilities& ps, const std::vector<ChainId>& chains,
                                              std::uint64_t trials, std::uint64_t seed) {
    if (trials == 0) throw InputError("trials must be at least 1");
    const auto probs = gather(ps, chains);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::size_t broken = 0;
        for (double p : probs)
            if (unit(rng) < p) ++broken;
        if (broken != 0 && broken != probs.size()) ++hits;
    }
    SamplingEstimate est;
    est.trials = trials;
    est.estimate = static_cast<double>(hits) / static_cast<double>(trials);
    est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(trials));
    return est;
}

}  // namespace xchain
