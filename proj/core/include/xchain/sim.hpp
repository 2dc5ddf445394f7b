#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "xchain/chain.hpp"
#include "xchain/consensus.hpp"
#include "xchain/format.hpp"
#include "xchain/metrics.hpp"
#include "xchain/propagation.hpp"
#include "xchain/security.hpp"
#include "xchain/topology.hpp"

namespace xchain {

inline constexpr double kMinRatePerMinute = 150.0;
inline constexpr double kMaxRatePerMinute = 5000.0;

struct ProposalEvent {
    Tick tick = 0;
    MembershipProposal proposal;
};

struct TopologySpec {
    // Either a builder kind over `nodes` or an explicit edge list.
    std::optional<TopologyKind> kind;
    std::optional<ChainId> hub;
    std::vector<ChainId> nodes;
    std::vector<Edge> edges;
    std::size_t max_out_degree = kDefaultMaxOutDegree;
    std::vector<std::string> selection_accounts;
    Fraction threshold{};
    std::vector<ProposalEvent> proposals;
};

TopologyGraph build_graph(const TopologySpec& spec);

struct ChainSpec {
    ChainId id;
    ConsensusConfig consensus;
    std::optional<FormatSpec> format;  // variant_format(id) when absent
    std::size_t node_count = 4;
    std::size_t user_accounts = 16;
    std::uint64_t initial_balance = 1'000'000'000;
    std::uint64_t crosschain_reward = kDefaultCrosschainReward;
};

// Poisson stream of transactions created on `chain`. With `paired_with` set,
// every arrival creates two associated transactions, one on each chain, each
// depending on the other.
struct WorkloadSpec {
    ChainId chain;
    double rate_per_minute = 0.0;
    TxKind kind = TxKind::CrossChain;
    std::optional<ChainId> paired_with;
    std::uint64_t min_amount = 1;
    std::uint64_t max_amount = 100;
};

// Scripted transactions injected at one tick: one per listed chain. With two
// or more chains, transaction i depends on transaction i+1 (cyclically).
struct Injection {
    Tick tick = 0;
    std::vector<ChainId> chains;
    std::uint64_t amount = 10;
};

struct Scenario {
    std::string name = "scenario";
    TopologySpec topology;
    std::vector<ChainSpec> chains;
    std::vector<WorkloadSpec> workloads;
    std::vector<Injection> injections;
    Tick duration_ticks = 600;
    std::uint64_t seed = 1;
    std::uint32_t ticks_per_minute = 60;
    NetworkOptions network{};
    double warmup_fraction = kDefaultWarmupFraction;
    // Off by default: rates must be 0 or within the tested range.
    bool allow_any_rate = false;
    BreakProbabilities security;
    std::vector<std::vector<ChainId>> security_sets;
};

// Structural checks on a scenario. Throws InputError.
void validate(const Scenario& s);

std::string user_address(ChainId chain, std::size_t index);

struct Injected {
    ChainId chain;
    Transaction tx;
};

// Deterministic transaction source for a scenario.
class WorkloadGenerator {
public:
    explicit WorkloadGenerator(const Scenario& scenario);

    // Transactions created at `tick`: Poisson arrivals with mean
    // rate / ticks_per_minute per workload, plus scripted injections.
    std::vector<Injected> inject(Tick tick);

private:
    Transaction make_tx(ChainId chain, TxKind kind, std::uint64_t amount);
    void link_cycle(std::vector<Injected>& group);

    const Scenario* scenario_;
    std::mt19937_64 rng_;
    std::map<ChainId, FormatSpec> formats_;
    std::map<ChainId, std::size_t> users_;
    std::map<std::string, std::uint64_t> nonces_;
};

// Tick loop over one scenario: membership changes, workload injection,
// propagate_tick, dependency settlement, then metrics.
class Simulation {
public:
    // Throws InputError on a malformed scenario and DomainError when the
    // topology is not strongly connected.
    explicit Simulation(Scenario scenario);
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    Tick now() const noexcept { return tick_; }
    bool finished() const noexcept { return tick_ >= scenario_.duration_ticks; }

    void step();
    // Runs to duration_ticks.
    const MetricsLog& run();

    const Scenario& scenario() const noexcept { return scenario_; }
    const Network& network() const noexcept { return network_; }
    const MetricsLog& log() const noexcept { return log_; }

    // Direct injection for tests and tools, bypassing the workload generator.
    SubmitResult submit(ChainId chain, Transaction tx);

private:
    void apply_proposals();

    Scenario scenario_;
    MembershipConfig membership_;
    Network network_;
    WorkloadGenerator workload_;
    MetricsLog log_;
    std::map<ChainId, Tick> last_block_tick_;
    Tick tick_ = 0;
};

MetricsLog run(const Scenario& scenario);

// Bundled desk-scale scenarios.
std::vector<std::string> preset_names();
// Throws InputError for an unknown name.
Scenario preset(std::string_view name);

}  // namespace xchain
