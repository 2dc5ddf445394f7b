#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "xchain/chain.hpp"
#include "xchain/propagation.hpp"

namespace xchain {

struct FlowSample {
    Tick tick = 0;
    ChainId chain;
    std::uint64_t bytes_out = 0;
    std::uint64_t bytes_in = 0;

    bool operator==(const FlowSample&) const = default;
};

struct BlockSample {
    Tick tick = 0;
    ChainId chain;
    std::uint64_t height = 0;
    Hash256 hash;
    std::string sealer;
    std::uint64_t tx_count = 0;
    std::uint64_t crosschain_copies = 0;
    Tick interval = 0;  // ticks since the chain's previous block

    bool operator==(const BlockSample&) const = default;
};

struct InjectionRecord {
    Tick tick = 0;
    ChainId chain;
    Hash256 tx;
    bool crosschain = false;
    bool has_dependency = false;
};

struct MembershipRecord {
    Tick tick = 0;
    Edge edge;
    ProposalAction action = ProposalAction::AddEdge;
    ProposalStatus status = ProposalStatus::Pending;
    std::string reason;
};

// Append-only record of one simulation run.
struct MetricsLog {
    Tick duration = 0;
    std::vector<FlowSample> flow;
    std::vector<PropagationEvent> propagation;
    std::vector<BalanceChange> balances;
    std::vector<BlockSample> blocks;
    std::vector<InjectionRecord> injections;
    std::vector<ConfirmationCheck> confirmations;
    std::vector<Settlement> settlements;
    std::vector<MembershipRecord> membership;
    std::vector<std::string> faults;
};

// --- CSV export ------------------------------------------------------------

inline constexpr const char* kFlowCsv = "flow.csv";
inline constexpr const char* kPropagationCsv = "propagation.csv";
inline constexpr const char* kBalancesCsv = "balances.csv";
inline constexpr const char* kBlocksCsv = "blocks.csv";

std::string flow_csv(const MetricsLog& log);
std::string propagation_csv(const MetricsLog& log);
std::string balances_csv(const MetricsLog& log);
std::string blocks_csv(const MetricsLog& log);

// Writes the four CSV files into `dir`, creating it when needed.
void write_csv(const MetricsLog& log, const std::filesystem::path& dir);

// Reads back the four CSV files. Cross-chain injections are rebuilt from the
// inject_tick column of propagation.csv; confirmations, settlements and
// membership stay empty. Throws InputError.
MetricsLog read_csv(const std::filesystem::path& dir);

// --- summary -----------------------------------------------------------------

struct ChainSummary {
    ChainId chain;
    double mean_flow = 0.0;  // bytes_out + bytes_in per tick
    double mean_out = 0.0;
    double mean_in = 0.0;
    std::uint64_t blocks = 0;
    double mean_block_interval = 0.0;
};

struct PairSeries {
    ChainId a;
    ChainId b;
    std::vector<double> sum;   // flow(a) + flow(b) per post-warm-up tick
    std::vector<double> diff;  // flow(a) - flow(b)
    double mean_sum = 0.0;
    double mean_diff = 0.0;
    double diff_slope = 0.0;   // least-squares slope of diff over ticks
};

struct TxLatency {
    ChainId origin;
    Hash256 origin_tx_id;
    // Tick the transaction was created; the origin seal when the log carries
    // no injection records (logs read back from CSV).
    Tick inject_tick = 0;
    Tick first_seal = 0;  // seal on the origin chain
    Tick last_seal = 0;
    std::size_t depth = 0;
};

struct Report {
    Tick duration = 0;
    Tick warmup_ticks = 0;
    std::vector<ChainSummary> chains;
    std::vector<PairSeries> pairs;
    std::vector<TxLatency> latencies;
    double mean_latency = 0.0;  // inject_tick to last seal, fully propagated only
    Tick max_latency = 0;
    std::size_t fully_propagated = 0;  // transactions sealed on every chain
};

inline constexpr double kDefaultWarmupFraction = 0.1;

// Statistics over ticks after the warm-up window. Pair series are produced
// for every unordered pair of chains.
Report summarize(const MetricsLog& log, double warmup_fraction = kDefaultWarmupFraction);

const ChainSummary& summary_for(const Report& r, ChainId chain);
const PairSeries& pair_for(const Report& r, ChainId a, ChainId b);

std::string format_report(const Report& r);

// Least-squares slope of ys against 0, 1, 2, ...
double regression_slope(const std::vector<double>& ys);

}  // namespace xchain
