#include "xchain/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "xchain/error.hpp"

namespace xchain {

std::string flow_csv(const MetricsLog& log) {
    std::string out = "tick,chain,bytes_out,bytes_in\n";
    for (const auto& s : log.flow)
        out += std::to_string(s.tick) + ',' + to_string(s.chain) + ',' + std::to_string(s.bytes_out) + ',' +
               std::to_string(s.bytes_in) + '\n';
    return out;
}

std::string propagation_csv(const MetricsLog& log) {
    std::map<CrossKey, Tick> injected;
    for (const auto& i : log.injections)
        if (i.crosschain) injected.emplace(CrossKey{i.chain, i.tx}, i.tick);
    std::string out = "tick,origin_chain,origin_tx_id,sealed_on,hop_count,inject_tick\n";
    for (const auto& e : log.propagation) {
        auto it = injected.find(CrossKey{e.origin_chain, e.origin_tx_id});
        out += std::to_string(e.tick) + ',' + to_string(e.origin_chain) + ',' + e.origin_tx_id.to_hex() + ',' +
               to_string(e.sealed_on) + ',' + std::to_string(e.hop_count) + ',' +
               std::to_string(it != injected.end() ? it->second : 0) + '\n';
    }
    return out;
}

std::string balances_csv(const MetricsLog& log) {
    std::string out = "tick,chain,account,delta,balance,reason,tx_id\n";
    for (const auto& b : log.balances)
        out += std::to_string(b.tick) + ',' + to_string(b.chain) + ',' + b.account + ',' + std::to_string(b.delta) + ',' +
               std::to_string(b.balance) + ',' + to_string(b.reason) + ',' + b.tx.to_hex() + '\n';
    return out;
}

std::string blocks_csv(const MetricsLog& log) {
    std::string out = "tick,chain,height,hash,sealer,tx_count,crosschain_copies,interval\n";
    for (const auto& b : log.blocks)
        out += std::to_string(b.tick) + ',' + to_string(b.chain) + ',' + std::to_string(b.height) + ',' + b.hash.to_hex() +
               ',' + b.sealer + ',' + std::to_string(b.tx_count) + ',' + std::to_string(b.crosschain_copies) + ',' +
               std::to_string(b.interval) + '\n';
    return out;
}

void write_csv(const MetricsLog& log, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto put = [&](const char* name, const std::string& text) {
        std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
        if (!f) throw InputError("cannot write " + (dir / name).string());
        f << text;
    };
    put(kFlowCsv, flow_csv(log));
    put(kPropagationCsv, propagation_csv(log));
    put(kBalancesCsv, balances_csv(log));
    put(kBlocksCsv, blocks_csv(log));
}

namespace {

std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path, std::string_view header) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot read " + path.string());
    std::string line;
    if (!std::getline(f, line) || line != header) throw InputError("unexpected header in " + path.string());
    std::vector<std::vector<std::string>> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

template <typename T>
T num(const std::string& s) {
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw InputError("malformed number '" + s + "' in CSV");
    return v;
}

ChainId chain_of(const std::string& s) { return ChainId{num<std::uint32_t>(s)}; }

void expect_cells(const std::vector<std::string>& row, std::size_t n, const char* file) {
    if (row.size() != n) throw InputError(std::string("wrong column count in ") + file);
}

BalanceReason parse_reason(const std::string& s) {
    for (auto r : {BalanceReason::Debit, BalanceReason::Credit, BalanceReason::Escrow, BalanceReason::Settle,
                   BalanceReason::Reward})
        if (to_string(r) == s) return r;
    throw InputError("unknown balance reason " + s);
}

}  // namespace

MetricsLog read_csv(const std::filesystem::path& dir) {
    MetricsLog log;
    for (auto& r : read_rows(dir / kFlowCsv, "tick,chain,bytes_out,bytes_in")) {
        expect_cells(r, 4, kFlowCsv);
        log.flow.push_back({num<Tick>(r[0]), chain_of(r[1]), num<std::uint64_t>(r[2]), num<std::uint64_t>(r[3])});
        log.duration = std::max(log.duration, log.flow.back().tick);
    }
    std::set<CrossKey> seen;
    for (auto& r : read_rows(dir / kPropagationCsv, "tick,origin_chain,origin_tx_id,sealed_on,hop_count,inject_tick")) {
        expect_cells(r, 6, kPropagationCsv);
        const auto& e = log.propagation.emplace_back(PropagationEvent{
            num<Tick>(r[0]), Hash256::from_hex(r[2]), chain_of(r[1]), chain_of(r[3]), num<std::uint32_t>(r[4])});
        // 0 marks an origin whose injection was not recorded.
        const Tick injected = num<Tick>(r[5]);
        if (injected > 0 && seen.insert({e.origin_chain, e.origin_tx_id}).second)
            log.injections.push_back({injected, e.origin_chain, e.origin_tx_id, true, false});
    }
    for (auto& r : read_rows(dir / kBalancesCsv, "tick,chain,account,delta,balance,reason,tx_id")) {
        expect_cells(r, 7, kBalancesCsv);
        log.balances.push_back({num<Tick>(r[0]), chain_of(r[1]), r[2], num<std::int64_t>(r[3]), num<std::uint64_t>(r[4]),
                                parse_reason(r[5]), Hash256::from_hex(r[6])});
    }
    for (auto& r : read_rows(dir / kBlocksCsv, "tick,chain,height,hash,sealer,tx_count,crosschain_copies,interval")) {
        expect_cells(r, 8, kBlocksCsv);
        log.blocks.push_back({num<Tick>(r[0]), chain_of(r[1]), num<std::uint64_t>(r[2]), Hash256::from_hex(r[3]), r[4],
                              num<std::uint64_t>(r[5]), num<std::uint64_t>(r[6]), num<Tick>(r[7])});
    }
    return log;
}

double regression_slope(const std::vector<double>& ys) {
    const std::size_t n = ys.size();
    if (n < 2) return 0.0;
    const double mean_x = (static_cast<double>(n) - 1.0) / 2.0;
    double mean_y = 0.0;
    for (double y : ys) mean_y += y;
    mean_y /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) - mean_x;
        sxy += dx * (ys[i] - mean_y);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

Report summarize(const MetricsLog& log, double warmup_fraction) {
    Report r;
    r.duration = log.duration;
    r.warmup_ticks = static_cast<Tick>(std::floor(static_cast<double>(log.duration) * warmup_fraction));

    // Per-chain flow series over post-warm-up ticks.
    std::map<ChainId, std::map<Tick, double>> series;
    std::map<ChainId, std::pair<double, double>> totals;
    std::set<ChainId> chains;
    for (const auto& s : log.flow) {
        chains.insert(s.chain);
        if (s.tick <= r.warmup_ticks) continue;
        series[s.chain][s.tick] += static_cast<double>(s.bytes_out + s.bytes_in);
        totals[s.chain].first += static_cast<double>(s.bytes_out);
        totals[s.chain].second += static_cast<double>(s.bytes_in);
    }
    const double window = log.duration > r.warmup_ticks ? static_cast<double>(log.duration - r.warmup_ticks) : 0.0;

    std::map<ChainId, std::pair<std::uint64_t, std::uint64_t>> block_stats;
    for (const auto& b : log.blocks) {
        chains.insert(b.chain);
        block_stats[b.chain].first += 1;
        block_stats[b.chain].second += b.interval;
    }

    for (auto c : chains) {
        ChainSummary cs;
        cs.chain = c;
        if (window > 0) {
            cs.mean_out = totals[c].first / window;
            cs.mean_in = totals[c].second / window;
            cs.mean_flow = cs.mean_out + cs.mean_in;
        }
        cs.blocks = block_stats[c].first;
        if (cs.blocks > 0) cs.mean_block_interval = static_cast<double>(block_stats[c].second) / static_cast<double>(cs.blocks);
        r.chains.push_back(cs);
    }

    std::vector<ChainId> ids(chains.begin(), chains.end());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            PairSeries p;
            p.a = ids[i];
            p.b = ids[j];
            for (Tick t = r.warmup_ticks + 1; t <= log.duration; ++t) {
                auto fa = series[p.a].contains(t) ? series[p.a][t] : 0.0;
                auto fb = series[p.b].contains(t) ? series[p.b][t] : 0.0;
                p.sum.push_back(fa + fb);
                p.diff.push_back(fa - fb);
            }
            if (!p.sum.empty()) {
                for (double v : p.sum) p.mean_sum += v;
                for (double v : p.diff) p.mean_diff += v;
                p.mean_sum /= static_cast<double>(p.sum.size());
                p.mean_diff /= static_cast<double>(p.diff.size());
            }
            p.diff_slope = regression_slope(p.diff);
            r.pairs.push_back(std::move(p));
        }
    }

    std::map<CrossKey, TxLatency> lat;
    std::map<CrossKey, std::set<ChainId>> holders;
    for (const auto& e : log.propagation) {
        CrossKey key{e.origin_chain, e.origin_tx_id};
        auto [it, inserted] = lat.try_emplace(key, TxLatency{e.origin_chain, e.origin_tx_id, e.tick, e.tick, e.tick, 0});
        if (e.sealed_on == e.origin_chain) it->second.first_seal = e.tick;
        it->second.last_seal = std::max(it->second.last_seal, e.tick);
        holders[key].insert(e.sealed_on);
    }
    std::map<CrossKey, Tick> injected;
    for (const auto& i : log.injections)
        if (i.crosschain) injected.emplace(CrossKey{i.chain, i.tx}, i.tick);
    double total = 0.0;
    for (auto& [key, l] : lat) {
        l.depth = holders[key].size();
        auto inj = injected.find(key);
        l.inject_tick = inj != injected.end() ? std::min(inj->second, l.first_seal) : l.first_seal;
        if (l.depth == ids.size()) {
            ++r.fully_propagated;
            const Tick latency = l.last_seal - l.inject_tick;
            total += static_cast<double>(latency);
            r.max_latency = std::max(r.max_latency, latency);
        }
        r.latencies.push_back(l);
    }
    if (r.fully_propagated > 0) r.mean_latency = total / static_cast<double>(r.fully_propagated);
    return r;
}

const ChainSummary& summary_for(const Report& r, ChainId chain) {
    for (const auto& c : r.chains)
        if (c.chain == chain) return c;
    throw InputError("no summary for chain " + to_string(chain));
}

const PairSeries& pair_for(const Report& r, ChainId a, ChainId b) {
    for (const auto& p : r.pairs)
        if ((p.a == a && p.b == b) || (p.a == b && p.b == a)) return p;
    throw InputError("no pair series for chains " + to_string(a) + " and " + to_string(b));
}

std::string format_report(const Report& r) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(1);
    os << "duration_ticks " << r.duration << " (warm-up " << r.warmup_ticks << ")\n";
    os << "chain  mean_flow  mean_out  mean_in  blocks  mean_block_interval\n";
    for (const auto& c : r.chains)
        os << to_string(c.chain) << "  " << c.mean_flow << "  " << c.mean_out << "  " << c.mean_in << "  " << c.blocks
           << "  " << c.mean_block_interval << '\n';
    os << "pair  mean_sum  mean_diff  diff_slope\n";
    os.precision(3);
    for (const auto& p : r.pairs)
        os << to_string(p.a) << '+' << to_string(p.b) << "  " << p.mean_sum << "  " << p.mean_diff << "  " << p.diff_slope
           << '\n';
    os << "transactions " << r.latencies.size() << ", fully propagated " << r.fully_propagated << ", mean latency "
       << r.mean_latency << " ticks, max latency " << r.max_latency << " ticks\n";
    return os.str();
}

}  // namespace xchain
