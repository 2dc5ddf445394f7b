#include "xchain/sim.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "xchain/error.hpp"

namespace xchain {

TopologyGraph build_graph(const TopologySpec& spec) {
    if (spec.kind) {
        TopologyGraph g = build_topology(*spec.kind, spec.nodes, spec.hub, spec.max_out_degree);
        for (const auto& e : spec.edges) g.add_edge(e);
        return g;
    }
    TopologyGraph g(spec.max_out_degree);
    for (auto id : spec.nodes) g.add_node(id);
    for (const auto& e : spec.edges) g.add_edge(e);
    return g;
}

namespace {

void check_name(const std::string& s, const char* what) {
    if (s.empty() || s.find_first_of(",\n\r=") != std::string::npos)
        throw InputError(std::string(what) + " '" + s + "' must be non-empty without commas, '=' or newlines");
}

}  // namespace

void validate(const Scenario& s) {
    if (s.chains.empty()) throw InputError("scenario has no chains");
    if (s.ticks_per_minute == 0) throw InputError("ticks_per_minute must be positive");
    if (!(s.warmup_fraction >= 0.0 && s.warmup_fraction < 1.0)) throw InputError("warmup_fraction must be in [0, 1)");

    std::set<ChainId> ids;
    for (const auto& c : s.chains) {
        if (!ids.insert(c.id).second) throw InputError("duplicate chain id " + to_string(c.id));
        validate(c.consensus);
        if (c.format) validate(*c.format);
        if (c.node_count == 0) throw InputError("node_count must be positive");
        if (c.user_accounts < 2) throw InputError("a chain needs at least two user accounts");
        for (const auto& a : c.consensus.pos_accounts) check_name(a.address, "account");
    }
    std::set<ChainId> nodes(s.topology.nodes.begin(), s.topology.nodes.end());
    if (nodes != ids) throw InputError("topology nodes and chain ids differ");
    for (const auto& a : s.topology.selection_accounts) check_name(a, "selection account");

    auto known = [&](ChainId id) {
        if (!ids.contains(id)) throw InputError("unknown chain " + to_string(id));
    };
    for (const auto& w : s.workloads) {
        known(w.chain);
        if (w.paired_with) {
            known(*w.paired_with);
            if (*w.paired_with == w.chain) throw InputError("workload paired with its own chain");
            if (w.kind != TxKind::CrossChain) throw InputError("paired workloads must be cross-chain");
        }
        if (!(w.rate_per_minute >= 0.0)) throw InputError("workload rate must be non-negative");
        if (!s.allow_any_rate && w.rate_per_minute != 0.0 &&
            (w.rate_per_minute < kMinRatePerMinute || w.rate_per_minute > kMaxRatePerMinute))
            throw InputError("workload rate outside [150, 5000] tx/min");
        if (w.min_amount > w.max_amount) throw InputError("workload min_amount exceeds max_amount");
    }
    for (const auto& inj : s.injections) {
        if (inj.chains.empty()) throw InputError("injection without chains");
        if (inj.tick == 0) throw InputError("injections start at tick 1");
        std::set<ChainId> seen;
        for (auto c : inj.chains) {
            known(c);
            if (!seen.insert(c).second) throw InputError("injection lists a chain twice");
        }
    }
    validate(s.security);
}

std::string user_address(ChainId chain, std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "c%u.u%02zu", chain.value, index);
    return buf;
}

namespace {

std::map<ChainId, FormatSpec> formats_of(const Scenario& s) {
    std::map<ChainId, FormatSpec> out;
    for (const auto& c : s.chains) out.emplace(c.id, c.format ? *c.format : variant_format(FormatId{c.id.value}));
    return out;
}

std::vector<ChainConfig> chain_configs(const Scenario& s) {
    auto formats = formats_of(s);
    std::vector<ChainConfig> out;
    for (const auto& c : s.chains) {
        ChainConfig cfg;
        cfg.id = c.id;
        cfg.consensus = c.consensus;
        cfg.format = formats.at(c.id).id;
        cfg.node_count = c.node_count;
        cfg.crosschain_reward = c.crosschain_reward;
        for (std::size_t i = 0; i < c.user_accounts; ++i) cfg.balances.emplace(user_address(c.id, i), c.initial_balance);
        out.push_back(std::move(cfg));
    }
    return out;
}

Scenario normalized(Scenario s) {
    if (s.topology.nodes.empty())
        for (const auto& c : s.chains) s.topology.nodes.push_back(c.id);
    validate(s);
    return s;
}

NetworkOptions network_options(const Scenario& s) {
    NetworkOptions o = s.network;
    o.seed = s.seed;
    return o;
}

}  // namespace

WorkloadGenerator::WorkloadGenerator(const Scenario& scenario)
    : scenario_(&scenario), rng_(scenario.seed), formats_(formats_of(scenario)) {
    for (const auto& c : scenario.chains) users_.emplace(c.id, c.user_accounts);
}

Transaction WorkloadGenerator::make_tx(ChainId chain, TxKind kind, std::uint64_t amount) {
    const std::size_t users = users_.at(chain);
    std::uniform_int_distribution<std::size_t> pick(0, users - 1);
    const std::size_t from = pick(rng_);
    std::size_t to = pick(rng_);
    if (to == from) to = (to + 1) % users;

    Transaction tx;
    tx.sender = user_address(chain, from);
    tx.receiver = user_address(chain, to);
    tx.amount = amount;
    tx.nonce = nonces_[tx.sender]++;
    tx.kind = kind;
    if (kind == TxKind::CrossChain) tx.origin_chain = chain;
    return finalize_original(std::move(tx), formats_.at(chain));
}

void WorkloadGenerator::link_cycle(std::vector<Injected>& group) {
    if (group.size() < 2) return;
    for (std::size_t i = 0; i < group.size(); ++i) {
        const auto& next = group[(i + 1) % group.size()];
        group[i].tx.dependency = Dependency{next.chain, next.tx.tx_id};
    }
}

std::vector<Injected> WorkloadGenerator::inject(Tick tick) {
    std::vector<Injected> out;
    for (const auto& w : scenario_->workloads) {
        if (w.rate_per_minute <= 0.0) continue;
        std::poisson_distribution<std::uint64_t> arrivals(w.rate_per_minute / scenario_->ticks_per_minute);
        std::uniform_int_distribution<std::uint64_t> amount(w.min_amount, w.max_amount);
        const std::uint64_t n = arrivals(rng_);
        for (std::uint64_t i = 0; i < n; ++i) {
            if (w.paired_with) {
                std::vector<Injected> group{{w.chain, make_tx(w.chain, w.kind, amount(rng_))},
                                            {*w.paired_with, make_tx(*w.paired_with, w.kind, amount(rng_))}};
                link_cycle(group);
                out.insert(out.end(), group.begin(), group.end());
            } else {
                out.push_back({w.chain, make_tx(w.chain, w.kind, amount(rng_))});
            }
        }
    }
    for (const auto& inj : scenario_->injections) {
        if (inj.tick != tick) continue;
        std::vector<Injected> group;
        for (auto c : inj.chains) group.push_back({c, make_tx(c, TxKind::CrossChain, inj.amount)});
        link_cycle(group);
        out.insert(out.end(), group.begin(), group.end());
    }
    return out;
}

Simulation::Simulation(Scenario scenario)
    : scenario_(normalized(std::move(scenario))),
      membership_{scenario_.topology.selection_accounts, scenario_.topology.threshold, {}},
      network_(build_graph(scenario_.topology), chain_configs(scenario_), formats_of(scenario_),
               network_options(scenario_)),
      workload_(scenario_) {
    log_.duration = scenario_.duration_ticks;
}

SubmitResult Simulation::submit(ChainId chain, Transaction tx) {
    const bool cross = tx.is_crosschain();
    const bool dep = tx.dependency.has_value();
    const Hash256 id = tx.tx_id;
    auto res = network_.submit_original(chain, std::move(tx));
    if (res == SubmitResult::Queued) log_.injections.push_back({tick_ + 1, chain, id, cross, dep});
    return res;
}

void Simulation::apply_proposals() {
    for (const auto& ev : scenario_.topology.proposals) {
        if (ev.tick != tick_) continue;
        MembershipProposal p = ev.proposal;
        p.status = ProposalStatus::Pending;
        TopologyGraph next = apply_membership(network_.topology(), p, membership_);
        if (p.status == ProposalStatus::Applied) network_.set_topology(std::move(next));
        log_.membership.push_back({tick_, p.target_edge, p.action, p.status, p.reason});
    }
}

void Simulation::step() {
    if (finished()) return;
    ++tick_;
    apply_proposals();

    for (auto& inj : workload_.inject(tick_)) {
        const bool cross = inj.tx.is_crosschain();
        const bool dep = inj.tx.dependency.has_value();
        const Hash256 id = inj.tx.tx_id;
        if (network_.submit_original(inj.chain, std::move(inj.tx)) == SubmitResult::Queued)
            log_.injections.push_back({tick_, inj.chain, id, cross, dep});
    }

    TickReport report = network_.propagate_tick(tick_);
    network_.settle_dependencies(tick_, report);

    for (const auto& [chain, f] : report.flow) log_.flow.push_back({tick_, chain, f.bytes_out, f.bytes_in});
    log_.propagation.insert(log_.propagation.end(), report.events.begin(), report.events.end());
    for (const auto& b : report.blocks) {
        Tick& last = last_block_tick_[b.chain];
        log_.blocks.push_back({tick_, b.chain, b.height, b.hash, b.sealer, b.tx_count, b.crosschain_copies, tick_ - last});
        last = tick_;
    }
    log_.confirmations.insert(log_.confirmations.end(), report.confirmations.begin(), report.confirmations.end());
    log_.balances.insert(log_.balances.end(), report.balance_changes.begin(), report.balance_changes.end());
    log_.settlements.insert(log_.settlements.end(), report.settlements.begin(), report.settlements.end());
    for (auto& f : report.faults) log_.faults.push_back("tick " + std::to_string(tick_) + ": " + f);
}

const MetricsLog& Simulation::run() {
    while (!finished()) step();
    return log_;
}

MetricsLog run(const Scenario& scenario) {
    Simulation sim(scenario);
    sim.run();
    return sim.log();
}

}  // namespace xchain
