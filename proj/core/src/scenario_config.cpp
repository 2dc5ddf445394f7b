#include "xchain/scenario_config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "xchain/error.hpp"

namespace xchain {

using nlohmann::json;

namespace {

ChainId chain_id(const json& j) { return ChainId{j.get<std::uint32_t>()}; }

Edge edge_of(const json& j) {
    if (!j.is_array() || j.size() != 2) throw InputError("an edge is a two-element array [from, to]");
    return {chain_id(j[0]), chain_id(j[1])};
}

json edge_json(const Edge& e) { return json::array({e.from.value, e.to.value}); }

std::string kind_name(TopologyKind k) {
    switch (k) {
        case TopologyKind::Ring: return "ring";
        case TopologyKind::Star: return "star";
        case TopologyKind::Full: return "full";
    }
    return "ring";
}

TopologySpec topology_from(const json& t) {
    TopologySpec spec;
    if (t.contains("kind")) {
        auto k = parse_topology_kind(t.at("kind").get<std::string>());
        if (!k) throw InputError("unknown topology kind " + t.at("kind").get<std::string>());
        spec.kind = k;
    }
    if (t.contains("hub")) spec.hub = chain_id(t.at("hub"));
    for (const auto& n : t.value("nodes", json::array())) spec.nodes.push_back(chain_id(n));
    for (const auto& e : t.value("edges", json::array())) spec.edges.push_back(edge_of(e));
    if (spec.nodes.empty())
        for (const auto& e : spec.edges)
            for (auto id : {e.from, e.to})
                if (std::find(spec.nodes.begin(), spec.nodes.end(), id) == spec.nodes.end()) spec.nodes.push_back(id);
    spec.max_out_degree = t.value("max_out_degree", kDefaultMaxOutDegree);
    spec.selection_accounts = t.value("selection_accounts", std::vector<std::string>{});
    if (t.contains("threshold")) {
        const auto& th = t.at("threshold");
        if (!th.is_array() || th.size() != 2) throw InputError("threshold is [numerator, denominator]");
        spec.threshold = {th[0].get<std::uint32_t>(), th[1].get<std::uint32_t>()};
    }
    for (const auto& p : t.value("proposals", json::array())) {
        ProposalEvent ev;
        ev.tick = p.at("tick").get<Tick>();
        const auto action = p.value("action", std::string("add"));
        if (action == "add")
            ev.proposal.action = ProposalAction::AddEdge;
        else if (action == "remove")
            ev.proposal.action = ProposalAction::RemoveEdge;
        else
            throw InputError("proposal action must be add or remove");
        ev.proposal.target_edge = edge_of(p.at("edge"));
        ev.proposal.proposer = p.at("proposer").get<std::string>();
        for (const auto& a : p.value("agreements", json::array())) ev.proposal.agreements.insert(a.get<std::string>());
        spec.proposals.push_back(std::move(ev));
    }
    return spec;
}

json topology_to(const TopologySpec& spec) {
    json t;
    if (spec.kind) t["kind"] = kind_name(*spec.kind);
    if (spec.hub) t["hub"] = spec.hub->value;
    t["nodes"] = json::array();
    for (auto n : spec.nodes) t["nodes"].push_back(n.value);
    t["edges"] = json::array();
    for (const auto& e : spec.edges) t["edges"].push_back(edge_json(e));
    t["max_out_degree"] = spec.max_out_degree;
    t["selection_accounts"] = spec.selection_accounts;
    t["threshold"] = json::array({spec.threshold.num, spec.threshold.den});
    t["proposals"] = json::array();
    for (const auto& ev : spec.proposals) {
        json p{{"tick", ev.tick},
               {"action", ev.proposal.action == ProposalAction::AddEdge ? "add" : "remove"},
               {"edge", edge_json(ev.proposal.target_edge)},
               {"proposer", ev.proposal.proposer},
               {"agreements", ev.proposal.agreements}};
        t["proposals"].push_back(std::move(p));
    }
    return t;
}

ConsensusConfig consensus_from(const json& j, ConsensusConfig c) {
    if (j.contains("kind")) {
        const auto k = j.at("kind").get<std::string>();
        if (k == "pow")
            c.kind = ConsensusKind::PoW;
        else if (k == "pos")
            c.kind = ConsensusKind::PoS;
        else
            throw InputError("consensus kind must be pow or pos");
    }
    c.pow_difficulty_bits = j.value("difficulty_bits", c.pow_difficulty_bits);
    c.pow_nonce_budget = j.value("nonce_budget", c.pow_nonce_budget);
    if (j.contains("accounts")) {
        c.pos_accounts.clear();
        for (const auto& a : j.at("accounts"))
            c.pos_accounts.push_back({a.at("address").get<std::string>(), a.at("asset").get<std::uint64_t>()});
    }
    c.pos_weight_decrement = j.value("weight_decrement", c.pos_weight_decrement);
    c.pos_block_interval = j.value("block_interval", c.pos_block_interval);
    return c;
}

json consensus_to(const ConsensusConfig& c) {
    json j{{"kind", to_string(c.kind)},
           {"difficulty_bits", c.pow_difficulty_bits},
           {"nonce_budget", c.pow_nonce_budget},
           {"weight_decrement", c.pos_weight_decrement},
           {"block_interval", c.pos_block_interval}};
    j["accounts"] = json::array();
    for (const auto& a : c.pos_accounts) j["accounts"].push_back({{"address", a.address}, {"asset", a.weight}});
    return j;
}

FormatSpec format_from(const json& j, ChainId chain) {
    FormatSpec f = identity_format(FormatId{j.value("format_id", chain.value)});
    if (j.contains("field_order")) f.field_order = j.at("field_order").get<std::vector<std::string>>();
    if (j.contains("field_names")) {
        // Unlisted fields keep their canonical name.
        for (const auto& [canonical, local] : j.at("field_names").items()) {
            if (!f.field_names.contains(canonical)) throw InputError("unknown canonical field " + canonical);
            f.field_names[canonical] = local.get<std::string>();
        }
    }
    f.amount_unit_scale = j.value("amount_unit_scale", f.amount_unit_scale);
    return f;
}

json format_to(const FormatSpec& f, ChainId chain) {
    return json{{"chain", chain.value},
                {"format_id", f.id.value},
                {"field_order", f.field_order},
                {"field_names", f.field_names},
                {"amount_unit_scale", f.amount_unit_scale}};
}

json parse_json(std::string_view text) {
    try {
        json j = json::parse(text);
        if (!j.is_object()) throw InputError("scenario file must contain a JSON object");
        return j;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed scenario file: ") + e.what());
    }
}

template <typename F>
auto guarded(F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw InputError(std::string("invalid scenario field: ") + e.what());
    }
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot read " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

TopologySpec parse_topology(std::string_view json_text) {
    json j = parse_json(json_text);
    if (!j.contains("topology")) throw InputError("scenario file has no topology section");
    return guarded([&] { return topology_from(j.at("topology")); });
}

Scenario parse_scenario(std::string_view json_text) {
    json j = parse_json(json_text);
    if (!j.contains("topology")) throw InputError("scenario file has no topology section");
    return guarded([&] {
        Scenario s;
        s.name = j.value("name", s.name);
        s.topology = topology_from(j.at("topology"));

        if (j.contains("chains")) {
            for (const auto& c : j.at("chains")) {
                ChainSpec spec;
                spec.id = chain_id(c.at("id"));
                spec.node_count = c.value("node_count", spec.node_count);
                spec.user_accounts = c.value("user_accounts", spec.user_accounts);
                spec.initial_balance = c.value("initial_balance", spec.initial_balance);
                spec.crosschain_reward = c.value("crosschain_reward", spec.crosschain_reward);
                s.chains.push_back(std::move(spec));
            }
        } else {
            for (auto id : s.topology.nodes) s.chains.emplace_back().id = id;
        }
        auto find_chain = [&](ChainId id) -> ChainSpec& {
            for (auto& c : s.chains)
                if (c.id == id) return c;
            throw InputError("section refers to unknown chain " + to_string(id));
        };

        if (j.contains("consensus")) {
            const auto& cons = j.at("consensus");
            if (cons.contains("default"))
                for (auto& c : s.chains) c.consensus = consensus_from(cons.at("default"), c.consensus);
            for (const auto& entry : cons.value("chains", json::array())) {
                auto& c = find_chain(chain_id(entry.at("chain")));
                c.consensus = consensus_from(entry, c.consensus);
            }
        }
        for (const auto& f : j.value("formats", json::array())) {
            const ChainId id = chain_id(f.at("chain"));
            find_chain(id).format = format_from(f, id);
        }
        for (const auto& w : j.value("workloads", json::array())) {
            WorkloadSpec ws;
            ws.chain = chain_id(w.at("chain"));
            ws.rate_per_minute = w.value("rate_per_minute", 0.0);
            const auto kind = w.value("kind", std::string("crosschain"));
            if (kind == "crosschain")
                ws.kind = TxKind::CrossChain;
            else if (kind == "internal")
                ws.kind = TxKind::Internal;
            else
                throw InputError("workload kind must be crosschain or internal");
            if (w.contains("paired_with") && !w.at("paired_with").is_null()) ws.paired_with = chain_id(w.at("paired_with"));
            ws.min_amount = w.value("min_amount", ws.min_amount);
            ws.max_amount = w.value("max_amount", ws.max_amount);
            s.workloads.push_back(ws);
        }
        for (const auto& i : j.value("injections", json::array())) {
            Injection inj;
            inj.tick = i.at("tick").get<Tick>();
            for (const auto& c : i.at("chains")) inj.chains.push_back(chain_id(c));
            inj.amount = i.value("amount", inj.amount);
            s.injections.push_back(std::move(inj));
        }
        if (j.contains("run")) {
            const auto& r = j.at("run");
            s.duration_ticks = r.value("duration_ticks", s.duration_ticks);
            s.seed = r.value("seed", s.seed);
            s.ticks_per_minute = r.value("ticks_per_minute", s.ticks_per_minute);
            s.network.sync_period_ticks = r.value("sync_period_ticks", s.network.sync_period_ticks);
            s.network.pos_sync_rounds = r.value("pos_sync_rounds", s.network.pos_sync_rounds);
            s.network.heartbeat_bytes = r.value("heartbeat_bytes", s.network.heartbeat_bytes);
            s.network.max_block_txs = r.value("max_block_txs", s.network.max_block_txs);
            s.warmup_fraction = r.value("warmup_fraction", s.warmup_fraction);
            s.allow_any_rate = r.value("allow_any_rate", s.allow_any_rate);
        }
        if (j.contains("security")) {
            auto sec = parse_security(json_text);
            s.security = std::move(sec.probabilities);
            s.security_sets = std::move(sec.sets);
        }
        return s;
    });
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(read_text_file(path)); }

SecurityConfig parse_security(std::string_view json_text) {
    json j = parse_json(json_text);
    if (!j.contains("security")) throw InputError("scenario file has no security section");
    return guarded([&] {
        const auto& sec = j.at("security");
        SecurityConfig out;
        for (const auto& [key, value] : sec.at("probabilities").items()) {
            std::uint32_t id = 0;
            try {
                id = static_cast<std::uint32_t>(std::stoul(key));
            } catch (const std::exception&) {
                throw InputError("security probabilities are keyed by chain id, got '" + key + "'");
            }
            out.probabilities.per_chain[ChainId{id}] = value.get<double>();
        }
        for (const auto& set : sec.value("sets", json::array())) {
            std::vector<ChainId> chains;
            for (const auto& c : set) chains.push_back(chain_id(c));
            out.sets.push_back(std::move(chains));
        }
        if (!sec.contains("sets")) {
            std::vector<ChainId> all;
            for (const auto& [id, _] : out.probabilities.per_chain) all.push_back(id);
            out.sets.push_back(std::move(all));
        }
        return out;
    });
}

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["topology"] = topology_to(s.topology);
    j["chains"] = json::array();
    j["consensus"] = {{"chains", json::array()}};
    j["formats"] = json::array();
    for (const auto& c : s.chains) {
        j["chains"].push_back({{"id", c.id.value},
                               {"node_count", c.node_count},
                               {"user_accounts", c.user_accounts},
                               {"initial_balance", c.initial_balance},
                               {"crosschain_reward", c.crosschain_reward}});
        json cons = consensus_to(c.consensus);
        cons["chain"] = c.id.value;
        j["consensus"]["chains"].push_back(std::move(cons));
        if (c.format) j["formats"].push_back(format_to(*c.format, c.id));
    }
    j["workloads"] = json::array();
    for (const auto& w : s.workloads) {
        json wj{{"chain", w.chain.value},
                {"rate_per_minute", w.rate_per_minute},
                {"kind", w.kind == TxKind::CrossChain ? "crosschain" : "internal"},
                {"min_amount", w.min_amount},
                {"max_amount", w.max_amount}};
        wj["paired_with"] = w.paired_with ? json(w.paired_with->value) : json(nullptr);
        j["workloads"].push_back(std::move(wj));
    }
    j["injections"] = json::array();
    for (const auto& i : s.injections) {
        json chains = json::array();
        for (auto c : i.chains) chains.push_back(c.value);
        j["injections"].push_back({{"tick", i.tick}, {"chains", chains}, {"amount", i.amount}});
    }
    j["run"] = {{"duration_ticks", s.duration_ticks},
                {"seed", s.seed},
                {"ticks_per_minute", s.ticks_per_minute},
                {"sync_period_ticks", s.network.sync_period_ticks},
                {"pos_sync_rounds", s.network.pos_sync_rounds},
                {"heartbeat_bytes", s.network.heartbeat_bytes},
                {"max_block_txs", s.network.max_block_txs},
                {"warmup_fraction", s.warmup_fraction},
                {"allow_any_rate", s.allow_any_rate}};
    json probs = json::object();
    for (const auto& [id, p] : s.security.per_chain) probs[to_string(id)] = p;
    json sets = json::array();
    for (const auto& set : s.security_sets) {
        json one = json::array();
        for (auto c : set) one.push_back(c.value);
        sets.push_back(std::move(one));
    }
    j["security"] = {{"probabilities", probs}, {"sets", sets}};
    return j.dump(2) + "\n";
}

}  // namespace xchain
