#include "xchain/topology.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>

#include "xchain/error.hpp"

namespace xchain {

TopologyGraph::TopologyGraph(std::size_t max_out_degree) : max_out_degree_(max_out_degree) {
    if (max_out_degree == 0) throw InputError("max_out_degree must be positive");
}

void TopologyGraph::add_node(ChainId id) {
    if (!nodes_.insert(id).second) throw InputError("duplicate blockchain id " + to_string(id));
}

void TopologyGraph::add_edge(Edge e) {
    if (e.from == e.to) throw InputError("self-edge on blockchain " + to_string(e.from));
    if (!has_node(e.from) || !has_node(e.to))
        throw InputError("edge " + to_string(e.from) + "->" + to_string(e.to) + " references an unknown blockchain");
    if (has_edge(e)) return;
    if (out_degree(e.from) + 1 > max_out_degree_)
        throw DomainError("blockchain " + to_string(e.from) + " would exceed max out-degree " +
                          std::to_string(max_out_degree_));
    edges_.insert(e);
}

void TopologyGraph::remove_edge(Edge e) { edges_.erase(e); }

std::vector<ChainId> TopologyGraph::out_neighbors(ChainId id) const {
    std::vector<ChainId> out;
    for (auto it = edges_.lower_bound(Edge{id, ChainId{0}}); it != edges_.end() && it->from == id; ++it)
        out.push_back(it->to);
    return out;
}

std::vector<ChainId> TopologyGraph::in_neighbors(ChainId id) const {
    std::vector<ChainId> in;
    for (const auto& e : edges_)
        if (e.to == id) in.push_back(e.from);
    std::sort(in.begin(), in.end());
    return in;
}

std::size_t TopologyGraph::out_degree(ChainId id) const { return out_neighbors(id).size(); }

std::size_t TopologyGraph::in_degree(ChainId id) const { return in_neighbors(id).size(); }

std::string to_string(ConnectionType t) {
    switch (t) {
        case ConnectionType::Direct: return "direct";
        case ConnectionType::Indirect: return "indirect";
        case ConnectionType::NotConnected: return "not-connected";
    }
    return "?";
}

namespace {

// Dense index over the node set for the graph algorithms below.
struct Indexed {
    std::vector<ChainId> ids;
    std::map<ChainId, std::size_t> index;
    std::vector<std::vector<std::size_t>> out;

    explicit Indexed(const TopologyGraph& g) {
        ids.assign(g.nodes().begin(), g.nodes().end());
        for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);
        out.resize(ids.size());
        for (const auto& e : g.edges()) out[index.at(e.from)].push_back(index.at(e.to));
    }
};

constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();

// Iterative Tarjan; returns the component number of every node.
std::vector<std::size_t> tarjan(const Indexed& ix, std::size_t& component_count) {
    const std::size_t n = ix.ids.size();
    std::vector<std::size_t> order(n, kUnvisited), low(n, 0), comp(n, kUnvisited);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t counter = 0;
    component_count = 0;

    struct Frame {
        std::size_t node;
        std::size_t next_edge;
    };

    for (std::size_t root = 0; root < n; ++root) {
        if (order[root] != kUnvisited) continue;
        std::vector<Frame> call{{root, 0}};
        order[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!call.empty()) {
            Frame& f = call.back();
            const auto& succ = ix.out[f.node];
            if (f.next_edge < succ.size()) {
                std::size_t w = succ[f.next_edge++];
                if (order[w] == kUnvisited) {
                    order[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.node] = std::min(low[f.node], order[w]);
                }
                continue;
            }
            std::size_t v = f.node;
            call.pop_back();
            if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[v]);
            if (low[v] == order[v]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = component_count;
                } while (w != v);
                ++component_count;
            }
        }
    }
    return comp;
}

// BFS distances from `src` following edges (or reversed edges).
std::vector<std::size_t> bfs(const Indexed& ix, std::size_t src, bool reversed) {
    const std::size_t n = ix.ids.size();
    std::vector<std::vector<std::size_t>> adj;
    const std::vector<std::vector<std::size_t>>* graph = &ix.out;
    if (reversed) {
        adj.resize(n);
        for (std::size_t v = 0; v < n; ++v)
            for (auto w : ix.out[v]) adj[w].push_back(v);
        graph = &adj;
    }
    std::vector<std::size_t> dist(n, kUnvisited);
    std::deque<std::size_t> queue{src};
    dist[src] = 0;
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        for (auto w : (*graph)[v]) {
            if (dist[w] != kUnvisited) continue;
            dist[w] = dist[v] + 1;
            queue.push_back(w);
        }
    }
    return dist;
}

void require_node(const TopologyGraph& g, ChainId id) {
    if (!g.has_node(id)) throw InputError("unknown blockchain id " + to_string(id));
}

}  // namespace

std::vector<std::vector<ChainId>> strongly_connected_components(const TopologyGraph& g) {
    Indexed ix(g);
    std::size_t count = 0;
    auto comp = tarjan(ix, count);
    std::vector<std::vector<ChainId>> out(count);
    for (std::size_t i = 0; i < comp.size(); ++i) out[comp[i]].push_back(ix.ids[i]);
    for (auto& c : out) std::sort(c.begin(), c.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

bool is_strongly_connected(const TopologyGraph& g) {
    if (g.nodes().empty()) return false;
    Indexed ix(g);
    std::size_t count = 0;
    tarjan(ix, count);
    return count == 1;
}

std::vector<std::pair<ChainId, ChainId>> unreachable_pairs(const TopologyGraph& g) {
    Indexed ix(g);
    std::vector<std::pair<ChainId, ChainId>> out;
    for (std::size_t a = 0; a < ix.ids.size(); ++a) {
        auto dist = bfs(ix, a, false);
        for (std::size_t b = 0; b < ix.ids.size(); ++b)
            if (a != b && dist[b] == kUnvisited) out.emplace_back(ix.ids[a], ix.ids[b]);
    }
    return out;
}

ConnectionType classify_connection(const TopologyGraph& g, ChainId a, ChainId b) {
    require_node(g, a);
    require_node(g, b);
    if (a == b) throw InputError("classify_connection requires distinct blockchains");
    if (g.has_edge({a, b})) return ConnectionType::Direct;
    Indexed ix(g);
    auto dist = bfs(ix, ix.index.at(a), false);
    return dist[ix.index.at(b)] == kUnvisited ? ConnectionType::NotConnected : ConnectionType::Indirect;
}

std::optional<TopologyKind> parse_topology_kind(std::string_view name) {
    if (name == "ring") return TopologyKind::Ring;
    if (name == "star" || name == "router") return TopologyKind::Star;
    if (name == "full") return TopologyKind::Full;
    return std::nullopt;
}

TopologyGraph build_topology(TopologyKind kind, const std::vector<ChainId>& ids, std::optional<ChainId> hub,
                             std::size_t max_out_degree) {
    if (ids.size() < 2) throw InputError("a topology needs at least two blockchains");
    std::size_t needed = 1;
    if (kind == TopologyKind::Star) needed = ids.size() - 1;
    if (kind == TopologyKind::Full) needed = ids.size() - 1;

    TopologyGraph g(std::max(max_out_degree, needed));
    for (auto id : ids) g.add_node(id);

    switch (kind) {
        case TopologyKind::Ring:
            for (std::size_t i = 0; i < ids.size(); ++i) g.add_edge({ids[i], ids[(i + 1) % ids.size()]});
            break;
        case TopologyKind::Star:
            if (!hub) throw InputError("star topology requires a hub");
            if (!g.has_node(*hub)) throw InputError("star hub " + to_string(*hub) + " is not in the id list");
            for (auto id : ids) {
                if (id == *hub) continue;
                g.add_edge({*hub, id});
                g.add_edge({id, *hub});
            }
            break;
        case TopologyKind::Full:
            for (auto a : ids)
                for (auto b : ids)
                    if (a != b) g.add_edge({a, b});
            break;
    }
    return g;
}

std::vector<ChainId> propagation_path(const TopologyGraph& g, ChainId from, ChainId to) {
    require_node(g, from);
    require_node(g, to);
    if (from == to) return {from};
    Indexed ix(g);
    // Distance to `to` for every node, then walk greedily from `from`.
    auto dist = bfs(ix, ix.index.at(to), true);
    std::size_t cur = ix.index.at(from);
    if (dist[cur] == kUnvisited) return {};
    std::vector<ChainId> path{from};
    while (dist[cur] != 0) {
        std::size_t best = kUnvisited;
        for (auto w : ix.out[cur])
            if (dist[w] + 1 == dist[cur] && (best == kUnvisited || ix.ids[w] < ix.ids[best])) best = w;
        cur = best;
        path.push_back(ix.ids[cur]);
    }
    return path;
}

std::vector<ChainId> data_route(const TopologyGraph& g, ChainId origin, ChainId destination) {
    auto path = propagation_path(g, destination, origin);
    std::reverse(path.begin(), path.end());
    return path;
}

std::size_t diameter(const TopologyGraph& g) {
    Indexed ix(g);
    std::size_t d = 0;
    for (std::size_t a = 0; a < ix.ids.size(); ++a) {
        for (auto v : bfs(ix, a, false)) {
            if (v == kUnvisited) throw DomainError("diameter is undefined for a graph that is not strongly connected");
            d = std::max(d, v);
        }
    }
    return d;
}

std::string to_string(ProposalStatus s) {
    switch (s) {
        case ProposalStatus::Pending: return "pending";
        case ProposalStatus::Applied: return "applied";
        case ProposalStatus::Rejected: return "rejected";
    }
    return "?";
}

std::size_t required_agreements(const MembershipConfig& cfg) {
    if (cfg.threshold.den == 0 || cfg.threshold.num == 0 || cfg.threshold.num > cfg.threshold.den)
        throw InputError("agreement threshold must be a fraction in (0, 1]");
    const std::uint64_t n = cfg.selection_accounts.size();
    return static_cast<std::size_t>((n * cfg.threshold.num + cfg.threshold.den - 1) / cfg.threshold.den);
}

TopologyGraph apply_membership(const TopologyGraph& g, MembershipProposal& p, const MembershipConfig& cfg) {
    auto reject = [&](std::string why) {
        p.status = ProposalStatus::Rejected;
        p.reason = std::move(why);
        return g;
    };
    if (p.status != ProposalStatus::Pending) return reject("proposal is not pending");

    const auto& accounts = cfg.selection_accounts;
    auto is_selector = [&](const std::string& a) { return std::find(accounts.begin(), accounts.end(), a) != accounts.end(); };
    if (!is_selector(p.proposer)) return reject("proposer " + p.proposer + " is not a topology selection account");

    std::size_t valid = 0;
    for (const auto& a : p.agreements)
        if (is_selector(a)) ++valid;
    const std::size_t needed = required_agreements(cfg);
    if (valid < needed)
        return reject("agreement threshold not met (" + std::to_string(valid) + " of " + std::to_string(needed) + ")");

    const Edge e = p.target_edge;
    if (!g.has_node(e.from) || !g.has_node(e.to) || e.from == e.to) return reject("edge references unknown blockchain");

    TopologyGraph next = g;
    if (p.action == ProposalAction::AddEdge) {
        if (g.has_edge(e)) return reject("edge already present");
        if (cfg.target_check && !cfg.target_check(e.to)) return reject("target blockchain failed evaluation");
        if (g.out_degree(e.from) + 1 > g.max_out_degree()) return reject("max out-degree exceeded");
        next.add_edge(e);
    } else {
        if (!g.has_edge(e)) return reject("edge not present");
        next.remove_edge(e);
    }
    if (!is_strongly_connected(next)) return reject("resulting topology is not strongly connected");

    p.status = ProposalStatus::Applied;
    p.reason.clear();
    return next;
}

}  // namespace xchain
