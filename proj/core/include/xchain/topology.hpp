#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "xchain/ids.hpp"

namespace xchain {

// Edge (from, to): blockchain `from` directly connects to `to`, i.e. `from`
// synchronizes and verifies the chain of `to` and seals its cross-chain
// transactions. Cross-chain data therefore travels from `to` to `from`.
struct Edge {
    ChainId from;
    ChainId to;

    auto operator<=>(const Edge&) const = default;
};

inline constexpr std::size_t kDefaultMaxOutDegree = 4;

class TopologyGraph {
public:
    explicit TopologyGraph(std::size_t max_out_degree = kDefaultMaxOutDegree);

    // Throws InputError on a duplicate id.
    void add_node(ChainId id);
    // Throws InputError on self-edges and unknown ids, DomainError when the
    // out-degree cap of `e.from` would be exceeded. Re-adding an edge is a no-op.
    void add_edge(Edge e);
    void remove_edge(Edge e);

    bool has_node(ChainId id) const { return nodes_.contains(id); }
    bool has_edge(Edge e) const { return edges_.contains(e); }

    const std::set<ChainId>& nodes() const noexcept { return nodes_; }
    const std::set<Edge>& edges() const noexcept { return edges_; }
    std::size_t max_out_degree() const noexcept { return max_out_degree_; }

    // Ascending by id.
    std::vector<ChainId> out_neighbors(ChainId id) const;
    std::vector<ChainId> in_neighbors(ChainId id) const;
    std::size_t out_degree(ChainId id) const;
    std::size_t in_degree(ChainId id) const;

    bool operator==(const TopologyGraph&) const = default;

private:
    std::size_t max_out_degree_;
    std::set<ChainId> nodes_;
    std::set<Edge> edges_;
};

enum class ConnectionType { Direct, Indirect, NotConnected };

std::string to_string(ConnectionType t);

// True iff every ordered pair of distinct nodes is joined by a directed path.
// A single node is trivially strongly connected.
bool is_strongly_connected(const TopologyGraph& g);

// Strongly connected components (Tarjan). Each component is sorted; components
// are ordered by their smallest member.
std::vector<std::vector<ChainId>> strongly_connected_components(const TopologyGraph& g);

// Every ordered pair (a, b), a != b, with no directed path a -> b.
std::vector<std::pair<ChainId, ChainId>> unreachable_pairs(const TopologyGraph& g);

ConnectionType classify_connection(const TopologyGraph& g, ChainId a, ChainId b);

enum class TopologyKind { Ring, Star, Full };

std::optional<TopologyKind> parse_topology_kind(std::string_view name);

// Ring: ids[i] -> ids[i+1] closing back to ids[0]. Star: hub <-> every other
// id. Full: every ordered pair. The degree cap is raised to fit the built
// shape when `max_out_degree` is smaller.
TopologyGraph build_topology(TopologyKind kind, const std::vector<ChainId>& ids,
                             std::optional<ChainId> hub = std::nullopt,
                             std::size_t max_out_degree = kDefaultMaxOutDegree);

// Shortest directed path along edges from `from` to `to`, inclusive of both
// ends. Among shortest paths the one with the smallest next hop at every step
// is chosen. Empty when `to` is unreachable.
std::vector<ChainId> propagation_path(const TopologyGraph& g, ChainId from, ChainId to);

// Sequence of blockchains a cross-chain transaction visits when travelling
// from `origin` to `destination`. Data moves against edge direction, so this
// is propagation_path(g, destination, origin) reversed.
std::vector<ChainId> data_route(const TopologyGraph& g, ChainId origin, ChainId destination);

// Longest shortest-path length over all ordered pairs; 0 for a single node.
// Requires a strongly connected graph.
std::size_t diameter(const TopologyGraph& g);

// --- membership protocol -------------------------------------------------

struct Fraction {
    std::uint32_t num = 2;
    std::uint32_t den = 3;
};

struct MembershipConfig {
    std::vector<std::string> selection_accounts;
    Fraction threshold{};
    // Evaluation of the target blockchain before connecting; passes by default.
    std::function<bool(ChainId)> target_check;
};

enum class ProposalAction { AddEdge, RemoveEdge };
enum class ProposalStatus { Pending, Applied, Rejected };

std::string to_string(ProposalStatus s);

struct MembershipProposal {
    std::string proposer;
    ProposalAction action = ProposalAction::AddEdge;
    Edge target_edge{};
    std::set<std::string> agreements;
    ProposalStatus status = ProposalStatus::Pending;
    std::string reason;  // filled on rejection
};

// ceil(threshold * |selection accounts|)
std::size_t required_agreements(const MembershipConfig& cfg);

// Evaluates a pending proposal against the current graph. On success the
// proposal is marked Applied and the updated graph is returned; otherwise it
// is marked Rejected with a reason and `g` is returned unchanged. Agreements
// from accounts outside the selection list are not counted.
TopologyGraph apply_membership(const TopologyGraph& g, MembershipProposal& p, const MembershipConfig& cfg);

}  // namespace xchain
