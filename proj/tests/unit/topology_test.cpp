#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "xchain/error.hpp"

using namespace xchain;
using fx::C;

namespace {

oracle::Adjacency to_adjacency(const TopologyGraph& g, const std::vector<ChainId>& order) {
    oracle::Adjacency adj(order.size(), std::vector<bool>(order.size(), false));
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = 0; j < order.size(); ++j) adj[i][j] = g.has_edge({order[i], order[j]});
    return adj;
}

TopologyGraph random_graph(std::mt19937_64& rng, std::size_t max_nodes = 8) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_nodes)(rng);
    const double density = std::uniform_real_distribution<double>(0.05, 0.6)(rng);
    TopologyGraph g(n);
    for (std::size_t i = 1; i <= n; ++i) g.add_node(C(static_cast<std::uint32_t>(i)));
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= n; ++j)
            if (i != j && std::bernoulli_distribution(density)(rng))
                g.add_edge({C(static_cast<std::uint32_t>(i)), C(static_cast<std::uint32_t>(j))});
    return g;
}

std::vector<ChainId> node_list(const TopologyGraph& g) { return {g.nodes().begin(), g.nodes().end()}; }

const auto kRing4 = [] { return fx::graph({1, 2, 3, 4}, {{1, 2}, {2, 3}, {3, 4}, {4, 1}}); };

}  // namespace

TEST(Topology, AddEdgeErrors) {
    TopologyGraph g(1);
    g.add_node(C(1));
    g.add_node(C(2));
    g.add_node(C(3));
    EXPECT_THROW(g.add_node(C(1)), InputError);
    EXPECT_THROW(g.add_edge({C(1), C(1)}), InputError);
    EXPECT_THROW(g.add_edge({C(1), C(9)}), InputError);
    g.add_edge({C(1), C(2)});
    g.add_edge({C(1), C(2)});
    EXPECT_EQ(g.edges().size(), 1u);
    EXPECT_THROW(g.add_edge({C(1), C(3)}), DomainError);
}

TEST(Topology, StrongConnectivityExamples) {
    EXPECT_TRUE(is_strongly_connected(fx::graph({1, 2, 3}, {{1, 2}, {2, 3}, {3, 1}})));
    const auto star = fx::graph({1, 2, 3}, {{1, 2}, {1, 3}});
    EXPECT_FALSE(is_strongly_connected(star));
    EXPECT_FALSE(oracle::strongly_connected(to_adjacency(star, node_list(star))));
    const auto pairs = unreachable_pairs(star);
    EXPECT_NE(std::find(pairs.begin(), pairs.end(), std::pair{C(2), C(1)}), pairs.end());
    EXPECT_TRUE(is_strongly_connected(fx::graph({7}, {})));
    EXPECT_FALSE(is_strongly_connected(TopologyGraph{}));
}

TEST(Topology, BridgeGraphIsStronglyConnected) {
    // Two clusters joined only through bridge chain 6.
    const auto g = fx::graph({1, 2, 3, 4, 5, 6}, {{1, 2}, {2, 3}, {3, 1}, {4, 5}, {5, 4}, {1, 6}, {6, 1}, {4, 6}, {6, 4}});
    EXPECT_TRUE(oracle::strongly_connected(to_adjacency(g, node_list(g))));
    EXPECT_TRUE(is_strongly_connected(g));
    auto without_bridge = g;
    without_bridge.remove_edge({C(6), C(4)});
    without_bridge.remove_edge({C(4), C(6)});
    EXPECT_FALSE(is_strongly_connected(without_bridge));
}

TEST(Topology, MatchesClosureOracleOnRandomGraphs) {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 500; ++i) {
        const auto g = random_graph(rng);
        const auto adj = to_adjacency(g, node_list(g));
        ASSERT_EQ(is_strongly_connected(g), oracle::strongly_connected(adj)) << "graph " << i;
        const auto closure = oracle::transitive_closure(adj);
        std::size_t missing = 0;
        for (const auto& row : closure)
            for (bool b : row) missing += !b;
        ASSERT_EQ(unreachable_pairs(g).size(), missing);
    }
}

TEST(Topology, ComponentsPartitionNodes) {
    const auto g = fx::graph({1, 2, 3, 4, 5}, {{1, 2}, {2, 1}, {3, 4}, {4, 5}, {5, 3}, {2, 3}});
    const auto comps = strongly_connected_components(g);
    ASSERT_EQ(comps.size(), 2u);
    EXPECT_EQ(comps[0], fx::ids({1, 2}));
    EXPECT_EQ(comps[1], fx::ids({3, 4, 5}));
}

TEST(Topology, ClassifyConnection) {
    const auto ring = kRing4();
    EXPECT_EQ(classify_connection(ring, C(1), C(2)), ConnectionType::Direct);
    EXPECT_EQ(classify_connection(ring, C(1), C(3)), ConnectionType::Indirect);
    const auto split = fx::graph({1, 2, 3, 4}, {{1, 2}, {2, 1}, {3, 4}, {4, 3}});
    EXPECT_EQ(classify_connection(split, C(1), C(3)), ConnectionType::NotConnected);
}

TEST(Topology, ClassificationAgreesWithDistances) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const auto g = random_graph(rng, 6);
        const auto nodes = node_list(g);
        const auto adj = to_adjacency(g, nodes);
        for (std::size_t a = 0; a < nodes.size(); ++a)
            for (std::size_t b = 0; b < nodes.size(); ++b) {
                if (a == b) continue;
                const int d = oracle::distance(adj, a, b);
                const auto t = classify_connection(g, nodes[a], nodes[b]);
                if (d == 1)
                    EXPECT_EQ(t, ConnectionType::Direct);
                else if (d >= 2)
                    EXPECT_EQ(t, ConnectionType::Indirect);
                else
                    EXPECT_EQ(t, ConnectionType::NotConnected);
            }
    }
}

TEST(Topology, Builders) {
    const auto ring = build_topology(TopologyKind::Ring, fx::ids({1, 2, 3}));
    EXPECT_EQ(ring.edges(), (std::set<Edge>{{C(1), C(2)}, {C(2), C(3)}, {C(3), C(1)}}));
    const auto star = build_topology(TopologyKind::Star, fx::ids({1, 2, 3}), C(1));
    EXPECT_EQ(star.edges(), (std::set<Edge>{{C(1), C(2)}, {C(2), C(1)}, {C(1), C(3)}, {C(3), C(1)}}));
    EXPECT_EQ(build_topology(TopologyKind::Full, fx::ids({1, 2, 3})).edges().size(), 6u);
    EXPECT_EQ(parse_topology_kind("router"), TopologyKind::Star);
    EXPECT_FALSE(parse_topology_kind("mesh"));
}

TEST(Topology, RingsAreMinimal) {
    for (std::uint32_t n = 2; n <= 9; ++n) {
        std::vector<ChainId> ids;
        for (std::uint32_t i = 1; i <= n; ++i) ids.push_back(C(i * 3));
        const auto g = build_topology(TopologyKind::Ring, ids);
        EXPECT_TRUE(is_strongly_connected(g));
        for (auto id : ids) {
            EXPECT_EQ(g.out_degree(id), 1u);
            EXPECT_EQ(g.in_degree(id), 1u);
        }
        EXPECT_EQ(diameter(g), n - 1);
    }
}

TEST(Topology, PropagationPathExamples) {
    const auto ring = kRing4();
    EXPECT_EQ(propagation_path(ring, C(3), C(1)), fx::ids({3, 4, 1}));
    EXPECT_EQ(propagation_path(ring, C(1), C(3)), fx::ids({1, 2, 3}));
    const auto full = build_topology(TopologyKind::Full, fx::ids({1, 2, 3}));
    EXPECT_EQ(propagation_path(full, C(1), C(3)), fx::ids({1, 3}));
    // Data leaves 1 against edge direction: 1 -> 4 -> 3.
    EXPECT_EQ(data_route(ring, C(1), C(3)), fx::ids({1, 4, 3}));
    EXPECT_TRUE(propagation_path(fx::graph({1, 2}, {{1, 2}}), C(2), C(1)).empty());
}

TEST(Topology, PropagationPathIsShortestSimpleEdgePath) {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 300; ++i) {
        const auto g = random_graph(rng, 7);
        const auto nodes = node_list(g);
        const auto adj = to_adjacency(g, nodes);
        for (std::size_t a = 0; a < nodes.size(); ++a)
            for (std::size_t b = 0; b < nodes.size(); ++b) {
                const auto p = propagation_path(g, nodes[a], nodes[b]);
                const int d = oracle::distance(adj, a, b);
                if (d < 0) {
                    EXPECT_TRUE(p.empty());
                    continue;
                }
                ASSERT_EQ(p.size(), static_cast<std::size_t>(d) + 1);
                EXPECT_EQ(p.front(), nodes[a]);
                EXPECT_EQ(p.back(), nodes[b]);
                for (std::size_t k = 0; k + 1 < p.size(); ++k) EXPECT_TRUE(g.has_edge({p[k], p[k + 1]}));
                EXPECT_EQ(std::set<ChainId>(p.begin(), p.end()).size(), p.size());
            }
    }
}

TEST(Topology, PathTieBreakPrefersSmallestNextHop) {
    // 1 -> {2,3} -> 4: both routes have length 2.
    const auto g = fx::graph({1, 2, 3, 4}, {{1, 3}, {1, 2}, {2, 4}, {3, 4}, {4, 1}});
    EXPECT_EQ(propagation_path(g, C(1), C(4)), fx::ids({1, 2, 4}));
}

namespace {

MembershipConfig four_selectors() {
    MembershipConfig cfg;
    cfg.selection_accounts = {"s1", "s2", "s3", "s4"};
    return cfg;
}

MembershipProposal add_edge(std::uint32_t from, std::uint32_t to, std::set<std::string> agree) {
    MembershipProposal p;
    p.proposer = "s1";
    p.target_edge = {C(from), C(to)};
    p.agreements = std::move(agree);
    return p;
}

}  // namespace

TEST(Membership, ThresholdAccepts) {
    const auto ring = build_topology(TopologyKind::Ring, fx::ids({1, 2, 3}));
    auto p = add_edge(1, 3, {"s1", "s2", "s3"});
    EXPECT_EQ(required_agreements(four_selectors()), 3u);
    const auto g = apply_membership(ring, p, four_selectors());
    EXPECT_EQ(p.status, ProposalStatus::Applied);
    EXPECT_TRUE(g.has_edge({C(1), C(3)}));
}

TEST(Membership, BelowThresholdRejected) {
    const auto ring = build_topology(TopologyKind::Ring, fx::ids({1, 2, 3}));
    auto p = add_edge(1, 3, {"s1"});
    const auto g = apply_membership(ring, p, four_selectors());
    EXPECT_EQ(p.status, ProposalStatus::Rejected);
    EXPECT_EQ(g, ring);
    auto outsiders = add_edge(1, 3, {"s1", "x", "y", "z"});
    apply_membership(ring, outsiders, four_selectors());
    EXPECT_EQ(outsiders.status, ProposalStatus::Rejected);
}

TEST(Membership, DegreeCapEnforced) {
    auto ring = fx::graph({1, 2, 3, 4}, {{1, 2}, {2, 3}, {3, 4}, {4, 1}, {1, 3}}, 2);
    auto p = add_edge(1, 4, {"s1", "s2", "s3", "s4"});
    const auto g = apply_membership(ring, p, four_selectors());
    EXPECT_EQ(p.status, ProposalStatus::Rejected);
    EXPECT_EQ(g, ring);
}

TEST(Membership, TargetCheckAndProposerRules) {
    const auto ring = build_topology(TopologyKind::Ring, fx::ids({1, 2, 3}));
    auto cfg = four_selectors();
    cfg.target_check = [](ChainId id) { return id != C(3); };
    auto p = add_edge(1, 3, {"s1", "s2", "s3"});
    apply_membership(ring, p, cfg);
    EXPECT_EQ(p.status, ProposalStatus::Rejected);
    auto stranger = add_edge(1, 3, {"s1", "s2", "s3"});
    stranger.proposer = "mallory";
    apply_membership(ring, stranger, four_selectors());
    EXPECT_EQ(stranger.status, ProposalStatus::Rejected);
}

TEST(Membership, RemovalMustKeepStrongConnectivity) {
    auto g = build_topology(TopologyKind::Ring, fx::ids({1, 2, 3}));
    auto p = add_edge(1, 2, {"s1", "s2", "s3"});
    p.action = ProposalAction::RemoveEdge;
    apply_membership(g, p, four_selectors());
    EXPECT_EQ(p.status, ProposalStatus::Rejected);

    g = build_topology(TopologyKind::Full, fx::ids({1, 2, 3}));
    auto q = add_edge(1, 2, {"s1", "s2", "s3"});
    q.action = ProposalAction::RemoveEdge;
    const auto h = apply_membership(g, q, four_selectors());
    EXPECT_EQ(q.status, ProposalStatus::Applied);
    EXPECT_FALSE(h.has_edge({C(1), C(2)}));
}

TEST(Membership, NeverBreaksConnectivity) {
    std::mt19937_64 rng(9);
    const auto cfg = four_selectors();
    for (int i = 0; i < 300; ++i) {
        auto g = random_graph(rng, 6);
        if (!is_strongly_connected(g)) continue;
        const auto nodes = node_list(g);
        std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
        for (int k = 0; k < 10; ++k) {
            MembershipProposal p;
            p.proposer = "s2";
            p.action = rng() % 2 ? ProposalAction::AddEdge : ProposalAction::RemoveEdge;
            p.target_edge = {nodes[pick(rng)], nodes[pick(rng)]};
            p.agreements = {"s1", "s2", "s3"};
            g = apply_membership(g, p, cfg);
            ASSERT_TRUE(is_strongly_connected(g));
        }
    }
}
