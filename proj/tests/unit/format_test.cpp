#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "xchain/error.hpp"

using namespace xchain;
using fx::C;

namespace {

Transaction random_original(std::mt19937_64& rng, const FormatSpec& spec, ChainId origin) {
    Transaction tx;
    tx.sender = "s" + std::to_string(rng() % 1000);
    tx.receiver = "r" + std::to_string(rng() % 1000);
    tx.amount = rng() % 1'000'000;
    tx.nonce = rng() % 100000;
    tx.kind = TxKind::CrossChain;
    tx.origin_chain = origin;
    if (rng() % 2) tx.dependency = Dependency{C(static_cast<std::uint32_t>(1 + rng() % 8)), sha256(std::to_string(rng()))};
    tx.format_id = spec.id;
    return finalize_original(tx, spec);
}

std::map<ChainId, FormatSpec> formats_for(const TopologyGraph& g) {
    return fx::variant_formats({g.nodes().begin(), g.nodes().end()});
}

}  // namespace

TEST(Format, RoundTripIdentityAndVariants) {
    std::mt19937_64 rng(1);
    for (std::uint32_t id = 0; id < 12; ++id) {
        const FormatSpec spec = id == 0 ? identity_format(FormatId{0}) : variant_format(FormatId{id});
        validate(spec);
        for (int i = 0; i < 20; ++i) {
            const Transaction tx = random_original(rng, spec, C(1));
            EXPECT_EQ(decode(encode(tx, spec), spec), tx);
        }
        Transaction internal = fx::internal_tx(spec, "a", "b", 3, 1);
        EXPECT_EQ(decode(encode(internal, spec), spec), internal);
    }
}

TEST(Format, AmountScale) {
    FormatSpec spec = identity_format(FormatId{4});
    spec.amount_unit_scale = 100;
    const Transaction tx = fx::internal_tx(spec, "a", "b", 5, 0);
    const std::string bytes = encode(tx, spec);
    EXPECT_NE(bytes.find("amount=500\n"), std::string::npos);
    EXPECT_EQ(decode(bytes, spec).amount, 5u);
    std::string odd = bytes;
    odd.replace(odd.find("amount=500"), 10, "amount=501");
    EXPECT_THROW(decode(odd, spec), InputError);
}

TEST(Format, MalformedBytesRejected) {
    const FormatSpec spec = variant_format(FormatId{2});
    const std::string bytes = encode(fx::internal_tx(spec, "a", "b", 1, 0), spec);
    EXPECT_THROW(decode(bytes.substr(0, bytes.size() / 2), spec), InputError);
    EXPECT_THROW(decode(encode(fx::internal_tx(spec, "a", "b", 1, 0), spec), variant_format(FormatId{3})), InputError);
    EXPECT_THROW(decode("garbage", spec), InputError);
}

TEST(Format, ValidateRejectsBadSpecs) {
    FormatSpec spec = identity_format(FormatId{1});
    spec.amount_unit_scale = 0;
    EXPECT_THROW(validate(spec), InputError);
    spec = identity_format(FormatId{1});
    spec.field_order.pop_back();
    EXPECT_THROW(validate(spec), InputError);
    spec = identity_format(FormatId{1});
    spec.field_names["sender"] = "receiver";
    EXPECT_THROW(validate(spec), InputError);
    spec = identity_format(FormatId{1});
    spec.field_names["sender"] = "se=nder";
    EXPECT_THROW(validate(spec), InputError);
}

TEST(Format, IdsAreContentHashes) {
    const FormatSpec spec = variant_format(FormatId{1});
    const Transaction a = fx::cross_tx(spec, C(1), "alice", "bob", 10, 0);
    const Transaction b = fx::cross_tx(spec, C(1), "alice", "bob", 10, 1);
    EXPECT_NE(a.tx_id, b.tx_id);
    EXPECT_EQ(a.origin_tx_id, a.tx_id);
    // The dependency does not enter the id, so mutual dependencies can be wired.
    const Transaction c = fx::cross_tx(spec, C(1), "alice", "bob", 10, 0, Dependency{C(2), sha256("d")});
    EXPECT_EQ(c.tx_id, a.tx_id);
}

TEST(Transform, RegistrySizes) {
    for (std::uint32_t n = 3; n <= 8; ++n) {
        std::vector<ChainId> ids;
        for (std::uint32_t i = 1; i <= n; ++i) ids.push_back(C(i));
        const auto ring = build_topology(TopologyKind::Ring, ids);
        EXPECT_EQ(registry_for(ring, formats_for(ring)).size(), n);
    }
    const auto full = build_topology(TopologyKind::Full, fx::ids({1, 2, 3}));
    EXPECT_EQ(registry_for(full, formats_for(full)).size(), 6u);
    const auto star = build_topology(TopologyKind::Star, fx::ids({1, 2, 3, 4}), C(1));
    EXPECT_EQ(registry_for(star, formats_for(star)).size(), 6u);
}

TEST(Transform, RegistryErrors) {
    const auto ring = build_topology(TopologyKind::Ring, fx::ids({1, 2, 3}));
    auto specs = formats_for(ring);
    specs.erase(C(3));
    EXPECT_THROW(registry_for(ring, specs), InputError);
    specs = formats_for(ring);
    specs[C(3)] = specs[C(2)];
    EXPECT_THROW(registry_for(ring, specs), InputError);
}

TEST(Transform, TwoHopsPreserveOriginId) {
    // Data flows 1 -> 2 -> 3: chain 2 reads chain 1, chain 3 reads chain 2.
    const auto g = fx::graph({1, 2, 3}, {{2, 1}, {3, 2}, {1, 3}});
    const auto specs = formats_for(g);
    const auto reg = registry_for(g, specs);
    const Transaction orig = fx::cross_tx(specs.at(C(1)), C(1), "alice", "bob", 7, 3);
    const auto at2 = transf(orig, FormatId{1}, FormatId{2}, reg);
    const auto at3 = transf(at2, FormatId{2}, FormatId{3}, reg);
    EXPECT_EQ(at3.origin_tx_id, orig.origin_tx_id);
    EXPECT_EQ(at3.format_id, FormatId{3});
    EXPECT_NE(at3.tx_id, orig.tx_id);
    EXPECT_EQ(canonical_projection(at3), canonical_projection(orig));
    EXPECT_THROW(transf(orig, FormatId{1}, FormatId{3}, reg), TransformRefused);
    EXPECT_THROW(transf(orig, FormatId{2}, FormatId{3}, reg), InputError);
}

TEST(Transform, FullCycleAroundRing) {
    std::mt19937_64 rng(11);
    for (std::uint32_t n = 3; n <= 8; ++n) {
        std::vector<ChainId> ids;
        for (std::uint32_t i = 1; i <= n; ++i) ids.push_back(C(i));
        const auto ring = build_topology(TopologyKind::Ring, ids);
        const auto specs = formats_for(ring);
        const auto reg = registry_for(ring, specs);
        const Transaction orig = random_original(rng, specs.at(C(1)), C(1));
        // Data leaves chain 1 against edge direction: 1 -> n -> ... -> 2 -> 1.
        Transaction cur = orig;
        ChainId at = C(1);
        for (std::uint32_t step = 0; step < n; ++step) {
            const ChainId next = ring.in_neighbors(at).front();
            cur = transf(cur, specs.at(at).id, specs.at(next).id, reg);
            at = next;
        }
        EXPECT_EQ(at, C(1));
        EXPECT_EQ(canonical_projection(cur), canonical_projection(orig));
    }
}

TEST(Transform, CompositionAlongDataRoutes) {
    std::mt19937_64 rng(99);
    for (std::uint32_t n = 3; n <= 8; ++n) {
        std::vector<ChainId> ids;
        for (std::uint32_t i = 1; i <= n; ++i) ids.push_back(C(i));
        const auto ring = build_topology(TopologyKind::Ring, ids);
        const auto specs = formats_for(ring);
        const auto reg = registry_for(ring, specs);
        for (int i = 0; i < 200; ++i) {
            const ChainId origin = ids[rng() % n];
            const ChainId dest = ids[rng() % n];
            const Transaction orig = random_original(rng, specs.at(origin), origin);
            const auto route = data_route(ring, origin, dest);
            ASSERT_FALSE(route.empty());
            Transaction cur = orig;
            for (std::size_t k = 0; k + 1 < route.size(); ++k)
                cur = transf(cur, specs.at(route[k]).id, specs.at(route[k + 1]).id, reg);
            ASSERT_EQ(cur.format_id, specs.at(dest).id);
            ASSERT_EQ(canonical_projection(cur), canonical_projection(orig));
        }
    }
}
