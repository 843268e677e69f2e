#include <catch2/catch_amalgamated.hpp>

#include "congraph/connectivity.hpp"
#include "congraph/obstructions.hpp"

using namespace congraph;

static ConstraintGraph prism() {
    return build(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}, {0, 3}, {1, 4}, {2, 5}});
}

TEST_CASE("vertex connectivity") {
    ConstraintGraph k4 = build(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    CHECK(is_k_connected(k4.g, 3));

    CHECK(is_k_connected(prism().g, 3));

    ConstraintGraph c4 = build(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    CHECK(is_k_connected(c4.g, 2));
    CHECK_FALSE(is_k_connected(c4.g, 3));

    ConstraintGraph tri = build(3, {{0, 1}, {1, 2}, {2, 0}});
    CHECK(is_k_connected(tri.g, 2));
    CHECK_FALSE(is_k_connected(tri.g, 3));

    ConstraintGraph k2 = build(2, {{0, 1}});
    CHECK(is_k_connected(k2.g, 1));
    CHECK_FALSE(is_k_connected(k2.g, 2));

    ConstraintGraph disc = build(4, {{0, 1}, {2, 3}});
    CHECK_FALSE(is_k_connected(disc.g, 1));
}

TEST_CASE("block tree") {
    // two triangles sharing vertex 2
    ConstraintGraph bowtie = build(5, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 2}});
    BlockTree t = block_tree(bowtie.g);
    REQUIRE(t.blocks.size() == 2);
    CHECK(t.cutvertices == std::vector<int>{2});
    auto leaves = leaf_blocks(t);
    REQUIRE(leaves.size() == 2);
    for (auto& [bi, cv] : leaves) {
        REQUIRE(cv.has_value());
        CHECK(*cv == 2);
    }

    ConstraintGraph c5 = build(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
    BlockTree tc = block_tree(c5.g);
    CHECK(tc.blocks.size() == 1);
    CHECK(tc.cutvertices.empty());
    auto single = leaf_blocks(tc);
    REQUIRE(single.size() == 1);
    CHECK_FALSE(single[0].second.has_value());

    ConstraintGraph p4 = build(4, {{0, 1}, {1, 2}, {2, 3}});
    BlockTree tp = block_tree(p4.g);
    CHECK(tp.blocks.size() == 3);
    CHECK(tp.cutvertices == std::vector<int>{1, 2});

    CHECK_THROWS_AS(block_tree(build(4, {{0, 1}, {2, 3}}).g), PreconditionError);
}

TEST_CASE("block edge partition is exact") {
    for (const ConstraintGraph& g :
         {prism(), build(6, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 5}, {5, 3}}),
          build(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}})}) {
        BlockTree t = block_tree(g.g);
        std::vector<Label> all;
        for (auto& b : t.blocks) all.insert(all.end(), b.begin(), b.end());
        std::sort(all.begin(), all.end());
        CHECK(all == g.g.labels());
    }
}

TEST_CASE("serial_suppress") {
    // prism minus one triangle edge: suppress the two degree-2 endpoints -> K4
    ConstraintGraph p = prism();
    ConstraintGraph del = delete_non_x(p, 0);  // triangle edge 01
    SuppressResult res = serial_suppress(del, {0, 1});
    CHECK(res.g.g.n == 4);
    CHECK(res.g.g.m() == 6);
    CHECK(is_k_connected(res.g.g, 3));
    CHECK(res.ops.size() == 2);

    // a matching edge behaves differently: suppression yields C4 (and the
    // Bixby branch for matching edges is the contraction, a wheel)
    ConstraintGraph delm = delete_non_x(p, 6);
    SuppressResult resm = serial_suppress(delm, {0, 3});
    CHECK(resm.g.g.n == 4);
    CHECK(resm.g.g.m() == 4);
    ConstraintGraph cm = contract(p, 6);
    CHECK(is_k_connected(cm.g, 3));

    // no degree-2 vertices: identity
    ConstraintGraph k4 = build(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    SuppressResult id = serial_suppress(k4, {0, 1});
    CHECK(id.g == k4);
    CHECK(id.ops.empty());

    // mixed class: the X edge is contracted, the non-X edge survives
    ConstraintGraph mixed = prism();
    mixed.x = {2};  // triangle edge 20
    ConstraintGraph dd = delete_non_x(mixed, 0);
    SuppressResult ms = serial_suppress(dd, {0, 1});
    REQUIRE(ms.ops.size() == 2);
    CHECK(ms.ops[0] == op_contract(2));
    CHECK(ms.g.g.find_label(6) != nullptr);

    // degree-2 vertex away from the removed edge: rejected
    ConstraintGraph bad = build(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    CHECK_THROWS_AS(serial_suppress(bad, {0, 1}), PreconditionError);
}

TEST_CASE("bixby_step") {
    ConstraintGraph p = prism();
    // triangle edge: the contraction leaves a degree-2 vertex, so the delete
    // branch fires and suppresses down to K4
    BixbyStep s = bixby_step(p, 0);
    CHECK_FALSE(s.contracted);
    CHECK(is_k_connected(s.result.g, 3));
    CHECK(s.result.g.n == 4);
    CHECK(replay(p, s.ops) == s.result);

    // weird prism: every non-X edge yields a 3-connected result
    const ConstraintGraph& wp = catalog().weird_prism;
    for (const Edge& e : wp.g.edges) {
        if (wp.in_x(e.label)) continue;
        BixbyStep st = bixby_step(wp, e.label);
        CHECK(is_k_connected(st.result.g, 3));
        CHECK(replay(wp, st.ops) == st.result);
    }

    ConstraintGraph k4 = build(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    CHECK_THROWS_AS(bixby_step(k4, 0), PreconditionError);
    ConstraintGraph withx = prism();
    withx.x = {0};
    CHECK_THROWS_AS(bixby_step(withx, 0), PreconditionError);
}

TEST_CASE("bixby_step stays 3-connected over all small inputs") {
    MinorSearchContext ctx;
    for (int n = 4; n <= 5; ++n) {
        enumerate_graphs(
            n, [](const SimpleGraph& g) { return is_k_connected(g, 3); },
            [&](const SimpleGraph& g) {
                if (g.n == 4 && g.m() == 6) return;  // K4 excluded
                int m = g.m();
                for (uint32_t xm = 0; xm < (1u << m); ++xm) {
                    ConstraintGraph cg{g, {}};
                    for (int i = 0; i < m; ++i)
                        if (xm >> i & 1) cg.x.push_back(g.edges[i].label);
                    for (const Edge& e : g.edges) {
                        if (cg.in_x(e.label)) continue;
                        BixbyStep st = bixby_step(cg, e.label);
                        CHECK(is_k_connected(st.result.g, 3));
                    }
                }
            });
    }
}

TEST_CASE("two_separations") {
    ConstraintGraph k4 = build(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    CHECK(two_separations(k4.g).empty());

    ConstraintGraph c5 = build(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
    auto seps = two_separations(c5.g);
    CHECK(seps.size() == 5);
    for (auto& s : seps) {
        CHECK(s.a.size() >= 2);
        CHECK(s.b.size() >= 2);
        CHECK(s.a.size() + s.b.size() == 5);
    }

    // two 4-cycles meeting exactly in s=0, t=1 (no st edge): one separation
    ConstraintGraph two4 =
        build(6, {{0, 2}, {2, 1}, {1, 3}, {3, 0}, {0, 4}, {4, 1}, {1, 5}, {5, 0}});
    auto s2 = two_separations(two4.g);
    REQUIRE(s2.size() == 1);
    CHECK(s2[0].separator == std::pair{0, 1});

    CHECK_THROWS_AS(two_separations(build(4, {{0, 1}, {1, 2}, {2, 3}}).g), PreconditionError);
}

TEST_CASE("bond contexts and 3-connected along") {
    CHECK(is_3connected_along(catalog().special_k4));
    CHECK(is_3connected_along(catalog().special_prism));

    // C4 with sides = two opposite edges: the cross pair {0,2} separates
    ConstraintGraph c4 = build(4, {{0, 1}, {2, 3}, {1, 2}, {3, 0}});
    BondContext bc = make_bond_context(c4.g, {0, 1});
    CHECK(bc.d().size() == 2);
    CHECK_FALSE(is_3connected_along(bc));

    // removing any cross edge from the special prism breaks the condition
    const BondContext& sp = catalog().special_prism;
    for (Label l : sp.d()) {
        ConstraintGraph cut{sp.cg};
        cut = delete_non_x(cut, l);
        if (cut.g.n < 6) continue;
        BondContext b2 = make_bond_context(cut.g, {0, 1, 2});
        CHECK_FALSE(is_3connected_along(b2));
    }

    // a side that is not connected is not a bond
    ConstraintGraph c6 = build(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
    CHECK_THROWS_AS(make_bond_context(c6.g, {0, 2}), PreconditionError);
    CHECK_THROWS_AS(make_bond_context(c6.g, std::vector<int>{}), PreconditionError);
}

TEST_CASE("contractible edges") {
    ConstraintGraph c4 = build(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    CHECK(contractible_edges(c4.g).size() == 4);
    FourContractible fc = four_contractible(c4.g);
    const Edge& e0 = c4.g.edge(fc.edges[0]);
    const Edge& e1 = c4.g.edge(fc.edges[1]);
    CHECK(e0.u != e1.u);
    CHECK(e0.v != e1.v);
    CHECK(e0.u != e1.v);
    CHECK(e0.v != e1.u);

    ConstraintGraph k4 = build(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    CHECK(contractible_edges(k4.g).size() == 6);

    ConstraintGraph tri = build(3, {{0, 1}, {1, 2}, {2, 0}});
    CHECK(contractible_edges(tri.g).size() == 3);
    CHECK_THROWS_AS(four_contractible(tri.g), PreconditionError);
}
