#include <catch2/catch_amalgamated.hpp>

#include "congraph/bond.hpp"

using namespace congraph;

// replay a special-minor certificate on its source context and check the
// invariants: ops contract non-bond edges, d' = d restricted to survivors,
// and the final context has the declared shape
static void check_special(const BondContext& src, const SpecialMinor& sm) {
    BondContext cur = src;
    for (const MinorOp& op : sm.ops) {
        REQUIRE(op.kind == MinorOpKind::Contract);
        const Edge& e = cur.cg.g.edge(op.label);
        REQUIRE(cur.side[e.u] == cur.side[e.v]);
        cur = contract_in_context(cur, op.label);
    }
    CHECK(cur.cg.g == sm.final_context.cg.g);
    std::vector<Label> d_src = src.d(), d_fin = cur.d();
    for (Label l : d_fin) CHECK(std::binary_search(d_src.begin(), d_src.end(), l));
    for (Label l : d_src)
        if (cur.cg.g.find_label(l))
            CHECK(std::binary_search(d_fin.begin(), d_fin.end(), l));
    if (sm.kind == SpecialKind::SpecialK4) {
        CHECK(cur.cg.g.n == 4);
        CHECK(cur.cg.g.m() == 6);
        CHECK(cur.d().size() == 4);
    } else {
        CHECK(cur.cg.g.n == 6);
        CHECK(cur.cg.g.m() == 9);
        CHECK(cur.d().size() == 3);
    }
    CHECK(is_3connected_along(cur));
}

TEST_CASE("reduce_leaf_block on a path side") {
    // left: path 0-1-2 (not 2-connected), right: edge 3-4, full cross edges
    ConstraintGraph g = build(5, {{0, 1}, {1, 2}, {3, 4}, {0, 3}, {0, 4}, {1, 3},
                                  {1, 4}, {2, 3}, {2, 4}});
    BondContext b = make_bond_context(g.g, {0, 1, 2});
    REQUIRE(is_3connected_along(b));
    auto step = reduce_leaf_block(b);
    REQUIRE(step.has_value());
    CHECK(step->ops == std::vector<MinorOp>{op_contract(1)});  // keep block {01}, contract 12
    CHECK(is_3connected_along(step->ctx));
    CHECK_FALSE(step->ctx.side_edges(0).empty());
    CHECK_FALSE(step->ctx.side_edges(1).empty());
}

TEST_CASE("reduce_leaf_block does not apply to 2-connected sides") {
    CHECK_FALSE(reduce_leaf_block(catalog().special_prism).has_value());
    CHECK_FALSE(reduce_leaf_block(catalog().special_k4).has_value());
}

TEST_CASE("reduce_2connected_side contracts a square side to a triangle") {
    // left: C4 on 0..3, right: edge 4-5, crossings keep it 3-connected along
    ConstraintGraph g = build(6, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {0, 4},
                                  {1, 5}, {2, 4}, {3, 5}});
    BondContext b = make_bond_context(g.g, {0, 1, 2, 3});
    REQUIRE(is_3connected_along(b));
    auto step = reduce_2connected_side(b);
    REQUIRE(step.has_value());
    CHECK(step->ops.size() == 1);
    SideView left = side_view(step->ctx, 0);
    CHECK(left.sub.n == 3);
    CHECK(left.sub.m() == 3);
    CHECK(is_3connected_along(step->ctx));
}

TEST_CASE("reduce_2connected_side skips triangle sides") {
    CHECK_FALSE(reduce_2connected_side(catalog().special_prism).has_value());
}

TEST_CASE("finalize recognizes the special pairs") {
    SpecialMinor k4 = finalize(catalog().special_k4);
    CHECK(k4.kind == SpecialKind::SpecialK4);
    CHECK(k4.ops.empty());

    SpecialMinor pr = finalize(catalog().special_prism);
    CHECK(pr.kind == SpecialKind::SpecialPrism);
    CHECK(pr.ops.empty());
}

TEST_CASE("finalize contracts triangle pairs with four cross edges to the special K4") {
    ConstraintGraph g = build(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3},
                                  {0, 3}, {1, 4}, {2, 5}, {0, 4}});
    BondContext b = make_bond_context(g.g, {0, 1, 2});
    REQUIRE(is_3connected_along(b));
    SpecialMinor sm = finalize(b);
    CHECK(sm.kind == SpecialKind::SpecialK4);
    CHECK(sm.ops.size() == 2);
    check_special(b, sm);
}

TEST_CASE("finalize handles edge plus triangle") {
    // left: edge 0-1; right: triangle 2,3,4; both 0 and 1 see two right vertices
    ConstraintGraph g =
        build(5, {{0, 1}, {2, 3}, {3, 4}, {4, 2}, {0, 2}, {0, 3}, {1, 3}, {1, 4}});
    BondContext b = make_bond_context(g.g, {0, 1});
    REQUIRE(is_3connected_along(b));
    SpecialMinor sm = finalize(b);
    CHECK(sm.kind == SpecialKind::SpecialK4);
    CHECK(sm.ops.size() == 1);
    check_special(b, sm);
}

TEST_CASE("finalize rejects non-terminal shapes") {
    ConstraintGraph g = build(5, {{0, 1}, {1, 2}, {3, 4}, {0, 3}, {0, 4}, {1, 3},
                                  {1, 4}, {2, 3}, {2, 4}});
    BondContext b = make_bond_context(g.g, {0, 1, 2});
    CHECK_THROWS_AS(finalize(b), PreconditionError);
}

TEST_CASE("reduce_to_special on the cube with a face-to-face bond") {
    // cube: top face 0-1-2-3, bottom face 4-5-6-7, vertical matching
    ConstraintGraph cube = build(8, {{0, 1}, {1, 2}, {2, 3}, {3, 0},
                                     {4, 5}, {5, 6}, {6, 7}, {7, 4},
                                     {0, 4}, {1, 5}, {2, 6}, {3, 7}});
    BondContext b = make_bond_context(cube.g, {0, 1, 2, 3});
    REQUIRE(is_3connected_along(b));
    SpecialMinor sm = reduce_to_special(b);
    check_special(b, sm);
}

TEST_CASE("reduce_to_special is the identity on the special K4") {
    SpecialMinor sm = reduce_to_special(catalog().special_k4);
    CHECK(sm.kind == SpecialKind::SpecialK4);
    CHECK(sm.ops.empty());
}

TEST_CASE("certify terminal cases") {
    const ObstructionCatalog& c = catalog();

    CertifyOutcome k4 = certify(c.constraint_k4);
    REQUIRE_FALSE(k4.connected);
    CHECK(k4.name == "constraint_k4");
    CHECK(k4.cert.ops.empty());

    CertifyOutcome wp = certify(c.weird_prism);
    REQUIRE_FALSE(wp.connected);
    CHECK(wp.name == "constraint_wheel");
    CHECK(wp.cert.ops.size() == 1);
    REQUIRE(wp.stages.size() == 1);
    CHECK(wp.stages[0] == CertStage::Terminal);

    for (int i = 0; i < 4; ++i) {
        CertifyOutcome pr = certify(c.constraint_prisms[i]);
        REQUIRE_FALSE(pr.connected);
        CHECK(pr.name == "constraint_prism_" + std::to_string(i + 1));
        CHECK(pr.cert.ops.empty());
    }

    CertifyOutcome wag = certify(c.constraint_wagner);
    REQUIRE_FALSE(wag.connected);
    CHECK_FALSE(wag.cert.ops.empty());

    CertifyOutcome wpr = certify(c.wagner_prism);
    REQUIRE_FALSE(wpr.connected);
    CHECK_FALSE(wpr.cert.ops.empty());
}

TEST_CASE("certify connected and precondition cases") {
    ConstraintGraph p = build(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3},
                                  {0, 3}, {1, 4}, {2, 5}}, {0, 1, 2});
    CertifyOutcome out = certify(p);
    CHECK(out.connected);

    ConstraintGraph c4 = build(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, {0, 2});
    CHECK_THROWS_AS(certify(c4), PreconditionError);
}

TEST_CASE("certify agrees with the minor search on the catalog graphs") {
    MinorSearchContext ctx;
    for (const auto& [name, g] : catalog().all_named()) {
        CertifyOutcome out = certify(*g);
        auto fb = find_forbidden_minor(*g, &ctx);
        CHECK(out.connected == !fb.has_value());
    }
}
