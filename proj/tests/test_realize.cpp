#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "congraph/realize.hpp"

using namespace congraph;

namespace {

// ---- independent closure oracle (own flip generator, own dedup) ----

// vertex-renaming-invariant key of a labeled graph
std::string oracle_key(const SimpleGraph& g) {
    std::vector<int> perm(g.n);
    std::iota(perm.begin(), perm.end(), 0);
    std::string best;
    do {
        std::string code;
        std::vector<const Edge*> sorted;
        for (const Edge& e : g.edges) sorted.push_back(&e);
        std::sort(sorted.begin(), sorted.end(),
                  [](const Edge* a, const Edge* b) { return a->label < b->label; });
        for (const Edge* e : sorted) {
            int a = std::min(perm[e->u], perm[e->v]), b = std::max(perm[e->u], perm[e->v]);
            code.push_back((char)('0' + a));
            code.push_back((char)('0' + b));
            code.push_back(',');
        }
        if (best.empty() || code < best) best = code;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::vector<std::vector<int>> components_without(const SimpleGraph& g, int u, int v) {
    std::vector<int> comp(g.n, -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < g.n; ++s) {
        if (s == u || s == v || comp[s] != -1) continue;
        std::vector<int> stack{s}, verts;
        comp[s] = (int)out.size();
        while (!stack.empty()) {
            int w = stack.back();
            stack.pop_back();
            verts.push_back(w);
            for (const Edge& e : g.edges) {
                int other = -1;
                if (e.u == w) other = e.v;
                if (e.v == w) other = e.u;
                if (other == -1 || other == u || other == v || comp[other] != -1) continue;
                comp[other] = (int)out.size();
                stack.push_back(other);
            }
        }
        out.push_back(std::move(verts));
    }
    return out;
}

std::vector<SimpleGraph> flip_neighbors(const SimpleGraph& g) {
    std::vector<SimpleGraph> out;
    for (int u = 0; u < g.n; ++u) {
        for (int v = u + 1; v < g.n; ++v) {
            auto comps = components_without(g, u, v);
            std::vector<std::vector<Label>> parts;
            for (auto& cs : comps) {
                std::vector<char> inside(g.n, 0);
                for (int w : cs) inside[w] = 1;
                std::vector<Label> pe;
                for (const Edge& e : g.edges)
                    if (inside[e.u] || inside[e.v]) pe.push_back(e.label);
                parts.push_back(std::move(pe));
            }
            for (const Edge& e : g.edges)
                if ((e.u == u || e.u == v) && (e.v == u || e.v == v))
                    parts.push_back({e.label});
            if (parts.size() < 2 || comps.size() < 2) continue;
            for (uint32_t sub = 1; sub + 1 < (1u << parts.size()); ++sub) {
                std::vector<char> flip_edge(1 + (size_t)2000000, 0);
                std::vector<Label> chosen;
                for (size_t i = 0; i < parts.size(); ++i)
                    if (sub >> i & 1)
                        for (Label l : parts[i]) chosen.push_back(l);
                SimpleGraph h;
                h.n = g.n;
                std::sort(chosen.begin(), chosen.end());
                for (const Edge& e : g.edges) {
                    int a = e.u, b = e.v;
                    if (std::binary_search(chosen.begin(), chosen.end(), e.label)) {
                        auto swp = [&](int w) { return w == u ? v : (w == v ? u : w); };
                        a = swp(a);
                        b = swp(b);
                    }
                    h.edges.push_back({e.label, std::min(a, b), std::max(a, b)});
                }
                out.push_back(std::move(h));
            }
        }
    }
    return out;
}

std::vector<SimpleGraph> whitney_closure(const SimpleGraph& g) {
    std::vector<SimpleGraph> queue{g};
    std::set<std::string> seen{oracle_key(g)};
    for (size_t i = 0; i < queue.size(); ++i) {
        for (SimpleGraph& h : flip_neighbors(queue[i]))
            if (seen.insert(oracle_key(h)).second) queue.push_back(std::move(h));
    }
    return queue;
}

bool oracle_x_connected(const SimpleGraph& g, const std::vector<Label>& x) {
    // union-find over vertices along X edges
    std::vector<int> p(g.n);
    std::iota(p.begin(), p.end(), 0);
    std::function<int(int)> find = [&](int a) { return p[a] == a ? a : p[a] = find(p[a]); };
    for (Label l : x) {
        const Edge& e = g.edge(l);
        p[find(e.u)] = find(e.v);
    }
    int root = -1;
    for (Label l : x) {
        int r = find(g.edge(l).u);
        if (root == -1) root = r;
        if (r != root) return false;
    }
    return true;
}

bool oracle_realizable(const SimpleGraph& g, const std::vector<Label>& x) {
    for (const SimpleGraph& h : whitney_closure(g))
        if (oracle_x_connected(h, x)) return true;
    return false;
}

}  // namespace

TEST_CASE("whitney_flip on two 4-cycles") {
    // cycles 0-2-1-3-0 and 0-4-1-5-0 sharing 0,1
    ConstraintGraph g = build(6, {{0, 2}, {2, 1}, {1, 3}, {3, 0}, {0, 4}, {4, 1}, {1, 5}, {5, 0}});
    std::vector<Label> part{4, 5, 6, 7};
    SimpleGraph flipped = whitney_flip(g.g, {0, 1}, part);
    CHECK(flipped.edge(4).u == 1);  // 0-4 became 1-4
    CHECK(flipped.edge(4).v == 4);
    CHECK(cycle_matroid_equal(g.g, flipped));

    SimpleGraph again = whitney_flip(flipped, {0, 1}, part);
    CHECK(again == g.g);
}

TEST_CASE("whitney_flip of a single connector edge") {
    ConstraintGraph g = build(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}});
    SimpleGraph f = whitney_flip(g.g, {0, 2}, {4});
    CHECK(f == g.g);  // the edge reattaches to the same pair
    CHECK(cycle_matroid_equal(g.g, f));
}

TEST_CASE("whitney_flip rejects non-separating parts") {
    ConstraintGraph k4 = build(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    CHECK_THROWS_AS(whitney_flip(k4.g, {0, 1}, {5}), PreconditionError);
    CHECK_THROWS_AS(whitney_flip(k4.g, {0, 0}, {5}), std::invalid_argument);
}

TEST_CASE("cycle_matroid_equal") {
    ConstraintGraph k4 = build(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    CHECK(cycle_matroid_equal(k4.g, k4.g));

    // swapping the labels of two opposite edges changes the circuit family
    SimpleGraph swapped = k4.g;
    for (Edge& e : swapped.edges) {
        if (e.label == 0) e.label = 5;
        else if (e.label == 5) e.label = 0;
    }
    std::sort(swapped.edges.begin(), swapped.edges.end(),
              [](const Edge& a, const Edge& b) { return a.label < b.label; });
    CHECK_FALSE(cycle_matroid_equal(k4.g, swapped));

    ConstraintGraph p3 = build(3, {{0, 1}, {1, 2}});
    CHECK_THROWS_AS(cycle_matroid_equal(k4.g, p3.g), std::invalid_argument);
}

TEST_CASE("two_sum_glue") {
    // triangles sharing virtual label 9
    ConstraintGraph t1 = build(3, {{0, 1}, {1, 2}, {2, 0}});
    SimpleGraph g1 = t1.g;
    g1.edges[2].label = 9;  // edge 2-0 becomes the virtual edge
    ConstraintGraph t2 = build(3, {{0, 1}, {1, 2}, {2, 0}});
    SimpleGraph g2;
    g2.n = 3;
    g2.edges = {{7, 0, 2}, {8, 1, 2}, {9, 0, 1}};
    std::sort(g1.edges.begin(), g1.edges.end(),
              [](const Edge& a, const Edge& b) { return a.label < b.label; });
    SimpleGraph c4 = two_sum_glue(g1, g2, 9);
    CHECK(c4.n == 4);
    CHECK(c4.m() == 4);
    CHECK(circuit_family(c4).size() == 1);

    // circuits of a 2-sum: side circuits avoiding the virtual edge, plus
    // joins of circuits through it
    ConstraintGraph k4 = build(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    SimpleGraph k4v = k4.g;
    k4v.edges[5].label = 9;  // 2-3 virtual
    std::sort(k4v.edges.begin(), k4v.edges.end(),
              [](const Edge& a, const Edge& b) { return a.label < b.label; });
    SimpleGraph tri;
    tri.n = 3;
    tri.edges = {{6, 0, 1}, {7, 1, 2}, {9, 0, 2}};
    SimpleGraph glued = two_sum_glue(k4v, tri, 9);
    CHECK(glued.n == 5);
    CHECK(glued.m() == 7);
    auto fam = circuit_family(glued);
    std::set<std::vector<Label>> expect;
    for (auto& c1 : circuit_family(k4v)) {
        if (!std::binary_search(c1.begin(), c1.end(), 9)) {
            expect.insert(c1);
            continue;
        }
        for (auto& c2 : circuit_family(tri)) {
            if (!std::binary_search(c2.begin(), c2.end(), 9)) continue;
            std::vector<Label> join;
            for (Label l : c1)
                if (l != 9) join.push_back(l);
            for (Label l : c2)
                if (l != 9) join.push_back(l);
            std::sort(join.begin(), join.end());
            expect.insert(join);
        }
    }
    for (auto& c2 : circuit_family(tri))
        if (!std::binary_search(c2.begin(), c2.end(), 9)) expect.insert(c2);
    CHECK(fam == expect);

    CHECK_THROWS_AS(two_sum_glue(k4v, k4.g, 9), std::invalid_argument);
}

TEST_CASE("realize identity when X is already connected") {
    ConstraintGraph p = build(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3},
                                  {0, 3}, {1, 4}, {2, 5}}, {0, 1, 2});
    RealizeResult r = realize(p);
    REQUIRE(r.ok());
    CHECK(r.realization->result == p.g);
    CHECK(r.realization->flips_applied.empty());
}

TEST_CASE("realize fixes two 4-cycles with one flip") {
    ConstraintGraph g = build(6, {{0, 2}, {2, 1}, {1, 3}, {3, 0}, {0, 4}, {4, 1},
                                  {1, 5}, {5, 0}}, {0, 6});
    RealizeResult r = realize(g);
    REQUIRE(r.ok());
    CHECK(r.realization->flips_applied.size() == 1);
    CHECK_FALSE(r.realization->used_closure_search);
    CHECK(cycle_matroid_equal(g.g, r.realization->result));
    ConstraintGraph out{r.realization->result, g.x};
    CHECK(is_constraint_connected(out));
}

TEST_CASE("realize reports the constraint K4 for a matching on K4") {
    ConstraintGraph k4 = build(4, {{0, 1}, {2, 3}, {0, 2}, {0, 3}, {1, 2}, {1, 3}}, {0, 1});
    RealizeResult r = realize(k4);
    REQUIRE_FALSE(r.ok());
    CHECK(r.forbidden->first == "constraint_k4");
    CHECK(validate_certificate(k4, r.forbidden->second, catalog().constraint_k4));
}

TEST_CASE("realize reconnects X across blocks") {
    // two triangles sharing vertex 2, X = one edge of each triangle
    ConstraintGraph bowtie = build(5, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 2}}, {0, 4});
    RealizeResult r = realize(bowtie);
    REQUIRE(r.ok());
    CHECK(cycle_matroid_equal(bowtie.g, r.realization->result));
    CHECK(is_constraint_connected(ConstraintGraph{r.realization->result, bowtie.x}));
}

TEST_CASE("realize glues components when X spans them") {
    ConstraintGraph two = build(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}}, {0, 3});
    RealizeResult r = realize(two);
    REQUIRE(r.ok());
    CHECK(cycle_matroid_equal(two.g, r.realization->result));
    CHECK(is_constraint_connected(ConstraintGraph{r.realization->result, two.x}));
}

TEST_CASE("realize rejects the weird prism") {
    RealizeResult r = realize(catalog().weird_prism);
    REQUIRE_FALSE(r.ok());
    CHECK(r.forbidden->first == "constraint_wheel");
}

TEST_CASE("realize agrees with the closure oracle on 2-connected graphs up to n=5") {
    MinorSearchContext ctx;
    int instances = 0;
    for (int n = 3; n <= 5; ++n) {
        enumerate_graphs(
            n, [](const SimpleGraph& g) { return is_k_connected(g, 2); },
            [&](const SimpleGraph& g) {
                auto closure = whitney_closure(g);
                int m = g.m();
                for (uint32_t xm = 0; xm < (1u << m); ++xm) {
                    ConstraintGraph cg{g, {}};
                    for (int i = 0; i < m; ++i)
                        if (xm >> i & 1) cg.x.push_back(g.edges[i].label);
                    bool want = false;
                    for (const SimpleGraph& h : closure)
                        if (oracle_x_connected(h, cg.x)) {
                            want = true;
                            break;
                        }
                    RealizeResult r = realize(cg, &ctx);
                    INFO(describe(cg));
                    REQUIRE(r.ok() == want);
                    if (r.ok()) {
                        CHECK(cycle_matroid_equal(g, r.realization->result));
                        CHECK(is_constraint_connected(
                            ConstraintGraph{r.realization->result, cg.x}));
                    } else {
                        const ConstraintGraph* t = catalog().named(r.forbidden->first);
                        CHECK(validate_certificate(cg, r.forbidden->second, *t));
                    }
                    instances++;
                }
            });
    }
    CHECK(instances > 500);
}
