#pragma once

#include <functional>
#include <unordered_map>

#include "congraph/canonical.hpp"
#include "congraph/connectivity.hpp"
#include "congraph/graph.hpp"

namespace congraph {

// ---------------------------------------------------------------- catalog

// Named constraint graphs.  The six obstructions are the constraint K4, the
// constraint wheel and the four constraint prisms; the weird prism, the
// constraint Wagner graph (the Moebius ladder on six vertices, i.e. K3,3,
// whose X is the complement of a six-cycle) and the Wagner prism appear as
// terminal cases of the reduction.  The prism is always laid out as
// triangles {0,1,2} and {3,4,5} with matching 03,14,25.
struct ObstructionCatalog {
    ConstraintGraph constraint_k4;
    ConstraintGraph constraint_wheel;
    std::array<ConstraintGraph, 4> constraint_prisms;
    ConstraintGraph weird_prism;
    ConstraintGraph constraint_wagner;
    ConstraintGraph wagner_prism;
    BondContext special_k4;
    BondContext special_prism;

    std::vector<std::pair<std::string, const ConstraintGraph*>> obstructions() const {
        return {{"constraint_k4", &constraint_k4},
                {"constraint_wheel", &constraint_wheel},
                {"constraint_prism_1", &constraint_prisms[0]},
                {"constraint_prism_2", &constraint_prisms[1]},
                {"constraint_prism_3", &constraint_prisms[2]},
                {"constraint_prism_4", &constraint_prisms[3]}};
    }

    std::vector<std::pair<std::string, const ConstraintGraph*>> all_named() const {
        auto v = obstructions();
        v.push_back({"weird_prism", &weird_prism});
        v.push_back({"constraint_wagner", &constraint_wagner});
        v.push_back({"wagner_prism", &wagner_prism});
        return v;
    }

    const ConstraintGraph* named(const std::string& name) const {
        for (const auto& [n, g] : all_named())
            if (n == name) return g;
        return nullptr;
    }
};

namespace detail {

inline std::vector<std::pair<int, int>> prism_edges() {
    return {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}, {0, 3}, {1, 4}, {2, 5}};
}

inline ObstructionCatalog build_catalog() {
    ObstructionCatalog c;
    c.constraint_k4 = build(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, {0, 5});
    // 4-wheel: rim 0-1-2-3, hub 4; X = two opposite rim edges
    c.constraint_wheel =
        build(5, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 4}, {1, 4}, {2, 4}, {3, 4}}, {0, 2});
    // X inside the triangles, spanning both: 3+3, 3+2, 2+2 with matched
    // path centers, 2+2 with unmatched centers
    c.constraint_prisms[0] = build(6, prism_edges(), {0, 1, 2, 3, 4, 5});
    c.constraint_prisms[1] = build(6, prism_edges(), {0, 1, 2, 3, 4});
    c.constraint_prisms[2] = build(6, prism_edges(), {0, 1, 3, 4});
    c.constraint_prisms[3] = build(6, prism_edges(), {0, 1, 4, 5});
    c.weird_prism = build(6, prism_edges(), {6, 7, 8});
    // Moebius ladder on six vertices: rim six-cycle plus three diameters;
    // X is the complement of the rim
    c.constraint_wagner = build(
        6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {0, 3}, {1, 4}, {2, 5}}, {6, 7, 8});
    // prism seen as a six-cycle with chords 02, 35, 14; X = the chords: one
    // matching edge plus the two triangle edges vertex-disjoint from it
    c.wagner_prism = build(
        6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {0, 2}, {3, 5}, {1, 4}}, {6, 7, 8});
    c.special_k4 = make_bond_context(c.constraint_k4.g, {0, 1});
    c.special_prism = make_bond_context(c.weird_prism.g, {0, 1, 2});

    for (const auto& [name, g] : c.obstructions()) {
        if (!is_k_connected(g->g, 3))
            throw std::logic_error("catalog: " + name + " is not 3-connected");
        if (is_constraint_connected(*g))
            throw std::logic_error("catalog: " + name + " has connected X");
    }
    for (const ConstraintGraph* g : {&c.weird_prism, &c.constraint_wagner, &c.wagner_prism}) {
        if (!is_k_connected(g->g, 3) || x_components(*g).size() != 3)
            throw std::logic_error("catalog: bad auxiliary graph");
    }
    if (!is_3connected_along(c.special_k4) || !is_3connected_along(c.special_prism))
        throw std::logic_error("catalog: special pairs fail their bond condition");
    return c;
}

}  // namespace detail

inline const ObstructionCatalog& catalog() {
    static const ObstructionCatalog c = detail::build_catalog();
    return c;
}

// ---------------------------------------------------------------- search

struct SearchLimits {
    size_t max_states = 2'000'000;
};

// Memo tables shared across calls; partition one per worker for parallel
// sweeps.  Keys are exact canonical codes, so hits are never wrong.
struct MinorSearchContext {
    std::unordered_map<std::string, bool> forbidden;  // downset meets the six
    std::unordered_map<std::string, bool> three_cd;   // downset meets {3-connected, X disconnected}
    size_t states = 0;
};

namespace detail {

// Child order fixes certificate shape: deletions before contractions,
// smaller labels first.
inline std::vector<MinorOp> child_ops(const ConstraintGraph& g) {
    std::vector<MinorOp> ops;
    for (const Edge& e : g.g.edges)
        if (!g.in_x(e.label)) ops.push_back(op_delete(e.label));
    for (const Edge& e : g.g.edges) ops.push_back(op_contract(e.label));
    return ops;
}

inline void bump_states(MinorSearchContext& ctx, const SearchLimits& lim) {
    if (++ctx.states > lim.max_states)
        throw ResourceCapError("minor search exceeded state cap of " +
                               std::to_string(lim.max_states));
}

struct SixTargets {
    std::vector<std::string> keys;
    std::vector<std::string> names;

    SixTargets() {
        for (const auto& [name, g] : catalog().obstructions()) {
            keys.push_back(canon_key(*g));
            names.push_back(name);
        }
    }
};

inline const SixTargets& six_targets() {
    static const SixTargets t;
    return t;
}

inline int match_obstruction(const std::string& key) {
    const SixTargets& t = six_targets();
    for (size_t i = 0; i < t.keys.size(); ++i)
        if (t.keys[i] == key) return (int)i;
    return -1;
}

inline bool downset_forbidden(const ConstraintGraph& g, MinorSearchContext& ctx,
                              const SearchLimits& lim) {
    if (g.g.n < 4 || g.g.m() < 6 || (int)g.x.size() < 2) return false;
    std::string key = canon_key(g);
    auto it = ctx.forbidden.find(key);
    if (it != ctx.forbidden.end()) return it->second;
    bump_states(ctx, lim);
    bool found = match_obstruction(key) >= 0;
    if (!found) {
        for (const MinorOp& op : child_ops(g)) {
            if (downset_forbidden(apply_op(g, op), ctx, lim)) {
                found = true;
                break;
            }
        }
    }
    ctx.forbidden[key] = found;
    return found;
}

inline bool downset_three_cd(const ConstraintGraph& g, MinorSearchContext& ctx,
                             const SearchLimits& lim) {
    if (g.g.n < 4 || g.g.m() < 6 || (int)g.x.size() < 2) return false;
    std::string key = canon_key(g);
    auto it = ctx.three_cd.find(key);
    if (it != ctx.three_cd.end()) return it->second;
    bump_states(ctx, lim);
    bool found = is_k_connected(g.g, 3) && !is_constraint_connected(g);
    if (!found) {
        for (const MinorOp& op : child_ops(g)) {
            if (downset_three_cd(apply_op(g, op), ctx, lim)) {
                found = true;
                break;
            }
        }
    }
    ctx.three_cd[key] = found;
    return found;
}

}  // namespace detail

// First obstruction reachable in the constraint-minor downset of g, with a
// replay-validated certificate.  Exhaustive with canonical-form memoization:
// a decision procedure at desk scale.
inline std::optional<std::pair<std::string, MinorCertificate>> find_forbidden_minor(
    const ConstraintGraph& g, MinorSearchContext* ctx = nullptr, SearchLimits lim = {}) {
    MinorSearchContext local;
    MinorSearchContext& c = ctx ? *ctx : local;
    if (!detail::downset_forbidden(g, c, lim)) return std::nullopt;
    MinorCertificate cert;
    ConstraintGraph cur = g;
    while (true) {
        int hit = detail::match_obstruction(canon_key(cur));
        if (hit >= 0) {
            auto obs = catalog().obstructions();
            const auto& [name, target] = obs[hit];
            cert.target = name;
            cert.witness = *is_isomorphic(cur, *target);
            if (!validate_certificate(g, cert, *target))
                throw std::logic_error("find_forbidden_minor: certificate failed replay");
            return std::make_pair(name, cert);
        }
        bool advanced = false;
        for (const MinorOp& op : detail::child_ops(cur)) {
            ConstraintGraph child = apply_op(cur, op);
            if (detail::downset_forbidden(child, c, lim)) {
                cert.ops.push_back(op);
                cur = std::move(child);
                advanced = true;
                break;
            }
        }
        if (!advanced) throw std::logic_error("find_forbidden_minor: lost the trail");
    }
}

// Certificate transforming g into a constraint graph isomorphic to target,
// or nullopt.  Exhaustive search with per-call memoization.
inline std::optional<MinorCertificate> has_constraint_minor(const ConstraintGraph& g,
                                                            const ConstraintGraph& target,
                                                            SearchLimits lim = {},
                                                            const std::string& name = "target") {
    std::string tkey = canon_key(target);
    int tn = target.g.n, tm = target.g.m(), tx = (int)target.x.size();
    std::unordered_map<std::string, bool> memo;
    size_t states = 0;
    std::function<bool(const ConstraintGraph&)> rec = [&](const ConstraintGraph& cur) -> bool {
        if (cur.g.n < tn || cur.g.m() < tm || (int)cur.x.size() < tx) return false;
        std::string key = canon_key(cur);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        if (++states > lim.max_states)
            throw ResourceCapError("has_constraint_minor exceeded state cap");
        bool found = (key == tkey);
        if (!found)
            for (const MinorOp& op : detail::child_ops(cur))
                if (rec(apply_op(cur, op))) {
                    found = true;
                    break;
                }
        memo[key] = found;
        return found;
    };
    if (!rec(g)) return std::nullopt;
    MinorCertificate cert;
    cert.target = name;
    ConstraintGraph cur = g;
    while (canon_key(cur) != tkey) {
        for (const MinorOp& op : detail::child_ops(cur)) {
            ConstraintGraph child = apply_op(cur, op);
            if (rec(child)) {
                cert.ops.push_back(op);
                cur = std::move(child);
                break;
            }
        }
    }
    cert.witness = *is_isomorphic(cur, target);
    if (!validate_certificate(g, cert, target))
        throw std::logic_error("has_constraint_minor: certificate failed replay");
    return cert;
}

// ---------------------------------------------------------------- essential

struct EssentialReport {
    Label edge;
    bool essential;
    std::optional<std::vector<MinorOp>> witness;  // present iff not essential
};

// e (not in X) is essential when neither g/e nor g minus e has a 3-connected
// constraint minor with disconnected X.
inline EssentialReport is_essential(const ConstraintGraph& g, Label e,
                                    MinorSearchContext* ctx = nullptr, SearchLimits lim = {}) {
    if (g.in_x(e)) throw PreconditionError("is_essential: edge is in X");
    if (!is_k_connected(g.g, 3)) throw PreconditionError("is_essential: graph not 3-connected");
    MinorSearchContext local;
    MinorSearchContext& c = ctx ? *ctx : local;

    auto walk_to_3cd = [&](ConstraintGraph cur, std::vector<MinorOp> ops) {
        while (!(is_k_connected(cur.g, 3) && !is_constraint_connected(cur))) {
            for (const MinorOp& op : detail::child_ops(cur)) {
                ConstraintGraph child = apply_op(cur, op);
                if (detail::downset_three_cd(child, c, lim)) {
                    ops.push_back(op);
                    cur = std::move(child);
                    break;
                }
            }
        }
        return ops;
    };

    for (MinorOp first : {op_contract(e), op_delete(e)}) {
        ConstraintGraph child = apply_op(g, first);
        if (detail::downset_three_cd(child, c, lim))
            return {e, false, walk_to_3cd(std::move(child), {first})};
    }
    return {e, true, std::nullopt};
}

// ---------------------------------------------------------------- enumeration

// Fast labeled-graph isomorphism for enumeration dedup (backtracking with
// degree pruning).
inline bool graphs_isomorphic_fast(const SimpleGraph& A, const SimpleGraph& B) {
    if (A.n != B.n || A.m() != B.m()) return false;
    std::vector<int> da = A.degrees(), db = B.degrees();
    {
        auto sa = da, sb = db;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) return false;
    }
    auto adjA = adj_masks(A), adjB = adj_masks(B);
    std::vector<int> order(A.n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return da[a] != da[b] ? da[a] > da[b] : a < b;
    });
    std::vector<int> phi(A.n, -1);
    std::vector<bool> used(B.n, false);
    std::function<bool(int)> go = [&](int idx) -> bool {
        if (idx == A.n) return true;
        int u = order[idx];
        for (int w = 0; w < B.n; ++w) {
            if (used[w] || db[w] != da[u]) continue;
            bool ok = true;
            for (int j = 0; j < idx && ok; ++j) {
                int p = order[j];
                if (((adjA[u] >> p) & 1u) != ((adjB[w] >> phi[p]) & 1u)) ok = false;
            }
            if (!ok) continue;
            phi[u] = w;
            used[w] = true;
            if (go(idx + 1)) return true;
            used[w] = false;
            phi[u] = -1;
        }
        return false;
    };
    return go(0);
}

constexpr int kEnumerateCap = 8;

// All graphs on n vertices up to isomorphism satisfying pred, by edge-subset
// enumeration with isomorphism dedup.  Deterministic discovery order.
inline void enumerate_graphs(int n, const std::function<bool(const SimpleGraph&)>& pred,
                             const std::function<void(const SimpleGraph&)>& yield,
                             int cap = kEnumerateCap) {
    if (n < 1 || n > cap)
        throw ResourceCapError("enumerate_graphs: n=" + std::to_string(n) + " exceeds cap " +
                               std::to_string(cap));
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) pairs.push_back({u, v});
    int np = (int)pairs.size();
    std::unordered_map<std::string, std::vector<SimpleGraph>> buckets;
    for (uint64_t mask = 0; mask < (1ull << np); ++mask) {
        SimpleGraph g;
        g.n = n;
        Label next = 0;
        for (int i = 0; i < np; ++i)
            if (mask >> i & 1) g.edges.push_back({next++, pairs[i].first, pairs[i].second});
        if (!pred(g)) continue;
        auto deg = g.degrees();
        std::sort(deg.begin(), deg.end());
        std::string key((const char*)deg.data(), deg.size() * sizeof(int));
        auto& reps = buckets[key];
        bool known = false;
        for (const SimpleGraph& r : reps)
            if (graphs_isomorphic_fast(g, r)) {
                known = true;
                break;
            }
        if (!known) {
            reps.push_back(g);
            yield(g);
        }
    }
}

inline std::vector<std::vector<int>> automorphisms(const SimpleGraph& g) {
    std::vector<std::vector<int>> auts;
    std::vector<int> perm(g.n);
    std::iota(perm.begin(), perm.end(), 0);
    auto adj = adj_masks(g);
    do {
        bool ok = true;
        for (const Edge& e : g.edges)
            if (!((adj[perm[e.u]] >> perm[e.v]) & 1u)) {
                ok = false;
                break;
            }
        if (ok) auts.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return auts;
}

// ---------------------------------------------------------------- oracle

// All 3-connected constraint graphs on <= n_max vertices with disconnected X
// whose proper constraint minors, when 3-connected, all have connected X.
// This recomputes the obstruction list from nothing but the definitions.
inline std::vector<ConstraintGraph> minimal_obstructions(int n_max,
                                                         MinorSearchContext* ctx = nullptr,
                                                         SearchLimits lim = {}) {
    if (n_max < 1) throw std::invalid_argument("minimal_obstructions: bad n_max");
    if (n_max > 7) throw ResourceCapError("minimal_obstructions: n_max above desk-scale cap 7");
    MinorSearchContext local;
    MinorSearchContext& c = ctx ? *ctx : local;
    std::vector<std::pair<CanonicalForm, ConstraintGraph>> found;
    for (int n = 4; n <= n_max; ++n) {
        enumerate_graphs(
            n, [](const SimpleGraph& g) { return is_k_connected(g, 3); },
            [&](const SimpleGraph& g) {
                auto auts = automorphisms(g);
                int m = g.m();
                // edge image table per automorphism
                std::vector<std::vector<int>> etab;
                for (auto& p : auts) {
                    std::map<std::pair<int, int>, int> idx;
                    for (int i = 0; i < m; ++i) idx[{g.edges[i].u, g.edges[i].v}] = i;
                    std::vector<int> t(m);
                    for (int i = 0; i < m; ++i)
                        t[i] = idx.at(norm_pair(p[g.edges[i].u], p[g.edges[i].v]));
                    etab.push_back(std::move(t));
                }
                for (uint32_t xm = 0; xm < (1u << m); ++xm) {
                    uint32_t best = xm;
                    for (auto& t : etab) {
                        uint32_t im = 0;
                        for (int i = 0; i < m; ++i)
                            if (xm >> i & 1) im |= 1u << t[i];
                        best = std::min(best, im);
                    }
                    if (best != xm) continue;  // one representative per Aut orbit
                    ConstraintGraph cg{g, {}};
                    for (int i = 0; i < m; ++i)
                        if (xm >> i & 1) cg.x.push_back(g.edges[i].label);
                    if (is_constraint_connected(cg)) continue;
                    bool minimal = true;
                    for (const MinorOp& op : detail::child_ops(cg)) {
                        if (detail::downset_three_cd(apply_op(cg, op), c, lim)) {
                            minimal = false;
                            break;
                        }
                    }
                    if (minimal) found.push_back({canonical_form(cg), cg});
                }
            });
    }
    std::sort(found.begin(), found.end(),
              [](const auto& a, const auto& b) { return a.first.code < b.first.code; });
    found.erase(std::unique(found.begin(), found.end(),
                            [](const auto& a, const auto& b) { return a.first == b.first; }),
                found.end());
    std::vector<ConstraintGraph> out;
    for (auto& [cf, cg] : found) out.push_back(cg);
    return out;
}

}  // namespace congraph
