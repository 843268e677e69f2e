#pragma once

#include <array>
#include <functional>

#include "congraph/graph.hpp"

namespace congraph {

// Vertex k-connectivity by brute force over removal sets; K_{k+1} counts as
// k-connected (so K4 is 3-connected).
inline bool is_k_connected(const SimpleGraph& g, int k) {
    if (k < 1 || k > 3) throw std::invalid_argument("is_k_connected: k must be 1, 2 or 3");
    if (g.n < k + 1) return false;
    auto adj = adj_masks(g);
    uint32_t full = (g.n >= 32) ? ~0u : (1u << g.n) - 1;
    if (!connected_mask(adj, full)) return false;
    if (k >= 2) {
        for (int v = 0; v < g.n; ++v)
            if (!connected_mask(adj, full & ~(1u << v))) return false;
    }
    if (k >= 3) {
        for (int u = 0; u < g.n; ++u)
            for (int v = u + 1; v < g.n; ++v)
                if (!connected_mask(adj, full & ~(1u << u) & ~(1u << v))) return false;
    }
    return true;
}

// Nonseparable: connected with no cutvertex.  A single edge and a triangle
// both qualify; used for contractibility where the matroid view is the
// right one.
inline bool is_nonseparable(const SimpleGraph& g) {
    if (g.n == 0) return false;
    if (g.n == 1) return true;
    auto adj = adj_masks(g);
    uint32_t full = (1u << g.n) - 1;
    if (!connected_mask(adj, full)) return false;
    if (g.n == 2) return g.m() >= 1;
    for (int v = 0; v < g.n; ++v)
        if (!connected_mask(adj, full & ~(1u << v))) return false;
    return true;
}

struct BlockTree {
    std::vector<std::vector<Label>> blocks;       // edge sets, each sorted by label
    std::vector<int> cutvertices;                 // sorted
    std::vector<std::pair<int, int>> incidence;   // (block index, cutvertex id)
};

namespace detail {

struct BlockDfs {
    const std::vector<std::vector<std::pair<int, Label>>>& adj;
    std::vector<int> disc, low;
    std::vector<Label> stack;
    std::vector<std::vector<Label>> blocks;
    std::vector<bool> cut;
    int timer = 0;

    explicit BlockDfs(const std::vector<std::vector<std::pair<int, Label>>>& a)
        : adj(a), disc(a.size(), 0), low(a.size(), 0), cut(a.size(), false) {}

    void run(int u, int parent) {
        disc[u] = low[u] = ++timer;
        int children = 0;
        for (auto [w, l] : adj[u]) {
            if (w == parent) continue;
            if (disc[w] == 0) {
                children++;
                stack.push_back(l);
                run(w, u);
                low[u] = std::min(low[u], low[w]);
                if (low[w] >= disc[u]) {
                    if (parent != -1 || children > 1) cut[u] = true;
                    std::vector<Label> blk;
                    while (true) {
                        Label top = stack.back();
                        stack.pop_back();
                        blk.push_back(top);
                        if (top == l) break;
                    }
                    std::sort(blk.begin(), blk.end());
                    blocks.push_back(std::move(blk));
                }
            } else if (disc[w] < disc[u]) {
                stack.push_back(l);
                low[u] = std::min(low[u], disc[w]);
            }
        }
    }
};

}  // namespace detail

inline BlockTree block_tree(const SimpleGraph& g) {
    if (g.n == 0 || !is_connected(g))
        throw PreconditionError("block_tree: input must be connected and nonempty");
    std::vector<std::vector<std::pair<int, Label>>> adj(g.n);
    for (const Edge& e : g.edges) {
        adj[e.u].push_back({e.v, e.label});
        adj[e.v].push_back({e.u, e.label});
    }
    detail::BlockDfs dfs(adj);
    dfs.run(0, -1);
    BlockTree t;
    t.blocks = std::move(dfs.blocks);
    std::sort(t.blocks.begin(), t.blocks.end());
    for (int v = 0; v < g.n; ++v)
        if (dfs.cut[v]) t.cutvertices.push_back(v);
    for (int bi = 0; bi < (int)t.blocks.size(); ++bi) {
        uint32_t verts = 0;
        for (Label l : t.blocks[bi]) {
            const Edge& e = g.edge(l);
            verts |= (1u << e.u) | (1u << e.v);
        }
        for (int cv : t.cutvertices)
            if (verts & (1u << cv)) t.incidence.push_back({bi, cv});
    }
    return t;
}

// Leaf blocks paired with their attaching cutvertex; a single-block tree
// yields that block with no attaching vertex.
inline std::vector<std::pair<int, std::optional<int>>> leaf_blocks(const BlockTree& t) {
    std::vector<std::pair<int, std::optional<int>>> out;
    for (int bi = 0; bi < (int)t.blocks.size(); ++bi) {
        std::vector<int> cvs;
        for (auto& [b, c] : t.incidence)
            if (b == bi) cvs.push_back(c);
        if (cvs.empty())
            out.push_back({bi, std::nullopt});
        else if (cvs.size() == 1)
            out.push_back({bi, cvs.front()});
    }
    return out;
}

// Suppress the degree-2 vertices left by deleting an edge: from each serial
// pair contract one edge.  A pair mixing X and non-X contracts the X edge
// (the non-X edge survives); otherwise the least label is contracted.
// `removed_endpoints` are the endpoints the deleted edge had.
struct SuppressResult {
    ConstraintGraph g;
    std::vector<MinorOp> ops;
};

inline SuppressResult serial_suppress(const ConstraintGraph& cg,
                                      std::pair<int, int> removed_endpoints) {
    auto deg0 = cg.g.degrees();
    std::vector<std::pair<Label, Label>> classes;  // (doomed, fallback) per serial pair
    for (int v = 0; v < cg.g.n; ++v) {
        if (deg0[v] != 2) continue;
        if (v != removed_endpoints.first && v != removed_endpoints.second)
            throw PreconditionError("serial_suppress: degree-2 vertex " + std::to_string(v) +
                                    " is not an endvertex of the removed edge");
        std::vector<Label> inc;
        for (const Edge& e : cg.g.edges)
            if (e.u == v || e.v == v) inc.push_back(e.label);
        Label f = inc[0], h = inc[1];
        bool fx = cg.in_x(f), hx = cg.in_x(h);
        Label doomed = (fx != hx) ? (fx ? f : h) : std::min(f, h);
        classes.push_back({doomed, doomed == f ? h : f});
    }
    SuppressResult res{cg, {}};
    for (auto [doomed, other] : classes) {
        Label pick = res.g.g.find_label(doomed) ? doomed
                     : res.g.g.find_label(other) ? other
                                                 : -1;
        if (pick == -1) continue;
        res.g = contract(res.g, pick);
        res.ops.push_back(op_contract(pick));
    }
    return res;
}

// One Bixby reduction at a non-X edge of a 3-connected graph: contract if the
// contraction stays 3-connected, otherwise delete and suppress (3-connected
// by Bixby's Lemma).  K4 is excluded.
struct BixbyStep {
    bool contracted;
    ConstraintGraph result;
    std::vector<MinorOp> ops;
};

inline BixbyStep bixby_step(const ConstraintGraph& cg, Label e) {
    if (cg.in_x(e)) throw PreconditionError("bixby_step: edge is in X");
    if (!is_k_connected(cg.g, 3)) throw PreconditionError("bixby_step: graph not 3-connected");
    if (cg.g.n == 4 && cg.g.m() == 6) throw PreconditionError("bixby_step: input is K4");
    ConstraintGraph c = contract(cg, e);
    if (is_k_connected(c.g, 3)) return {true, std::move(c), {op_contract(e)}};
    const Edge& ed = cg.g.edge(e);
    ConstraintGraph del = delete_non_x(cg, e);
    SuppressResult sup = serial_suppress(del, {ed.u, ed.v});
    if (!is_k_connected(sup.g.g, 3))
        throw std::logic_error("bixby_step: suppressed deletion is not 3-connected");
    std::vector<MinorOp> ops{op_delete(e)};
    ops.insert(ops.end(), sup.ops.begin(), sup.ops.end());
    return {false, std::move(sup.g), std::move(ops)};
}

// Bridges of the vertex pair {u,v}: one edge set per component of g-u-v plus
// the uv edge itself when present.  Ordered by least edge label.
inline std::vector<std::vector<Label>> bridges_at(const SimpleGraph& g, int u, int v) {
    auto adj = adj_masks(g);
    uint32_t full = (1u << g.n) - 1;
    uint32_t rest = full & ~(1u << u) & ~(1u << v);
    std::vector<int> comp(g.n, -1);
    int nc = 0;
    for (int s = 0; s < g.n; ++s) {
        if (!(rest & (1u << s)) || comp[s] != -1) continue;
        std::vector<int> bfs{s};
        comp[s] = nc;
        while (!bfs.empty()) {
            int w = bfs.back();
            bfs.pop_back();
            uint32_t nb = adj[w] & rest;
            while (nb) {
                int z = __builtin_ctz(nb);
                nb &= nb - 1;
                if (comp[z] == -1) {
                    comp[z] = nc;
                    bfs.push_back(z);
                }
            }
        }
        nc++;
    }
    std::vector<std::vector<Label>> out(nc);
    std::optional<Label> uv_edge;
    for (const Edge& e : g.edges) {
        bool eu = (e.u == u || e.u == v), ev = (e.v == u || e.v == v);
        if (eu && ev) {
            uv_edge = e.label;
            continue;
        }
        int c = eu ? comp[e.v] : comp[e.u];
        out[c].push_back(e.label);
    }
    if (uv_edge) out.push_back({*uv_edge});
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const std::vector<Label>& b) { return b.empty(); }),
              out.end());
    std::sort(out.begin(), out.end(),
              [](const std::vector<Label>& a, const std::vector<Label>& b) {
                  return a.front() < b.front();
              });
    return out;
}

// One canonical non-trivial 2-separation per separating vertex pair: the
// bridge with the least edge label against the rest.
struct TwoSeparation {
    std::vector<Label> a, b;
    std::pair<int, int> separator;
};

inline std::vector<TwoSeparation> two_separations(const SimpleGraph& g) {
    if (!is_k_connected(g, 2)) throw PreconditionError("two_separations: graph not 2-connected");
    std::vector<TwoSeparation> out;
    for (int u = 0; u < g.n; ++u) {
        for (int v = u + 1; v < g.n; ++v) {
            auto brs = bridges_at(g, u, v);
            int components = 0;
            for (auto& br : brs)
                if (br.size() >= 2) components++;  // non-uv bridges have >= 2 edges
            if (components < 2) continue;
            TwoSeparation sep;
            sep.separator = {u, v};
            size_t first = 0;
            while (brs[first].size() < 2) first++;
            sep.a = brs[first];
            for (size_t i = 0; i < brs.size(); ++i)
                if (i != first) sep.b.insert(sep.b.end(), brs[i].begin(), brs[i].end());
            std::sort(sep.a.begin(), sep.a.end());
            std::sort(sep.b.begin(), sep.b.end());
            out.push_back(std::move(sep));
        }
    }
    return out;
}

// A graph with a distinguished bond d: both vertex sides induce connected
// subgraphs, d is exactly the set of cross edges.  X rides along so the
// reduction pipeline can keep its parallel-class preference.
struct BondContext {
    ConstraintGraph cg;
    std::vector<char> side;  // per vertex: 0 = left, 1 = right

    std::vector<Label> d() const {
        std::vector<Label> out;
        for (const Edge& e : cg.g.edges)
            if (side[e.u] != side[e.v]) out.push_back(e.label);
        return out;
    }
    std::vector<Label> side_edges(int s) const {
        std::vector<Label> out;
        for (const Edge& e : cg.g.edges)
            if (side[e.u] == s && side[e.v] == s) out.push_back(e.label);
        return out;
    }
    std::vector<int> side_vertices(int s) const {
        std::vector<int> out;
        for (int v = 0; v < cg.g.n; ++v)
            if (side[v] == s) out.push_back(v);
        return out;
    }
    BondContext swapped() const {
        BondContext b{cg, side};
        for (char& c : b.side) c = 1 - c;
        return b;
    }
};

inline BondContext make_bond_context(const ConstraintGraph& cg,
                                     const std::vector<int>& left_vertices) {
    BondContext b;
    b.cg = cg;
    b.side.assign(cg.g.n, 1);
    for (int v : left_vertices) {
        if (v < 0 || v >= cg.g.n) throw std::invalid_argument("bond: vertex out of range");
        b.side[v] = 0;
    }
    uint32_t lm = 0, rm = 0;
    for (int v = 0; v < cg.g.n; ++v) (b.side[v] == 0 ? lm : rm) |= 1u << v;
    if (lm == 0 || rm == 0) throw PreconditionError("bond: both sides must be nonempty");
    auto adj = adj_masks(cg.g);
    if (!connected_mask(adj, lm) || !connected_mask(adj, rm))
        throw PreconditionError("bond: a side is not connected, d is not a bond");
    return b;
}

inline BondContext make_bond_context(const SimpleGraph& g, const std::vector<int>& left_vertices) {
    return make_bond_context(ConstraintGraph{g, {}}, left_vertices);
}

// 2-connected, and no pair with one vertex from each side of d separates the
// graph.  Pairs inside a single side are allowed to separate.
inline bool is_3connected_along(const BondContext& b) {
    const SimpleGraph& g = b.cg.g;
    if (!is_k_connected(g, 2)) return false;
    auto adj = adj_masks(g);
    uint32_t full = (1u << g.n) - 1;
    for (int x = 0; x < g.n; ++x)
        for (int y = 0; y < g.n; ++y)
            if (b.side[x] == 0 && b.side[y] == 1)
                if (!connected_mask(adj, full & ~(1u << x) & ~(1u << y))) return false;
    return true;
}

// e is contractible when g/e (simplified) is nonseparable; for graphs on
// >= 4 vertices this is exactly 2-connectivity of the contraction.
inline std::vector<Label> contractible_edges(const SimpleGraph& g) {
    if (!is_k_connected(g, 2)) throw PreconditionError("contractible_edges: not 2-connected");
    std::vector<Label> out;
    ConstraintGraph cg{g, {}};
    for (const Edge& e : g.edges)
        if (is_nonseparable(contract(cg, e.label).g)) out.push_back(e.label);
    return out;
}

// Four contractible edges, the first two of which share no endvertex.
struct FourContractible {
    std::array<Label, 4> edges;
};

inline FourContractible four_contractible(const SimpleGraph& g) {
    if (g.n == 3 && g.m() == 3)
        throw PreconditionError("four_contractible: input is a triangle");
    std::vector<Label> cs = contractible_edges(g);
    for (size_t i = 0; i < cs.size(); ++i) {
        const Edge& ei = g.edge(cs[i]);
        for (size_t j = i + 1; j < cs.size(); ++j) {
            const Edge& ej = g.edge(cs[j]);
            if (ei.u == ej.u || ei.u == ej.v || ei.v == ej.u || ei.v == ej.v) continue;
            FourContractible fc{};
            fc.edges[0] = cs[i];
            fc.edges[1] = cs[j];
            int k = 2;
            for (Label l : cs) {
                if (l == cs[i] || l == cs[j]) continue;
                fc.edges[k++] = l;
                if (k == 4) return fc;
            }
        }
    }
    throw std::logic_error("four_contractible: no disjoint contractible pair found");
}

}  // namespace congraph
