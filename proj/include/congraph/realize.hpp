#pragma once

#include <set>

#include "congraph/bond.hpp"
#include "congraph/connectivity.hpp"
#include "congraph/obstructions.hpp"

// Realizing graphic constraint matroids: given a representing graph with a
// constraint X, output a graph with the same cycle matroid in which X is
// connected, or a forbidden constraint minor.

namespace congraph {

constexpr Label kVirtualLabelBase = 1'000'000;

// ---------------------------------------------------------------- flips

struct FlipRecord {
    std::pair<int, int> separator;
    std::vector<Label> part;
};

// Reattach `part` with the two separator vertices exchanged.  Every vertex
// covered by both `part` and its complement must be s or t; labels are
// preserved and the cycle matroid does not change.
inline SimpleGraph whitney_flip(const SimpleGraph& g, std::pair<int, int> sep,
                                const std::vector<Label>& part) {
    auto [s, t] = sep;
    if (s == t || s < 0 || t < 0 || s >= g.n || t >= g.n)
        throw std::invalid_argument("whitney_flip: bad separator pair");
    if (part.empty() || (int)part.size() >= g.m())
        throw std::invalid_argument("whitney_flip: part and complement must both be nonempty");
    std::vector<char> in_part_label;
    std::vector<Label> sorted_part = part;
    std::sort(sorted_part.begin(), sorted_part.end());
    auto in_part = [&](Label l) {
        return std::binary_search(sorted_part.begin(), sorted_part.end(), l);
    };
    for (Label l : sorted_part) g.edge(l);
    std::vector<char> part_side(g.n, 0), rest_side(g.n, 0);
    for (const Edge& e : g.edges) {
        (in_part(e.label) ? part_side : rest_side)[e.u] = 1;
        (in_part(e.label) ? part_side : rest_side)[e.v] = 1;
    }
    for (int v = 0; v < g.n; ++v)
        if (v != s && v != t && part_side[v] && rest_side[v])
            throw PreconditionError("whitney_flip: separator does not separate the part");
    SimpleGraph out;
    out.n = g.n;
    for (const Edge& e : g.edges) {
        int u = e.u, v = e.v;
        if (in_part(e.label)) {
            auto swp = [&](int w) { return w == s ? t : (w == t ? s : w); };
            u = swp(u);
            v = swp(v);
        }
        auto [a, b] = norm_pair(u, v);
        out.edges.push_back({e.label, a, b});
    }
    return out;
}

// ---------------------------------------------------------------- circuits

// All circuits (edge sets of simple cycles) by DFS enumeration; exact at
// desk scale, capped for safety.
inline std::set<std::vector<Label>> circuit_family(const SimpleGraph& g,
                                                   size_t cap = 4'000'000) {
    std::set<std::vector<Label>> fam;
    std::vector<std::vector<std::pair<int, Label>>> adj(g.n);
    for (const Edge& e : g.edges) {
        adj[e.u].push_back({e.v, e.label});
        adj[e.v].push_back({e.u, e.label});
    }
    size_t work = 0;
    std::vector<char> used(g.n, 0);
    std::vector<Label> path;
    std::function<void(int, int)> dfs = [&](int base, int u) {
        if (++work > cap) throw ResourceCapError("circuit_family: enumeration cap exceeded");
        for (auto [w, l] : adj[u]) {
            if (w == base && path.size() >= 2) {
                std::vector<Label> cyc = path;
                cyc.push_back(l);
                std::sort(cyc.begin(), cyc.end());
                fam.insert(std::move(cyc));
            }
            if (w <= base || used[w]) continue;
            used[w] = 1;
            path.push_back(l);
            dfs(base, w);
            path.pop_back();
            used[w] = 0;
        }
    };
    for (int base = 0; base < g.n; ++base) dfs(base, base);
    return fam;
}

// True iff the circuit families coincide; the inputs must share one label
// set.
inline bool cycle_matroid_equal(const SimpleGraph& g, const SimpleGraph& h) {
    std::vector<Label> lg = g.labels(), lh = h.labels();
    std::sort(lg.begin(), lg.end());
    std::sort(lh.begin(), lh.end());
    if (lg != lh) throw std::invalid_argument("cycle_matroid_equal: label sets differ");
    return circuit_family(g) == circuit_family(h);
}

// ---------------------------------------------------------------- 2-sum

// Glue two graphs along a virtual edge present in both: identify the virtual
// edge's endpoints pairwise (lower with lower) and delete it.
inline SimpleGraph two_sum_glue(const SimpleGraph& g1, const SimpleGraph& g2, Label virt) {
    const Edge* e1 = g1.find_label(virt);
    const Edge* e2 = g2.find_label(virt);
    if (!e1 || !e2) throw std::invalid_argument("two_sum_glue: virtual edge missing on a side");
    for (const Edge& e : g2.edges)
        if (e.label != virt && g1.find_label(e.label))
            throw std::invalid_argument("two_sum_glue: label sets overlap beyond the virtual edge");
    SimpleGraph out;
    out.n = g1.n;
    std::vector<int> remap(g2.n, -1);
    remap[e2->u] = e1->u;
    remap[e2->v] = e1->v;
    for (int v = 0; v < g2.n; ++v)
        if (remap[v] == -1) remap[v] = out.n++;
    for (const Edge& e : g1.edges)
        if (e.label != virt) out.edges.push_back(e);
    for (const Edge& e : g2.edges) {
        if (e.label == virt) continue;
        auto [a, b] = norm_pair(remap[e.u], remap[e.v]);
        out.edges.push_back({e.label, a, b});
    }
    std::sort(out.edges.begin(), out.edges.end(),
              [](const Edge& a, const Edge& b) { return a.label < b.label; });
    check_valid(ConstraintGraph{out, {}});
    return out;
}

// ---------------------------------------------------------------- realize

struct Realization {
    SimpleGraph result;
    std::vector<FlipRecord> flips_applied;
    bool used_closure_search = false;  // constructive path needed the flip-search net
};

struct RealizeResult {
    std::optional<Realization> realization;
    std::optional<std::pair<std::string, MinorCertificate>> forbidden;

    bool ok() const { return realization.has_value(); }
};

namespace detail {

struct BlockReal {
    SimpleGraph h;
    std::vector<FlipRecord> flips;
    bool used_search = false;
};

// Canonical string of a labeled graph under vertex renaming (labels fixed).
inline std::string labeled_key(const SimpleGraph& g) {
    std::vector<int> perm(g.n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int32_t> best;
    do {
        std::vector<int32_t> code;
        code.reserve(g.edges.size());
        for (const Edge& e : g.edges) {
            auto [a, b] = norm_pair(perm[e.u], perm[e.v]);
            code.push_back((a << 6) | b);
        }
        if (best.empty() || code < best) best = std::move(code);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::string((const char*)best.data(), best.size() * sizeof(int32_t));
}

inline bool x_connected_in(const SimpleGraph& g, const std::vector<Label>& x) {
    ConstraintGraph cg{g, x};
    std::vector<Label> present;
    for (Label l : x)
        if (g.find_label(l)) present.push_back(l);
    cg.x = present;
    return is_constraint_connected(cg);
}

// All single-flip moves of a 2-connected graph: every separating pair,
// every proper nonempty union of its bridges.
inline void for_each_flip(const SimpleGraph& g,
                          const std::function<bool(std::pair<int, int>,
                                                   const std::vector<Label>&)>& visit) {
    for (int u = 0; u < g.n; ++u) {
        for (int v = u + 1; v < g.n; ++v) {
            auto brs = bridges_at(g, u, v);
            int comps = 0;
            for (auto& b : brs)
                if (b.size() >= 2) comps++;
            if (comps < 2) continue;
            int k = (int)brs.size();
            for (uint32_t sub = 1; sub + 1 < (1u << k); ++sub) {
                std::vector<Label> part;
                for (int i = 0; i < k; ++i)
                    if (sub >> i & 1) part.insert(part.end(), brs[i].begin(), brs[i].end());
                std::sort(part.begin(), part.end());
                if (!visit({u, v}, part)) return;
            }
        }
    }
}

// Search the Whitney-flip closure from `start` for a graph connecting `x`.
// Safety net for the rare layouts the constructive recursion misses; the
// closure is tiny at desk scale.
inline std::optional<BlockReal> closure_search(const SimpleGraph& start,
                                               const std::vector<Label>& x,
                                               size_t cap = 200'000) {
    struct Node {
        SimpleGraph g;
        std::vector<FlipRecord> flips;
    };
    std::vector<Node> queue{{start, {}}};
    std::set<std::string> seen{labeled_key(start)};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        Node cur = queue[qi];
        if (x_connected_in(cur.g, x)) return BlockReal{cur.g, cur.flips, true};
        if (seen.size() > cap) throw ResourceCapError("closure_search: cap exceeded");
        for_each_flip(cur.g, [&](std::pair<int, int> sep, const std::vector<Label>& part) {
            SimpleGraph next = whitney_flip(cur.g, sep, part);
            std::string key = labeled_key(next);
            if (seen.insert(key).second) {
                auto flips = cur.flips;
                flips.push_back({sep, part});
                queue.push_back({std::move(next), std::move(flips)});
            }
            return true;
        });
    }
    return std::nullopt;
}

inline std::optional<BlockReal> realize_block(const ConstraintGraph& cg, Label& next_virtual);

// Recursive case: 2-connected, not 3-connected, X disconnected.
inline std::optional<BlockReal> realize_split(const ConstraintGraph& cg, Label& next_virtual) {
    auto seps = two_separations(cg.g);
    if (seps.empty()) throw std::logic_error("realize_split: no 2-separation found");
    auto [s, t] = seps.front().separator;
    auto brs = bridges_at(cg.g, s, t);

    size_t ai = 0;
    while (brs[ai].size() < 2) ai++;
    std::vector<Label> a_edges = brs[ai];
    std::vector<Label> b_edges;
    std::optional<Label> f;  // real st-edge, if any
    for (size_t i = 0; i < brs.size(); ++i) {
        if (i == ai) continue;
        b_edges.insert(b_edges.end(), brs[i].begin(), brs[i].end());
    }
    std::sort(a_edges.begin(), a_edges.end());
    std::sort(b_edges.begin(), b_edges.end());
    for (Label l : b_edges) {
        const Edge& e = cg.g.edge(l);
        if ((e.u == s || e.u == t) && (e.v == s || e.v == t)) f = l;
    }

    // child graph: the side's edges on renumbered vertices with s,t kept,
    // plus a connector edge between them
    auto make_child = [&](const std::vector<Label>& side, std::optional<Label> connector_virt)
        -> std::pair<ConstraintGraph, std::vector<int>> {
        std::vector<int> to_child(cg.g.n, -1);
        int nc = 0;
        to_child[s] = nc++;
        to_child[t] = nc++;
        for (Label l : side) {
            const Edge& e = cg.g.edge(l);
            for (int w : {e.u, e.v})
                if (to_child[w] == -1) to_child[w] = nc++;
        }
        ConstraintGraph child;
        child.g.n = nc;
        for (Label l : side) {
            const Edge& e = cg.g.edge(l);
            auto [a, b] = norm_pair(to_child[e.u], to_child[e.v]);
            child.g.edges.push_back({l, a, b});
        }
        if (connector_virt) child.g.edges.push_back({*connector_virt, 0, 1});
        std::sort(child.g.edges.begin(), child.g.edges.end(),
                  [](const Edge& p, const Edge& q) { return p.label < q.label; });
        for (Label l : cg.x)
            if (std::binary_search(side.begin(), side.end(), l)) child.x.push_back(l);
        return {child, to_child};
    };

    // all-X path between s and t inside one side's real edges
    auto x_path = [&](const std::vector<Label>& side) {
        std::vector<uint32_t> adj(cg.g.n, 0);
        for (Label l : side) {
            if (!cg.in_x(l)) continue;
            const Edge& e = cg.g.edge(l);
            adj[e.u] |= 1u << e.v;
            adj[e.v] |= 1u << e.u;
        }
        uint32_t seen = 1u << s, frontier = seen;
        while (frontier) {
            uint32_t next = 0;
            uint32_t fr = frontier;
            while (fr) {
                int w = __builtin_ctz(fr);
                fr &= fr - 1;
                next |= adj[w];
            }
            next &= ~seen;
            seen |= next;
            frontier = next;
        }
        return (seen >> t) & 1u;
    };

    Label virt = next_virtual++;
    bool path_a = x_path(a_edges), path_b = x_path(b_edges);
    auto [child_a, map_a] = make_child(a_edges, virt);
    auto [child_b, map_b] = make_child(b_edges, f ? std::nullopt : std::optional<Label>(virt));
    Label conn_a = virt;
    Label conn_b = f ? *f : virt;

    bool xa_empty = child_a.x.empty(), xb_empty = child_b.x.empty();
    auto augment = [](ConstraintGraph& c, Label l) {
        if (!c.in_x(l)) {
            c.x.push_back(l);
            std::sort(c.x.begin(), c.x.end());
        }
    };
    if (path_b) augment(child_a, conn_a);
    if (path_a) augment(child_b, conn_b);
    if (!xa_empty && !xb_empty && !path_a && !path_b) {
        augment(child_a, conn_a);
        augment(child_b, conn_b);
    }

    auto ra = realize_block(child_a, next_virtual);
    if (!ra) return std::nullopt;
    auto rb = realize_block(child_b, next_virtual);
    if (!rb) return std::nullopt;

    // glue: identify connector endpoints pairwise, delete the virtual edge
    const Edge ea = ra->h.edge(conn_a);
    const Edge eb = rb->h.edge(conn_b);
    SimpleGraph glued;
    glued.n = ra->h.n;
    std::vector<int> remap(rb->h.n, -1);
    remap[eb.u] = ea.u;
    remap[eb.v] = ea.v;
    for (int v = 0; v < rb->h.n; ++v)
        if (remap[v] == -1) remap[v] = glued.n++;
    for (const Edge& e : ra->h.edges)
        if (e.label != virt) glued.edges.push_back(e);
    for (const Edge& e : rb->h.edges) {
        if (e.label == virt) continue;
        auto [p, q] = norm_pair(remap[e.u], remap[e.v]);
        glued.edges.push_back({e.label, p, q});
    }
    std::sort(glued.edges.begin(), glued.edges.end(),
              [](const Edge& p, const Edge& q) { return p.label < q.label; });

    BlockReal out;
    out.flips = ra->flips;
    out.flips.insert(out.flips.end(), rb->flips.begin(), rb->flips.end());
    out.used_search = ra->used_search || rb->used_search;

    if (x_connected_in(glued, cg.x)) {
        out.h = std::move(glued);
        return out;
    }

    // fix-up: flip subsets of the bridges at the glue separator
    int gs = ea.u, gt = ea.v;
    auto gbrs = bridges_at(glued, gs, gt);
    int k = (int)gbrs.size();
    if (k <= 12) {
        for (uint32_t sub = 1; sub < (1u << k); ++sub) {
            std::vector<Label> part;
            for (int i = 0; i < k; ++i)
                if (sub >> i & 1) part.insert(part.end(), gbrs[i].begin(), gbrs[i].end());
            if (part.empty() || (int)part.size() >= glued.m()) continue;
            SimpleGraph flipped = whitney_flip(glued, {gs, gt}, part);
            if (x_connected_in(flipped, cg.x)) {
                std::sort(part.begin(), part.end());
                out.h = std::move(flipped);
                out.flips.push_back({{gs, gt}, part});
                return out;
            }
        }
    }

    // safety net: search the closure from the assembled candidate
    auto found = closure_search(glued, cg.x);
    if (!found) return std::nullopt;
    out.h = std::move(found->h);
    out.flips.insert(out.flips.end(), found->flips.begin(), found->flips.end());
    out.used_search = true;
    return out;
}

inline std::optional<BlockReal> realize_block(const ConstraintGraph& cg, Label& next_virtual) {
    ConstraintGraph pruned = cg;
    if (is_constraint_connected(pruned)) return BlockReal{cg.g, {}, false};
    if (is_k_connected(cg.g, 3)) return std::nullopt;  // representation is unique
    return realize_split(cg, next_virtual);
}

}  // namespace detail

// Realize (G,X): a graph with the same cycle matroid in which X is connected,
// or a forbidden constraint minor.  Blocks are realized independently and
// reassembled so that all X-carrying blocks share one vertex; 3-connected
// blocks are rigid, 2-separations recurse through 2-sums with Whitney flips
// at the gluing separators.  Every output is re-validated.
inline RealizeResult realize(const ConstraintGraph& cg, MinorSearchContext* mctx = nullptr) {
    for (const Edge& e : cg.g.edges)
        if (e.label >= kVirtualLabelBase)
            throw std::invalid_argument("realize: labels at or above the virtual range");
    if (is_constraint_connected(cg)) return {Realization{cg.g, {}, false}, std::nullopt};

    struct Piece {
        detail::BlockReal real;
        std::vector<Label> x;
    };
    std::vector<Piece> pieces;
    bool failed = false;

    // blocks of every component, realized independently
    std::vector<char> claimed(cg.g.n, 0);
    auto adj = adj_masks(cg.g);
    Label next_virtual = kVirtualLabelBase;
    for (int start = 0; start < cg.g.n && !failed; ++start) {
        if (claimed[start]) continue;
        uint32_t compmask = 1u << start, frontier = compmask;
        while (frontier) {
            uint32_t nx = 0, fr = frontier;
            while (fr) {
                int w = __builtin_ctz(fr);
                fr &= fr - 1;
                nx |= adj[w];
            }
            nx &= ~compmask;
            compmask |= nx;
            frontier = nx;
        }
        std::vector<int> comp_vs;
        for (int v = 0; v < cg.g.n; ++v)
            if (compmask >> v & 1) {
                claimed[v] = 1;
                comp_vs.push_back(v);
            }
        SimpleGraph comp;
        std::vector<int> to_comp(cg.g.n, -1);
        for (int v : comp_vs) to_comp[v] = comp.n++;
        for (const Edge& e : cg.g.edges)
            if (to_comp[e.u] != -1 && to_comp[e.v] != -1)
                comp.edges.push_back({e.label, to_comp[e.u], to_comp[e.v]});
        if (comp.m() == 0) continue;
        for (auto& blk : block_tree(comp).blocks) {
            ConstraintGraph bg;
            std::vector<int> to_blk(comp.n, -1);
            for (Label l : blk) {
                const Edge& e = comp.edge(l);
                for (int w : {e.u, e.v})
                    if (to_blk[w] == -1) to_blk[w] = bg.g.n++;
            }
            for (Label l : blk) {
                const Edge& e = comp.edge(l);
                auto [a, b] = norm_pair(to_blk[e.u], to_blk[e.v]);
                bg.g.edges.push_back({l, a, b});
            }
            std::sort(bg.g.edges.begin(), bg.g.edges.end(),
                      [](const Edge& p, const Edge& q) { return p.label < q.label; });
            for (Label l : cg.x)
                if (std::binary_search(blk.begin(), blk.end(), l)) bg.x.push_back(l);
            auto r = detail::realize_block(bg, next_virtual);
            if (!r) {
                failed = true;
                break;
            }
            pieces.push_back({std::move(*r), bg.x});
        }
    }

    if (failed) {
        auto fb = find_forbidden_minor(cg, mctx);
        if (!fb) throw std::logic_error("realize: a block failed but no obstruction exists");
        return {std::nullopt, std::move(fb)};
    }

    // reassemble: X-carrying pieces share one vertex, the rest attach there too
    Realization out;
    std::vector<int> anchor_of_piece;
    std::vector<int> base_of_piece;
    for (Piece& p : pieces) {
        int anchor = 0;
        if (!p.x.empty()) {
            anchor = p.real.h.n;
            for (const Edge& e : p.real.h.edges)
                if (std::binary_search(p.x.begin(), p.x.end(), e.label))
                    anchor = std::min({anchor, e.u, e.v});
        }
        anchor_of_piece.push_back(anchor);
        base_of_piece.push_back(out.result.n);
        out.result.n += p.real.h.n;
        out.used_closure_search = out.used_closure_search || p.real.used_search;
        for (auto& f : p.real.flips) out.flips_applied.push_back(f);
    }
    if (!pieces.empty()) {
        // identify all anchors with the first piece's anchor
        int shared = base_of_piece[0] + anchor_of_piece[0];
        std::vector<int> remap(out.result.n);
        std::iota(remap.begin(), remap.end(), 0);
        for (size_t i = 1; i < pieces.size(); ++i)
            remap[base_of_piece[i] + anchor_of_piece[i]] = shared;
        std::vector<int> compact(out.result.n, -1);
        int nn = 0;
        for (int v = 0; v < out.result.n; ++v)
            if (remap[v] == v) compact[v] = nn++;
        for (size_t i = 0; i < pieces.size(); ++i) {
            for (const Edge& e : pieces[i].real.h.edges) {
                int u = compact[remap[base_of_piece[i] + e.u]];
                int v = compact[remap[base_of_piece[i] + e.v]];
                auto [a, b] = norm_pair(u, v);
                out.result.edges.push_back({e.label, a, b});
            }
        }
        out.result.n = nn;
        std::sort(out.result.edges.begin(), out.result.edges.end(),
                  [](const Edge& p, const Edge& q) { return p.label < q.label; });
    }

    check_valid(ConstraintGraph{out.result, {}});
    if (!detail::x_connected_in(out.result, cg.x))
        throw std::logic_error("realize: assembled result does not connect X");
    if (!cycle_matroid_equal(cg.g, out.result))
        throw std::logic_error("realize: assembled result changes the cycle matroid");
    return {std::move(out), std::nullopt};
}

}  // namespace congraph
