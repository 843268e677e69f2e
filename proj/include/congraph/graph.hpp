#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Constraint graphs: simple graphs with stable edge labels plus a
// distinguished edge set X.  Values are immutable after construction; every
// operation returns a fresh value, so they are safe to share across threads.

namespace congraph {

using Label = int;

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& what_)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Search-space or size cap exceeded.  Raised instead of returning an
// approximate answer; exactness is the library's contract.
struct ResourceCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Edge {
    Label label;
    int u, v;  // u < v

    bool operator==(const Edge& o) const { return label == o.label && u == o.u && v == o.v; }
};

inline std::pair<int, int> norm_pair(int a, int b) {
    return a < b ? std::pair{a, b} : std::pair{b, a};
}

struct SimpleGraph {
    int n = 0;
    std::vector<Edge> edges;  // sorted by label; labels unique; endpoint pairs unique; no loops

    int m() const { return (int)edges.size(); }

    const Edge* find_label(Label l) const {
        auto it = std::lower_bound(edges.begin(), edges.end(), l,
                                   [](const Edge& e, Label x) { return e.label < x; });
        if (it != edges.end() && it->label == l) return &*it;
        return nullptr;
    }

    const Edge& edge(Label l) const {
        const Edge* e = find_label(l);
        if (!e) throw std::invalid_argument("unknown edge label " + std::to_string(l));
        return *e;
    }

    bool has_pair(int u, int v) const {
        auto [a, b] = norm_pair(u, v);
        for (const Edge& e : edges)
            if (e.u == a && e.v == b) return true;
        return false;
    }

    std::vector<Label> labels() const {
        std::vector<Label> ls;
        ls.reserve(edges.size());
        for (const Edge& e : edges) ls.push_back(e.label);
        return ls;
    }

    std::vector<std::vector<int>> adjacency() const {
        std::vector<std::vector<int>> adj(n);
        for (const Edge& e : edges) {
            adj[e.u].push_back(e.v);
            adj[e.v].push_back(e.u);
        }
        return adj;
    }

    std::vector<int> degrees() const {
        std::vector<int> deg(n, 0);
        for (const Edge& e : edges) {
            deg[e.u]++;
            deg[e.v]++;
        }
        return deg;
    }

    bool operator==(const SimpleGraph& o) const { return n == o.n && edges == o.edges; }
};

// Adjacency as bitmasks; only valid for n <= 32.
inline std::vector<uint32_t> adj_masks(const SimpleGraph& g) {
    std::vector<uint32_t> adj(g.n, 0);
    for (const Edge& e : g.edges) {
        adj[e.u] |= 1u << e.v;
        adj[e.v] |= 1u << e.u;
    }
    return adj;
}

// Connectivity of the subgraph induced by `keep` (a vertex bitmask).
// The empty and one-vertex graphs count as connected.
inline bool connected_mask(const std::vector<uint32_t>& adj, uint32_t keep) {
    if (keep == 0) return true;
    uint32_t start = keep & (~keep + 1);
    uint32_t seen = start;
    uint32_t frontier = start;
    while (frontier) {
        uint32_t next = 0;
        uint32_t f = frontier;
        while (f) {
            int v = __builtin_ctz(f);
            f &= f - 1;
            next |= adj[v] & keep;
        }
        next &= ~seen;
        seen |= next;
        frontier = next;
    }
    return seen == keep;
}

inline bool is_connected(const SimpleGraph& g) {
    if (g.n <= 1) return true;
    return connected_mask(adj_masks(g), (g.n == 32 ? ~0u : (1u << g.n) - 1));
}

struct ConstraintGraph {
    SimpleGraph g;
    std::vector<Label> x;  // sorted; subset of g's labels

    bool in_x(Label l) const { return std::binary_search(x.begin(), x.end(), l); }

    bool operator==(const ConstraintGraph& o) const { return g == o.g && x == o.x; }
};

inline void check_valid(const ConstraintGraph& cg) {
    std::map<std::pair<int, int>, int> seen;
    Label prev = -1;
    for (const Edge& e : cg.g.edges) {
        if (e.label <= prev) throw std::invalid_argument("edges not sorted by unique label");
        prev = e.label;
        if (e.u == e.v) throw std::invalid_argument("loop at vertex " + std::to_string(e.u));
        if (e.u > e.v || e.u < 0 || e.v >= cg.g.n)
            throw std::invalid_argument("bad endpoints on label " + std::to_string(e.label));
        if (seen.count({e.u, e.v}))
            throw std::invalid_argument("parallel pair (" + std::to_string(e.u) + "," +
                                        std::to_string(e.v) + ")");
        seen[{e.u, e.v}] = e.label;
    }
    for (Label l : cg.x)
        if (!cg.g.find_label(l))
            throw std::invalid_argument("X label " + std::to_string(l) + " not an edge");
}

// Labels are assigned 0..m-1 in input order; X is given by indices into the
// edge list.  Rejects loops, duplicate pairs and out-of-range indices.
inline ConstraintGraph build(int n, const std::vector<std::pair<int, int>>& edge_list,
                             const std::vector<int>& x_indices = {}) {
    if (n < 0) throw std::invalid_argument("negative vertex count");
    ConstraintGraph cg;
    cg.g.n = n;
    std::map<std::pair<int, int>, int> seen;
    for (size_t i = 0; i < edge_list.size(); ++i) {
        auto [a, b] = edge_list[i];
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw std::invalid_argument("edge " + std::to_string(i) + " endpoint out of range: (" +
                                        std::to_string(a) + "," + std::to_string(b) + ")");
        if (a == b)
            throw std::invalid_argument("edge " + std::to_string(i) + " is a loop at " +
                                        std::to_string(a));
        auto p = norm_pair(a, b);
        if (seen.count(p))
            throw std::invalid_argument("duplicate edge (" + std::to_string(a) + "," +
                                        std::to_string(b) + ") at index " + std::to_string(i));
        seen[p] = (int)i;
        cg.g.edges.push_back({(Label)i, p.first, p.second});
    }
    for (int idx : x_indices) {
        if (idx < 0 || idx >= (int)edge_list.size())
            throw std::invalid_argument("X index out of range: " + std::to_string(idx));
        cg.x.push_back(idx);
    }
    std::sort(cg.x.begin(), cg.x.end());
    cg.x.erase(std::unique(cg.x.begin(), cg.x.end()), cg.x.end());
    return cg;
}

// Partition of X into connected parts of G[X]; parts ordered by least label.
inline std::vector<std::vector<Label>> x_components(const ConstraintGraph& cg) {
    std::vector<int> parent(cg.g.n);
    for (int i = 0; i < cg.g.n; ++i) parent[i] = i;
    auto find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (Label l : cg.x) {
        const Edge& e = cg.g.edge(l);
        parent[find(e.u)] = find(e.v);
    }
    std::map<int, std::vector<Label>> parts;
    for (Label l : cg.x) parts[find(cg.g.edge(l).u)].push_back(l);
    std::vector<std::vector<Label>> out;
    std::vector<std::pair<Label, std::vector<Label>>> keyed;
    for (auto& [root, ls] : parts) keyed.emplace_back(ls.front(), std::move(ls));
    std::sort(keyed.begin(), keyed.end());
    for (auto& [k, ls] : keyed) out.push_back(std::move(ls));
    return out;
}

// The empty set counts as a connected edge set.
inline bool is_constraint_connected(const ConstraintGraph& cg) {
    return x_components(cg).size() <= 1;
}

// Contract edge e: identify its endpoints, then keep exactly one edge from
// every parallel class.  A class meeting X keeps its least X label; otherwise
// the least label survives.  X of the result is X restricted to survivors.
inline ConstraintGraph contract(const ConstraintGraph& cg, Label e) {
    const Edge& ce = cg.g.edge(e);
    int a = ce.u, b = ce.v;  // merge b into a, drop vertex b
    auto remap = [&](int w) {
        if (w == b) w = a;
        return w > b ? w - 1 : w;
    };
    std::map<std::pair<int, int>, std::vector<Label>> classes;
    for (const Edge& ed : cg.g.edges) {
        if (ed.label == e) continue;
        classes[norm_pair(remap(ed.u), remap(ed.v))].push_back(ed.label);
    }
    ConstraintGraph out;
    out.g.n = cg.g.n - 1;
    for (auto& [pr, ls] : classes) {
        Label keep = -1;
        for (Label l : ls)
            if (cg.in_x(l) && (keep == -1 || l < keep)) keep = l;
        if (keep == -1) keep = *std::min_element(ls.begin(), ls.end());
        out.g.edges.push_back({keep, pr.first, pr.second});
        if (cg.in_x(keep)) out.x.push_back(keep);
    }
    std::sort(out.g.edges.begin(), out.g.edges.end(),
              [](const Edge& p, const Edge& q) { return p.label < q.label; });
    std::sort(out.x.begin(), out.x.end());
    return out;
}

// Delete a non-X edge; isolated vertices are removed and vertices renumbered.
inline ConstraintGraph delete_non_x(const ConstraintGraph& cg, Label e) {
    if (cg.in_x(e))
        throw PreconditionError("cannot delete X edge " + std::to_string(e));
    cg.g.edge(e);  // reject unknown labels
    ConstraintGraph out;
    std::vector<int> deg(cg.g.n, 0);
    for (const Edge& ed : cg.g.edges) {
        if (ed.label == e) continue;
        deg[ed.u]++;
        deg[ed.v]++;
    }
    std::vector<int> remap(cg.g.n, -1);
    int next = 0;
    for (int v = 0; v < cg.g.n; ++v)
        if (deg[v] > 0) remap[v] = next++;
    if (next == 0) next = 0;  // all vertices isolated: empty graph
    out.g.n = next;
    for (const Edge& ed : cg.g.edges) {
        if (ed.label == e) continue;
        out.g.edges.push_back({ed.label, remap[ed.u], remap[ed.v]});
    }
    out.x = cg.x;
    return out;
}

enum class MinorOpKind { Contract, DeleteNonX };

struct MinorOp {
    MinorOpKind kind;
    Label label;

    bool operator==(const MinorOp& o) const { return kind == o.kind && label == o.label; }
};

inline MinorOp op_contract(Label l) { return {MinorOpKind::Contract, l}; }
inline MinorOp op_delete(Label l) { return {MinorOpKind::DeleteNonX, l}; }

inline ConstraintGraph apply_op(const ConstraintGraph& cg, const MinorOp& op) {
    if (op.kind == MinorOpKind::Contract) return contract(cg, op.label);
    return delete_non_x(cg, op.label);
}

inline ConstraintGraph replay(const ConstraintGraph& cg, const std::vector<MinorOp>& ops) {
    ConstraintGraph cur = cg;
    for (const MinorOp& op : ops) cur = apply_op(cur, op);
    return cur;
}

// Replayable operation sequence ending in a cataloged obstruction, plus an
// isomorphism witness: witness[v] is the target vertex for vertex v of the
// replayed result.
struct MinorCertificate {
    std::vector<MinorOp> ops;
    std::string target;
    std::vector<int> witness;
};

// Exact structural equality of `a` mapped through `phi` with `b`: phi is a
// vertex bijection and edge sets (with X flags) must coincide.  Labels are
// not compared.
inline bool matches_via(const ConstraintGraph& a, const std::vector<int>& phi,
                        const ConstraintGraph& b) {
    if (a.g.n != b.g.n || (int)phi.size() != a.g.n) return false;
    if (a.g.m() != b.g.m() || a.x.size() != b.x.size()) return false;
    std::vector<int> inv(b.g.n, -1);
    for (int v = 0; v < a.g.n; ++v) {
        if (phi[v] < 0 || phi[v] >= b.g.n || inv[phi[v]] != -1) return false;
        inv[phi[v]] = v;
    }
    std::map<std::pair<int, int>, bool> bx;
    for (const Edge& e : b.g.edges) bx[{e.u, e.v}] = b.in_x(e.label);
    for (const Edge& e : a.g.edges) {
        auto p = norm_pair(phi[e.u], phi[e.v]);
        auto it = bx.find(p);
        if (it == bx.end() || it->second != a.in_x(e.label)) return false;
    }
    return true;
}

inline bool validate_certificate(const ConstraintGraph& source, const MinorCertificate& cert,
                                 const ConstraintGraph& target) {
    try {
        ConstraintGraph r = replay(source, cert.ops);
        return matches_via(r, cert.witness, target);
    } catch (const std::exception&) {
        return false;
    }
}

inline std::string describe(const ConstraintGraph& cg) {
    std::ostringstream os;
    os << "n=" << cg.g.n << " edges[";
    for (const Edge& e : cg.g.edges)
        os << " " << e.label << ":(" << e.u << "," << e.v << (cg.in_x(e.label) ? ")*" : ")");
    os << " ]";
    return os.str();
}

}  // namespace congraph
