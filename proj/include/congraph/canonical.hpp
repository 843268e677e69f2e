#pragma once

#include <cstdint>
#include <numeric>

#include "congraph/graph.hpp"

// Exact canonical forms for constraint graphs (X-membership treated as an
// edge color) by exhaustive vertex-permutation minimization.  Equal code
// <=> isomorphic as constraint graphs.  Desk scale only: a cap on n is
// enforced rather than silently degrading.

namespace congraph {

struct CanonicalCapError : ResourceCapError {
    using ResourceCapError::ResourceCapError;
};

constexpr int kCanonicalCap = 10;

struct CanonicalForm {
    std::vector<int32_t> code;

    bool operator==(const CanonicalForm& o) const { return code == o.code; }
    bool operator<(const CanonicalForm& o) const { return code < o.code; }

    std::string key() const {
        return std::string((const char*)code.data(), code.size() * sizeof(int32_t));
    }
};

namespace detail {

inline void check_cap(int n, int cap) {
    if (n > cap)
        throw CanonicalCapError("graph too large to canonicalize: n=" + std::to_string(n) +
                                " cap=" + std::to_string(cap));
}

inline std::vector<int32_t> pair_code(const SimpleGraph& g, const std::vector<int>& perm) {
    std::vector<int32_t> code;
    code.reserve(g.edges.size());
    for (const Edge& e : g.edges) {
        auto [a, b] = norm_pair(perm[e.u], perm[e.v]);
        code.push_back((a << 5) | b);
    }
    std::sort(code.begin(), code.end());
    return code;
}

}  // namespace detail

struct GraphCanon {
    std::vector<int32_t> code;            // sorted (u<<5)|v over the canonical labeling
    std::vector<std::vector<int>> perms;  // every perm achieving code (perm[old] = new)
};

inline GraphCanon graph_canonical(const SimpleGraph& g, int cap = kCanonicalCap) {
    detail::check_cap(g.n, cap);
    GraphCanon best;
    std::vector<int> perm(g.n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        std::vector<int32_t> code = detail::pair_code(g, perm);
        if (best.perms.empty() || code < best.code) {
            best.code = std::move(code);
            best.perms.clear();
            best.perms.push_back(perm);
        } else if (code == best.code) {
            best.perms.push_back(perm);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// X-color sequence of the edges under perm, in pair-sorted order.
inline std::vector<int32_t> x_code_under(const ConstraintGraph& cg, const std::vector<int>& perm) {
    std::vector<std::pair<int32_t, int32_t>> items;
    items.reserve(cg.g.edges.size());
    for (const Edge& e : cg.g.edges) {
        auto [a, b] = norm_pair(perm[e.u], perm[e.v]);
        items.push_back({(a << 5) | b, cg.in_x(e.label) ? 1 : 0});
    }
    std::sort(items.begin(), items.end());
    std::vector<int32_t> xbits;
    xbits.reserve(items.size());
    for (auto& [p, x] : items) xbits.push_back(x);
    return xbits;
}

inline std::pair<CanonicalForm, std::vector<int>> canonical_with_witness(const ConstraintGraph& cg,
                                                                         int cap = kCanonicalCap) {
    GraphCanon gc = graph_canonical(cg.g, cap);
    const std::vector<int>* best_perm = nullptr;
    std::vector<int32_t> best_x;
    for (const auto& perm : gc.perms) {
        std::vector<int32_t> xb = x_code_under(cg, perm);
        if (!best_perm || xb < best_x) {
            best_x = std::move(xb);
            best_perm = &perm;
        }
    }
    CanonicalForm cf;
    cf.code.reserve(3 + gc.code.size() + best_x.size());
    cf.code.push_back(cg.g.n);
    cf.code.push_back(cg.g.m());
    cf.code.push_back((int32_t)cg.x.size());
    cf.code.insert(cf.code.end(), gc.code.begin(), gc.code.end());
    cf.code.insert(cf.code.end(), best_x.begin(), best_x.end());
    std::vector<int> perm = best_perm ? *best_perm : std::vector<int>{};
    return {cf, perm};
}

inline CanonicalForm canonical_form(const ConstraintGraph& cg, int cap = kCanonicalCap) {
    return canonical_with_witness(cg, cap).first;
}

inline std::string canon_key(const ConstraintGraph& cg, int cap = kCanonicalCap) {
    return canonical_form(cg, cap).key();
}

// Witnessing vertex bijection a -> b when the canonical codes match.
inline std::optional<std::vector<int>> is_isomorphic(const ConstraintGraph& a,
                                                     const ConstraintGraph& b,
                                                     int cap = kCanonicalCap) {
    if (a.g.n != b.g.n || a.g.m() != b.g.m() || a.x.size() != b.x.size()) return std::nullopt;
    auto [ca, pa] = canonical_with_witness(a, cap);
    auto [cb, pb] = canonical_with_witness(b, cap);
    if (!(ca == cb)) return std::nullopt;
    std::vector<int> inv_b(b.g.n);
    for (int v = 0; v < b.g.n; ++v) inv_b[pb[v]] = v;
    std::vector<int> phi(a.g.n);
    for (int v = 0; v < a.g.n; ++v) phi[v] = inv_b[pa[v]];
    if (!matches_via(a, phi, b)) return std::nullopt;
    return phi;
}

}  // namespace congraph
