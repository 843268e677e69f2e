#pragma once

#include "congraph/canonical.hpp"
#include "congraph/connectivity.hpp"
#include "congraph/obstructions.hpp"

// Reduction of a graph 3-connected along a bond (both sides carrying edges)
// to the special K4 or the special prism by contracting edges outside the
// bond, and the certificate pipeline built on top of it.

namespace congraph {

enum class SpecialKind { SpecialK4, SpecialPrism };

struct SpecialMinor {
    SpecialKind kind;
    std::vector<MinorOp> ops;  // contractions of edges outside d, in order
    BondContext final_context;
    int finalize_op_count = 0;  // trailing ops that belong to the terminal shaping
};

// A side of the bond as its own graph; labels are shared with the parent.
struct SideView {
    SimpleGraph sub;
    std::vector<int> to_parent;
};

inline SideView side_view(const BondContext& b, int s) {
    SideView v;
    std::vector<int> from_parent(b.cg.g.n, -1);
    for (int p = 0; p < b.cg.g.n; ++p)
        if (b.side[p] == s) {
            from_parent[p] = (int)v.to_parent.size();
            v.to_parent.push_back(p);
        }
    v.sub.n = (int)v.to_parent.size();
    for (const Edge& e : b.cg.g.edges)
        if (b.side[e.u] == s && b.side[e.v] == s)
            v.sub.edges.push_back({e.label, from_parent[e.u], from_parent[e.v]});
    for (Edge& e : v.sub.edges)
        if (e.u > e.v) std::swap(e.u, e.v);
    return v;
}

inline BondContext contract_in_context(const BondContext& b, Label l) {
    const Edge& ed = b.cg.g.edge(l);
    if (b.side[ed.u] != b.side[ed.v])
        throw PreconditionError("cannot contract a bond edge");
    BondContext out;
    out.cg = contract(b.cg, l);
    out.side = b.side;
    out.side.erase(out.side.begin() + ed.v);
    return out;
}

namespace detail {

enum class SideShape { SingleEdge, Triangle, TwoConnectedOther, ManyBlocks };

inline SideShape side_shape(const SideView& v) {
    if (v.sub.m() == 1) return SideShape::SingleEdge;
    if (v.sub.n == 3 && v.sub.m() == 3) return SideShape::Triangle;
    if (is_k_connected(v.sub, 2)) return SideShape::TwoConnectedOther;
    return SideShape::ManyBlocks;
}

inline bool context_ok(const BondContext& b) {
    return !b.side_edges(0).empty() && !b.side_edges(1).empty() && is_3connected_along(b);
}

// Track a parent vertex id through the renumbering done by contract().
inline int track_vertex(int v, const Edge& contracted) {
    if (v == contracted.v) v = contracted.u;
    return v > contracted.v ? v - 1 : v;
}

}  // namespace detail

struct ReductionStep {
    BondContext ctx;
    std::vector<MinorOp> ops;
};

// When a side is connected but not 2-connected (and has at least two edges):
// contract that side down to one of its leaf blocks, then collapse leaf
// blocks of the other side that see nothing of the kept block.  The result
// is strictly smaller and still 3-connected along its bond.
inline std::optional<ReductionStep> reduce_leaf_block(const BondContext& b) {
    if (!is_3connected_along(b)) throw PreconditionError("reduce_leaf_block: bad context");
    for (int s = 0; s <= 1; ++s) {
        SideView v = side_view(b, s);
        if (v.sub.m() < 2 || detail::side_shape(v) != detail::SideShape::ManyBlocks) continue;

        BlockTree t = block_tree(v.sub);
        auto leaves = leaf_blocks(t);
        int best = -1;
        for (auto& [bi, cv] : leaves) {
            if (!cv) continue;
            if (best == -1 || t.blocks[bi].front() < t.blocks[best].front()) best = bi;
        }
        if (best == -1) throw std::logic_error("reduce_leaf_block: no attached leaf block");
        std::vector<Label> keep = t.blocks[best];
        auto kept = [&](Label l) { return std::binary_search(keep.begin(), keep.end(), l); };
        int v_attach = -1;
        for (auto& [bi, cv] : leaves)
            if (bi == best) v_attach = v.to_parent[*cv];

        ReductionStep step{b, {}};
        auto contract_one = [&](Label l) {
            const Edge ed = step.ctx.cg.g.edge(l);
            step.ctx = contract_in_context(step.ctx, l);
            step.ops.push_back(op_contract(l));
            v_attach = detail::track_vertex(v_attach, ed);
        };

        // collapse everything of this side outside the kept block
        while (true) {
            Label next = -1;
            for (Label l : step.ctx.side_edges(s))
                if (!kept(l) && (next == -1 || l < next)) next = l;
            if (next == -1) break;
            contract_one(next);
        }

        // kept-block vertices other than the attach vertex
        auto kept_core = [&]() {
            std::vector<char> core(step.ctx.cg.g.n, 0);
            for (Label l : step.ctx.side_edges(s)) {
                const Edge& e = step.ctx.cg.g.edge(l);
                core[e.u] = core[e.v] = 1;
            }
            if (v_attach >= 0 && v_attach < (int)core.size()) core[v_attach] = 0;
            return core;
        };

        // collapse far leaf blocks of the other side
        bool changed = true;
        while (changed) {
            changed = false;
            SideView w = side_view(step.ctx, 1 - s);
            if (w.sub.m() < 1) break;
            BlockTree wt = block_tree(w.sub);
            auto wl = leaf_blocks(wt);
            std::sort(wl.begin(), wl.end(), [&](auto& a, auto& bb) {
                return wt.blocks[a.first].front() < wt.blocks[bb.first].front();
            });
            std::vector<char> core = kept_core();
            for (auto& [bi, cv] : wl) {
                if (!cv) continue;
                int v_prime = w.to_parent[*cv];
                std::vector<char> in_bp(step.ctx.cg.g.n, 0);
                for (Label l : wt.blocks[bi]) {
                    const Edge& e = step.ctx.cg.g.edge(l);
                    in_bp[e.u] = in_bp[e.v] = 1;
                }
                in_bp[v_prime] = 0;
                bool linked = false;
                for (Label l : step.ctx.d()) {
                    const Edge& e = step.ctx.cg.g.edge(l);
                    int ls = step.ctx.side[e.u] == s ? e.u : e.v;
                    int rs = step.ctx.side[e.u] == s ? e.v : e.u;
                    if (core[ls] && in_bp[rs]) {
                        linked = true;
                        break;
                    }
                }
                if (linked) continue;
                std::vector<Label> doomed = wt.blocks[bi];
                while (true) {
                    Label next = -1;
                    for (Label l : step.ctx.side_edges(1 - s))
                        if (std::binary_search(doomed.begin(), doomed.end(), l) &&
                            (next == -1 || l < next))
                            next = l;
                    if (next == -1) break;
                    contract_one(next);
                }
                changed = true;
                break;  // block structure changed, recompute
            }
        }

        if (step.ops.empty()) throw std::logic_error("reduce_leaf_block: made no progress");
        if (!detail::context_ok(step.ctx))
            throw std::logic_error("reduce_leaf_block: produced an invalid context");
        return step;
    }
    return std::nullopt;
}

// When a side is 2-connected but not a triangle (and the other side is
// 2-connected or a single edge): contract one of its contractible edges so
// the context stays 3-connected along the bond.  If no single contraction
// works, some contractible edge vw has all cross edges of this side at v or
// w; collapsing the side onto that edge is then a valid reduction.
inline std::optional<ReductionStep> reduce_2connected_side(const BondContext& b) {
    if (!is_3connected_along(b)) throw PreconditionError("reduce_2connected_side: bad context");
    for (int s = 0; s <= 1; ++s) {
        SideView v = side_view(b, s);
        if (detail::side_shape(v) != detail::SideShape::TwoConnectedOther) continue;
        SideView o = side_view(b, 1 - s);
        auto osh = detail::side_shape(o);
        if (osh == detail::SideShape::ManyBlocks) continue;

        std::vector<Label> cands = contractible_edges(v.sub);
        for (Label l : cands) {
            BondContext c = contract_in_context(b, l);
            if (detail::context_ok(c)) return ReductionStep{std::move(c), {op_contract(l)}};
        }
        for (Label l : cands) {
            const Edge& ed = b.cg.g.edge(l);
            bool pinned = true;
            for (Label dl : b.d()) {
                const Edge& de = b.cg.g.edge(dl);
                int ls = b.side[de.u] == s ? de.u : de.v;
                if (ls != ed.u && ls != ed.v) {
                    pinned = false;
                    break;
                }
            }
            if (!pinned) continue;
            ReductionStep step{b, {}};
            Label keep = l;
            while ((int)step.ctx.side_edges(s).size() > 1) {
                Label next = -1;
                for (Label sl : step.ctx.side_edges(s))
                    if (sl != keep && (next == -1 || sl < next)) next = sl;
                if (next == -1) break;
                step.ctx = contract_in_context(step.ctx, next);
                step.ops.push_back(op_contract(next));
            }
            if (!detail::context_ok(step.ctx))
                throw std::logic_error("reduce_2connected_side: collapse produced bad context");
            return step;
        }
        throw std::logic_error("reduce_2connected_side: exhausted contractible edges");
    }
    return std::nullopt;
}

namespace detail {

inline bool is_special_k4(const BondContext& b) {
    return b.cg.g.n == 4 && b.cg.g.m() == 6 && b.d().size() == 4 &&
           b.side_edges(0).size() == 1 && b.side_edges(1).size() == 1;
}

inline bool is_special_prism(const BondContext& b) {
    if (b.cg.g.n != 6 || b.cg.g.m() != 9) return false;
    auto d = b.d();
    if (d.size() != 3) return false;
    uint32_t seen = 0;
    for (Label l : d) {
        const Edge& e = b.cg.g.edge(l);
        if (seen & ((1u << e.u) | (1u << e.v))) return false;  // not a matching
        seen |= (1u << e.u) | (1u << e.v);
    }
    SideView a = side_view(b, 0), c = side_view(b, 1);
    return side_shape(a) == SideShape::Triangle && side_shape(c) == SideShape::Triangle;
}

}  // namespace detail

// Terminal shaping: each side is a single edge or a triangle.
inline SpecialMinor finalize(const BondContext& b) {
    SideView l = side_view(b, 0), r = side_view(b, 1);
    auto ls = detail::side_shape(l), rs = detail::side_shape(r);
    bool l_edge = ls == detail::SideShape::SingleEdge, l_tri = ls == detail::SideShape::Triangle;
    bool r_edge = rs == detail::SideShape::SingleEdge, r_tri = rs == detail::SideShape::Triangle;
    if (!((l_edge || l_tri) && (r_edge || r_tri)))
        throw PreconditionError("finalize: sides must be single edges or triangles");

    if (l_edge && r_edge) {
        if (!detail::is_special_k4(b))
            throw std::logic_error("finalize: edge/edge context is not the special K4");
        return {SpecialKind::SpecialK4, {}, b, 0};
    }
    if (l_tri && r_tri) {
        if (b.d().size() == 3) {
            if (!detail::is_special_prism(b))
                throw std::logic_error("finalize: three cross edges do not form a matching");
            return {SpecialKind::SpecialPrism, {}, b, 0};
        }
        for (Label el : l.sub.labels()) {
            for (Label er : r.sub.labels()) {
                BondContext c = contract_in_context(contract_in_context(b, el), er);
                if (detail::is_special_k4(c))
                    return {SpecialKind::SpecialK4, {op_contract(el), op_contract(er)}, c, 2};
            }
        }
        throw std::logic_error("finalize: no contraction pair yields the special K4");
    }
    const SideView& tri = l_tri ? l : r;
    for (Label e : tri.sub.labels()) {
        BondContext c = contract_in_context(b, e);
        if (detail::is_special_k4(c)) return {SpecialKind::SpecialK4, {op_contract(e)}, c, 1};
    }
    throw std::logic_error("finalize: edge/triangle context did not reach the special K4");
}

// Loop the two reductions until the terminal shapes, then finalize.  Every
// step strictly shrinks the edge count, so this terminates.
inline SpecialMinor reduce_to_special(const BondContext& b) {
    if (!is_3connected_along(b))
        throw PreconditionError("reduce_to_special: not 3-connected along the bond");
    if (b.side_edges(0).empty() || b.side_edges(1).empty())
        throw PreconditionError("reduce_to_special: both sides must contain edges");
    BondContext cur = b;
    std::vector<MinorOp> ops;
    while (true) {
        SideView l = side_view(cur, 0), r = side_view(cur, 1);
        auto ls = detail::side_shape(l), rs = detail::side_shape(r);
        auto terminal = [](detail::SideShape s) {
            return s == detail::SideShape::SingleEdge || s == detail::SideShape::Triangle;
        };
        if (terminal(ls) && terminal(rs)) {
            SpecialMinor fin = finalize(cur);
            ops.insert(ops.end(), fin.ops.begin(), fin.ops.end());
            return {fin.kind, std::move(ops), fin.final_context, fin.finalize_op_count};
        }
        std::optional<ReductionStep> step = reduce_leaf_block(cur);
        if (!step) step = reduce_2connected_side(cur);
        if (!step) throw std::logic_error("reduce_to_special: no reduction applies");
        ops.insert(ops.end(), step->ops.begin(), step->ops.end());
        cur = std::move(step->ctx);
    }
}

// Replay a special-minor certificate against its source context and check
// the invariants: only non-bond edges contracted, the bond restricts
// correctly, and the final context has the declared special shape.
inline bool validate_special_minor(const BondContext& src, const SpecialMinor& sm) {
    try {
        BondContext cur = src;
        for (const MinorOp& op : sm.ops) {
            if (op.kind != MinorOpKind::Contract) return false;
            const Edge& e = cur.cg.g.edge(op.label);
            if (cur.side[e.u] != cur.side[e.v]) return false;
            cur = contract_in_context(cur, op.label);
        }
        if (!(cur.cg.g == sm.final_context.cg.g)) return false;
        if (!is_3connected_along(cur)) return false;
        return sm.kind == SpecialKind::SpecialK4 ? detail::is_special_k4(cur)
                                                 : detail::is_special_prism(cur);
    } catch (const std::exception&) {
        return false;
    }
}

// ---------------------------------------------------------------- certify

enum class CertStage { Descent, BondReduction, Terminal };

struct CertifyOutcome {
    bool connected;
    std::string name;  // obstruction name when !connected
    MinorCertificate cert;
    std::vector<CertStage> stages;  // one per cert op
};

namespace detail {

// All one-step suppression variants of g after an edge deletion left the
// given degree-2 endpoints: at each degree-2 vertex either incident edge may
// be contracted.  The preferred rule (contract the X edge of a mixed pair,
// else the least label) comes first.
inline void suppress_variants(const ConstraintGraph& g, std::vector<MinorOp> ops,
                              std::vector<std::pair<ConstraintGraph, std::vector<MinorOp>>>& out) {
    if (g.g.n > 3) {
        auto deg = g.g.degrees();
        for (int v = 0; v < g.g.n; ++v) {
            if (deg[v] != 2) continue;
            std::vector<Label> inc;
            for (const Edge& e : g.g.edges)
                if (e.u == v || e.v == v) inc.push_back(e.label);
            Label f = inc[0], h = inc[1];
            Label first, second;
            bool fx = g.in_x(f), hx = g.in_x(h);
            if (fx != hx)
                first = fx ? f : h;
            else
                first = std::min(f, h);
            second = first == f ? h : f;
            for (Label choice : {first, second}) {
                auto ops2 = ops;
                ops2.push_back(op_contract(choice));
                suppress_variants(contract(g, choice), std::move(ops2), out);
            }
            return;
        }
    }
    out.push_back({g, std::move(ops)});
}

}  // namespace detail

// Decide a 3-connected constraint graph: Connected, or an obstruction with a
// replay-validated certificate.  Descend while some one-step reduction keeps
// the graph 3-connected with X still disconnected; the terminal state is the
// constraint wheel, the weird prism, or has exactly two X components with
// every non-X edge inside V(X), where the bond reduction takes over.
inline CertifyOutcome certify(const ConstraintGraph& g) {
    if (!is_k_connected(g.g, 3)) throw PreconditionError("certify: graph not 3-connected");
    if (is_constraint_connected(g)) return {true, "", {}, {}};

    ConstraintGraph cur = g;
    std::vector<MinorOp> ops;
    std::vector<CertStage> stages;
    auto push_ops = [&](const std::vector<MinorOp>& add, CertStage st) {
        for (const MinorOp& op : add) {
            ops.push_back(op);
            stages.push_back(st);
        }
    };

    while (true) {
        std::optional<std::pair<ConstraintGraph, std::vector<MinorOp>>> found;
        for (const Edge& e : cur.g.edges) {
            if (cur.in_x(e.label)) continue;
            ConstraintGraph c = contract(cur, e.label);
            if (is_k_connected(c.g, 3) && !is_constraint_connected(c)) {
                found = {std::move(c), {op_contract(e.label)}};
                break;
            }
            if (cur.g.n == 4 && cur.g.m() == 6) continue;  // deletions below K4 degenerate
            ConstraintGraph del = delete_non_x(cur, e.label);
            std::vector<std::pair<ConstraintGraph, std::vector<MinorOp>>> variants;
            detail::suppress_variants(del, {op_delete(e.label)}, variants);
            for (auto& [vg, vops] : variants) {
                if (is_k_connected(vg.g, 3) && !is_constraint_connected(vg)) {
                    found = {vg, vops};
                    break;
                }
            }
            if (found) break;
        }
        if (!found) break;
        push_ops(found->second, CertStage::Descent);
        cur = std::move(found->first);
    }

    auto finish = [&](const std::string& name) -> CertifyOutcome {
        const ConstraintGraph* target = catalog().named(name);
        auto phi = is_isomorphic(cur, *target);
        if (!phi) throw std::logic_error("certify: terminal state does not match " + name);
        MinorCertificate cert{ops, name, *phi};
        if (!validate_certificate(g, cert, *target))
            throw std::logic_error("certify: certificate failed replay");
        return {false, name, std::move(cert), stages};
    };

    for (const auto& [name, obs] : catalog().obstructions())
        if (is_isomorphic(cur, *obs)) return finish(name);

    if (is_isomorphic(cur, catalog().weird_prism)) {
        Label xe = cur.x.front();
        push_ops({op_contract(xe)}, CertStage::Terminal);
        cur = contract(cur, xe);
        return finish("constraint_wheel");
    }

    auto comps = x_components(cur);
    if (comps.size() != 2)
        throw std::logic_error("certify: irreducible state has " + std::to_string(comps.size()) +
                               " X components and is not a cataloged terminal");
    std::vector<char> in_vx(cur.g.n, 0);
    std::vector<int> left;
    for (Label l : comps[0]) {
        const Edge& e = cur.g.edge(l);
        in_vx[e.u] = in_vx[e.v] = 1;
    }
    for (int v = 0; v < cur.g.n; ++v)
        if (in_vx[v]) left.push_back(v);
    for (Label l : comps[1]) {
        const Edge& e = cur.g.edge(l);
        in_vx[e.u] = in_vx[e.v] = 1;
    }
    for (const Edge& e : cur.g.edges)
        if (!in_vx[e.u] || !in_vx[e.v])
            throw std::logic_error("certify: non-X edge leaves V(X) at an irreducible state");

    BondContext ctx = make_bond_context(cur, left);
    SpecialMinor sm = reduce_to_special(ctx);
    int nb = (int)sm.ops.size() - sm.finalize_op_count;
    push_ops({sm.ops.begin(), sm.ops.begin() + nb}, CertStage::BondReduction);
    push_ops({sm.ops.begin() + nb, sm.ops.end()}, CertStage::Terminal);
    cur = sm.final_context.cg;

    if (sm.kind == SpecialKind::SpecialK4) return finish("constraint_k4");
    for (int i = 0; i < 4; ++i) {
        std::string name = "constraint_prism_" + std::to_string(i + 1);
        if (is_isomorphic(cur, catalog().constraint_prisms[i])) return finish(name);
    }
    throw std::logic_error("certify: special prism terminal matches no constraint prism");
}

}  // namespace congraph
