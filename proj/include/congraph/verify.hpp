#pragma once

#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

#include "congraph/io.hpp"

// Exhaustive sweeps behind the `verify` command and the acceptance suite.
// Instances fan out to workers (one memo context each); aggregation is
// order-insensitive, so reports do not depend on the worker count.

namespace congraph {

struct RunReport {
    std::string command;
    long instances = 0;
    struct Item {
        std::string property;
        bool pass;
        std::string detail;
    };
    std::vector<Item> items;
    double wall_seconds = 0;
    std::vector<std::string> failures;  // reproducer files

    bool ok() const {
        for (const Item& i : items)
            if (!i.pass) return false;
        return true;
    }
};

namespace detail {

struct Budget {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double cap_seconds = 0;  // 0 = unlimited

    void check() const {
        if (cap_seconds <= 0) return;
        double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (el > cap_seconds)
            throw ResourceCapError("verification exceeded the time cap of " +
                                   std::to_string(cap_seconds) + "s");
    }
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

template <typename T, typename F>
void parallel_over(const std::vector<T>& items, int jobs, F f) {
    if (jobs < 1) jobs = 1;
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(jobs);
    for (int w = 0; w < jobs; ++w) {
        pool.emplace_back([&, w] {
            try {
                while (true) {
                    size_t i = next.fetch_add(1);
                    if (i >= items.size()) break;
                    f(items[i], w);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// Deterministic parallel enumeration: chunk the edge-subset space, dedup
// locally, then merge by exact canonical code.
inline std::vector<SimpleGraph> enumerate_parallel(
    int n, const std::function<bool(const SimpleGraph&)>& pred, int jobs, const Budget& budget) {
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) pairs.push_back({u, v});
    int np = (int)pairs.size();
    uint64_t total = 1ull << np;
    if (jobs < 1) jobs = 1;
    std::vector<std::vector<SimpleGraph>> local((size_t)jobs);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors((size_t)jobs);
    for (int w = 0; w < jobs; ++w) {
        pool.emplace_back([&, w] {
            try {
                std::unordered_map<std::string, std::vector<SimpleGraph>> buckets;
                for (uint64_t mask = w; mask < total; mask += jobs) {
                    if ((mask & 0xfff) == 0) budget.check();
                    SimpleGraph g;
                    g.n = n;
                    Label next = 0;
                    for (int i = 0; i < np; ++i)
                        if (mask >> i & 1)
                            g.edges.push_back({next++, pairs[i].first, pairs[i].second});
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
                        local[w].push_back(std::move(g));
                    }
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<std::pair<std::string, SimpleGraph>> keyed;
    for (auto& ls : local)
        for (auto& g : ls) {
            GraphCanon gc = graph_canonical(g);
            std::string key = std::to_string(g.n) + ":" +
                              std::string((const char*)gc.code.data(),
                                          gc.code.size() * sizeof(int32_t));
            keyed.push_back({std::move(key), std::move(g)});
        }
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<SimpleGraph> out;
    std::string prev;
    for (auto& [k, g] : keyed) {
        if (!out.empty() && k == prev) continue;
        prev = k;
        out.push_back(std::move(g));
    }
    return out;
}

inline std::mutex& reproducer_mutex() {
    static std::mutex m;
    return m;
}

inline std::string write_reproducer(const std::string& tag, const ConstraintGraph& cg,
                                    std::vector<std::string>& sink) {
    std::lock_guard<std::mutex> lock(reproducer_mutex());
    std::string path = "congraph_failure_" + tag + "_" + std::to_string(sink.size()) + ".txt";
    std::ofstream out(path);
    out << to_text(cg);
    sink.push_back(path);
    return path;
}

}  // namespace detail

// ---------------------------------------------------------------- sweeps

// `verify obstructions N`: recompute the minimal obstructions from scratch
// and compare them with the frozen catalog.
inline RunReport verify_obstructions(int n_max, int /*jobs*/, double cap_seconds = 0) {
    detail::Budget budget;
    budget.cap_seconds = cap_seconds;
    RunReport rep;
    rep.command = "verify obstructions " + std::to_string(n_max);
    MinorSearchContext ctx;
    auto mins = minimal_obstructions(n_max, &ctx);
    budget.check();
    rep.instances = (long)mins.size();
    std::vector<std::pair<std::string, const ConstraintGraph*>> expect;
    for (const auto& [name, g] : catalog().obstructions())
        if (g->g.n <= n_max) expect.push_back({name, g});
    rep.items.push_back({"minimal obstruction count = " + std::to_string(expect.size()),
                         mins.size() == expect.size(),
                         "found " + std::to_string(mins.size())});
    std::vector<bool> used(expect.size(), false);
    bool matched = true;
    std::string unmatched;
    for (const ConstraintGraph& m : mins) {
        bool hit = false;
        for (size_t i = 0; i < expect.size(); ++i) {
            if (used[i]) continue;
            if (is_isomorphic(m, *expect[i].second)) {
                used[i] = true;
                hit = true;
                break;
            }
        }
        if (!hit) {
            matched = false;
            unmatched = describe(m);
            detail::write_reproducer("obstructions", m, rep.failures);
        }
    }
    for (size_t i = 0; i < expect.size(); ++i)
        if (!used[i]) matched = false;
    rep.items.push_back({"results match the frozen catalog one-to-one", matched, unmatched});
    rep.wall_seconds = budget.elapsed();
    return rep;
}

// `verify theorem2 N`: over every 3-connected graph on <= N vertices and
// every constraint (one representative per automorphism orbit), constraint
// connectedness, the forbidden-minor search and certify must agree.
inline RunReport verify_theorem2(int n_max, int jobs, double cap_seconds = 0) {
    detail::Budget budget;
    budget.cap_seconds = cap_seconds;
    RunReport rep;
    rep.command = "verify theorem2 " + std::to_string(n_max);
    std::vector<SimpleGraph> graphs;
    for (int n = 4; n <= n_max; ++n) {
        auto part = detail::enumerate_parallel(
            n, [](const SimpleGraph& g) { return is_k_connected(g, 3); }, jobs, budget);
        graphs.insert(graphs.end(), part.begin(), part.end());
    }
    // per-graph automorphism edge tables, then X ranges chunked to workers
    std::vector<std::vector<std::vector<int>>> etabs(graphs.size());
    for (size_t gi = 0; gi < graphs.size(); ++gi) {
        const SimpleGraph& g = graphs[gi];
        int m = g.m();
        std::map<std::pair<int, int>, int> idx;
        for (int i = 0; i < m; ++i) idx[{g.edges[i].u, g.edges[i].v}] = i;
        for (auto& p : automorphisms(g)) {
            std::vector<int> t(m);
            for (int i = 0; i < m; ++i)
                t[i] = idx.at(norm_pair(p[g.edges[i].u], p[g.edges[i].v]));
            etabs[gi].push_back(std::move(t));
        }
    }
    struct Chunk {
        size_t gi;
        uint32_t begin, end;
    };
    std::vector<Chunk> chunks;
    for (size_t gi = 0; gi < graphs.size(); ++gi) {
        uint32_t total = 1u << graphs[gi].m();
        for (uint32_t b = 0; b < total; b += 1024)
            chunks.push_back({gi, b, std::min(total, b + 1024)});
    }
    std::atomic<long> instances{0};
    std::atomic<bool> ok{true};
    std::mutex fail_mutex;
    std::string first_fail;
    std::vector<MinorSearchContext> ctxs((size_t)std::max(jobs, 1));
    detail::parallel_over(chunks, jobs, [&](const Chunk& chunk, int w) {
        const SimpleGraph& g = graphs[chunk.gi];
        const auto& etab = etabs[chunk.gi];
        int m = g.m();
        for (uint32_t xm = chunk.begin; xm < chunk.end; ++xm) {
            if ((xm & 0x3f) == 0) budget.check();
            uint32_t best = xm;
            for (auto& t : etab) {
                uint32_t im = 0;
                for (int i = 0; i < m; ++i)
                    if (xm >> i & 1) im |= 1u << t[i];
                best = std::min(best, im);
            }
            if (best != xm) continue;
            ConstraintGraph cg{g, {}};
            for (int i = 0; i < m; ++i)
                if (xm >> i & 1) cg.x.push_back(g.edges[i].label);
            instances++;
            bool a, b, c;
            try {
                a = is_constraint_connected(cg);
                b = !find_forbidden_minor(cg, &ctxs[w]).has_value();
                c = certify(cg).connected;
            } catch (const ResourceCapError&) {
                throw;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                ok = false;
                if (first_fail.empty()) first_fail = e.what();
                detail::write_reproducer("theorem2", cg, rep.failures);
                continue;
            }
            if (!(a == b && b == c)) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                ok = false;
                if (first_fail.empty())
                    first_fail = "disagreement on " + describe(cg) + ": connected=" +
                                 std::to_string(a) + " search=" + std::to_string(b) +
                                 " certify=" + std::to_string(c);
                detail::write_reproducer("theorem2", cg, rep.failures);
            }
        }
    });
    rep.instances = instances.load();
    rep.items.push_back(
        {"connectedness <=> no forbidden minor <=> certify Connected", ok.load(), first_fail});
    rep.wall_seconds = budget.elapsed();
    return rep;
}

// `verify lemma45 N`: every 2-connected non-triangle graph on <= N vertices
// has four contractible edges, two of which share no endvertex.
inline RunReport verify_lemma45(int n_max, int jobs, double cap_seconds = 0) {
    detail::Budget budget;
    budget.cap_seconds = cap_seconds;
    RunReport rep;
    rep.command = "verify lemma45 " + std::to_string(n_max);
    std::vector<SimpleGraph> graphs;
    for (int n = 4; n <= n_max; ++n) {
        auto part = detail::enumerate_parallel(
            n,
            [](const SimpleGraph& g) {
                return is_k_connected(g, 2) && !(g.n == 3 && g.m() == 3);
            },
            jobs, budget);
        graphs.insert(graphs.end(), part.begin(), part.end());
    }
    std::atomic<bool> ok{true};
    std::mutex fail_mutex;
    std::string first_fail;
    detail::parallel_over(graphs, jobs, [&](const SimpleGraph& g, int) {
        budget.check();
        try {
            FourContractible fc = four_contractible(g);
            std::set<Label> distinct(fc.edges.begin(), fc.edges.end());
            if (distinct.size() != 4) throw std::logic_error("edges not distinct");
            const Edge& a = g.edge(fc.edges[0]);
            const Edge& b = g.edge(fc.edges[1]);
            if (a.u == b.u || a.u == b.v || a.v == b.u || a.v == b.v)
                throw std::logic_error("first pair shares an endvertex");
            for (Label l : fc.edges) {
                ConstraintGraph t{g, {}};
                if (!is_nonseparable(contract(t, l).g))
                    throw std::logic_error("returned edge is not contractible");
            }
        } catch (const ResourceCapError&) {
            throw;
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(fail_mutex);
            ok = false;
            if (first_fail.empty()) first_fail = e.what();
            detail::write_reproducer("lemma45", ConstraintGraph{g, {}}, rep.failures);
        }
    });
    rep.instances = (long)graphs.size();
    rep.items.push_back(
        {"four contractible edges with a disjoint pair exist", ok.load(), first_fail});
    rep.wall_seconds = budget.elapsed();
    return rep;
}

// `verify lemma42 N`: every graph 3-connected along a bond with edges on
// both sides, on <= N vertices, reduces to a validated special K4 or
// special prism.
inline RunReport verify_lemma42(int n_max, int jobs, double cap_seconds = 0) {
    detail::Budget budget;
    budget.cap_seconds = cap_seconds;
    RunReport rep;
    rep.command = "verify lemma42 " + std::to_string(n_max);
    std::vector<SimpleGraph> graphs;
    for (int n = 4; n <= n_max; ++n) {
        auto part = detail::enumerate_parallel(
            n, [](const SimpleGraph& g) { return is_k_connected(g, 2); }, jobs, budget);
        graphs.insert(graphs.end(), part.begin(), part.end());
    }
    std::atomic<long> instances{0};
    std::atomic<bool> ok{true};
    std::mutex fail_mutex;
    std::string first_fail;
    detail::parallel_over(graphs, jobs, [&](const SimpleGraph& g, int) {
        ConstraintGraph cg{g, {}};
        for (uint32_t lm = 1; lm < (1u << g.n); ++lm) {
            if (!(lm & 1)) continue;  // sides are symmetric: keep vertex 0 on the left
            if ((lm & 0x3f) == 1) budget.check();
            std::vector<int> left;
            for (int v = 0; v < g.n; ++v)
                if (lm >> v & 1) left.push_back(v);
            if ((int)left.size() == g.n) continue;
            BondContext b;
            try {
                b = make_bond_context(cg, left);
            } catch (const std::exception&) {
                continue;
            }
            if (b.side_edges(0).empty() || b.side_edges(1).empty()) continue;
            if (!is_3connected_along(b)) continue;
            instances++;
            try {
                SpecialMinor sm = reduce_to_special(b);
                if (!validate_special_minor(b, sm))
                    throw std::logic_error("special minor failed validation");
            } catch (const ResourceCapError&) {
                throw;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                ok = false;
                if (first_fail.empty())
                    first_fail = std::string(e.what()) + " on left mask " + std::to_string(lm) +
                                 " of " + describe(cg);
                detail::write_reproducer("lemma42", cg, rep.failures);
            }
        }
    });
    rep.instances = instances.load();
    rep.items.push_back(
        {"reduce_to_special returns a validated special K4 or prism", ok.load(), first_fail});
    rep.wall_seconds = budget.elapsed();
    return rep;
}

// `verify realizer N`: over every 2-connected graph on <= N vertices and
// every X: realize agrees with the Whitney-flip-closure oracle, and every
// realization passes the circuit and connectedness checks.
inline RunReport verify_realizer(int n_max, int jobs, double cap_seconds = 0) {
    detail::Budget budget;
    budget.cap_seconds = cap_seconds;
    RunReport rep;
    rep.command = "verify realizer " + std::to_string(n_max);
    std::vector<SimpleGraph> graphs;
    for (int n = 3; n <= n_max; ++n) {
        auto part = detail::enumerate_parallel(
            n, [](const SimpleGraph& g) { return is_k_connected(g, 2); }, jobs, budget);
        graphs.insert(graphs.end(), part.begin(), part.end());
    }
    // closure oracle per graph, then X ranges chunked to workers
    std::vector<std::vector<SimpleGraph>> closures(graphs.size());
    detail::parallel_over(
        [&] {
            std::vector<size_t> idx(graphs.size());
            std::iota(idx.begin(), idx.end(), (size_t)0);
            return idx;
        }(),
        jobs, [&](size_t gi, int) {
            const SimpleGraph& g = graphs[gi];
            std::vector<SimpleGraph> closure{g};
            std::set<std::string> seen{detail::labeled_key(g)};
            for (size_t qi = 0; qi < closure.size(); ++qi) {
                budget.check();
                SimpleGraph cur = closure[qi];
                detail::for_each_flip(
                    cur, [&](std::pair<int, int> sep, const std::vector<Label>& part) {
                        SimpleGraph next = whitney_flip(cur, sep, part);
                        if (seen.insert(detail::labeled_key(next)).second)
                            closure.push_back(std::move(next));
                        return true;
                    });
            }
            closures[gi] = std::move(closure);
        });
    struct Chunk {
        size_t gi;
        uint32_t begin, end;
    };
    std::vector<Chunk> chunks;
    for (size_t gi = 0; gi < graphs.size(); ++gi) {
        uint32_t total = 1u << graphs[gi].m();
        for (uint32_t b = 0; b < total; b += 512)
            chunks.push_back({gi, b, std::min(total, b + 512)});
    }
    std::atomic<long> instances{0};
    std::atomic<bool> ok{true};
    std::mutex fail_mutex;
    std::string first_fail;
    std::vector<MinorSearchContext> ctxs((size_t)std::max(jobs, 1));
    detail::parallel_over(chunks, jobs, [&](const Chunk& chunk, int w) {
        const SimpleGraph& g = graphs[chunk.gi];
        const auto& closure = closures[chunk.gi];
        int m = g.m();
        for (uint32_t xm = chunk.begin; xm < chunk.end; ++xm) {
            if ((xm & 0x3f) == 0) budget.check();
            ConstraintGraph cg{g, {}};
            for (int i = 0; i < m; ++i)
                if (xm >> i & 1) cg.x.push_back(g.edges[i].label);
            instances++;
            bool want = false;
            for (const SimpleGraph& h : closure)
                if (detail::x_connected_in(h, cg.x)) {
                    want = true;
                    break;
                }
            try {
                RealizeResult r = realize(cg, &ctxs[w]);
                if (r.ok() != want) throw std::logic_error("oracle disagreement");
                if (r.ok()) {
                    if (!cycle_matroid_equal(cg.g, r.realization->result))
                        throw std::logic_error("realization changes the cycle matroid");
                    if (!is_constraint_connected(ConstraintGraph{r.realization->result, cg.x}))
                        throw std::logic_error("realization leaves X disconnected");
                } else {
                    const ConstraintGraph* t = catalog().named(r.forbidden->first);
                    if (!t || !validate_certificate(cg, r.forbidden->second, *t))
                        throw std::logic_error("forbidden certificate failed replay");
                }
            } catch (const ResourceCapError&) {
                throw;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                ok = false;
                if (first_fail.empty())
                    first_fail = std::string(e.what()) + " on " + describe(cg);
                detail::write_reproducer("realizer", cg, rep.failures);
            }
        }
    });
    rep.instances = instances.load();
    rep.items.push_back(
        {"realize agrees with the flip-closure oracle and validates", ok.load(), first_fail});
    rep.wall_seconds = budget.elapsed();
    return rep;
}

// `verify closure N`: constraint connectedness is preserved by every legal
// minor operation, exhaustively over all labeled graphs on <= N vertices.
inline RunReport verify_closure(int n_max, int jobs, double cap_seconds = 0) {
    detail::Budget budget;
    budget.cap_seconds = cap_seconds;
    RunReport rep;
    rep.command = "verify closure " + std::to_string(n_max);
    struct Work {
        int n;
        uint64_t mask;
    };
    std::vector<Work> work;
    for (int n = 2; n <= n_max; ++n) {
        int np = n * (n - 1) / 2;
        for (uint64_t mask = 0; mask < (1ull << np); ++mask) work.push_back({n, mask});
    }
    std::atomic<long> instances{0};
    std::atomic<bool> ok{true};
    std::mutex fail_mutex;
    std::string first_fail;
    detail::parallel_over(work, jobs, [&](const Work& item, int) {
        budget.check();
        std::vector<std::pair<int, int>> pairs;
        for (int u = 0; u < item.n; ++u)
            for (int v = u + 1; v < item.n; ++v) pairs.push_back({u, v});
        SimpleGraph g;
        g.n = item.n;
        Label next = 0;
        for (size_t i = 0; i < pairs.size(); ++i)
            if (item.mask >> i & 1) g.edges.push_back({next++, pairs[i].first, pairs[i].second});
        int m = g.m();
        for (uint32_t xm = 0; xm < (1u << m); ++xm) {
            ConstraintGraph cg{g, {}};
            for (int i = 0; i < m; ++i)
                if (xm >> i & 1) cg.x.push_back(g.edges[i].label);
            if (!is_constraint_connected(cg)) continue;
            instances++;
            for (const Edge& e : g.edges) {
                bool good = is_constraint_connected(contract(cg, e.label));
                if (good && !cg.in_x(e.label))
                    good = is_constraint_connected(delete_non_x(cg, e.label));
                if (!good) {
                    std::lock_guard<std::mutex> lock(fail_mutex);
                    ok = false;
                    if (first_fail.empty())
                        first_fail = "closure broken at edge " + std::to_string(e.label) +
                                     " of " + describe(cg);
                    detail::write_reproducer("closure", cg, rep.failures);
                }
            }
        }
    });
    rep.instances = instances.load();
    rep.items.push_back({"minor operations preserve constraint connectedness", ok.load(),
                         first_fail});
    rep.wall_seconds = budget.elapsed();
    return rep;
}

inline std::string report_to_text(const RunReport& rep) {
    std::ostringstream os;
    os << rep.command << "\n";
    for (const auto& item : rep.items)
        os << (item.pass ? "PASS" : "FAIL") << "  " << item.property
           << (item.detail.empty() ? "" : "  [" + item.detail + "]") << "\n";
    os << "instances: " << rep.instances << "  wall: " << rep.wall_seconds << "s\n";
    for (const auto& f : rep.failures) os << "reproducer: " << f << "\n";
    return os.str();
}

inline nlohmann::json report_to_json(const RunReport& rep) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "report";
    j["command"] = rep.command;
    j["instances"] = rep.instances;
    j["wall_seconds"] = rep.wall_seconds;
    j["items"] = nlohmann::json::array();
    for (const auto& item : rep.items)
        j["items"].push_back({{"property", item.property},
                              {"pass", item.pass},
                              {"detail", item.detail}});
    j["failures"] = rep.failures;
    return j;
}

}  // namespace congraph
