// congraph: decide constraint connectedness, certify obstructions, realize
// graphic constraint matroids, and run the exhaustive verification sweeps.
//
// Exit codes: 0 positive answer, 1 negative answer with certificate,
// 2 input error, 3 precondition error, 4 resource cap exceeded.

#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "congraph/verify.hpp"

using namespace congraph;
using nlohmann::json;

namespace {

int run_check(const std::string& path, const std::string& format) {
    ConstraintGraph cg = load_graph(path);
    auto parts = x_components(cg);
    bool connected = parts.size() <= 1;
    if (format == "json") {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["kind"] = "check";
        j["connected"] = connected;
        j["components"] = parts;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << parts.size() << " component" << (parts.size() == 1 ? "" : "s") << "\n";
        for (auto& p : parts) {
            std::cout << " ";
            for (Label l : p) std::cout << " " << l;
            std::cout << "\n";
        }
        std::cout << (connected ? "constraint connected" : "not constraint connected") << "\n";
    }
    return connected ? 0 : 1;
}

int run_certify(const std::string& path, const std::string& format) {
    ConstraintGraph cg = load_graph(path);
    if (!is_k_connected(cg.g, 3)) {
        std::cerr << "input is not 3-connected; `congraph realize` handles general inputs\n";
        return 3;
    }
    CertifyOutcome out = certify(cg);
    if (out.connected) {
        if (format == "json") {
            json j;
            j["schema_version"] = kSchemaVersion;
            j["kind"] = "certificate";
            j["outcome"] = "connected";
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "connected\n";
        }
        return 0;
    }
    const ConstraintGraph* target = catalog().named(out.name);
    if (!target || !validate_certificate(cg, out.cert, *target)) {
        std::cerr << "internal error: certificate failed its replay validation\n";
        return 70;
    }
    if (format == "json") {
        json j = certificate_to_json(out.cert, &out.stages);
        j["outcome"] = "forbidden";
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "forbidden minor: " << out.name << "\n";
        for (size_t i = 0; i < out.cert.ops.size(); ++i)
            std::cout << "  " << op_name(out.cert.ops[i].kind) << " " << out.cert.ops[i].label
                      << "  (" << stage_name(out.stages[i]) << ")\n";
        std::cout << "  witness:";
        for (int w : out.cert.witness) std::cout << " " << w;
        std::cout << "\n";
    }
    return 1;
}

int run_realize(const std::string& path, const std::string& format) {
    ConstraintGraph cg = load_graph(path);
    RealizeResult r = realize(cg);
    if (r.ok()) {
        const Realization& real = *r.realization;
        if (!cycle_matroid_equal(cg.g, real.result) ||
            !is_constraint_connected(ConstraintGraph{real.result, cg.x})) {
            std::cerr << "internal error: realization failed validation\n";
            return 70;
        }
        if (format == "json") {
            std::cout << realization_to_json(real, cg).dump(2) << "\n";
        } else {
            std::cout << "realization:\n"
                      << to_text(ConstraintGraph{real.result, cg.x});
            for (const FlipRecord& f : real.flips_applied) {
                std::cout << "flip at {" << f.separator.first << "," << f.separator.second
                          << "} part";
                for (Label l : f.part) std::cout << " " << l;
                std::cout << "\n";
            }
        }
        return 0;
    }
    const auto& [name, cert] = *r.forbidden;
    const ConstraintGraph* target = catalog().named(name);
    if (!target || !validate_certificate(cg, cert, *target)) {
        std::cerr << "internal error: certificate failed its replay validation\n";
        return 70;
    }
    if (format == "json") {
        json j = certificate_to_json(cert);
        j["outcome"] = "forbidden";
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "forbidden minor: " << name << "\n";
        for (const MinorOp& op : cert.ops)
            std::cout << "  " << op_name(op.kind) << " " << op.label << "\n";
        std::cout << "  witness:";
        for (int w : cert.witness) std::cout << " " << w;
        std::cout << "\n";
    }
    return 1;
}

int run_verify(const std::string& which, int n_max, int jobs, double cap,
               const std::string& format) {
    RunReport rep;
    if (which == "obstructions") {
        rep = verify_obstructions(n_max, jobs, cap);
    } else if (which == "theorem2") {
        if (n_max > 6) throw ResourceCapError("theorem2 sweep capped at n_max=6");
        rep = verify_theorem2(n_max, jobs, cap);
    } else if (which == "lemma45") {
        if (n_max > 7) throw ResourceCapError("lemma45 sweep capped at n_max=7");
        rep = verify_lemma45(n_max, jobs, cap);
    } else if (which == "lemma42") {
        if (n_max > 6) throw ResourceCapError("lemma42 sweep capped at n_max=6");
        rep = verify_lemma42(n_max, jobs, cap);
    } else if (which == "realizer") {
        if (n_max > 6) throw ResourceCapError("realizer sweep capped at n_max=6");
        rep = verify_realizer(n_max, jobs, cap);
    } else if (which == "closure") {
        if (n_max > 5) throw ResourceCapError("closure sweep capped at n_max=5");
        rep = verify_closure(n_max, jobs, cap);
    } else {
        std::cerr << "unknown verify mode: " << which
                  << " (expected obstructions|theorem2|lemma45|lemma42|realizer|closure)\n";
        return 2;
    }
    if (format == "json")
        std::cout << report_to_json(rep).dump(2) << "\n";
    else
        std::cout << report_to_text(rep);
    return rep.ok() ? 0 : 1;
}

int run_catalog(const std::string& name, const std::string& format) {
    const ObstructionCatalog& c = catalog();
    if (name.empty()) {
        for (const auto& [n, g] : c.all_named())
            std::cout << n << "  (n=" << g->g.n << ", m=" << g->g.m() << ", |X|=" << g->x.size()
                      << ")\n";
        return 0;
    }
    const ConstraintGraph* g = c.named(name);
    if (!g) {
        std::cerr << "unknown catalog entry: " << name << "\n";
        return 2;
    }
    if (format == "json")
        std::cout << graph_to_json(*g).dump(2) << "\n";
    else
        std::cout << to_text(*g);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"constraint graphs: connectedness, obstructions, realization"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "text";
    int jobs = (int)std::thread::hardware_concurrency();
    if (jobs < 1) jobs = 1;
    double cap = 0;
    bool seed_free = false;
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--jobs", jobs, "worker count for sweeps");
    app.add_option("--cap", cap, "wall-clock cap in seconds for sweeps (0 = none)");
    app.add_flag("--seed-free", seed_free,
                 "assert that no randomness is involved (always true; all algorithms are "
                 "deterministic)");

    std::string path, which, name;
    int n_max = 6;

    CLI::App* check = app.add_subcommand("check", "decide constraint connectedness of a file");
    check->add_option("file", path)->required();

    CLI::App* certify = app.add_subcommand(
        "certify", "Connected or a forbidden-minor certificate (3-connected inputs)");
    certify->add_option("file", path)->required();

    CLI::App* realize =
        app.add_subcommand("realize", "realization with connected X, or a certificate");
    realize->add_option("file", path)->required();

    CLI::App* verify = app.add_subcommand("verify", "run an exhaustive verification sweep");
    verify->add_option("which", which, "obstructions|theorem2|lemma45|lemma42|realizer|closure")
        ->required();
    verify->add_option("n_max", n_max, "vertex bound")->required();

    CLI::App* cat = app.add_subcommand("catalog", "list or export the named graphs");
    cat->add_option("name", name, "catalog entry (empty: list all)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(check)) return run_check(path, format);
        if (app.got_subcommand(certify)) return run_certify(path, format);
        if (app.got_subcommand(realize)) return run_realize(path, format);
        if (app.got_subcommand(verify)) return run_verify(which, n_max, jobs, cap, format);
        if (app.got_subcommand(cat)) return run_catalog(name, format);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition error: " << e.what() << "\n";
        return 3;
    } catch (const ResourceCapError& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 70;
    }
    return 2;
}
