#pragma once

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "congraph/bond.hpp"
#include "congraph/graph.hpp"
#include "congraph/realize.hpp"

// File formats.  Text, one graph per file:
//   line 1: "n m"
//   then m lines "u v x" with x in {0,1} marking X-membership
// with labels assigned by line order.  JSON mirror:
//   {"n": int, "edges": [[u,v], ...], "X": [labels]}

namespace congraph {

constexpr int kSchemaVersion = 1;

inline ConstraintGraph parse_text(std::istream& in) {
    std::string line;
    int lineno = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            lineno++;
            if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
        }
        lineno++;
        return false;
    };
    if (!next_line()) throw ParseError(lineno, "expected header 'n m'");
    std::istringstream hs(line);
    long long n, m;
    if (!(hs >> n >> m) || n < 0 || m < 0)
        throw ParseError(lineno, "bad header, expected 'n m'");
    std::string junk;
    if (hs >> junk) throw ParseError(lineno, "trailing tokens after header");
    std::vector<std::pair<int, int>> edges;
    std::vector<int> xs;
    for (long long i = 0; i < m; ++i) {
        if (!next_line())
            throw ParseError(lineno, "expected edge line " + std::to_string(i + 1) + " of " +
                                         std::to_string(m));
        std::istringstream es(line);
        long long u, v, x;
        if (!(es >> u >> v >> x) || (x != 0 && x != 1))
            throw ParseError(lineno, "expected 'u v x' with x in {0,1}");
        if (es >> junk) throw ParseError(lineno, "trailing tokens after edge");
        edges.push_back({(int)u, (int)v});
        if (x) xs.push_back((int)i);
    }
    try {
        return build((int)n, edges, xs);
    } catch (const std::invalid_argument& e) {
        throw ParseError(lineno, e.what());
    }
}

inline std::string to_text(const ConstraintGraph& cg) {
    std::ostringstream os;
    os << cg.g.n << " " << cg.g.m() << "\n";
    for (const Edge& e : cg.g.edges)
        os << e.u << " " << e.v << " " << (cg.in_x(e.label) ? 1 : 0) << "\n";
    return os.str();
}

inline nlohmann::json graph_to_json(const ConstraintGraph& cg) {
    nlohmann::json j;
    j["n"] = cg.g.n;
    j["edges"] = nlohmann::json::array();
    for (const Edge& e : cg.g.edges) j["edges"].push_back({e.u, e.v});
    j["X"] = cg.x;
    return j;
}

inline ConstraintGraph graph_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
        throw ParseError(1, "JSON graph needs fields 'n' and 'edges'");
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw ParseError(1, "edge entries must be pairs");
        edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    }
    std::vector<int> xs;
    if (j.contains("X"))
        for (const auto& x : j.at("X")) xs.push_back(x.get<int>());
    try {
        return build(j.at("n").get<int>(), edges, xs);
    } catch (const std::invalid_argument& e) {
        throw ParseError(1, e.what());
    }
}

// Sniff the format: JSON when the first non-space byte is '{'.
inline ConstraintGraph parse_graph(std::istream& in) {
    int c = in.peek();
    while (c != EOF && std::isspace(c)) {
        in.get();
        c = in.peek();
    }
    if (c == '{') {
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(1, std::string("JSON parse error: ") + e.what());
        }
        return graph_from_json(j);
    }
    return parse_text(in);
}

inline ConstraintGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open " + path);
    return parse_graph(in);
}

inline const char* op_name(MinorOpKind k) {
    return k == MinorOpKind::Contract ? "contract" : "delete";
}

inline const char* stage_name(CertStage s) {
    switch (s) {
        case CertStage::Descent: return "descent";
        case CertStage::BondReduction: return "bond-reduction";
        default: return "terminal";
    }
}

inline nlohmann::json certificate_to_json(const MinorCertificate& cert,
                                          const std::vector<CertStage>* stages = nullptr) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "certificate";
    j["target"] = cert.target;
    j["ops"] = nlohmann::json::array();
    for (size_t i = 0; i < cert.ops.size(); ++i) {
        nlohmann::json op;
        op["op"] = op_name(cert.ops[i].kind);
        op["label"] = cert.ops[i].label;
        if (stages) op["stage"] = stage_name((*stages)[i]);
        j["ops"].push_back(op);
    }
    j["witness"] = cert.witness;
    return j;
}

inline MinorCertificate certificate_from_json(const nlohmann::json& j) {
    MinorCertificate cert;
    cert.target = j.at("target").get<std::string>();
    for (const auto& op : j.at("ops")) {
        std::string k = op.at("op").get<std::string>();
        if (k != "contract" && k != "delete") throw ParseError(1, "bad op kind " + k);
        cert.ops.push_back(
            {k == "contract" ? MinorOpKind::Contract : MinorOpKind::DeleteNonX,
             op.at("label").get<int>()});
    }
    for (const auto& w : j.at("witness")) cert.witness.push_back(w.get<int>());
    return cert;
}

inline nlohmann::json realization_to_json(const Realization& r, const ConstraintGraph& input) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "realization";
    j["graph"] = graph_to_json(ConstraintGraph{r.result, input.x});
    j["flips"] = nlohmann::json::array();
    for (const FlipRecord& f : r.flips_applied) {
        nlohmann::json fj;
        fj["separator"] = {f.separator.first, f.separator.second};
        fj["part"] = f.part;
        j["flips"].push_back(fj);
    }
    j["used_closure_search"] = r.used_closure_search;
    return j;
}

}  // namespace congraph
