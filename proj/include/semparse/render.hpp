// Output formats: interpretation JSON, DOT graphs, one-line text, and the
// explanation-trace JSON tree.
#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "semparse/compat.hpp"
#include "semparse/parser.hpp"

namespace semparse {

inline nlohmann::json interpretation_to_json(const Lexicon& lex,
                                             const std::vector<AttributeId>& tokens,
                                             const Interpretation& interp) {
    nlohmann::json j;
    j["tokens"] = nlohmann::json::array();
    for (AttributeId t : tokens) j["tokens"].push_back(lex.name(t));
    j["edges"] = nlohmann::json::array();
    for (const Edge& e : interp.edges) {
        j["edges"].push_back({{"head", e.head},
                              {"case", lex.name(e.role)},
                              {"dependent", e.dependent},
                              {"score", e.score}});
    }
    j["total_score"] = interp.total_score;
    j["exact"] = interp.exact;
    return j;
}

// Re-scores a serialized interpretation against the lexicon; used to check
// that emitted JSON round-trips to the same total.
inline double rescore_json(const Lexicon& lex, const nlohmann::json& j, double gamma) {
    std::vector<AttributeId> tokens;
    for (const auto& name : j.at("tokens")) tokens.push_back(lex.attribute(name.get<std::string>()));
    double total = 0.0;
    ScoreChart chart;
    for (const auto& edge : j.at("edges")) {
        int head = edge.at("head").get<int>();
        int dep = edge.at("dependent").get<int>();
        auto role = lex.find_case(edge.at("case").get<std::string>());
        if (!role) throw ParserError("unknown case in interpretation JSON");
        total += distance_weight(head, dep, gamma) *
                 pair_score(lex, tokens[head], *role, tokens[dep], &chart);
    }
    return total;
}

inline std::string interpretation_to_dot(const Lexicon& lex,
                                         const std::vector<AttributeId>& tokens,
                                         const Interpretation& interp) {
    std::ostringstream out;
    out << "digraph interpretation {\n";
    out << "  rankdir=LR;\n  node [shape=box];\n";
    for (std::size_t i = 0; i < tokens.size(); ++i)
        out << "  n" << i << " [label=\"" << lex.name(tokens[i]) << "\"];\n";
    for (const Edge& e : interp.edges)
        out << "  n" << e.head << " -> n" << e.dependent << " [label=\"" << lex.name(e.role)
            << " (" << e.score << ")\"];\n";
    out << "}\n";
    return out.str();
}

inline std::string interpretation_to_text(const Lexicon& lex,
                                          const std::vector<AttributeId>& tokens,
                                          const Interpretation& interp) {
    if (interp.edges.empty()) return "(no dependencies)";
    std::ostringstream out;
    bool first = true;
    for (const Edge& e : interp.edges) {
        if (!first) out << "; ";
        first = false;
        out << lex.name(tokens[e.head]) << " —" << lex.name(e.role) << "→ "
            << lex.name(tokens[e.dependent]);
    }
    return out.str();
}

inline nlohmann::json trace_to_json(const Lexicon& lex, const FeatureMatchResult& r) {
    nlohmann::json j;
    j["filtered"] = {{"attribute", lex.name(r.filtered.attribute)}, {"value", r.filtered.value}};
    j["filtering"] = {{"attribute", lex.name(r.filtering.attribute)},
                      {"value", r.filtering.value}};
    j["case_used"] = to_string(r.case_used);
    j["score"] = r.score;
    j["children"] = nlohmann::json::array();
    for (const auto& ch : r.children) j["children"].push_back(trace_to_json(lex, ch));
    return j;
}

inline void trace_to_text(const Lexicon& lex, const FeatureMatchResult& r, std::ostream& out,
                          int indent = 0) {
    for (int i = 0; i < indent; ++i) out << "  ";
    out << "<" << lex.name(r.filtered.attribute) << "," << r.filtered.value << "> vs <"
        << lex.name(r.filtering.attribute) << "," << r.filtering.value << ">  ["
        << to_string(r.case_used) << "]  = " << r.score << "\n";
    for (const auto& ch : r.children) trace_to_text(lex, ch, out, indent + 1);
}

}  // namespace semparse
