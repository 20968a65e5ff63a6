// Gold corpus format and the exact edge-set evaluation used by `eval`.
// One record per line: `tok tok ... :: head case dep ; head case dep`.
#pragma once

#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "semparse/parser.hpp"

namespace semparse {

struct GoldEdge {
    int head = 0;
    std::string role;
    int dependent = 0;
    friend auto operator<=>(const GoldEdge&, const GoldEdge&) = default;
};

struct GoldRecord {
    std::vector<std::string> tokens;
    std::vector<GoldEdge> edges;
    int line = 0;
};

struct CorpusError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::vector<GoldRecord> parse_corpus(std::string_view text) {
    std::vector<GoldRecord> records;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view raw = text.substr(
            pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++lineno;
        std::string_view line = raw.substr(0, raw.find('#'));

        auto sep = line.find("::");
        if (sep == std::string_view::npos) {
            if (!detail::split_ws(line).empty())
                throw CorpusError("line " + std::to_string(lineno) + ": missing '::'");
            continue;
        }
        GoldRecord rec;
        rec.line = lineno;
        rec.tokens = detail::split_ws(line.substr(0, sep));
        if (rec.tokens.empty())
            throw CorpusError("line " + std::to_string(lineno) + ": empty token list");
        auto fields = detail::split_ws(line.substr(sep + 2));
        for (std::size_t i = 0; i < fields.size();) {
            if (fields[i] == ";") {
                ++i;
                continue;
            }
            if (i + 2 >= fields.size())
                throw CorpusError("line " + std::to_string(lineno) +
                                  ": expected 'head case dependent' triples");
            GoldEdge e;
            try {
                e.head = std::stoi(fields[i]);
                e.dependent = std::stoi(fields[i + 2]);
            } catch (const std::exception&) {
                throw CorpusError("line " + std::to_string(lineno) + ": bad position index");
            }
            e.role = fields[i + 1];
            int n = static_cast<int>(rec.tokens.size());
            if (e.head < 0 || e.head >= n || e.dependent < 0 || e.dependent >= n ||
                e.head == e.dependent)
                throw CorpusError("line " + std::to_string(lineno) + ": edge positions out of range");
            rec.edges.push_back(e);
            i += 3;
        }
        records.push_back(std::move(rec));
    }
    return records;
}

struct RecordResult {
    bool matched = false;
    std::size_t gold_edges = 0;
    std::size_t predicted_edges = 0;
    std::size_t correct_edges = 0;
};

struct EvalReport {
    std::vector<RecordResult> records;
    double accuracy = 0.0;   // exact edge-set match rate
    double precision = 0.0;  // per-edge micro average
    double recall = 0.0;
};

inline EvalReport evaluate_corpus(const Lexicon& lex, const std::vector<GoldRecord>& records,
                                  const AnalyzeConfig& config) {
    if (records.empty()) throw CorpusError("empty corpus");
    EvalReport report;
    std::size_t matched = 0, gold_total = 0, pred_total = 0, correct_total = 0;
    for (const GoldRecord& rec : records) {
        auto tokens = detail::resolve_tokens(lex, rec.tokens);
        std::set<GoldEdge> gold(rec.edges.begin(), rec.edges.end());
        auto ranked = analyze(lex, tokens, config);
        std::set<GoldEdge> predicted;
        if (!ranked.empty())
            for (const Edge& e : ranked.front().edges)
                predicted.insert(GoldEdge{e.head, lex.name(e.role), e.dependent});

        RecordResult rr;
        rr.gold_edges = gold.size();
        rr.predicted_edges = predicted.size();
        for (const GoldEdge& e : predicted) rr.correct_edges += gold.count(e);
        rr.matched = gold == predicted;
        matched += rr.matched;
        gold_total += rr.gold_edges;
        pred_total += rr.predicted_edges;
        correct_total += rr.correct_edges;
        report.records.push_back(rr);
    }
    report.accuracy = 100.0 * static_cast<double>(matched) / static_cast<double>(records.size());
    report.precision =
        pred_total ? 100.0 * static_cast<double>(correct_total) / static_cast<double>(pred_total) : 100.0;
    report.recall =
        gold_total ? 100.0 * static_cast<double>(correct_total) / static_cast<double>(gold_total) : 100.0;
    return report;
}

}  // namespace semparse
