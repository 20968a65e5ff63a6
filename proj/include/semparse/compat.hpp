// Feature-level matching function and asymmetric set compatibility,
// with a memo chart over attribute pairs and (predicate, case, candidate)
// triples.
#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "semparse/lexicon.hpp"

namespace semparse {

enum class MatchCase { Equal, Subtype, Contradiction, Decomposed, PrimitiveMiss };

inline const char* to_string(MatchCase c) {
    switch (c) {
        case MatchCase::Equal: return "Equal";
        case MatchCase::Subtype: return "Subtype";
        case MatchCase::Contradiction: return "Contradiction";
        case MatchCase::Decomposed: return "Decomposed";
        case MatchCase::PrimitiveMiss: return "PrimitiveMiss";
    }
    return "?";
}

struct MatchOptions {
    // Decomposition set used by the Decomposed case: direct parents by
    // default, full positive closure when set.
    bool full_closure_decompose = false;
};

// Per-sign match coefficients for an attribute pair: the score of
// f(<a1,v1>,<a2,v2>) is v1*v2*pos for v1 >= 0 and v1*v2*neg otherwise.
// The factorization holds on every case branch, so memoizing by attribute
// pair is lossless.
struct PairCoef {
    double pos = 0.0;
    double neg = 0.0;
};

// Memo table of intermediate results. Counters stay live when memoization
// is disabled, so chart-on/off runs are directly comparable.
class ScoreChart {
  public:
    explicit ScoreChart(bool enabled = true) : enabled_(enabled) {}

    bool enabled() const { return enabled_; }

    std::size_t feature_computes = 0;
    std::size_t feature_hits = 0;
    std::size_t pair_computes = 0;
    std::size_t pair_hits = 0;
    int max_depth = 0;

    bool lookup_feature(AttributeId a1, AttributeId a2, PairCoef& out) const {
        if (!enabled_) return false;
        auto it = feature_scores_.find({a1, a2});
        if (it == feature_scores_.end()) return false;
        out = it->second;
        return true;
    }

    void store_feature(AttributeId a1, AttributeId a2, PairCoef coef) {
        if (enabled_) feature_scores_.insert({{a1, a2}, coef});
    }

    bool lookup_pair(AttributeId head, CaseId role, AttributeId cand, double& out) const {
        if (!enabled_) return false;
        auto it = pair_scores_.find({{head, role}, cand});
        if (it == pair_scores_.end()) return false;
        out = it->second;
        return true;
    }

    void store_pair(AttributeId head, CaseId role, AttributeId cand, double score) {
        if (enabled_) pair_scores_.insert({{{head, role}, cand}, score});
    }

  private:
    bool enabled_;
    std::map<std::pair<AttributeId, AttributeId>, PairCoef> feature_scores_;
    std::map<std::pair<std::pair<AttributeId, CaseId>, AttributeId>, double> pair_scores_;
};

struct FeatureMatchResult;

struct FeatureMatchResult {
    Feature filtered;
    Feature filtering;
    MatchCase case_used = MatchCase::PrimitiveMiss;
    double score = 0.0;
    std::vector<FeatureMatchResult> children;  // Decomposed recursion only

    int depth() const {
        int d = 0;
        for (const auto& ch : children) d = std::max(d, ch.depth());
        return d + 1;
    }
};

namespace detail {

inline MatchCase classify(const Lexicon& lex, AttributeId a1, AttributeId a2) {
    if (a1 == a2) return MatchCase::Equal;
    if (lex.implies(a1, a2)) return MatchCase::Subtype;
    if (lex.contradicts(a1, a2)) return MatchCase::Contradiction;
    if (lex.is_primitive(a2)) return MatchCase::PrimitiveMiss;
    return MatchCase::Decomposed;
}

inline std::vector<AttributeId> decomposition(const Lexicon& lex, AttributeId a2,
                                              const MatchOptions& opts) {
    return opts.full_closure_decompose ? lex.ancestors(a2) : lex.decompose(a2);
}

inline PairCoef feature_coef(const Lexicon& lex, AttributeId a1, AttributeId a2,
                             ScoreChart* chart, const MatchOptions& opts, int depth) {
    PairCoef coef;
    if (chart && chart->lookup_feature(a1, a2, coef)) {
        ++chart->feature_hits;
        return coef;
    }
    if (chart) {
        ++chart->feature_computes;
        chart->max_depth = std::max(chart->max_depth, depth);
    }
    switch (classify(lex, a1, a2)) {
        case MatchCase::Equal: coef = {1.0, 1.0}; break;
        case MatchCase::Subtype: coef = {1.0, 0.0}; break;
        case MatchCase::Contradiction: coef = {-1.0, 0.0}; break;
        case MatchCase::PrimitiveMiss: coef = {0.0, 0.0}; break;
        case MatchCase::Decomposed: {
            // C({<a1,v1>}, {<p,v2> for p} u {<dummy,v2>}): the dummy adds
            // 0 to the numerator and 1 to the denominator.
            auto parts = decomposition(lex, a2, opts);
            PairCoef sum;
            for (AttributeId p : parts) {
                PairCoef c = feature_coef(lex, a1, p, chart, opts, depth + 1);
                sum.pos += c.pos;
                sum.neg += c.neg;
            }
            double denom = static_cast<double>(parts.size()) + 1.0;
            coef = {sum.pos / denom, sum.neg / denom};
            break;
        }
    }
    if (chart) chart->store_feature(a1, a2, coef);
    return coef;
}

}  // namespace detail

// The matching function f on individual features; cases in precedence
// order Equal > Subtype > Contradiction > decomposition.
inline double match_feature_score(const Lexicon& lex, Feature filtered, Feature filtering,
                                  ScoreChart* chart = nullptr, MatchOptions opts = {}) {
    PairCoef coef =
        detail::feature_coef(lex, filtered.attribute, filtering.attribute, chart, opts, 1);
    double c = filtered.value >= 0 ? coef.pos : coef.neg;
    return filtered.value * filtering.value * c;
}

// Trace-building variant; same scores, explicit recursion tree.
inline FeatureMatchResult match_feature(const Lexicon& lex, Feature filtered,
                                        Feature filtering, ScoreChart* chart = nullptr,
                                        MatchOptions opts = {}) {
    FeatureMatchResult r;
    r.filtered = filtered;
    r.filtering = filtering;
    r.case_used = detail::classify(lex, filtered.attribute, filtering.attribute);
    r.score = match_feature_score(lex, filtered, filtering, chart, opts);
    if (r.case_used == MatchCase::Decomposed) {
        for (AttributeId p : detail::decomposition(lex, filtering.attribute, opts))
            r.children.push_back(match_feature(
                lex, filtered, Feature{p, filtering.value}, chart, opts));
        FeatureMatchResult dummy;
        dummy.filtered = filtered;
        dummy.filtering = Feature{lex.dummy(), filtering.value};
        dummy.case_used = MatchCase::PrimitiveMiss;
        dummy.score = 0.0;
        r.children.push_back(dummy);
    }
    return r;
}

// C(IF, SF) = sum of pairwise f over IF x SF, divided by |SF|.
// An empty filtering set neither attracts nor repels.
inline double set_compatibility(const Lexicon& lex, std::span<const Feature> filtered_set,
                                std::span<const Feature> filtering_set,
                                ScoreChart* chart = nullptr, MatchOptions opts = {}) {
    if (filtering_set.empty()) return 0.0;
    double sum = 0.0;
    for (const Feature& sf : filtering_set)
        for (const Feature& iff : filtered_set)
            sum += match_feature_score(lex, iff, sf, chart, opts);
    return sum / static_cast<double>(filtering_set.size());
}

// Unweighted compatibility of a candidate concept against one case slot of
// a predicate, memoized by (head, case, candidate) attribute triple.
inline double pair_score(const Lexicon& lex, AttributeId head, CaseId role,
                         AttributeId candidate, ScoreChart* chart = nullptr,
                         MatchOptions opts = {}) {
    double score = 0.0;
    if (chart && chart->lookup_pair(head, role, candidate, score)) {
        ++chart->pair_hits;
        return score;
    }
    if (chart) ++chart->pair_computes;
    const auto& frame = lex.case_frame(head);
    auto it = frame.find(role);
    if (it == frame.end())
        throw LexiconError("case '" + lex.name(role) + "' absent from frame of " +
                           lex.name(head));
    score = set_compatibility(lex, lex.effective_intrinsic(candidate), it->second, chart, opts);
    if (chart) chart->store_pair(head, role, candidate, score);
    return score;
}

}  // namespace semparse
