// Dependency-graph reconstruction over an unordered concept sequence:
// enumerates case slots of predicative tokens, scores candidates with
// distance weighting, and searches for the assignment maximizing total
// compatibility.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "semparse/compat.hpp"
#include "semparse/lexicon.hpp"

namespace semparse {

struct ParserError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Edge {
    int head = 0;
    CaseId role;
    int dependent = 0;
    double score = 0.0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Interpretation {
    std::vector<Edge> edges;  // sorted by (head, role, dependent)
    double total_score = 0.0;
    bool exact = true;
};

struct AnalyzeConfig {
    double gamma = 0.9;
    int top_k = 1;
    int max_exact_n = 12;
    int beam_width = 64;
    std::size_t max_tokens = 32;
    MatchOptions match;
};

// gamma^(d-1): 1 at adjacent positions, strictly decreasing for gamma < 1.
inline double distance_weight(int head_pos, int dep_pos, double gamma) {
    if (head_pos == dep_pos) throw ParserError("distance weight of equal positions");
    int d = std::abs(head_pos - dep_pos);
    return std::pow(gamma, d - 1);
}

struct PredicateSlot {
    int head_pos = 0;
    CaseId role;
    const std::vector<Feature>* expectations = nullptr;
};

// Weighted compatibility of candidate at cand_pos for one slot. The memo
// key is token-level; the distance weight is applied outside it.
inline double score_slot(const Lexicon& lex, ScoreChart& chart,
                         const std::vector<AttributeId>& tokens, const PredicateSlot& slot,
                         int cand_pos, double gamma, MatchOptions opts = {}) {
    double unweighted =
        pair_score(lex, tokens[slot.head_pos], slot.role, tokens[cand_pos], &chart, opts);
    return distance_weight(slot.head_pos, cand_pos, gamma) * unweighted;
}

namespace detail {

inline std::vector<PredicateSlot> enumerate_slots(const Lexicon& lex,
                                                  const std::vector<AttributeId>& tokens) {
    std::vector<PredicateSlot> slots;
    for (int pos = 0; pos < static_cast<int>(tokens.size()); ++pos) {
        for (const auto& [role, feats] : lex.case_frame(tokens[pos])) {
            if (!feats.empty()) slots.push_back(PredicateSlot{pos, role, &feats});
        }
    }
    return slots;
}

struct SlotChoice {
    int cand_pos;
    double score;
};

// Admissible candidates per slot (strictly positive weighted score),
// sorted best-first with deterministic tie order.
inline std::vector<std::vector<SlotChoice>> admissible_choices(
    const Lexicon& lex, ScoreChart& chart, const std::vector<AttributeId>& tokens,
    const std::vector<PredicateSlot>& slots, double gamma, MatchOptions opts) {
    std::vector<std::vector<SlotChoice>> choices(slots.size());
    for (std::size_t s = 0; s < slots.size(); ++s) {
        for (int p = 0; p < static_cast<int>(tokens.size()); ++p) {
            if (p == slots[s].head_pos) continue;
            double w = score_slot(lex, chart, tokens, slots[s], p, gamma, opts);
            if (w > 0.0) choices[s].push_back(SlotChoice{p, w});
        }
        std::sort(choices[s].begin(), choices[s].end(), [](const auto& a, const auto& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.cand_pos < b.cand_pos;
        });
    }
    return choices;
}

// Adding head->dep closes a cycle iff dep already (transitively) governs
// head; each node has at most one governor, so walk the governor chain.
inline bool creates_cycle(const std::vector<int>& governor, int head, int dep) {
    for (int node = head; node >= 0; node = governor[node])
        if (node == dep) return true;
    return false;
}

// Ranking: higher score, then fewer edges, then lexicographic edge list.
inline bool better(const Interpretation& a, const Interpretation& b) {
    if (a.total_score != b.total_score) return a.total_score > b.total_score;
    if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
    return a.edges < b.edges;
}

// Canonical form: edges sorted, total recomputed in sorted order so equal
// edge sets produce bit-identical totals regardless of search order.
inline Interpretation finalize(std::vector<Edge> edges, bool exact) {
    std::sort(edges.begin(), edges.end());
    Interpretation interp;
    interp.edges = std::move(edges);
    interp.exact = exact;
    interp.total_score = 0.0;
    for (const Edge& e : interp.edges) interp.total_score += e.score;
    return interp;
}

class TopK {
  public:
    explicit TopK(std::size_t k) : k_(k) {}

    void offer(Interpretation interp) {
        items_.push_back(std::move(interp));
        std::sort(items_.begin(), items_.end(), better);
        if (items_.size() > k_) items_.resize(k_);
    }

    bool full() const { return items_.size() >= k_; }
    double worst_score() const { return items_.back().total_score; }
    std::vector<Interpretation> take() && { return std::move(items_); }

  private:
    std::size_t k_;
    std::vector<Interpretation> items_;
};

struct SearchState {
    std::vector<Edge> edges;
    std::vector<int> governor;  // -1 = free
    double score = 0.0;
};

inline void branch_and_bound(const std::vector<PredicateSlot>& slots,
                             const std::vector<std::vector<SlotChoice>>& choices,
                             const std::vector<double>& suffix_max, std::size_t s,
                             SearchState& state, TopK& best) {
    if (s == slots.size()) {
        best.offer(finalize(state.edges, true));
        return;
    }
    // Bound: remaining slots contribute at most their individual maxima;
    // prune only strictly below the current k-th best, keeping ties.
    if (best.full() && state.score + suffix_max[s] < best.worst_score()) return;

    for (const SlotChoice& ch : choices[s]) {
        int head = slots[s].head_pos;
        if (state.governor[ch.cand_pos] >= 0) continue;
        if (creates_cycle(state.governor, head, ch.cand_pos)) continue;
        state.governor[ch.cand_pos] = head;
        state.edges.push_back(Edge{head, slots[s].role, ch.cand_pos, ch.score});
        state.score += ch.score;
        branch_and_bound(slots, choices, suffix_max, s + 1, state, best);
        state.score -= ch.score;
        state.edges.pop_back();
        state.governor[ch.cand_pos] = -1;
    }
    // Leaving the slot empty is always admissible.
    branch_and_bound(slots, choices, suffix_max, s + 1, state, best);
}

inline std::vector<Interpretation> beam_search(const std::vector<PredicateSlot>& slots,
                                               const std::vector<std::vector<SlotChoice>>& choices,
                                               int n, int beam_width, int top_k) {
    std::vector<SearchState> beam{SearchState{{}, std::vector<int>(n, -1), 0.0}};
    for (std::size_t s = 0; s < slots.size(); ++s) {
        std::vector<SearchState> next;
        for (const SearchState& st : beam) {
            next.push_back(st);  // slot left empty
            for (const SlotChoice& ch : choices[s]) {
                int head = slots[s].head_pos;
                if (st.governor[ch.cand_pos] >= 0) continue;
                if (creates_cycle(st.governor, head, ch.cand_pos)) continue;
                SearchState ext = st;
                ext.governor[ch.cand_pos] = head;
                ext.edges.push_back(Edge{head, slots[s].role, ch.cand_pos, ch.score});
                ext.score += ch.score;
                next.push_back(std::move(ext));
            }
        }
        std::sort(next.begin(), next.end(), [](const auto& a, const auto& b) {
            if (a.score != b.score) return a.score > b.score;
            if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
            return a.edges < b.edges;
        });
        if (static_cast<int>(next.size()) > beam_width) next.resize(beam_width);
        beam = std::move(next);
    }
    TopK best(static_cast<std::size_t>(top_k));
    for (SearchState& st : beam) best.offer(finalize(std::move(st.edges), false));
    return std::move(best).take();
}

inline std::vector<AttributeId> resolve_tokens(const Lexicon& lex,
                                               const std::vector<std::string>& names) {
    std::vector<AttributeId> tokens;
    tokens.reserve(names.size());
    for (const std::string& t : names) {
        auto id = lex.find_attribute(t);
        if (!id || t == kDummySymbol) throw ParserError("unknown token: " + t);
        tokens.push_back(*id);
    }
    return tokens;
}

}  // namespace detail

// Top-k interpretations by total weighted compatibility. Exact
// branch-and-bound up to config.max_exact_n tokens, beam search beyond
// (results flagged inexact).
inline std::vector<Interpretation> analyze(const Lexicon& lex,
                                           const std::vector<AttributeId>& tokens,
                                           const AnalyzeConfig& config,
                                           ScoreChart* chart = nullptr) {
    if (tokens.empty()) throw ParserError("empty sequence");
    if (tokens.size() > config.max_tokens)
        throw ParserError("sequence exceeds maximum of " + std::to_string(config.max_tokens));
    if (config.top_k < 1) throw ParserError("top_k must be at least 1");

    ScoreChart local;
    ScoreChart& memo = chart ? *chart : local;
    auto slots = detail::enumerate_slots(lex, tokens);
    auto choices =
        detail::admissible_choices(lex, memo, tokens, slots, config.gamma, config.match);

    if (static_cast<int>(tokens.size()) > config.max_exact_n)
        return detail::beam_search(slots, choices, static_cast<int>(tokens.size()),
                                   config.beam_width, config.top_k);

    std::vector<double> suffix_max(slots.size() + 1, 0.0);
    for (std::size_t s = slots.size(); s-- > 0;) {
        double mx = choices[s].empty() ? 0.0 : choices[s].front().score;
        suffix_max[s] = suffix_max[s + 1] + mx;
    }
    detail::TopK best(static_cast<std::size_t>(config.top_k));
    detail::SearchState state{{}, std::vector<int>(tokens.size(), -1), 0.0};
    detail::branch_and_bound(slots, choices, suffix_max, 0, state, best);
    return std::move(best).take();
}

inline std::vector<Interpretation> analyze(const Lexicon& lex,
                                           const std::vector<std::string>& token_names,
                                           const AnalyzeConfig& config,
                                           ScoreChart* chart = nullptr) {
    return analyze(lex, detail::resolve_tokens(lex, token_names), config, chart);
}

// Exhaustive oracle: every admissible assignment, fully ranked. Test use.
inline std::vector<Interpretation> brute_force_analyze(const Lexicon& lex,
                                                       const std::vector<AttributeId>& tokens,
                                                       const AnalyzeConfig& config) {
    if (tokens.empty()) throw ParserError("empty sequence");
    if (tokens.size() > 8) throw ParserError("sequence too long for exhaustive enumeration");

    ScoreChart memo;
    auto slots = detail::enumerate_slots(lex, tokens);
    auto choices =
        detail::admissible_choices(lex, memo, tokens, slots, config.gamma, config.match);

    std::vector<Interpretation> all;
    detail::SearchState state{{}, std::vector<int>(tokens.size(), -1), 0.0};
    auto recurse = [&](auto&& self, std::size_t s) -> void {
        if (s == slots.size()) {
            all.push_back(detail::finalize(state.edges, true));
            return;
        }
        for (const detail::SlotChoice& ch : choices[s]) {
            int head = slots[s].head_pos;
            if (state.governor[ch.cand_pos] >= 0) continue;
            if (detail::creates_cycle(state.governor, head, ch.cand_pos)) continue;
            state.governor[ch.cand_pos] = head;
            state.edges.push_back(Edge{head, slots[s].role, ch.cand_pos, ch.score});
            self(self, s + 1);
            state.edges.pop_back();
            state.governor[ch.cand_pos] = -1;
        }
        self(self, s + 1);
    };
    recurse(recurse, 0);
    std::sort(all.begin(), all.end(), detail::better);
    return all;
}

}  // namespace semparse
