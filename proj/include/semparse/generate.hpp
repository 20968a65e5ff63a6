// Seeded random lexicons and token sequences, used by the bench command
// and by the property / oracle test suites. Lexicons are emitted in the
// text format and re-loaded, so generation also exercises the parser.
#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "semparse/lexicon.hpp"

namespace semparse {

struct LexiconGenConfig {
    int concepts = 16;          // non-predicative concepts
    int predicates = 4;
    int max_parents = 3;
    int max_levels = 12;        // bounds DAG height
    int oppositions = 2;
    int max_cases = 2;
    double negative_feature_rate = 0.1;
};

// Random DAG lexicon: concept i draws parents from strictly lower levels,
// so acyclicity and the height bound hold by construction.
inline std::string generate_lexicon_text(const LexiconGenConfig& cfg, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::ostringstream out;
    const std::vector<std::string> case_names = {"agent", "object", "instrument", "location"};

    std::vector<std::string> names;
    std::vector<int> level(cfg.concepts);
    std::uniform_int_distribution<int> level_dist(0, cfg.max_levels - 1);
    for (int i = 0; i < cfg.concepts; ++i) {
        names.push_back("c" + std::to_string(i));
        level[i] = level_dist(rng);
    }

    for (int i = 0; i < cfg.concepts; ++i) {
        out << "concept " << names[i] << "\n";
        std::vector<int> lower;
        for (int j = 0; j < cfg.concepts; ++j)
            if (level[j] < level[i]) lower.push_back(j);
        std::shuffle(lower.begin(), lower.end(), rng);
        int k = std::uniform_int_distribution<int>(0, cfg.max_parents)(rng);
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        for (int p = 0; p < k && p < static_cast<int>(lower.size()); ++p) {
            bool negative = coin(rng) < cfg.negative_feature_rate;
            out << "  has " << names[lower[p]] << (negative ? " -1" : " +1") << "\n";
        }
    }

    std::uniform_int_distribution<int> pick(0, cfg.concepts - 1);
    for (int i = 0; i < cfg.predicates; ++i) {
        out << "concept p" << i << "\n";
        int cases = std::uniform_int_distribution<int>(1, cfg.max_cases)(rng);
        for (int c = 0; c < cases; ++c)
            out << "  case " << case_names[c % case_names.size()] << " " << names[pick(rng)]
                << " 1\n";
    }

    // Oppositions between distinct plain concepts; duplicates are harmless.
    for (int i = 0; i < cfg.oppositions; ++i) {
        int a = pick(rng), b = pick(rng);
        if (a != b) out << "oppose " << names[a] << " " << names[b] << "\n";
    }
    return out.str();
}

inline Lexicon generate_lexicon(const LexiconGenConfig& cfg, std::uint64_t seed) {
    return Lexicon::load(generate_lexicon_text(cfg, seed));
}

// Uniform token draw with at least one predicative token. When the
// lexicon has enough concepts, tokens are distinct.
inline std::vector<AttributeId> generate_sequence(const Lexicon& lex, int n,
                                                  std::mt19937_64& rng) {
    std::vector<AttributeId> pool, predicative;
    for (std::uint32_t i = 1; i < lex.concept_count(); ++i) {
        AttributeId a{i};
        pool.push_back(a);
        if (lex.predicative(a)) predicative.push_back(a);
    }
    if (pool.empty()) throw LexiconError("lexicon has no concepts to sample");

    std::vector<AttributeId> tokens;
    if (static_cast<int>(pool.size()) >= n) {
        std::shuffle(pool.begin(), pool.end(), rng);
        tokens.assign(pool.begin(), pool.begin() + n);
    } else {
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        for (int i = 0; i < n; ++i) tokens.push_back(pool[pick(rng)]);
    }
    bool has_pred = std::any_of(tokens.begin(), tokens.end(),
                                [&](AttributeId t) { return lex.predicative(t); });
    if (!has_pred && !predicative.empty()) {
        std::uniform_int_distribution<std::size_t> slot(0, tokens.size() - 1);
        std::uniform_int_distribution<std::size_t> pred(0, predicative.size() - 1);
        tokens[slot(rng)] = predicative[pred(rng)];
    }
    return tokens;
}

}  // namespace semparse
