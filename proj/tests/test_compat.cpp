#include <doctest.h>

#include <random>

#include "semparse/compat.hpp"
#include "semparse/generate.hpp"
#include "test_util.hpp"

using namespace semparse;

namespace {

double f(const Lexicon& lex, const char* a1, double v1, const char* a2, double v2,
         ScoreChart* chart = nullptr) {
    return match_feature_score(lex, Feature{lex.attribute(a1), v1},
                               Feature{lex.attribute(a2), v2}, chart);
}

}  // namespace

TEST_CASE("matching function: worked examples on the toy fixture") {
    const Lexicon& lex = toy_lexicon();
    CHECK(f(lex, "dog", 1, "dog", 1) == 1.0);        // same attribute
    CHECK(f(lex, "dog", 1, "dog", -1) == -1.0);      // blocking expectation
    CHECK(f(lex, "dog", 1, "animal", 1) == 1.0);     // subtype fulfills fully
    CHECK(f(lex, "dog", -1, "animal", 1) == 0.0);    // not-a-dog proves nothing
    CHECK(f(lex, "dog", 1, "object", 1) == -1.0);    // opposition via living_being
    // animal vs expected dog: decomposition into {animal, pet} + dummy;
    // pet itself half-matches animal, so (1 + 0.5 + 0) / 3.
    CHECK(f(lex, "animal", 1, "dog", 1) == 0.5);
}

TEST_CASE("match case labels and precedence") {
    const Lexicon& lex = toy_lexicon();
    auto id = [&](const char* n) { return lex.attribute(n); };
    auto result = [&](const char* a1, const char* a2) {
        return match_feature(lex, Feature{id(a1), 1}, Feature{id(a2), 1});
    };
    CHECK(result("dog", "dog").case_used == MatchCase::Equal);
    CHECK(result("dog", "animal").case_used == MatchCase::Subtype);
    CHECK(result("dog", "object").case_used == MatchCase::Contradiction);
    CHECK(result("animal", "dog").case_used == MatchCase::Decomposed);
    CHECK(result("cat", "liquid").case_used == MatchCase::PrimitiveMiss);
    CHECK(result("cat", "liquid").score == 0.0);

    SUBCASE("a pair that both implies and contradicts resolves as Subtype") {
        Lexicon odd = Lexicon::load("concept b\nconcept a\n  has b +1\noppose a b\n");
        CHECK_FALSE(odd.warnings().empty());
        auto r = match_feature(odd, Feature{odd.attribute("a"), 1},
                               Feature{odd.attribute("b"), 1});
        CHECK(r.case_used == MatchCase::Subtype);
        CHECK(r.score == 1.0);
    }
}

TEST_CASE("decomposition trace structure") {
    const Lexicon& lex = toy_lexicon();
    auto r = match_feature(lex, Feature{lex.attribute("animal"), 1},
                           Feature{lex.attribute("dog"), 1});
    REQUIRE(r.children.size() == 3);  // animal, pet, dummy
    CHECK(r.children.back().filtering.attribute == lex.dummy());
    CHECK(r.children.back().score == 0.0);
    CHECK(r.depth() <= lex.dag_height() + 1);
}

TEST_CASE("set compatibility") {
    const Lexicon& lex = toy_lexicon();
    auto animal_exp = std::vector<Feature>{Feature{lex.attribute("animal"), 1}};

    SUBCASE("single exact match") {
        std::vector<Feature> iff{Feature{lex.attribute("dog"), 1}};
        std::vector<Feature> sf{Feature{lex.attribute("dog"), 1}};
        CHECK(set_compatibility(lex, iff, sf) == 1.0);
    }
    SUBCASE("cat against expected animal sums to 3.5") {
        double c = set_compatibility(lex, lex.effective_intrinsic(lex.attribute("cat")),
                                     animal_exp);
        CHECK(c == 3.5);  // 1 + 1 + 1 + living_being's 0.5
    }
    SUBCASE("empty filtering set scores zero") {
        CHECK(set_compatibility(lex, lex.effective_intrinsic(lex.attribute("cat")), {}) ==
              0.0);
    }
    SUBCASE("asymmetry witness") {
        const auto& cat = lex.effective_intrinsic(lex.attribute("cat"));
        double forward = set_compatibility(lex, cat, animal_exp);
        double backward = set_compatibility(lex, animal_exp, cat);
        CHECK(forward == 3.5);
        CHECK(backward == doctest::Approx(0.75));
        CHECK(forward != backward);
    }
}

TEST_CASE("zero filtered value yields zero in cases 1-3") {
    const Lexicon& lex = toy_lexicon();
    CHECK(f(lex, "dog", 0, "dog", 1) == 0.0);
    CHECK(f(lex, "dog", 0, "animal", 1) == 0.0);
    CHECK(f(lex, "dog", 0, "object", 1) == 0.0);
}

TEST_CASE("negative filtered values in cases 2 and 3 yield zero for any magnitude") {
    const Lexicon& lex = toy_lexicon();
    CHECK(f(lex, "dog", -0.25, "animal", 1) == 0.0);
    CHECK(f(lex, "dog", -2.0, "object", 1) == 0.0);
    CHECK(f(lex, "dog", -0.5, "dog", 1) == -0.5);  // case 1 is unconditional
}

TEST_CASE("property: scale bilinearity within cases 1-3 for non-negative values") {
    const Lexicon& lex = toy_lexicon();
    const char* pairs[][2] = {{"dog", "dog"}, {"dog", "animal"}, {"dog", "object"}};
    for (auto& p : pairs) {
        double base = f(lex, p[0], 1.0, p[1], 1.0);
        for (double lambda : {0.0, 0.5, 2.0, 3.25})
            CHECK(f(lex, p[0], lambda, p[1], 1.0) == doctest::Approx(lambda * base));
        for (double v2 : {-1.5, 0.25, 2.0})
            CHECK(f(lex, p[0], 1.0, p[1], v2) == doctest::Approx(v2 * base));
    }
}

TEST_CASE("property: dummy penalty attenuates every decomposition level") {
    // |f| <= (k/(k+1)) * |v1*v2| * max nested |f| for a k-parent target.
    const Lexicon& lex = toy_lexicon();
    std::vector<std::pair<const char*, const char*>> cases = {
        {"animal", "dog"}, {"living_being", "dog"}, {"milk", "animal"}, {"liquid", "beverage"}};
    for (auto& [a1, a2] : cases) {
        auto r = match_feature(lex, Feature{lex.attribute(a1), 1},
                               Feature{lex.attribute(a2), 1});
        REQUIRE(r.case_used == MatchCase::Decomposed);
        std::size_t k = r.children.size() - 1;  // dummy excluded
        double max_nested = 0.0;
        for (const auto& ch : r.children) max_nested = std::max(max_nested, std::abs(ch.score));
        CHECK(std::abs(r.score) <=
              (double(k) / double(k + 1)) * max_nested + 1e-12);
    }
}

TEST_CASE("memo chart: hit counting and soundness") {
    const Lexicon& lex = toy_lexicon();

    SUBCASE("each feature pair is computed at most once per chart") {
        ScoreChart chart;
        f(lex, "animal", 1, "dog", 1, &chart);
        auto computed = chart.feature_computes;
        f(lex, "animal", 1, "dog", 1, &chart);
        f(lex, "animal", -1, "dog", 1, &chart);  // same pair, other sign
        CHECK(chart.feature_computes == computed);
        CHECK(chart.feature_hits >= 2);
    }

    SUBCASE("chart-enabled results are bit-identical to chart-disabled on 1000 queries") {
        std::mt19937_64 rng(99);
        LexiconGenConfig cfg;
        cfg.concepts = 20;
        for (int round = 0; round < 10; ++round) {
            Lexicon rand_lex = generate_lexicon(cfg, rng());
            ScoreChart chart;
            std::uniform_int_distribution<std::uint32_t> pick(
                1, static_cast<std::uint32_t>(rand_lex.concept_count() - 1));
            std::uniform_real_distribution<double> val(-2.0, 2.0);
            for (int q = 0; q < 100; ++q) {
                Feature filtered{AttributeId{pick(rng)}, val(rng)};
                Feature filtering{AttributeId{pick(rng)}, val(rng)};
                double with = match_feature_score(rand_lex, filtered, filtering, &chart);
                double without = match_feature_score(rand_lex, filtered, filtering);
                CHECK(with == without);
            }
        }
    }

    SUBCASE("pair scores are memoized by (head, case, candidate)") {
        ScoreChart chart;
        AttributeId drink = lex.attribute("drink");
        AttributeId cat = lex.attribute("cat");
        CaseId agent = *lex.find_case("agent");
        double first = pair_score(lex, drink, agent, cat, &chart);
        CHECK(chart.pair_computes == 1);
        double second = pair_score(lex, drink, agent, cat, &chart);
        CHECK(chart.pair_computes == 1);
        CHECK(chart.pair_hits == 1);
        CHECK(first == second);
        CHECK(first == 3.5);
    }
}

TEST_CASE("full-closure decomposition stays switchable") {
    const Lexicon& lex = toy_lexicon();
    MatchOptions closure{true};
    // Under full closure, dog decomposes into {animal, pet, living_being};
    // animal matches itself (1) and pet (0.5 -> via its own direct-parent
    // nesting) and living_being (1, subtype), over denominator 4.
    double direct = f(lex, "animal", 1, "dog", 1);
    double full = match_feature_score(lex, Feature{lex.attribute("animal"), 1},
                                      Feature{lex.attribute("dog"), 1}, nullptr, closure);
    CHECK(direct == 0.5);
    CHECK(full != direct);
    CHECK(full > 0.0);
}

TEST_CASE("termination: recursion depth bounded by DAG height") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 100; ++trial) {
        LexiconGenConfig cfg;
        cfg.concepts = 14;
        Lexicon lex = generate_lexicon(cfg, rng());
        std::uniform_int_distribution<std::uint32_t> pick(
            1, static_cast<std::uint32_t>(lex.concept_count() - 1));
        for (int q = 0; q < 20; ++q) {
            auto r = match_feature(lex, Feature{AttributeId{pick(rng)}, 1.0},
                                   Feature{AttributeId{pick(rng)}, 1.0});
            CHECK(r.depth() <= lex.dag_height() + 1);
        }
    }
}
