// semparse: parse, explain, validate, eval, and bench over concept
// lexicons.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semparse/corpus.hpp"
#include "semparse/generate.hpp"
#include "semparse/render.hpp"

namespace {

constexpr int kExitFile = 1;
constexpr int kExitResolve = 2;
constexpr int kExitUsage = 64;

struct CliError {
    int code;
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError{kExitFile, "cannot open file: " + path};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

semparse::Lexicon load_lexicon_file(const std::string& path) {
    std::string text = read_file(path);
    try {
        return semparse::Lexicon::load(text);
    } catch (const semparse::LexiconError& e) {
        throw CliError{kExitResolve, path + ": " + e.what()};
    }
}

struct CommonOptions {
    std::string lexicon_path;
    double gamma = 0.9;
    int top_k = 1;
    bool no_chart = false;
    bool full_decompose = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    // With CONCEPT_PARSER_LEXICON set the positional is dropped entirely,
    // so token lists are never mistaken for a path.
    if (const char* env = std::getenv("CONCEPT_PARSER_LEXICON")) {
        opts.lexicon_path = env;
    } else {
        cmd->add_option("lexicon", opts.lexicon_path, "lexicon file")->required();
    }
    cmd->add_option("--gamma", opts.gamma, "distance weight base, in (0,1]")
        ->check(CLI::Range(1e-9, 1.0));
    cmd->add_option("--top-k", opts.top_k, "number of interpretations")->check(CLI::Range(1, 1000));
    cmd->add_flag("--no-chart", opts.no_chart, "disable score memoization");
    cmd->add_flag("--full-decompose", opts.full_decompose,
                  "decompose into the full positive closure instead of direct parents");
}

semparse::AnalyzeConfig make_config(const CommonOptions& opts) {
    semparse::AnalyzeConfig config;
    config.gamma = opts.gamma;
    config.top_k = opts.top_k;
    config.match.full_closure_decompose = opts.full_decompose;
    return config;
}

int cmd_parse(const CommonOptions& opts, const std::vector<std::string>& tokens,
              const std::string& format) {
    auto lex = load_lexicon_file(opts.lexicon_path);
    std::vector<semparse::AttributeId> ids;
    try {
        ids = semparse::detail::resolve_tokens(lex, tokens);
    } catch (const semparse::ParserError& e) {
        throw CliError{kExitResolve, e.what()};
    }
    semparse::ScoreChart chart(!opts.no_chart);
    auto ranked = semparse::analyze(lex, ids, make_config(opts), &chart);

    if (format == "json") {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& interp : ranked)
            out.push_back(semparse::interpretation_to_json(lex, ids, interp));
        std::cout << (opts.top_k == 1 ? out.at(0).dump(2) : out.dump(2)) << "\n";
    } else if (format == "dot") {
        for (const auto& interp : ranked)
            std::cout << semparse::interpretation_to_dot(lex, ids, interp);
    } else {
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            if (opts.top_k > 1) std::cout << "#" << (i + 1) << " (score " << ranked[i].total_score << ") ";
            std::cout << semparse::interpretation_to_text(lex, ids, ranked[i]) << "\n";
        }
    }
    return 0;
}

int cmd_explain(const CommonOptions& opts, const std::string& head, const std::string& role,
                const std::string& candidate, bool as_json) {
    auto lex = load_lexicon_file(opts.lexicon_path);
    auto head_id = lex.find_attribute(head);
    auto cand_id = lex.find_attribute(candidate);
    if (!head_id) throw CliError{kExitResolve, "unknown token: " + head};
    if (!cand_id) throw CliError{kExitResolve, "unknown token: " + candidate};
    auto role_id = lex.find_case(role);
    const auto& frame = lex.case_frame(*head_id);
    if (!role_id || !frame.count(*role_id))
        throw CliError{kExitResolve, "case '" + role + "' absent from frame of " + head};

    semparse::MatchOptions match{opts.full_decompose};
    const auto& expectations = frame.at(*role_id);
    const auto& intrinsic = lex.effective_intrinsic(*cand_id);

    nlohmann::json traces = nlohmann::json::array();
    double total = 0.0;
    for (const auto& sf : expectations) {
        for (const auto& iff : intrinsic) {
            auto r = semparse::match_feature(lex, iff, sf, nullptr, match);
            total += r.score;
            if (as_json)
                traces.push_back(semparse::trace_to_json(lex, r));
            else
                semparse::trace_to_text(lex, r, std::cout);
        }
    }
    double c = expectations.empty() ? 0.0 : total / static_cast<double>(expectations.size());
    if (as_json) {
        std::cout << nlohmann::json{{"head", head},
                                    {"case", role},
                                    {"candidate", candidate},
                                    {"compatibility", c},
                                    {"traces", traces}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "C(" << candidate << ", " << head << "." << role << ") = " << c << "\n";
    }
    return 0;
}

int cmd_validate(const CommonOptions& opts) {
    auto lex = load_lexicon_file(opts.lexicon_path);
    std::cout << "concepts: " << lex.concept_count() - 1 << "\n";  // dummy excluded
    std::cout << "cases: " << lex.case_count() << "\n";
    std::cout << "dag height: " << lex.dag_height() << "\n";
    for (const auto& w : lex.warnings()) std::cout << "warning: " << w << "\n";
    std::cout << "ok\n";
    return 0;
}

int cmd_eval(const CommonOptions& opts, const std::string& corpus_path) {
    auto lex = load_lexicon_file(opts.lexicon_path);
    std::string text = read_file(corpus_path);
    try {
        auto records = semparse::parse_corpus(text);
        auto report = semparse::evaluate_corpus(lex, records, make_config(opts));
        std::cout << "# accuracy = exact edge-set match of top-1 against gold\n";
        for (std::size_t i = 0; i < report.records.size(); ++i) {
            const auto& rr = report.records[i];
            std::cout << "record " << (i + 1) << ": " << (rr.matched ? "match" : "MISMATCH")
                      << " (" << rr.correct_edges << "/" << rr.gold_edges << " gold edges)\n";
        }
        std::cout << "accuracy: " << report.accuracy << " %\n";
        std::cout << "edge precision: " << report.precision << " %\n";
        std::cout << "edge recall: " << report.recall << " %\n";
        return 0;
    } catch (const semparse::CorpusError& e) {
        throw CliError{kExitResolve, e.what()};
    } catch (const semparse::ParserError& e) {
        throw CliError{kExitResolve, e.what()};
    }
}

int cmd_bench(const CommonOptions& opts, int min_n, int max_n, int trials,
              std::uint64_t seed) {
    if (min_n < 1 || min_n > max_n) throw CliError{kExitUsage, "bad n range"};
    if (trials < 1) throw CliError{kExitUsage, "trials must be at least 1"};
    auto lex = load_lexicon_file(opts.lexicon_path);
    auto config = make_config(opts);
    config.max_tokens = static_cast<std::size_t>(max_n);
    config.max_exact_n = std::min(config.max_exact_n, 12);

    std::vector<double> log_n, log_pairs;
    std::cout << "n  mean_pair_computes  mean_feature_computes  mean_ms\n";
    for (int n = min_n; n <= max_n; n *= 2) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(n));
        double pair_sum = 0, feat_sum = 0, ms_sum = 0;
        for (int t = 0; t < trials; ++t) {
            auto tokens = semparse::generate_sequence(lex, n, rng);
            semparse::ScoreChart chart(!opts.no_chart);
            auto start = std::chrono::steady_clock::now();
            semparse::analyze(lex, tokens, config, &chart);
            auto elapsed = std::chrono::steady_clock::now() - start;
            pair_sum += static_cast<double>(chart.pair_computes);
            feat_sum += static_cast<double>(chart.feature_computes);
            ms_sum += std::chrono::duration<double, std::milli>(elapsed).count();
        }
        double mean_pairs = pair_sum / trials;
        std::cout << n << "  " << mean_pairs << "  " << feat_sum / trials << "  "
                  << ms_sum / trials << "\n";
        log_n.push_back(std::log(static_cast<double>(n)));
        log_pairs.push_back(std::log(std::max(mean_pairs, 1.0)));
        if (n == max_n) break;
    }

    // Least-squares slope of log(pair computes) vs log(n).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    auto m = static_cast<double>(log_n.size());
    for (std::size_t i = 0; i < log_n.size(); ++i) {
        sx += log_n[i];
        sy += log_pairs[i];
        sxx += log_n[i] * log_n[i];
        sxy += log_n[i] * log_pairs[i];
    }
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    std::cout << "growth exponent (pair computes vs n): " << slope << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semantic dependency parser for concept sequences"};
    app.require_subcommand(1);

    CommonOptions popts;
    std::vector<std::string> tokens;
    bool fmt_json = false, fmt_dot = false, fmt_text = false;
    auto* parse = app.add_subcommand("parse", "parse a token sequence");
    add_common(parse, popts);
    parse->add_option("tokens", tokens, "concept tokens")->required();
    auto* oj = parse->add_flag("--json", fmt_json, "JSON output");
    auto* od = parse->add_flag("--dot", fmt_dot, "DOT output");
    parse->add_flag("--text", fmt_text, "text output (default)")->excludes(oj)->excludes(od);
    od->excludes(oj);

    CommonOptions xopts;
    std::string head, role, candidate;
    bool explain_json = false;
    auto* explain = app.add_subcommand("explain", "trace the match of one slot candidate");
    add_common(explain, xopts);
    explain->add_option("head", head, "predicative token")->required();
    explain->add_option("case", role, "case role")->required();
    explain->add_option("candidate", candidate, "candidate token")->required();
    explain->add_flag("--json", explain_json, "JSON trace");

    CommonOptions vopts;
    auto* validate = app.add_subcommand("validate", "load and validate a lexicon");
    add_common(validate, vopts);

    CommonOptions eopts;
    std::string corpus_path;
    auto* eval = app.add_subcommand("eval", "evaluate against a gold corpus");
    add_common(eval, eopts);
    eval->add_option("corpus", corpus_path, "corpus file")->required();

    CommonOptions bopts;
    int min_n = 8, max_n = 32, trials = 5;
    std::uint64_t seed = 1;
    auto* bench = app.add_subcommand("bench", "measure pair-score scaling");
    add_common(bench, bopts);
    bench->add_option("--min-n", min_n, "smallest sequence length");
    bench->add_option("--max-n", max_n, "largest sequence length");
    bench->add_option("--trials", trials, "sequences per length");
    bench->add_option("--seed", seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (parse->parsed()) {
            std::string format = fmt_json ? "json" : fmt_dot ? "dot" : "text";
            return cmd_parse(popts, tokens, format);
        }
        if (explain->parsed()) return cmd_explain(xopts, head, role, candidate, explain_json);
        if (validate->parsed()) return cmd_validate(vopts);
        if (eval->parsed()) return cmd_eval(eopts, corpus_path);
        if (bench->parsed()) return cmd_bench(bopts, min_n, max_n, trials, seed);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const semparse::ParserError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResolve;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResolve;
    }
    return 0;
}
