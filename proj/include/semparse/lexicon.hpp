// Concept lexicon: multiple-inheritance graph, feature aggregation,
// subtype / contradiction queries.
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace semparse {

// Attributes and concept labels share one namespace; ids are indices
// into the lexicon's symbol table.
struct AttributeId {
    std::uint32_t index = 0;
    friend constexpr auto operator<=>(AttributeId, AttributeId) = default;
};

struct CaseId {
    std::uint32_t index = 0;
    friend constexpr auto operator<=>(CaseId, CaseId) = default;
};

// Attribute/value pair. Declared intrinsic values are +-1; aggregated
// values are arbitrary reals (sums of +-1 contributions).
struct Feature {
    AttributeId attribute;
    double value = 0.0;
    friend constexpr auto operator<=>(const Feature&, const Feature&) = default;
};

// Selectional expectation a predicate places on one of its case roles.
struct ExtrinsicFeature {
    CaseId role;
    Feature expected;
};

struct ConceptEntry {
    AttributeId id;
    std::vector<Feature> intrinsic;           // declared, values +-1
    std::vector<ExtrinsicFeature> extrinsic;  // real-valued strengths
    std::string gloss;

    bool predicative() const { return !extrinsic.empty(); }
};

class LexiconError : public std::runtime_error {
  public:
    LexiconError(std::string message, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                      : std::move(message)),
          line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

inline constexpr std::string_view kDummySymbol = "dummy_symbol";

// Immutable after load; safe for unrestricted concurrent reads.
class Lexicon {
  public:
    static Lexicon load(std::string_view text);

    AttributeId dummy() const { return AttributeId{0}; }

    std::optional<AttributeId> find_attribute(std::string_view name) const {
        auto it = attr_index_.find(std::string(name));
        if (it == attr_index_.end()) return std::nullopt;
        return AttributeId{it->second};
    }

    AttributeId attribute(std::string_view name) const {
        auto id = find_attribute(name);
        if (!id) throw LexiconError("unknown attribute: " + std::string(name));
        return *id;
    }

    std::optional<CaseId> find_case(std::string_view name) const {
        auto it = case_index_.find(std::string(name));
        if (it == case_index_.end()) return std::nullopt;
        return CaseId{it->second};
    }

    const std::string& name(AttributeId a) const { return attr_names_.at(a.index); }
    const std::string& name(CaseId c) const { return case_names_.at(c.index); }

    std::size_t concept_count() const { return entries_.size(); }
    std::size_t case_count() const { return case_names_.size(); }

    const ConceptEntry& entry(AttributeId a) const { return entries_.at(a.index); }

    const std::vector<std::string>& warnings() const { return warnings_; }

    // a2 reachable from a1 through positive links; reflexivity excluded.
    bool implies(AttributeId a1, AttributeId a2) const {
        check(a1);
        check(a2);
        if (a1 == a2) return false;
        return in_closure(a1, a2);
    }

    // Some x in {a1} u closure(a1) is opposed to a2 or declares <a2,-1>.
    bool contradicts(AttributeId a1, AttributeId a2) const {
        check(a1);
        check(a2);
        if (clashes(a1, a2)) return true;
        for (AttributeId x : closure_[a1.index])
            if (clashes(x, a2)) return true;
        return false;
    }

    bool is_primitive(AttributeId a) const {
        check(a);
        return parents_[a.index].empty();
    }

    // Direct positive parents (one inheritance level).
    const std::vector<AttributeId>& decompose(AttributeId a) const {
        check(a);
        if (parents_[a.index].empty())
            throw LexiconError("cannot decompose primitive attribute: " + name(a));
        return parents_[a.index];
    }

    // Positive closure of a, excluding a itself, sorted by id.
    const std::vector<AttributeId>& ancestors(AttributeId a) const {
        check(a);
        return closure_[a.index];
    }

    // Intersection of the positive closures, each including the concept itself.
    std::vector<AttributeId> common_ancestors(AttributeId c1, AttributeId c2) const {
        check(c1);
        check(c2);
        std::vector<AttributeId> left{c1}, right{c2};
        left.insert(left.end(), closure_[c1.index].begin(), closure_[c1.index].end());
        right.insert(right.end(), closure_[c2.index].begin(), closure_[c2.index].end());
        std::sort(left.begin(), left.end());
        std::sort(right.begin(), right.end());
        std::vector<AttributeId> out;
        std::set_intersection(left.begin(), left.end(), right.begin(), right.end(),
                              std::back_inserter(out));
        return out;
    }

    // Aggregated intrinsic feature set: +1 per distinct member of the
    // positive closure (including c itself), plus every declared negative
    // feature of those members; same-attribute contributions summed.
    // Zero-valued sums are kept.
    const std::vector<Feature>& effective_intrinsic(AttributeId c) const {
        check(c);
        return effective_[c.index];
    }

    // Own extrinsic features merged with inherited ones, grouped by case;
    // same (case, attribute) expectations summed. Empty for
    // non-predicative concepts.
    const std::map<CaseId, std::vector<Feature>>& case_frame(AttributeId c) const {
        check(c);
        return frames_[c.index];
    }

    bool predicative(AttributeId c) const { return !case_frame(c).empty(); }

    // Longest positive path starting at a (0 for primitives).
    int height(AttributeId a) const {
        check(a);
        return heights_[a.index];
    }

    int dag_height() const { return dag_height_; }

  private:
    void check(AttributeId a) const {
        if (a.index >= entries_.size()) throw LexiconError("unknown attribute id");
    }

    bool in_closure(AttributeId a, AttributeId target) const {
        const auto& cl = closure_[a.index];
        return std::binary_search(cl.begin(), cl.end(), target);
    }

    // Direct clash: declared opposition {x, a2} or x declares <a2,-1>.
    bool clashes(AttributeId x, AttributeId a2) const {
        if (oppositions_.count(pack(x, a2))) return true;
        for (const Feature& nf : negatives_[x.index])
            if (nf.attribute == a2) return true;
        return false;
    }

    static std::uint64_t pack(AttributeId a, AttributeId b) {
        auto lo = std::min(a.index, b.index);
        auto hi = std::max(a.index, b.index);
        return (std::uint64_t(lo) << 32) | hi;
    }

    void finalize();

    std::vector<std::string> attr_names_;
    std::unordered_map<std::string, std::uint32_t> attr_index_;
    std::vector<std::string> case_names_;
    std::unordered_map<std::string, std::uint32_t> case_index_;
    std::vector<ConceptEntry> entries_;
    std::set<std::uint64_t> oppositions_;
    std::vector<std::string> warnings_;

    // Derived at load.
    std::vector<std::vector<AttributeId>> parents_;    // direct positive links
    std::vector<std::vector<Feature>> negatives_;      // declared <t,-1>
    std::vector<std::vector<AttributeId>> closure_;    // sorted, excl. self
    std::vector<std::vector<Feature>> effective_;
    std::vector<std::map<CaseId, std::vector<Feature>>> frames_;
    std::vector<int> heights_;
    int dag_height_ = 0;

    friend class LexiconParser;
};

namespace detail {

inline bool is_ident(std::string_view s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char ch : s)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
    return true;
}

inline std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace detail

class LexiconParser {
  public:
    // Line-oriented format: `concept <id>` opens an entry; indented
    // `has <attr> <+1|-1>`, `case <case> <attr> <real>`, `gloss "<text>"`
    // lines fill it. Top-level `oppose <a> <b>`. `#` starts a comment.
    Lexicon parse(std::string_view text) {
        Lexicon lex;
        lex.attr_names_.emplace_back(kDummySymbol);
        lex.attr_index_.emplace(std::string(kDummySymbol), 0);
        lex.entries_.push_back(ConceptEntry{AttributeId{0}, {}, {}, ""});

        struct PendingRef {
            std::string attr;
            int line;
        };
        std::vector<PendingRef> refs;
        std::vector<std::pair<std::pair<std::string, std::string>, int>> oppose_lines;
        // index, not pointer: interning may reallocate the entry vector
        std::optional<std::uint32_t> current;

        int lineno = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t eol = text.find('\n', pos);
            std::string_view raw = text.substr(pos, eol == std::string_view::npos
                                                        ? std::string_view::npos
                                                        : eol - pos);
            pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
            ++lineno;

            std::string_view line = raw.substr(0, raw.find('#'));
            auto tokens = detail::split_ws(line);
            if (tokens.empty()) continue;
            const std::string& directive = tokens[0];

            if (directive == "concept") {
                if (tokens.size() != 2)
                    throw LexiconError("concept takes exactly one identifier", lineno);
                current = declare(lex, tokens[1], lineno).index;
            } else if (directive == "has") {
                if (!current) throw LexiconError("'has' outside a concept block", lineno);
                if (tokens.size() != 3)
                    throw LexiconError("expected: has <attr> <+1|-1>", lineno);
                double v = parse_real(tokens[2], lineno);
                if (v != 1.0 && v != -1.0)
                    throw LexiconError("intrinsic value must be +1 or -1, got " + tokens[2],
                                       lineno);
                AttributeId attr = refer(lex, tokens[1], lineno, refs);
                ConceptEntry& cur = lex.entries_[*current];
                for (const Feature& f : cur.intrinsic)
                    if (f.attribute == attr)
                        throw LexiconError("duplicate intrinsic attribute '" + tokens[1] +
                                               "' on concept " + lex.name(cur.id),
                                           lineno);
                cur.intrinsic.push_back(Feature{attr, v});
            } else if (directive == "case") {
                if (!current) throw LexiconError("'case' outside a concept block", lineno);
                if (tokens.size() != 4)
                    throw LexiconError("expected: case <case> <attr> <real>", lineno);
                if (!detail::is_ident(tokens[1]))
                    throw LexiconError("bad case identifier: " + tokens[1], lineno);
                CaseId role = intern_case(lex, tokens[1]);
                AttributeId attr = refer(lex, tokens[2], lineno, refs);
                double v = parse_real(tokens[3], lineno);
                lex.entries_[*current].extrinsic.push_back(
                    ExtrinsicFeature{role, Feature{attr, v}});
            } else if (directive == "gloss") {
                if (!current) throw LexiconError("'gloss' outside a concept block", lineno);
                auto open = line.find('"');
                auto close = line.rfind('"');
                if (open == std::string_view::npos || close <= open)
                    throw LexiconError("gloss takes a quoted string", lineno);
                lex.entries_[*current].gloss =
                    std::string(line.substr(open + 1, close - open - 1));
            } else if (directive == "oppose") {
                if (tokens.size() != 3)
                    throw LexiconError("expected: oppose <attr> <attr>", lineno);
                if (tokens[1] == tokens[2])
                    throw LexiconError("self-opposition on " + tokens[1], lineno);
                refer(lex, tokens[1], lineno, refs);
                refer(lex, tokens[2], lineno, refs);
                oppose_lines.push_back({{tokens[1], tokens[2]}, lineno});
            } else {
                throw LexiconError("unknown directive: " + directive, lineno);
            }
        }

        // Closed world: every referenced attribute must be declared.
        for (const auto& ref : refs) {
            if (ref.attr == kDummySymbol)
                throw LexiconError("reserved symbol dummy_symbol may not be referenced",
                                   ref.line);
            if (!declared_.count(ref.attr))
                throw LexiconError("dangling attribute reference: " + ref.attr, ref.line);
        }
        for (const auto& [pair, line] : oppose_lines) {
            AttributeId a = lex.attribute(pair.first);
            AttributeId b = lex.attribute(pair.second);
            lex.oppositions_.insert(Lexicon::pack(a, b));
        }

        lex.finalize();
        return lex;
    }

  private:
    AttributeId declare(Lexicon& lex, const std::string& name, int lineno) {
        if (!detail::is_ident(name))
            throw LexiconError("bad identifier: " + name, lineno);
        if (name == kDummySymbol)
            throw LexiconError("dummy_symbol is reserved", lineno);
        if (declared_.count(name))
            throw LexiconError("duplicate concept id: " + name, lineno);
        declared_.insert(name);
        AttributeId id = intern(lex, name);
        lex.entries_[id.index].id = id;
        return id;
    }

    template <class Refs>
    AttributeId refer(Lexicon& lex, const std::string& name, int lineno, Refs& refs) {
        if (!detail::is_ident(name))
            throw LexiconError("bad identifier: " + name, lineno);
        refs.push_back({name, lineno});
        return intern(lex, name);
    }

    AttributeId intern(Lexicon& lex, const std::string& name) {
        auto it = lex.attr_index_.find(name);
        if (it != lex.attr_index_.end()) return AttributeId{it->second};
        auto idx = static_cast<std::uint32_t>(lex.attr_names_.size());
        lex.attr_names_.push_back(name);
        lex.attr_index_.emplace(name, idx);
        lex.entries_.push_back(ConceptEntry{AttributeId{idx}, {}, {}, ""});
        return AttributeId{idx};
    }

    CaseId intern_case(Lexicon& lex, const std::string& name) {
        auto it = lex.case_index_.find(name);
        if (it != lex.case_index_.end()) return CaseId{it->second};
        auto idx = static_cast<std::uint32_t>(lex.case_names_.size());
        lex.case_names_.push_back(name);
        lex.case_index_.emplace(name, idx);
        return CaseId{idx};
    }

    static double parse_real(const std::string& s, int lineno) {
        try {
            std::size_t used = 0;
            double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw LexiconError("bad numeric value: " + s, lineno);
        }
    }

    std::set<std::string, std::less<>> declared_;
};

inline Lexicon Lexicon::load(std::string_view text) {
    LexiconParser parser;
    return parser.parse(text);
}

inline void Lexicon::finalize() {
    const std::size_t n = entries_.size();
    parents_.assign(n, {});
    negatives_.assign(n, {});
    for (const ConceptEntry& e : entries_) {
        for (const Feature& f : e.intrinsic) {
            if (f.value > 0)
                parents_[e.id.index].push_back(f.attribute);
            else
                negatives_[e.id.index].push_back(f);
        }
    }

    // Kahn toposort over positive links; leftovers form a cycle.
    std::vector<int> out_deg(n, 0);
    std::vector<std::vector<AttributeId>> children(n);
    for (std::size_t i = 0; i < n; ++i) {
        out_deg[i] = static_cast<int>(parents_[i].size());
        for (AttributeId p : parents_[i]) children[p.index].push_back(AttributeId{(std::uint32_t)i});
    }
    std::vector<AttributeId> order;
    for (std::size_t i = 0; i < n; ++i)
        if (out_deg[i] == 0) order.push_back(AttributeId{(std::uint32_t)i});
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (AttributeId ch : children[order[head].index])
            if (--out_deg[ch.index] == 0) order.push_back(ch);
    }
    if (order.size() != n) {
        std::string members;
        for (std::size_t i = 0; i < n; ++i)
            if (out_deg[i] > 0) members += (members.empty() ? "" : ", ") + attr_names_[i];
        throw LexiconError("inheritance cycle among: {" + members + "}");
    }

    // Closures and heights in topological order (parents first).
    closure_.assign(n, {});
    heights_.assign(n, 0);
    for (AttributeId a : order) {
        std::set<AttributeId> cl;
        int h = 0;
        for (AttributeId p : parents_[a.index]) {
            cl.insert(p);
            cl.insert(closure_[p.index].begin(), closure_[p.index].end());
            h = std::max(h, heights_[p.index] + 1);
        }
        closure_[a.index].assign(cl.begin(), cl.end());
        heights_[a.index] = h;
        dag_height_ = std::max(dag_height_, h);
    }

    // Aggregated intrinsic sets and inherited case frames.
    effective_.assign(n, {});
    frames_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
        AttributeId c{(std::uint32_t)i};
        std::map<AttributeId, double> sums;
        std::vector<AttributeId> members{c};
        members.insert(members.end(), closure_[i].begin(), closure_[i].end());
        for (AttributeId m : members) {
            sums[m] += 1.0;
            for (const Feature& nf : negatives_[m.index]) sums[nf.attribute] += nf.value;
        }
        for (const auto& [attr, v] : sums) effective_[i].push_back(Feature{attr, v});

        std::map<std::pair<CaseId, AttributeId>, double> frame_sums;
        for (AttributeId m : members)
            for (const ExtrinsicFeature& ef : entries_[m.index].extrinsic)
                frame_sums[{ef.role, ef.expected.attribute}] += ef.expected.value;
        for (const auto& [key, v] : frame_sums)
            frames_[i][key.first].push_back(Feature{key.second, v});
    }

    // Inconsistent data: a both implies and contradicts b.
    for (std::size_t i = 0; i < n; ++i) {
        AttributeId a{(std::uint32_t)i};
        for (AttributeId b : closure_[i]) {
            if (contradicts(a, b))
                warnings_.push_back("attribute '" + attr_names_[i] + "' both implies and contradicts '" +
                                    attr_names_[b.index] + "'");
        }
    }
}

}  // namespace semparse
