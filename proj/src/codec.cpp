#include "recon/codec.hpp"

#include "recon/errors.hpp"
#include "recon/parallel.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>

namespace recon {

int Definition::local_count() const {
    int n = 0;
    for (int v : body.variables())
        if (v >= head_arity) ++n;
    return n;
}

Definition make_definition(std::string head, int head_arity, Sentence body) {
    if (head_arity < 1)
        throw ParseError("definition '" + head + "' needs at least one head argument");
    if (body.size() < 2)
        throw ParseError("definition '" + head +
                         "' needs a body of at least 2 atoms (identity mappings are excluded)");

    std::vector<int> vars = body.variables();
    std::set<int> var_set(vars.begin(), vars.end());
    for (int i = 0; i < head_arity; ++i)
        if (!var_set.count(i))
            throw ParseError("definition '" + head + "': head variable V" + std::to_string(i) +
                             " does not occur in the body");

    // Compact local indices into head_arity.. before normalizing them.
    Substitution compact;
    int next = head_arity;
    for (int v : vars)
        if (v >= head_arity) compact[v] = Term::variable(next++);
    if (!compact.empty()) body = apply_substitution(body, compact);
    body = canonicalize_suffix(body, head_arity);

    if (!is_connected(body))
        throw ParseError("definition '" + head + "' has a disconnected body");
    for (const auto& a : body.atoms())
        if (a.predicate == head)
            throw ParseError("definition '" + head + "' mentions its own head predicate");

    return Definition{std::move(head), head_arity, std::move(body)};
}

DefinitionSet::DefinitionSet(std::vector<Definition> defs, bool forbid_equal_bodies)
    : defs_(std::move(defs)) {
    std::set<std::string> heads;
    for (const auto& d : defs_)
        if (!heads.insert(d.head).second)
            throw ParseError("duplicate definition for hidden predicate '" + d.head + "'");
    for (const auto& d : defs_)
        for (const auto& a : d.body.atoms())
            if (heads.count(a.predicate))
                throw ParseError("definition '" + d.head + "' uses hidden predicate '" +
                                 a.predicate + "' of the same layer (layers are stratified)");
    if (forbid_equal_bodies) {
        std::set<Sentence> bodies;
        for (const auto& d : defs_)
            if (!bodies.insert(canonicalize(d.body)).second)
                throw ParseError("definition '" + d.head +
                                 "' repeats another definition's body up to renaming");
    }
}

const Definition* DefinitionSet::find(const std::string& head) const {
    for (const auto& d : defs_)
        if (d.head == head) return &d;
    return nullptr;
}

long long DefinitionSet::body_cost() const {
    long long n = 0;
    for (const auto& d : defs_) n += d.body.size();
    return n;
}

std::vector<Atom> unfold(const Atom& hidden, const Definition& d, int& fresh_var) {
    if (hidden.arity() != d.head_arity)
        throw UnknownHiddenPredicate("atom " + to_string(hidden) + " does not match '" +
                                     d.head + "/" + std::to_string(d.head_arity) + "'");
    Substitution theta;
    for (int i = 0; i < d.head_arity; ++i)
        theta[i] = hidden.terms[static_cast<std::size_t>(i)];
    for (int v : d.body.variables())
        if (v >= d.head_arity) theta[v] = Term::variable(fresh_var++);
    std::vector<Atom> out;
    out.reserve(d.body.atoms().size());
    for (const auto& a : d.body.atoms()) out.push_back(apply_substitution(a, theta));
    return out;
}

KnowledgeBase materialize_hidden_kb(const KnowledgeBase& kb, const DefinitionSet& F) {
    KnowledgeBase hidden;
    for (const auto& c : kb.constants()) hidden.declare_constant(c);
    for (const auto& d : F.definitions()) {
        for (const auto& a : d.body.atoms()) {
            if (!kb.has_predicate(a.predicate) || kb.arity(a.predicate) != a.arity())
                throw VocabularyMismatch("definition '" + d.head + "' body predicate '" +
                                         a.predicate + "/" + std::to_string(a.arity()) +
                                         "' is not in the knowledge base");
        }
        if (kb.has_predicate(d.head))
            throw VocabularyMismatch("hidden predicate '" + d.head +
                                     "' collides with a knowledge-base predicate");
        hidden.declare_predicate(d.head, d.head_arity);
        std::vector<int> head_vars(static_cast<std::size_t>(d.head_arity));
        for (int i = 0; i < d.head_arity; ++i) head_vars[static_cast<std::size_t>(i)] = i;
        for (const auto& tuple : kb.all_matches(d.body, head_vars)) {
            Atom fact{d.head, {}};
            fact.terms.reserve(tuple.size());
            for (const auto& c : tuple) fact.terms.push_back(Term::constant_term(c));
            hidden.add_fact(fact);
        }
    }
    return hidden;
}

namespace {

struct Embedding {
    std::uint32_t mask = 0; // covered atoms of s
    Atom hidden;
};

// All atom-injective homomorphisms of `body` into `s`; each yields the set of
// covered atoms and the hidden atom formed by the head-variable images.
void collect_embeddings(const Definition& d, const Sentence& s, std::vector<Embedding>& out) {
    const auto& body = d.body.atoms();
    const auto& target = s.atoms();
    std::vector<int> chosen(body.size(), -1);
    std::uint32_t used = 0;
    Substitution theta;

    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == body.size()) {
            Atom hidden{d.head, {}};
            hidden.terms.reserve(static_cast<std::size_t>(d.head_arity));
            for (int v = 0; v < d.head_arity; ++v) hidden.terms.push_back(theta.at(v));
            std::uint32_t mask = used;
            out.push_back(Embedding{mask, std::move(hidden)});
            return;
        }
        const Atom& b = body[i];
        for (std::size_t j = 0; j < target.size(); ++j) {
            if (used & (1u << j)) continue;
            const Atom& t = target[j];
            if (t.predicate != b.predicate || t.terms.size() != b.terms.size()) continue;
            Substitution saved = theta;
            bool ok = true;
            for (std::size_t p = 0; p < b.terms.size() && ok; ++p) {
                const Term& bt = b.terms[p];
                const Term& tt = t.terms[p];
                if (!bt.is_variable()) {
                    ok = (bt == tt);
                } else if (auto it = theta.find(bt.var); it != theta.end()) {
                    ok = (it->second == tt);
                } else {
                    theta[bt.var] = tt;
                }
            }
            if (ok) {
                used |= (1u << j);
                rec(i + 1);
                used &= ~(1u << j);
            }
            theta = std::move(saved);
        }
    };
    rec(0);
}

} // namespace

std::optional<Sentence> encode_sentence(const Sentence& s, const DefinitionSet& F,
                                        const LanguageBias& b_Q) {
    if (s.empty()) return std::nullopt;
    if (s.size() > 30)
        throw WorkLimitExceeded("encoding a sentence of " + std::to_string(s.size()) +
                                " atoms exceeds the supported size");

    std::vector<Embedding> embeddings;
    for (const auto& d : F.definitions()) {
        // A definition with body-local variables unfolds to fresh-variable
        // atoms that can never equal atoms of s; it cannot take part in an
        // exact cover.
        if (d.has_locals()) continue;
        collect_embeddings(d, s, embeddings);
    }
    if (embeddings.empty()) return std::nullopt;
    if (embeddings.size() > 5000)
        throw WorkLimitExceeded("encoding search over " + std::to_string(embeddings.size()) +
                                " embeddings exceeds the supported size");
    std::sort(embeddings.begin(), embeddings.end(),
              [](const Embedding& a, const Embedding& b) { return a.hidden < b.hidden; });

    const std::uint32_t full = (s.size() >= 32) ? ~0u : ((1u << s.size()) - 1u);
    const int max_k = std::min<int>(b_Q.max_len, static_cast<int>(embeddings.size()));

    // feasible(i, mask, r): can r more embeddings from index i on complete the
    // cover? Memoized so the DFS only walks branches that can still succeed.
    std::map<std::tuple<int, std::uint32_t, int>, bool> memo;
    std::function<bool(int, std::uint32_t, int)> feasible = [&](int i, std::uint32_t mask,
                                                                int r) {
        if (mask == full) return true;
        if (r == 0 || i == static_cast<int>(embeddings.size())) return false;
        auto key = std::make_tuple(i, mask, r);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        bool ok = false;
        for (int j = i; j < static_cast<int>(embeddings.size()) && !ok; ++j)
            ok = feasible(j + 1, mask | embeddings[static_cast<std::size_t>(j)].mask, r - 1);
        memo[key] = ok;
        return ok;
    };

    std::optional<Sentence> best;
    std::vector<const Atom*> chosen;
    std::function<void(int, std::uint32_t, int)> dfs = [&](int i, std::uint32_t mask, int k) {
        if (static_cast<int>(chosen.size()) == k) {
            if (mask != full) return;
            std::vector<Atom> atoms;
            atoms.reserve(chosen.size());
            for (const Atom* a : chosen) atoms.push_back(*a);
            Sentence e = canonicalize(Sentence(std::move(atoms)));
            if (!conforms(b_Q, e)) return;
            if (!best || e < *best) best = std::move(e);
            return;
        }
        if (!feasible(i, mask, k - static_cast<int>(chosen.size()))) return;
        for (int j = i; j < static_cast<int>(embeddings.size()); ++j) {
            chosen.push_back(&embeddings[static_cast<std::size_t>(j)].hidden);
            dfs(j + 1, mask | embeddings[static_cast<std::size_t>(j)].mask, k);
            chosen.pop_back();
        }
    };

    for (int k = 1; k <= max_k && !best; ++k) dfs(0, 0, k);
    return best;
}

long long TheoryEncoding::encoded_cost() const {
    long long n = 0;
    for (const auto& [_, e] : encoded) n += e.size();
    return n;
}

TheoryEncoding encode_theory(const Theory& T, const DefinitionSet& F,
                             const LanguageBias& b_Q, int jobs) {
    std::vector<std::optional<Sentence>> slots(T.sentences.size());
    parallel_for(T.sentences.size(), jobs, [&](std::size_t i) {
        slots[i] = encode_sentence(T.sentences[i], F, b_Q);
    });
    TheoryEncoding out;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i])
            out.encoded.emplace(T.sentences[i], *slots[i]);
        else
            out.uncovered.push_back(T.sentences[i]);
    }
    return out;
}

Sentence decode_sentence(const Sentence& e, const DefinitionSet& F) {
    int fresh = 0;
    for (int v : e.variables()) fresh = std::max(fresh, v + 1);
    std::vector<Atom> atoms;
    for (const auto& a : e.atoms()) {
        const Definition* d = F.find(a.predicate);
        if (!d)
            throw UnknownHiddenPredicate("no definition for hidden predicate '" +
                                         a.predicate + "'");
        auto unfolded = unfold(a, *d, fresh);
        atoms.insert(atoms.end(), unfolded.begin(), unfolded.end());
    }
    return reduce_core(Sentence(std::move(atoms)));
}

Theory decode_theory(const std::vector<Sentence>& hidden, const DefinitionSet& F, int jobs) {
    std::vector<Sentence> slots(hidden.size());
    parallel_for(hidden.size(), jobs, [&](std::size_t i) {
        slots[i] = decode_sentence(hidden[i], F);
    });
    std::map<std::string, int> vocab;
    for (const auto& s : slots)
        for (const auto& a : s.atoms()) vocab.emplace(a.predicate, a.arity());
    return make_theory(std::move(slots), std::move(vocab));
}

// --- definition files -------------------------------------------------

namespace {

std::string trim_copy(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

Definition parse_definition_line(const std::string& line) {
    auto arrow = line.find("<=>");
    if (arrow == std::string::npos)
        throw ParseError("expected `head(...) <=> body` in '" + line + "'");

    std::map<std::string, int> scope;
    // Parsing the head first hands its variables the indices 0..k-1 in head
    // argument order; body locals then continue from k.
    Sentence head_s = parse_sentence(line.substr(0, arrow), scope);
    if (head_s.size() != 1)
        throw ParseError("definition head must be a single atom");
    const Atom& head = head_s.atoms()[0];
    for (std::size_t i = 0; i < head.terms.size(); ++i) {
        if (!head.terms[i].is_variable())
            throw ParseError("definition head arguments must be variables");
        if (head.terms[i].var != static_cast<int>(i))
            throw ParseError("definition head arguments must be distinct variables");
    }

    Sentence body = parse_sentence(line.substr(arrow + 3), scope);
    return make_definition(head.predicate, head.arity(), std::move(body));
}

} // namespace

DefinitionSet parse_definitions_text(const std::string& text) {
    std::vector<Definition> defs;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto cut = line.find_first_of("%#"); cut != std::string::npos) line.resize(cut);
        std::string body = trim_copy(line);
        if (body.empty()) continue;
        try {
            defs.push_back(parse_definition_line(body));
        } catch (const ParseError& e) {
            if (e.line > 0) throw;
            throw ParseError(e.what(), line_no);
        }
    }
    return DefinitionSet(std::move(defs));
}

DefinitionSet parse_definitions_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open definition file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_definitions_text(buf.str());
}

std::string write_definitions(const DefinitionSet& F) {
    std::string out;
    for (const auto& d : F.definitions()) {
        out += d.head;
        out += "(";
        for (int i = 0; i < d.head_arity; ++i) {
            if (i) out += ",";
            out += "V" + std::to_string(i);
        }
        out += ") <=> ";
        out += to_string_raw(d.body);
        out += ".\n";
    }
    return out;
}

} // namespace recon
