#include "recon/logic.hpp"

#include "recon/errors.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace recon {

Sentence::Sentence(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    std::sort(atoms_.begin(), atoms_.end());
    atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

int Sentence::term_count() const {
    int n = 0;
    for (const auto& a : atoms_) n += a.arity();
    return n;
}

std::vector<int> Sentence::variables() const {
    std::set<int> vars;
    for (const auto& a : atoms_)
        for (const auto& t : a.terms)
            if (t.is_variable()) vars.insert(t.var);
    return {vars.begin(), vars.end()};
}

Atom apply_substitution(const Atom& a, const Substitution& theta) {
    Atom out{a.predicate, {}};
    out.terms.reserve(a.terms.size());
    for (const auto& t : a.terms) {
        if (t.is_variable()) {
            auto it = theta.find(t.var);
            out.terms.push_back(it == theta.end() ? t : it->second);
        } else {
            out.terms.push_back(t);
        }
    }
    return out;
}

Sentence apply_substitution(const Sentence& s, const Substitution& theta) {
    std::vector<Atom> atoms;
    atoms.reserve(s.atoms().size());
    for (const auto& a : s.atoms()) atoms.push_back(apply_substitution(a, theta));
    return Sentence(std::move(atoms));
}

Sentence canonicalize(const Sentence& s) {
    std::vector<int> vars = s.variables();
    const int k = static_cast<int>(vars.size());
    if (k > 9)
        throw WorkLimitExceeded(
            "canonicalization over " + std::to_string(k) +
            " variables exceeds the 9-variable ceiling; tighten max_vars");
    if (k == 0) return s;

    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::optional<Sentence> best;
    do {
        Substitution theta;
        for (int i = 0; i < k; ++i) theta[vars[i]] = Term::variable(perm[i]);
        Sentence candidate = apply_substitution(s, theta);
        if (!best || candidate < *best) best = std::move(candidate);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return *best;
}

namespace {

// Tries to map `from.atoms()[i..]` into `into`, extending theta.
bool extend_homomorphism(const Sentence& from, const Sentence& into,
                         const std::set<int>& frozen, std::size_t i,
                         Substitution& theta) {
    if (i == from.atoms().size()) return true;
    const Atom& a = from.atoms()[i];
    for (const Atom& b : into.atoms()) {
        if (b.predicate != a.predicate || b.terms.size() != a.terms.size()) continue;
        Substitution saved = theta;
        bool ok = true;
        for (std::size_t j = 0; j < a.terms.size() && ok; ++j) {
            const Term& t = a.terms[j];
            const Term& u = b.terms[j];
            if (!t.is_variable()) {
                ok = (t == u);
            } else if (frozen.count(t.var)) {
                ok = (u.is_variable() && u.var == t.var);
            } else if (auto it = theta.find(t.var); it != theta.end()) {
                ok = (it->second == u);
            } else {
                theta[t.var] = u;
            }
        }
        if (ok && extend_homomorphism(from, into, frozen, i + 1, theta)) return true;
        theta = std::move(saved);
    }
    return false;
}

} // namespace

std::optional<Substitution> find_homomorphism(const Sentence& from, const Sentence& into,
                                              const std::set<int>& frozen) {
    Substitution theta;
    if (extend_homomorphism(from, into, frozen, 0, theta)) return theta;
    return std::nullopt;
}

namespace {

// Repeatedly folds the sentence onto proper subsets until no atom is
// redundant. Homomorphisms must fix `frozen` variables.
Sentence fold_to_core(Sentence cur, const std::set<int>& frozen) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < cur.atoms().size(); ++i) {
            std::vector<Atom> rest;
            rest.reserve(cur.atoms().size() - 1);
            for (std::size_t j = 0; j < cur.atoms().size(); ++j)
                if (j != i) rest.push_back(cur.atoms()[j]);
            Sentence candidate(std::move(rest));
            if (auto h = find_homomorphism(cur, candidate, frozen)) {
                cur = apply_substitution(cur, *h);
                changed = true;
                break;
            }
        }
    }
    return cur;
}

} // namespace

Sentence reduce_core(const Sentence& s) {
    return canonicalize(fold_to_core(s, {}));
}

Sentence reduce_core_frozen(const Sentence& s, const std::set<int>& frozen) {
    return fold_to_core(s, frozen);
}

Sentence canonicalize_suffix(const Sentence& s, int frozen_prefix) {
    std::vector<int> locals;
    for (int v : s.variables())
        if (v >= frozen_prefix) locals.push_back(v);
    const int m = static_cast<int>(locals.size());
    if (m > 9)
        throw WorkLimitExceeded("canonicalization over " + std::to_string(m) +
                                " local variables exceeds the 9-variable ceiling");
    if (m == 0) return s;

    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::optional<Sentence> best;
    do {
        Substitution theta;
        for (int i = 0; i < m; ++i) theta[locals[i]] = Term::variable(frozen_prefix + perm[i]);
        Sentence candidate = apply_substitution(s, theta);
        if (!best || candidate < *best) best = std::move(candidate);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return *best;
}

bool is_connected(const Sentence& s) {
    if (s.atoms().size() <= 1) return true;

    std::map<int, int> parent;
    auto find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (int v : s.variables()) parent[v] = v;

    for (const auto& a : s.atoms()) {
        int first = -1;
        for (const auto& t : a.terms) {
            if (!t.is_variable()) continue;
            if (first < 0) {
                first = t.var;
            } else {
                parent[find(first)] = find(t.var);
            }
        }
        if (first < 0) return false; // variable-free atom can't join anything
    }

    if (parent.empty()) return false;
    int root = find(parent.begin()->first);
    for (auto& [v, _] : parent)
        if (find(v) != root) return false;
    return true;
}

// --- text form -----------------------------------------------------------

namespace {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    std::string identifier() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (pos == start)
            throw ParseError("expected an identifier near '" +
                             std::string(text.substr(start, 12)) + "'");
        return std::string(text.substr(start, pos - start));
    }
};

Term parse_term(Cursor& cur, std::map<std::string, int>& scope) {
    std::string name = cur.identifier();
    char head = name[0];
    if (std::isupper(static_cast<unsigned char>(head))) {
        auto it = scope.find(name);
        if (it == scope.end()) {
            int next = 0;
            for (const auto& [_, idx] : scope) next = std::max(next, idx + 1);
            it = scope.emplace(name, next).first;
        }
        return Term::variable(it->second);
    }
    if (std::islower(static_cast<unsigned char>(head))) return Term::constant_term(name);
    throw ParseError("term '" + name + "' must start with a letter");
}

Atom parse_atom_at(Cursor& cur, std::map<std::string, int>& scope) {
    std::string pred = cur.identifier();
    if (!std::islower(static_cast<unsigned char>(pred[0])))
        throw ParseError("predicate '" + pred + "' must start with a lowercase letter");
    if (!cur.eat('('))
        throw ParseError("expected '(' after predicate '" + pred + "'");
    Atom atom{std::move(pred), {}};
    if (cur.peek() == ')')
        throw ParseError("atom '" + atom.predicate + "' needs at least one argument");
    do {
        atom.terms.push_back(parse_term(cur, scope));
    } while (cur.eat(','));
    if (!cur.eat(')'))
        throw ParseError("expected ')' to close atom '" + atom.predicate + "'");
    return atom;
}

} // namespace

Sentence parse_sentence(std::string_view text, std::map<std::string, int>& scope) {
    Cursor cur{text};
    std::vector<Atom> atoms;
    if (cur.done()) return Sentence{};
    do {
        atoms.push_back(parse_atom_at(cur, scope));
    } while (cur.eat(','));
    cur.eat('.');
    if (!cur.done())
        throw ParseError("unexpected trailing text '" +
                         std::string(cur.text.substr(cur.pos, 12)) + "'");
    return Sentence(std::move(atoms));
}

Sentence parse_sentence(std::string_view text) {
    std::map<std::string, int> scope;
    return parse_sentence(text, scope);
}

Atom parse_atom(std::string_view text) {
    Cursor cur{text};
    std::map<std::string, int> scope;
    Atom atom = parse_atom_at(cur, scope);
    if (!cur.done())
        throw ParseError("unexpected trailing text after atom");
    return atom;
}

std::string to_string(const Term& t) {
    return t.is_variable() ? "V" + std::to_string(t.var) : t.constant;
}

std::string to_string(const Atom& a) {
    std::string out = a.predicate + "(";
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        if (i) out += ",";
        out += to_string(a.terms[i]);
    }
    out += ")";
    return out;
}

std::string to_string(const Sentence& s) {
    // Variables display as V0, V1, ... in order of first occurrence.
    std::map<int, int> display;
    for (const auto& a : s.atoms())
        for (const auto& t : a.terms)
            if (t.is_variable() && !display.count(t.var)) {
                int next = static_cast<int>(display.size());
                display[t.var] = next;
            }
    std::string out;
    for (std::size_t i = 0; i < s.atoms().size(); ++i) {
        if (i) out += ", ";
        Atom shown = s.atoms()[i];
        for (auto& t : shown.terms)
            if (t.is_variable()) t.var = display.at(t.var);
        out += to_string(shown);
    }
    return out;
}

std::string to_string_raw(const Sentence& s) {
    std::string out;
    for (std::size_t i = 0; i < s.atoms().size(); ++i) {
        if (i) out += ", ";
        out += to_string(s.atoms()[i]);
    }
    return out;
}

} // namespace recon
