#include "recon/kb.hpp"

#include "recon/errors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace recon {

void KnowledgeBase::declare_predicate(const std::string& name, int arity) {
    if (arity < 1)
        throw VocabularyMismatch("predicate '" + name + "' needs arity >= 1");
    auto [it, inserted] = preds_.try_emplace(name);
    if (inserted) {
        it->second.arity = arity;
    } else if (it->second.arity != arity) {
        throw ArityConflict("predicate '" + name + "' used with arity " +
                            std::to_string(arity) + " but declared with arity " +
                            std::to_string(it->second.arity));
    }
}

void KnowledgeBase::declare_constant(const std::string& name) {
    intern_constant(name);
}

int KnowledgeBase::intern_constant(const std::string& name) {
    auto [it, inserted] = constant_ids_.try_emplace(name, static_cast<int>(constant_names_.size()));
    if (inserted) {
        constant_names_.push_back(name);
        constants_.insert(name);
    }
    return it->second;
}

int KnowledgeBase::constant_id(const std::string& name) const {
    auto it = constant_ids_.find(name);
    return it == constant_ids_.end() ? -1 : it->second;
}

void KnowledgeBase::add_fact(const Atom& fact) {
    for (const auto& t : fact.terms)
        if (t.is_variable())
            throw NonGroundFact("fact " + to_string(fact) + " contains a variable");
    declare_predicate(fact.predicate, fact.arity());
    std::vector<int> tuple;
    tuple.reserve(fact.terms.size());
    for (const auto& t : fact.terms) tuple.push_back(intern_constant(t.constant));
    preds_[fact.predicate].tuples.insert(std::move(tuple));
}

bool KnowledgeBase::has_predicate(const std::string& name) const {
    return preds_.count(name) > 0;
}

int KnowledgeBase::arity(const std::string& name) const {
    auto it = preds_.find(name);
    if (it == preds_.end())
        throw VocabularyMismatch("unknown predicate '" + name + "'");
    return it->second.arity;
}

std::map<std::string, int> KnowledgeBase::predicates() const {
    std::map<std::string, int> out;
    for (const auto& [name, table] : preds_) out.emplace(name, table.arity);
    return out;
}

const std::set<std::string>& KnowledgeBase::constants() const { return constants_; }

std::vector<Atom> KnowledgeBase::facts() const {
    std::vector<Atom> out;
    for (const auto& [name, table] : preds_) {
        for (const auto& tuple : table.tuples) {
            Atom a{name, {}};
            a.terms.reserve(tuple.size());
            for (int id : tuple) a.terms.push_back(Term::constant_term(constant_names_[id]));
            out.push_back(std::move(a));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

long long KnowledgeBase::fact_count() const {
    long long n = 0;
    for (const auto& [_, table] : preds_) n += static_cast<long long>(table.tuples.size());
    return n;
}

bool KnowledgeBase::holds(const Atom& fact) const {
    auto it = preds_.find(fact.predicate);
    if (it == preds_.end() || it->second.arity != fact.arity()) return false;
    std::vector<int> tuple;
    tuple.reserve(fact.terms.size());
    for (const auto& t : fact.terms) {
        if (t.is_variable())
            throw NonGroundFact("holds() needs a ground atom, got " + to_string(fact));
        int id = constant_id(t.constant);
        if (id < 0) return false;
        tuple.push_back(id);
    }
    return it->second.tuples.count(tuple) > 0;
}

std::vector<KnowledgeBase::CompiledAtom> KnowledgeBase::compile(const Sentence& s) const {
    std::vector<CompiledAtom> atoms;
    atoms.reserve(s.atoms().size());
    for (const auto& a : s.atoms()) {
        CompiledAtom c;
        auto it = preds_.find(a.predicate);
        if (it != preds_.end() && it->second.arity == a.arity()) c.table = &it->second;
        c.terms.reserve(a.terms.size());
        for (const auto& t : a.terms)
            c.terms.push_back(t.is_variable() ? t.var : ~constant_id(t.constant));
        atoms.push_back(std::move(c));
    }
    // Cheap join order: scan small relations first.
    std::stable_sort(atoms.begin(), atoms.end(), [](const CompiledAtom& x, const CompiledAtom& y) {
        std::size_t nx = x.table ? x.table->tuples.size() : 0;
        std::size_t ny = y.table ? y.table->tuples.size() : 0;
        return nx < ny;
    });
    return atoms;
}

bool KnowledgeBase::search(const std::vector<CompiledAtom>& atoms, std::size_t i,
                           std::map<int, int>& binding,
                           const std::vector<int>* projection,
                           std::set<std::vector<std::string>>* out) const {
    if (i == atoms.size()) {
        if (!projection) return true;
        std::vector<std::string> row;
        row.reserve(projection->size());
        for (int v : *projection) row.push_back(constant_names_[binding.at(v)]);
        out->insert(std::move(row));
        return false; // keep enumerating
    }
    const CompiledAtom& a = atoms[i];
    if (!a.table) return false;
    for (const auto& tuple : a.table->tuples) {
        std::map<int, int> saved = binding;
        bool ok = true;
        for (std::size_t j = 0; j < a.terms.size() && ok; ++j) {
            int t = a.terms[j];
            if (t < 0) {
                ok = (~t == tuple[j]);
            } else if (auto it = binding.find(t); it != binding.end()) {
                ok = (it->second == tuple[j]);
            } else {
                binding[t] = tuple[j];
            }
        }
        if (ok && search(atoms, i + 1, binding, projection, out)) return true;
        binding = std::move(saved);
    }
    return false;
}

bool KnowledgeBase::satisfies(const Sentence& s) const {
    if (s.empty()) return true;
    for (const auto& a : s.atoms())
        for (const auto& t : a.terms)
            if (!t.is_variable() && constant_id(t.constant) < 0) return false;
    auto atoms = compile(s);
    for (const auto& a : atoms)
        if (!a.table) return false;
    std::map<int, int> binding;
    return search(atoms, 0, binding, nullptr, nullptr);
}

std::set<std::vector<std::string>> KnowledgeBase::all_matches(
        const Sentence& s, const std::vector<int>& projection) const {
    std::set<int> vars;
    for (int v : s.variables()) vars.insert(v);
    for (int v : projection)
        if (!vars.count(v))
            throw InternalError("projection variable V" + std::to_string(v) +
                                " does not occur in the sentence");
    std::set<std::vector<std::string>> out;
    if (s.empty()) return out;
    for (const auto& a : s.atoms())
        for (const auto& t : a.terms)
            if (!t.is_variable() && constant_id(t.constant) < 0) return out;
    auto atoms = compile(s);
    for (const auto& a : atoms)
        if (!a.table) return out;
    std::map<int, int> binding;
    search(atoms, 0, binding, &projection, &out);
    return out;
}

KnowledgeBase parse_kb(std::istream& in) {
    KnowledgeBase kb;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto cut = line.find('%'); cut != std::string::npos) line.resize(cut);
        bool blank = std::all_of(line.begin(), line.end(), [](unsigned char c) {
            return std::isspace(c);
        });
        if (blank) continue;
        try {
            auto dot = line.rfind('.');
            if (dot == std::string::npos)
                throw ParseError("fact must end with '.'");
            std::string tail = line.substr(dot + 1);
            if (!std::all_of(tail.begin(), tail.end(),
                             [](unsigned char c) { return std::isspace(c); }))
                throw ParseError("unexpected text after '.'");
            Atom fact = parse_atom(line.substr(0, dot));
            for (const auto& t : fact.terms)
                if (t.is_variable())
                    throw NonGroundFact("facts must be ground, got variable in " +
                                        to_string(fact));
            kb.add_fact(fact);
        } catch (const ArityConflict& e) {
            throw ArityConflict(e.what(), line_no);
        } catch (const NonGroundFact& e) {
            throw NonGroundFact(e.what(), line_no);
        } catch (const ParseError& e) {
            if (e.line > 0) throw;
            throw ParseError(e.what(), line_no);
        }
    }
    return kb;
}

KnowledgeBase parse_kb_text(const std::string& text) {
    std::istringstream in(text);
    return parse_kb(in);
}

KnowledgeBase parse_kb_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open fact file '" + path + "'");
    return parse_kb(in);
}

std::string write_kb(const KnowledgeBase& kb) {
    std::string out;
    for (const auto& fact : kb.facts()) {
        out += to_string(fact);
        out += ".\n";
    }
    return out;
}

} // namespace recon
