#pragma once

#include "recon/logic.hpp"

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace recon {

// A ground knowledge base: a finite vocabulary of predicates (with fixed
// arities), a finite universe of constants, and a set of ground facts.
// Constants are interned; facts live as integer tuples per predicate.
class KnowledgeBase {
public:
    // Declares a predicate; repeat declarations must agree on arity.
    void declare_predicate(const std::string& name, int arity);
    // Declares a constant that need not occur in any fact.
    void declare_constant(const std::string& name);
    // Adds a ground fact, declaring its predicate and constants as needed.
    void add_fact(const Atom& fact);

    bool has_predicate(const std::string& name) const;
    int arity(const std::string& name) const; // throws VocabularyMismatch if absent

    // Predicate name -> arity, ordered by name.
    std::map<std::string, int> predicates() const;
    const std::set<std::string>& constants() const;

    // All facts as ground atoms, sorted.
    std::vector<Atom> facts() const;
    long long fact_count() const;

    bool holds(const Atom& fact) const; // fact must be ground

    // True iff some assignment of constants to variables makes every atom a
    // fact. The empty sentence is vacuously satisfied.
    bool satisfies(const Sentence& s) const;

    // All tuples the `projection` variables take over satisfying assignments.
    // Every projected variable must occur in the sentence.
    std::set<std::vector<std::string>> all_matches(const Sentence& s,
                                                   const std::vector<int>& projection) const;

private:
    struct PredicateTable {
        int arity = 0;
        std::set<std::vector<int>> tuples;
    };

    int intern_constant(const std::string& name);
    int constant_id(const std::string& name) const; // -1 if unknown

    // Compiled atom: terms as ints, variables >= 0, constants encoded ~id.
    struct CompiledAtom {
        const PredicateTable* table = nullptr; // null: predicate/arity unknown
        std::vector<int> terms;
    };
    std::vector<CompiledAtom> compile(const Sentence& s) const;
    bool search(const std::vector<CompiledAtom>& atoms, std::size_t i,
                std::map<int, int>& binding,
                const std::vector<int>* projection,
                std::set<std::vector<std::string>>* out) const;

    std::map<std::string, PredicateTable> preds_;
    std::map<std::string, int> constant_ids_;
    std::vector<std::string> constant_names_;
    std::set<std::string> constants_;
};

// Reads a fact file: one ground fact `pred(c1,...,cn).` per line, `%` starts
// a comment, blank lines ignored. Arity is fixed by first occurrence.
KnowledgeBase parse_kb(std::istream& in);
KnowledgeBase parse_kb_text(const std::string& text);
KnowledgeBase parse_kb_file(const std::string& path);

// Renders the fact file form: sorted facts, one per line.
std::string write_kb(const KnowledgeBase& kb);

} // namespace recon
