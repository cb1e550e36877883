#pragma once

#include "recon/bias.hpp"
#include "recon/kb.hpp"
#include "recon/logic.hpp"
#include "recon/miner.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace recon {

// A hidden predicate with its biconditional definition. Body variables
// 0..head_arity-1 are the head arguments in order; indices >= head_arity are
// body-local (existential). Invention only produces local-free definitions;
// locals are accepted from files for decoding.
struct Definition {
    std::string head;
    int head_arity = 0;
    Sentence body;

    int local_count() const;
    bool has_locals() const { return local_count() > 0; }
};

// Validates and normalizes: head variables must all occur in the body, the
// body needs >= 2 atoms (structural identity-mapping exclusion), must be
// connected and must not mention the head predicate; local variables are
// renumbered into a minimal dense suffix.
Definition make_definition(std::string head, int head_arity, Sentence body);

// An ordered set of definitions with unique head predicates. By default two
// definitions may not have renaming-equal bodies; flattened multi-layer sets
// relax that (distinct upper-layer bodies can unfold to the same base body).
class DefinitionSet {
public:
    DefinitionSet() = default;
    explicit DefinitionSet(std::vector<Definition> defs, bool forbid_equal_bodies = true);

    const std::vector<Definition>& definitions() const { return defs_; }
    const Definition* find(const std::string& head) const;
    int size() const { return static_cast<int>(defs_.size()); }
    bool empty() const { return defs_.empty(); }
    long long body_cost() const; // total body atom count

private:
    std::vector<Definition> defs_;
};

// Replaces a hidden atom by its definition body: head variables take the
// atom's arguments, locals take fresh variables drawn from fresh_var.
std::vector<Atom> unfold(const Atom& hidden, const Definition& d, int& fresh_var);

// Hidden KB over the definition heads and the original constants: h(t) holds
// iff the body grounded with t (locals existential) lies inside kb.
KnowledgeBase materialize_hidden_kb(const KnowledgeBase& kb, const DefinitionSet& F);

// Exact union cover: returns the canonical hidden sentence e, conforming to
// b_Q, whose atom unfoldings union to exactly s, with the fewest atoms (ties:
// lexicographically least). Search is a DFS over definition-body embeddings
// into s (atom-injective matches) with a memoized uncovered-state feasibility
// check. Returns nullopt when no conforming exact cover exists.
std::optional<Sentence> encode_sentence(const Sentence& s, const DefinitionSet& F,
                                        const LanguageBias& b_Q);

struct TheoryEncoding {
    std::map<Sentence, Sentence> encoded; // theory member -> hidden sentence
    std::vector<Sentence> uncovered;      // members with no encoding, theory order

    long long encoded_cost() const; // total hidden atom count
};

TheoryEncoding encode_theory(const Theory& T, const DefinitionSet& F,
                             const LanguageBias& b_Q, int jobs = 1);

// Unions the unfoldings of e's atoms, then canonicalizes and core-reduces.
Sentence decode_sentence(const Sentence& e, const DefinitionSet& F);

// Element-wise decode, deduplicated; vocabulary inferred from the output.
Theory decode_theory(const std::vector<Sentence>& hidden, const DefinitionSet& F,
                     int jobs = 1);

// --- definition files -------------------------------------------------
//
//   h1(X) <=> smokes(X), cancer(X).
//
// One definition per line, `%` starts a comment. Head arguments are distinct
// variables; body variables not in the head are body-local.
DefinitionSet parse_definitions_text(const std::string& text);
DefinitionSet parse_definitions_file(const std::string& path);
std::string write_definitions(const DefinitionSet& F);

} // namespace recon
