#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace recon {

// A term is either a variable (var >= 0, an index) or a constant (var < 0,
// name in `constant`). Variables order before constants; variables compare by
// index, constants lexicographically.
struct Term {
    int var = -1;
    std::string constant;

    bool is_variable() const { return var >= 0; }

    friend bool operator==(const Term& a, const Term& b) {
        if (a.is_variable() != b.is_variable()) return false;
        return a.is_variable() ? a.var == b.var : a.constant == b.constant;
    }
    friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
        if (a.is_variable() != b.is_variable())
            return a.is_variable() ? std::strong_ordering::less
                                   : std::strong_ordering::greater;
        if (a.is_variable()) return a.var <=> b.var;
        return a.constant <=> b.constant;
    }

    static Term variable(int index) { return Term{index, {}}; }
    static Term constant_term(std::string name) { return Term{-1, std::move(name)}; }
};

struct Atom {
    std::string predicate;
    std::vector<Term> terms;

    int arity() const { return static_cast<int>(terms.size()); }

    friend bool operator==(const Atom&, const Atom&) = default;
    friend auto operator<=>(const Atom&, const Atom&) = default;
};

// An existentially quantified conjunction of atoms, kept as a sorted
// duplicate-free vector (set-of-literals semantics).
class Sentence {
public:
    Sentence() = default;
    explicit Sentence(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    bool empty() const { return atoms_.empty(); }
    int size() const { return static_cast<int>(atoms_.size()); }

    // Total number of atom argument positions; the unit of description cost.
    int term_count() const;

    // Distinct variable indices, ascending.
    std::vector<int> variables() const;
    int variable_count() const { return static_cast<int>(variables().size()); }

    friend bool operator==(const Sentence&, const Sentence&) = default;
    friend auto operator<=>(const Sentence&, const Sentence&) = default;

private:
    std::vector<Atom> atoms_;
};

// Variable index -> replacement term. Unmapped variables stay themselves.
using Substitution = std::map<int, Term>;

Sentence apply_substitution(const Sentence& s, const Substitution& theta);
Atom apply_substitution(const Atom& a, const Substitution& theta);

// Canonical form under variable renaming: the lexicographically least sentence
// over all bijective renumberings of the variables. Two sentences are equal up
// to renaming iff their canonical forms are identical. Sentences with more
// than 9 distinct variables are rejected (WorkLimitExceeded) — the permutation
// search is factorial and bias-bounded inputs never get close.
Sentence canonicalize(const Sentence& s);

// Homomorphism from `from` into `into`: a substitution over from's variables
// mapping every atom of `from` onto some atom of `into`. Variables listed in
// `frozen` must map to themselves. Returns the first one found.
std::optional<Substitution> find_homomorphism(const Sentence& from, const Sentence& into,
                                              const std::set<int>& frozen = {});

// Least subsentence homomorphically equivalent to s (unique up to renaming),
// returned in canonical form. `frozen` variables are pinned during folding and
// excluded from the final renumbering guarantee only in the overload below.
Sentence reduce_core(const Sentence& s);

// Core reduction that keeps `frozen` variables intact (not folded away, not
// renumbered). Result is NOT re-canonicalized; atom order is normalized only.
Sentence reduce_core_frozen(const Sentence& s, const std::set<int>& frozen);

// Canonical form that keeps variables 0..frozen_prefix-1 fixed and renumbers
// the remaining variables onto frozen_prefix.. so the result is minimal.
// Used for definition bodies, whose head variables pin argument positions.
Sentence canonicalize_suffix(const Sentence& s, int frozen_prefix);

// Connected iff the graph (atoms as nodes, shared variables as edges) has one
// component. Sentences with no atoms or a single atom count as connected;
// atoms without variables only connect to nothing, so any variable-free atom
// in a multi-atom sentence makes it disconnected.
bool is_connected(const Sentence& s);

// --- text form ---------------------------------------------------------
//
// Atom:      pred(t1,...,tn)     constants: [a-z][A-Za-z0-9_]*
// Variable:  [A-Z][A-Za-z0-9_]*  rendered as V0, V1, ... by first occurrence
// Sentence:  comma-separated atoms, optional trailing '.'

// Parses with a private variable scope.
Sentence parse_sentence(std::string_view text);
// Parses sharing `scope` (variable name -> index) with previous calls; used
// where several sentences must agree on variable identities.
Sentence parse_sentence(std::string_view text, std::map<std::string, int>& scope);

Atom parse_atom(std::string_view text);

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Sentence& s);

// Renders variables by their raw indices, without the first-occurrence
// renumbering of to_string. Needed wherever indices carry meaning beyond the
// sentence itself (definition bodies anchored to head argument positions).
std::string to_string_raw(const Sentence& s);

} // namespace recon
