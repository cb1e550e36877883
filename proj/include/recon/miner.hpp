#pragma once

#include "recon/bias.hpp"
#include "recon/kb.hpp"
#include "recon/logic.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace recon {

// The set of all bias-conforming canonical sentences true in a knowledge
// base. Sentences are kept sorted by their rendered text.
struct Theory {
    std::vector<Sentence> sentences;
    std::map<std::string, int> vocabulary; // predicate -> arity

    int size() const { return static_cast<int>(sentences.size()); }
    bool contains(const Sentence& canonical) const;
    // Total atom count over all members (description cost unit).
    long long atom_cost() const;

    friend bool operator==(const Theory&, const Theory&) = default;
};

// Normalizes: canonicalizes members, deduplicates, sorts by rendered text.
Theory make_theory(std::vector<Sentence> sentences, std::map<std::string, int> vocabulary);

struct MineOptions {
    int jobs = 1;
};

// Level-wise extraction: grow satisfiable sentences one atom at a time
// (unsatisfiable extensions are pruned — satisfiability is anti-monotone),
// deduplicate by canonical form, then keep the bias-conforming ones.
// Connectedness and core-ness are only checked at emission; a sentence
// failing either can still grow into one that passes.
Theory extract_theory(const KnowledgeBase& kb, const LanguageBias& b,
                      const std::map<std::string, int>& vocab,
                      const MineOptions& opts = {});

struct OracleOptions {
    // Budget on generated atoms + ground lookups; exceeded -> WorkLimitExceeded.
    long long work_limit = 50'000'000;
};

// Independent oracle: enumerates every atom set up to max_len (ascending atom
// sequences, variables introduced in first-use order), decides satisfiability
// by exhaustive substitution search over the constants, then filters by
// conforms. No anti-monotone pruning, no join machinery shared with
// extract_theory. Must agree with extract_theory wherever it terminates.
Theory brute_force_theory(const KnowledgeBase& kb, const LanguageBias& b,
                          const std::map<std::string, int>& vocab,
                          const OracleOptions& opts = {});

// --- theory files ---------------------------------------------------------
//
//   # vocab: cancer/1 friends/2 smokes/1
//   # bias: min_len=2 max_len=3 max_vars=none connected=true ...
//   cancer(V0), smokes(V0).
//
// Sentences one per line, sorted by rendered text. Other `#` lines are
// comments. Both headers are optional; without a vocab header the vocabulary
// is inferred from the sentences.
struct TheoryFile {
    Theory theory;
    std::optional<LanguageBias> bias;
};

TheoryFile parse_theory_text(const std::string& text);
TheoryFile parse_theory_file(const std::string& path);
std::string write_theory(const Theory& t, const std::optional<LanguageBias>& bias);

} // namespace recon
