#pragma once

#include "recon/codec.hpp"
#include "recon/miner.hpp"
#include "recon/objective.hpp"

#include <vector>

namespace recon {

struct InventionConfig {
    // Bias on candidate definition bodies; min_len must stay >= 2 so the
    // identity mapping is structurally impossible.
    LanguageBias def_bias{2, 3, std::nullopt, true, true, true};
    // Bias on the hidden language the encoder may use.
    LanguageBias hidden_bias{};
    int budget = 1; // max number of invented predicates
    ObjectiveParams params{};
    unsigned long long seed = 0; // reserved for randomized tie-breaking
    // Invented predicates are named h<first_hidden_index>, h<...+1>, ...
    int first_hidden_index = 1;
};

void validate_config(const InventionConfig& cfg); // throws ConfigError

// All connected sub-conjunctions of theory members that conform to def_bias,
// as canonical core-reduced sentences, deduplicated and sorted by rendered
// text. Variable-free sub-conjunctions are skipped (no head to give them).
std::vector<Sentence> generate_candidates(const Theory& T, const LanguageBias& def_bias);

struct InventionResult {
    DefinitionSet defs;
    ReconstructionReport report;                // for the final defs
    std::vector<ReconstructionReport> trace;    // one per accepted definition
};

// Greedy minimization of the objective: each round evaluates F + {candidate}
// for every remaining candidate, accepts the largest strict decrease (ties:
// lexicographically least body), stops at the budget or when nothing helps.
InventionResult greedy_invent(const KnowledgeBase& kb, const Theory& T,
                              const InventionConfig& cfg);

struct LayerConfig {
    LanguageBias mining_bias;
    InventionConfig invention;
};

struct LayerResult {
    Theory theory;
    DefinitionSet defs;
    KnowledgeBase hidden_kb;
    ReconstructionReport report;
    std::vector<ReconstructionReport> trace;
};

// Layer l+1 mines the hidden KB of layer l over the layer-l hidden
// vocabulary; invented names stay globally unique across layers.
std::vector<LayerResult> stack(const KnowledgeBase& kb, const std::vector<LayerConfig>& layers);

// Rewrites top-layer definition bodies down to the base vocabulary by
// repeated unfolding through the lower layers, then core-reduces with the
// head variables pinned. When base_kb is given, any leftover predicate it
// does not declare raises UnknownHiddenPredicate.
DefinitionSet unfold_through_layers(const DefinitionSet& top,
                                    const std::vector<DefinitionSet>& lower,
                                    const KnowledgeBase* base_kb = nullptr);

} // namespace recon
