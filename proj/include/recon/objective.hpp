#pragma once

#include "recon/codec.hpp"
#include "recon/kb.hpp"
#include "recon/miner.hpp"

#include <string>
#include <vector>

namespace recon {

enum class QualityMeasure { mdl, sparsity, fact_compression };

QualityMeasure parse_measure(const std::string& name); // throws UnknownMeasure
std::string to_string(QualityMeasure m);

struct ObjectiveParams {
    double lambda = 1.0;
    QualityMeasure measure = QualityMeasure::mdl;
    double gamma = 0.5;
    double alpha = 1.0;
    int jobs = 1;

    friend bool operator==(const ObjectiveParams&, const ObjectiveParams&) = default;
};

struct TheoryDifference {
    std::vector<Sentence> missing;  // members of T absent from T2
    std::vector<Sentence> spurious; // members of T2 absent from T
    double loss = 0;                // |missing| + lambda * |spurious|
};

TheoryDifference theory_difference(const Theory& T, const Theory& T2, double lambda);

// Quality of a hidden representation. mdl: (cost_T - cost_enc) - gamma *
// cost_F, where an uncovered sentence contributes its own atom count to
// cost_enc (it must be stored verbatim), so F = {} scores exactly 0.
// sparsity: -alpha * |F|. fact_compression: kb facts - hidden kb facts.
double quality(const DefinitionSet& F, const KnowledgeBase& kb,
               const KnowledgeBase& hidden_kb, const Theory& T, const TheoryEncoding& enc,
               QualityMeasure measure, double gamma, double alpha);

struct ReconstructionReport {
    long long missing = 0;
    long long spurious = 0;
    double loss = 0;
    double quality = 0;
    double objective = 0; // loss - quality
    long long cost_T = 0;
    long long cost_enc = 0;
    long long cost_F = 0;
    long long kb_size = 0;        // fact count
    long long hidden_kb_size = 0; // fact count

    friend bool operator==(const ReconstructionReport&, const ReconstructionReport&) = default;
};

// Checks the report's arithmetic invariants; a violation is always a bug.
void validate_report(const ReconstructionReport& r, double lambda);

// JSON object with exactly the report field names.
std::string report_to_json(const ReconstructionReport& r, int indent = 2);

// Full pipeline: encode T with F, decode, diff against T, score quality.
ReconstructionReport evaluate(const KnowledgeBase& kb, const Theory& T,
                              const DefinitionSet& F, const LanguageBias& b_Q,
                              const ObjectiveParams& p);

} // namespace recon
