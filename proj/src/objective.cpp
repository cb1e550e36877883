#include "recon/objective.hpp"

#include "recon/errors.hpp"

#include <json.hpp>

#include <algorithm>

namespace recon {

QualityMeasure parse_measure(const std::string& name) {
    if (name == "mdl") return QualityMeasure::mdl;
    if (name == "sparsity") return QualityMeasure::sparsity;
    if (name == "fact_compression") return QualityMeasure::fact_compression;
    throw UnknownMeasure("unknown quality measure '" + name +
                         "' (expected mdl, sparsity or fact_compression)");
}

std::string to_string(QualityMeasure m) {
    switch (m) {
        case QualityMeasure::mdl: return "mdl";
        case QualityMeasure::sparsity: return "sparsity";
        case QualityMeasure::fact_compression: return "fact_compression";
    }
    throw InternalError("unhandled quality measure");
}

TheoryDifference theory_difference(const Theory& T, const Theory& T2, double lambda) {
    TheoryDifference d;
    for (const auto& s : T.sentences)
        if (!T2.contains(s)) d.missing.push_back(s);
    for (const auto& s : T2.sentences)
        if (!T.contains(s)) d.spurious.push_back(s);
    d.loss = static_cast<double>(d.missing.size()) +
             lambda * static_cast<double>(d.spurious.size());
    return d;
}

namespace {

// The uncovered convention: a sentence without an encoding is stored
// verbatim, so it contributes its own atom count.
long long enc_cost_with_uncovered(const TheoryEncoding& enc) {
    long long cost = enc.encoded_cost();
    for (const auto& s : enc.uncovered) cost += s.size();
    return cost;
}

} // namespace

double quality(const DefinitionSet& F, const KnowledgeBase& kb,
               const KnowledgeBase& hidden_kb, const Theory& T, const TheoryEncoding& enc,
               QualityMeasure measure, double gamma, double alpha) {
    switch (measure) {
        case QualityMeasure::mdl: {
            long long cost_T = T.atom_cost();
            long long cost_enc = enc_cost_with_uncovered(enc);
            long long cost_F = F.body_cost();
            return static_cast<double>(cost_T - cost_enc) - gamma * static_cast<double>(cost_F);
        }
        case QualityMeasure::sparsity:
            return -alpha * static_cast<double>(F.size());
        case QualityMeasure::fact_compression:
            return static_cast<double>(kb.fact_count() - hidden_kb.fact_count());
    }
    throw InternalError("unhandled quality measure");
}

void validate_report(const ReconstructionReport& r, double lambda) {
    if (r.missing < 0 || r.spurious < 0 || r.cost_T < 0 || r.cost_enc < 0 || r.cost_F < 0 ||
        r.kb_size < 0 || r.hidden_kb_size < 0)
        throw InternalError("reconstruction report has a negative count");
    double expect_loss =
        static_cast<double>(r.missing) + lambda * static_cast<double>(r.spurious);
    if (r.loss != expect_loss)
        throw InternalError("reconstruction report loss does not equal missing + lambda*spurious");
    if (r.objective != r.loss - r.quality)
        throw InternalError("reconstruction report objective does not equal loss - quality");
}

std::string report_to_json(const ReconstructionReport& r, int indent) {
    nlohmann::json j;
    j["missing"] = r.missing;
    j["spurious"] = r.spurious;
    j["loss"] = r.loss;
    j["quality"] = r.quality;
    j["objective"] = r.objective;
    j["cost_T"] = r.cost_T;
    j["cost_enc"] = r.cost_enc;
    j["cost_F"] = r.cost_F;
    j["kb_size"] = r.kb_size;
    j["hidden_kb_size"] = r.hidden_kb_size;
    return j.dump(indent);
}

ReconstructionReport evaluate(const KnowledgeBase& kb, const Theory& T,
                              const DefinitionSet& F, const LanguageBias& b_Q,
                              const ObjectiveParams& p) {
    KnowledgeBase hidden_kb = materialize_hidden_kb(kb, F);
    TheoryEncoding enc = encode_theory(T, F, b_Q, p.jobs);
    std::vector<Sentence> hidden_sentences;
    hidden_sentences.reserve(enc.encoded.size());
    for (const auto& [_, e] : enc.encoded) hidden_sentences.push_back(e);
    Theory decoded = decode_theory(hidden_sentences, F, p.jobs);
    TheoryDifference diff = theory_difference(T, decoded, p.lambda);

    ReconstructionReport r;
    r.missing = static_cast<long long>(diff.missing.size());
    r.spurious = static_cast<long long>(diff.spurious.size());
    r.loss = diff.loss;
    r.cost_T = T.atom_cost();
    r.cost_enc = enc_cost_with_uncovered(enc);
    r.cost_F = F.body_cost();
    r.kb_size = kb.fact_count();
    r.hidden_kb_size = hidden_kb.fact_count();
    r.quality = quality(F, kb, hidden_kb, T, enc, p.measure, p.gamma, p.alpha);
    r.objective = r.loss - r.quality;
    validate_report(r, p.lambda);
    return r;
}

} // namespace recon
