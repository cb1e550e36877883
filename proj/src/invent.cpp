#include "recon/invent.hpp"

#include "recon/errors.hpp"
#include "recon/parallel.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace recon {

void validate_config(const InventionConfig& cfg) {
    if (cfg.budget < 1)
        throw ConfigError("budget must be >= 1, got " + std::to_string(cfg.budget));
    if (cfg.def_bias.min_len < 2)
        throw ConfigError("definition bodies need min_len >= 2 "
                          "(single-atom bodies are identity mappings)");
}

std::vector<Sentence> generate_candidates(const Theory& T, const LanguageBias& def_bias) {
    std::set<Sentence> dedup;
    for (const auto& member : T.sentences) {
        const auto& atoms = member.atoms();
        const int n = member.size();
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            std::vector<Atom> subset;
            for (int i = 0; i < n; ++i)
                if (mask & (1u << i)) subset.push_back(atoms[static_cast<std::size_t>(i)]);
            Sentence sub(std::move(subset));
            if (!is_connected(sub)) continue;
            if (sub.variable_count() == 0) continue;
            Sentence body = reduce_core(sub);
            if (!conforms(def_bias, body)) continue;
            dedup.insert(body);
        }
    }
    std::vector<std::pair<std::string, Sentence>> keyed;
    keyed.reserve(dedup.size());
    for (const auto& s : dedup) keyed.emplace_back(to_string(s), s);
    std::sort(keyed.begin(), keyed.end());
    std::vector<Sentence> out;
    out.reserve(keyed.size());
    for (auto& [_, s] : keyed) out.push_back(std::move(s));
    return out;
}

InventionResult greedy_invent(const KnowledgeBase& kb, const Theory& T,
                              const InventionConfig& cfg) {
    validate_config(cfg);

    std::vector<Sentence> remaining = generate_candidates(T, cfg.def_bias);
    std::vector<Definition> accepted;
    InventionResult result;
    result.report = evaluate(kb, T, DefinitionSet{}, cfg.hidden_bias, cfg.params);

    while (static_cast<int>(accepted.size()) < cfg.budget && !remaining.empty()) {
        const std::string name =
            "h" + std::to_string(cfg.first_hidden_index + static_cast<int>(accepted.size()));

        std::vector<ReconstructionReport> reports(remaining.size());
        parallel_for(remaining.size(), cfg.params.jobs, [&](std::size_t i) {
            std::vector<Definition> trial = accepted;
            trial.push_back(
                make_definition(name, remaining[i].variable_count(), remaining[i]));
            reports[i] = evaluate(kb, T, DefinitionSet(std::move(trial)), cfg.hidden_bias,
                                  cfg.params);
        });

        std::size_t best = remaining.size();
        for (std::size_t i = 0; i < reports.size(); ++i)
            if (best == remaining.size() || reports[i].objective < reports[best].objective)
                best = i; // ties keep the earlier (lexicographically least) body

        if (best == remaining.size() ||
            !(reports[best].objective < result.report.objective))
            break; // nothing strictly improves the objective

        accepted.push_back(
            make_definition(name, remaining[best].variable_count(), remaining[best]));
        result.report = reports[best];
        result.trace.push_back(reports[best]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    }

    result.defs = DefinitionSet(std::move(accepted));
    return result;
}

std::vector<LayerResult> stack(const KnowledgeBase& kb,
                               const std::vector<LayerConfig>& layers) {
    if (layers.empty()) throw ConfigError("stacking needs at least one layer");

    std::vector<LayerResult> results;
    results.reserve(layers.size());
    const KnowledgeBase* current = &kb;
    int next_hidden_index = 1;

    for (const auto& layer : layers) {
        InventionConfig cfg = layer.invention;
        cfg.first_hidden_index = next_hidden_index;

        LayerResult r;
        r.theory = extract_theory(*current, layer.mining_bias, current->predicates(),
                                  MineOptions{cfg.params.jobs});
        InventionResult inv = greedy_invent(*current, r.theory, cfg);
        r.defs = std::move(inv.defs);
        r.report = inv.report;
        r.trace = std::move(inv.trace);
        r.hidden_kb = materialize_hidden_kb(*current, r.defs);
        next_hidden_index += r.defs.size();

        results.push_back(std::move(r));
        current = &results.back().hidden_kb;
    }
    return results;
}

DefinitionSet unfold_through_layers(const DefinitionSet& top,
                                    const std::vector<DefinitionSet>& lower,
                                    const KnowledgeBase* base_kb) {
    auto find_lower = [&](const std::string& pred) -> const Definition* {
        for (auto it = lower.rbegin(); it != lower.rend(); ++it)
            if (const Definition* d = it->find(pred)) return d;
        return nullptr;
    };

    std::vector<Definition> out;
    out.reserve(top.definitions().size());
    for (const auto& def : top.definitions()) {
        Sentence body = def.body;
        for (int guard = 0;; ++guard) {
            if (guard > 1000)
                throw InternalError("definition unfolding did not terminate; "
                                    "layers are expected to be stratified");
            const Atom* expand = nullptr;
            const Definition* with = nullptr;
            for (const auto& a : body.atoms())
                if (const Definition* d = find_lower(a.predicate)) {
                    expand = &a;
                    with = d;
                    break;
                }
            if (!expand) break;

            int fresh = 0;
            for (int v : body.variables()) fresh = std::max(fresh, v + 1);
            std::vector<Atom> atoms;
            for (const auto& a : body.atoms())
                if (&a != expand) atoms.push_back(a);
            auto unfolded = unfold(*expand, *with, fresh);
            atoms.insert(atoms.end(), unfolded.begin(), unfolded.end());
            body = Sentence(std::move(atoms));
        }

        std::set<int> frozen;
        for (int i = 0; i < def.head_arity; ++i) frozen.insert(i);
        body = reduce_core_frozen(body, frozen);

        if (base_kb) {
            for (const auto& a : body.atoms())
                if (!base_kb->has_predicate(a.predicate))
                    throw UnknownHiddenPredicate(
                        "predicate '" + a.predicate + "' in the unfolding of '" + def.head +
                        "' has no definition and is not a base predicate");
        }
        out.push_back(make_definition(def.head, def.head_arity, std::move(body)));
    }
    // Distinct upper-layer bodies can legitimately unfold to the same base
    // body, so renaming-equal bodies are tolerated here.
    return DefinitionSet(std::move(out), /*forbid_equal_bodies=*/false);
}

} // namespace recon
