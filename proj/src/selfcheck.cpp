#include "recon/selfcheck.hpp"

#include "recon/codec.hpp"
#include "recon/errors.hpp"
#include "recon/invent.hpp"
#include "recon/miner.hpp"
#include "recon/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace recon {

namespace {

// gen() % n keeps the draw sequence identical across platforms; the standard
// distributions make no such promise.
unsigned long long draw(std::mt19937_64& gen, unsigned long long n) { return gen() % n; }

} // namespace

RandomInstance make_random_instance(std::mt19937_64& gen) {
    RandomInstance inst;

    bool variables_only = draw(gen, 4) != 0;
    // Constant-bearing atoms multiply the oracle's search space; keep those
    // instances small.
    int n_constants = variables_only ? 2 + static_cast<int>(draw(gen, 4))
                                     : 2 + static_cast<int>(draw(gen, 2));
    int max_len = variables_only ? 1 + static_cast<int>(draw(gen, 3))
                                 : 1 + static_cast<int>(draw(gen, 2));
    int max_vars = variables_only ? 2 + static_cast<int>(draw(gen, 2)) : 2;

    std::vector<std::string> constants;
    for (int i = 0; i < n_constants; ++i) {
        constants.push_back("c" + std::to_string(i));
        inst.kb.declare_constant(constants.back());
    }

    int n_preds = 1 + static_cast<int>(draw(gen, 4));
    std::vector<std::pair<std::string, int>> preds;
    for (int i = 0; i < n_preds; ++i) {
        preds.emplace_back("p" + std::to_string(i), 1 + static_cast<int>(draw(gen, 2)));
        inst.kb.declare_predicate(preds.back().first, preds.back().second);
    }

    int n_facts = static_cast<int>(draw(gen, 13));
    for (int i = 0; i < n_facts; ++i) {
        const auto& [name, arity] = preds[draw(gen, preds.size())];
        Atom fact{name, {}};
        for (int j = 0; j < arity; ++j)
            fact.terms.push_back(Term::constant_term(constants[draw(gen, constants.size())]));
        inst.kb.add_fact(fact);
    }

    inst.bias.max_len = max_len;
    inst.bias.min_len = max_len > 1 && draw(gen, 2) == 0 ? 2 : 1;
    inst.bias.max_vars = max_vars;
    inst.bias.connected = draw(gen, 2) == 0;
    inst.bias.variables_only = variables_only;
    inst.bias.require_core = draw(gen, 2) == 0;
    return inst;
}

CheckSummary run_miner_oracle_check(int instances, unsigned long long base_seed,
                                    long long work_limit, int jobs) {
    std::vector<char> ok(static_cast<std::size_t>(instances), 0);
    parallel_for(static_cast<std::size_t>(instances), jobs, [&](std::size_t i) {
        unsigned long long seed = base_seed + i;
        std::mt19937_64 gen(seed);
        RandomInstance inst = make_random_instance(gen);
        try {
            Theory mined = extract_theory(inst.kb, inst.bias, inst.kb.predicates());
            Theory oracle =
                brute_force_theory(inst.kb, inst.bias, inst.kb.predicates(),
                                   OracleOptions{work_limit});
            ok[i] = (mined.sentences == oracle.sentences) ? 1 : 0;
        } catch (const Error&) {
            ok[i] = 0;
        }
    });
    CheckSummary summary;
    for (std::size_t i = 0; i < ok.size(); ++i) {
        if (ok[i]) {
            ++summary.passed;
        } else {
            ++summary.failed;
            summary.failing_seeds.push_back(base_seed + i);
        }
    }
    return summary;
}

namespace {

// Random full-variable definitions drawn from the theory's sub-conjunctions.
DefinitionSet make_random_definitions(std::mt19937_64& gen, const Theory& T,
                                      const LanguageBias& mining_bias) {
    LanguageBias def_bias;
    def_bias.min_len = 2;
    def_bias.max_len = std::max(2, mining_bias.max_len);
    def_bias.max_vars = mining_bias.max_vars;
    def_bias.connected = true;
    def_bias.variables_only = true;
    def_bias.require_core = true;

    std::vector<Sentence> pool = generate_candidates(T, def_bias);
    std::vector<Definition> defs;
    if (pool.empty()) return DefinitionSet{};

    int want = 1 + static_cast<int>(draw(gen, 4));
    std::vector<char> taken(pool.size(), 0);
    for (int i = 0; i < want; ++i) {
        std::size_t pick = draw(gen, pool.size());
        if (taken[pick]) continue;
        taken[pick] = 1;
        const Sentence& body = pool[pick];
        defs.push_back(make_definition("h" + std::to_string(defs.size() + 1),
                                       body.variable_count(), body));
    }
    return DefinitionSet(std::move(defs));
}

} // namespace

CheckSummary run_codec_roundtrip_check(int instances, unsigned long long base_seed,
                                       int jobs) {
    std::vector<char> ok(static_cast<std::size_t>(instances), 0);
    parallel_for(static_cast<std::size_t>(instances), jobs, [&](std::size_t i) {
        unsigned long long seed = base_seed + i;
        std::mt19937_64 gen(seed);
        RandomInstance inst = make_random_instance(gen);
        // Round-tripping needs canonical cores over variables; pin the flags
        // that guarantee it and keep the bias otherwise random.
        inst.bias.variables_only = true;
        inst.bias.require_core = true;
        inst.bias.connected = true;
        if (inst.bias.max_len < 2) inst.bias.max_len = 2;

        try {
            Theory T = extract_theory(inst.kb, inst.bias, inst.kb.predicates());
            DefinitionSet F = make_random_definitions(gen, T, inst.bias);

            LanguageBias b_Q;
            b_Q.min_len = 1;
            b_Q.max_len = 3;
            b_Q.max_vars = 3;

            bool all_ok = true;
            for (const auto& s : T.sentences) {
                auto e = encode_sentence(s, F, b_Q);
                if (!e) continue;
                if (decode_sentence(*e, F) != s) {
                    all_ok = false;
                    break;
                }
            }
            ok[i] = all_ok ? 1 : 0;
        } catch (const Error&) {
            ok[i] = 0;
        }
    });
    CheckSummary summary;
    for (std::size_t i = 0; i < ok.size(); ++i) {
        if (ok[i]) {
            ++summary.passed;
        } else {
            ++summary.failed;
            summary.failing_seeds.push_back(base_seed + i);
        }
    }
    return summary;
}

long long work_limit_from_env(long long fallback) {
    const char* env = std::getenv("RECON_WORK_LIMIT");
    if (!env || !*env) return fallback;
    try {
        std::size_t used = 0;
        long long v = std::stoll(env, &used);
        if (used != std::string(env).size() || v <= 0)
            throw std::invalid_argument(env);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("RECON_WORK_LIMIT must be a positive integer, got '" +
                          std::string(env) + "'");
    }
}

} // namespace recon
