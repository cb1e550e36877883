#pragma once

#include "recon/bias.hpp"
#include "recon/kb.hpp"

#include <random>
#include <string>
#include <vector>

namespace recon {

// A small random knowledge base plus a mining bias, sized so the brute-force
// oracle stays tractable: <= 5 constants, <= 4 predicates (arity <= 2),
// <= 12 facts, max_len <= 3, max_vars always 2..3.
struct RandomInstance {
    KnowledgeBase kb;
    LanguageBias bias;
};

RandomInstance make_random_instance(std::mt19937_64& gen);

struct CheckSummary {
    int passed = 0;
    int failed = 0;
    std::vector<unsigned long long> failing_seeds;

    bool ok() const { return failed == 0; }
};

// Instance i is generated from seed base_seed + i, mined with extract_theory
// and with brute_force_theory; any mismatch (or oracle work-limit breach)
// fails that instance.
CheckSummary run_miner_oracle_check(int instances, unsigned long long base_seed,
                                    long long work_limit, int jobs = 1);

// Instance i draws a KB, mines a theory under a core-preserving bias, invents
// a random definition set from the theory's sub-conjunctions, and requires
// decode(encode(s)) == s for every member s that encodes at all.
CheckSummary run_codec_roundtrip_check(int instances, unsigned long long base_seed,
                                       int jobs = 1);

// Work limit for oracle enumeration: RECON_WORK_LIMIT when set (positive
// integer, ConfigError otherwise), else the given default.
long long work_limit_from_env(long long fallback = 50'000'000);

} // namespace recon
