#include "recon/errors.hpp"
#include "recon/invent.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

using namespace recon;
using testutil::S;
using testutil::bias;

namespace {

KnowledgeBase kb() { return testutil::smokers_kb(); }

Theory theory() {
    KnowledgeBase k = kb();
    return extract_theory(k, bias(2, 3), k.predicates());
}

InventionConfig config(int budget, int body_max = 2, QualityMeasure m = QualityMeasure::mdl,
                       double gamma = 0.5, double alpha = 1.0) {
    InventionConfig cfg;
    cfg.def_bias = bias(2, body_max);
    cfg.hidden_bias = bias(1, 2, 2);
    cfg.budget = budget;
    cfg.params.measure = m;
    cfg.params.gamma = gamma;
    cfg.params.alpha = alpha;
    return cfg;
}

std::vector<double> objectives(const std::vector<ReconstructionReport>& trace) {
    std::vector<double> out;
    for (const auto& r : trace) out.push_back(r.objective);
    return out;
}

} // namespace

TEST_CASE("config validation") {
    CHECK_THROWS_AS(validate_config(config(0)), ConfigError);
    InventionConfig identity = config(1);
    identity.def_bias.min_len = 1;
    CHECK_THROWS_AS(validate_config(identity), ConfigError);
    validate_config(config(1));
}

TEST_CASE("generate_candidates enumerates connected core sub-conjunctions") {
    Theory T = theory();
    std::vector<Sentence> len2 = generate_candidates(T, bias(2, 2));
    CHECK(testutil::rendered(len2) == std::vector<std::string>{
                                          "cancer(V0), friends(V0,V1)",
                                          "cancer(V0), smokes(V0)",
                                          "friends(V0,V1), smokes(V0)",
                                          "friends(V0,V1), smokes(V1)",
                                      });
    // Widening to [2,3] adds the three length-3 members themselves; every
    // 2-atom sub-conjunction of those is either disconnected or already
    // present.
    std::vector<Sentence> len23 = generate_candidates(T, bias(2, 3));
    CHECK(len23.size() == 7);
    std::set<Sentence> as_set(len23.begin(), len23.end());
    for (const auto& s : T.sentences) CHECK(as_set.count(s));

    CHECK(generate_candidates(Theory{}, bias(2, 3)).empty());
}

TEST_CASE("candidate sub-conjunctions are core-reduced before filtering") {
    // p(V0,V1), p(V0,V2), q(V1): the {p,p} pair folds to one atom (fails
    // min_len 2) and {p(V0,V2), q(V1)} is disconnected, leaving one candidate.
    Theory T = make_theory({S("p(X, Y), p(X, Z), q(Y)")}, {{"p", 2}, {"q", 1}});
    std::vector<Sentence> cands = generate_candidates(T, bias(2, 3));
    CHECK(testutil::rendered(cands) == std::vector<std::string>{"p(V0,V1), q(V1)"});
}

TEST_CASE("greedy invention recovers the known four definitions") {
    InventionResult res = greedy_invent(kb(), theory(), config(4));
    CHECK(res.defs.size() == 4);
    CHECK(res.report.missing == 0);
    CHECK(res.report.spurious == 0);
    CHECK(res.report.loss == 0.0);
    CHECK(res.report.objective == -3.0);
    CHECK(objectives(res.trace) == std::vector<double>{6.0, 3.0, 0.0, -3.0});

    CHECK(write_definitions(res.defs) ==
          "h1(V0,V1) <=> cancer(V0), friends(V0,V1).\n"
          "h2(V0) <=> cancer(V0), smokes(V0).\n"
          "h3(V0,V1) <=> friends(V0,V1), smokes(V1).\n"
          "h4(V0,V1) <=> friends(V0,V1), smokes(V0).\n");

    // The four accepted bodies are renaming-equal to the known solution.
    std::set<Sentence> bodies;
    for (const auto& d : res.defs.definitions()) bodies.insert(canonicalize(d.body));
    std::set<Sentence> expected{S("smokes(X), cancer(X)"), S("smokes(X), friends(X, Y)"),
                                S("cancer(X), friends(X, Y)"), S("friends(X, Y), smokes(Y)")};
    std::set<Sentence> expected_canonical;
    for (const auto& s : expected) expected_canonical.insert(canonicalize(s));
    CHECK(bodies == expected_canonical);

    // The trace is strictly decreasing and one entry per acceptance.
    for (std::size_t i = 1; i < res.trace.size(); ++i)
        CHECK(res.trace[i].objective < res.trace[i - 1].objective);
}

TEST_CASE("a budget of one cannot reach zero loss") {
    InventionResult res = greedy_invent(kb(), theory(), config(1));
    CHECK(res.defs.size() == 1);
    CHECK(res.report.loss > 0.0);
    CHECK(objectives(res.trace) == std::vector<double>{6.0});
}

TEST_CASE("budget caps acceptances even when improvement remains") {
    InventionResult res = greedy_invent(kb(), theory(), config(2));
    CHECK(res.defs.size() == 2);
    CHECK(objectives(res.trace) == std::vector<double>{6.0, 3.0});
    CHECK(res.report.objective == 3.0);
}

TEST_CASE("greedy stops when no candidate strictly improves") {
    // With sparsity and a steep alpha, any definition raises J.
    InventionResult res =
        greedy_invent(kb(), theory(), config(4, 2, QualityMeasure::sparsity, 0.5, 10.0));
    CHECK(res.defs.empty());
    CHECK(res.trace.empty());
    CHECK(res.report.objective == 7.0); // the baseline J of the empty set
}

TEST_CASE("sparsity run still reaches zero loss with moderate alpha") {
    InventionResult res =
        greedy_invent(kb(), theory(), config(4, 2, QualityMeasure::sparsity, 0.5, 0.5));
    CHECK(res.defs.size() == 4);
    CHECK(res.report.loss == 0.0);
    CHECK(objectives(res.trace) == std::vector<double>{6.5, 5.0, 3.5, 2.0});
    for (const auto& d : res.defs.definitions()) CHECK(d.body.size() >= 2);
}

TEST_CASE("empty theory yields an empty result") {
    InventionResult res = greedy_invent(kb(), Theory{}, config(3));
    CHECK(res.defs.empty());
    CHECK(res.trace.empty());
    CHECK(res.report.objective == 0.0);
    CHECK(res.report.loss == 0.0);
}

TEST_CASE("invented names honor first_hidden_index") {
    InventionConfig cfg = config(2);
    cfg.first_hidden_index = 7;
    InventionResult res = greedy_invent(kb(), theory(), cfg);
    REQUIRE(res.defs.size() == 2);
    CHECK(res.defs.definitions()[0].head == "h7");
    CHECK(res.defs.definitions()[1].head == "h8");
}

TEST_CASE("parallel greedy matches sequential greedy") {
    InventionConfig seq = config(4);
    InventionConfig par = config(4);
    par.params.jobs = 4;
    InventionResult a = greedy_invent(kb(), theory(), seq);
    InventionResult b = greedy_invent(kb(), theory(), par);
    CHECK(write_definitions(a.defs) == write_definitions(b.defs));
    CHECK(objectives(a.trace) == objectives(b.trace));
    CHECK(a.report == b.report);
}

TEST_CASE("two-layer stack mines the hidden theory and stays globally named") {
    std::vector<LayerConfig> layers{{bias(2, 3), config(4)}, {bias(1, 2, 2), config(4)}};
    std::vector<LayerResult> results = stack(kb(), layers);
    REQUIRE(results.size() == 2);

    CHECK(results[0].theory.size() == 7);
    CHECK(results[0].defs.size() == 4);
    CHECK(results[0].report.objective == -3.0);
    CHECK(write_kb(results[0].hidden_kb) == "h1(john,jane).\n"
                                            "h2(john).\n"
                                            "h3(john,jane).\n"
                                            "h4(john,jane).\n");

    // Layer 2 mines the ten-sentence hidden theory over h1..h4.
    CHECK(results[1].theory.size() == 10);
    Theory recheck = extract_theory(results[0].hidden_kb, bias(1, 2, 2),
                                    results[0].hidden_kb.predicates());
    CHECK(results[1].theory == recheck);

    // Names continue across layers.
    for (const auto& d : results[1].defs.definitions()) {
        CHECK(d.head.size() >= 2);
        CHECK(d.head[0] == 'h');
        CHECK(std::stoi(d.head.substr(1)) >= 5);
    }

    // Every layer-2 body mentions only layer-1 heads.
    for (const auto& d : results[1].defs.definitions())
        for (const auto& a : d.body.atoms())
            CHECK(results[0].defs.find(a.predicate) != nullptr);
}

TEST_CASE("stack requires at least one layer and propagates emptiness") {
    CHECK_THROWS_AS(stack(kb(), {}), ConfigError);

    // A one-layer stack is greedy_invent.
    std::vector<LayerConfig> one{{bias(2, 3), config(4)}};
    std::vector<LayerResult> r = stack(kb(), one);
    InventionResult direct = greedy_invent(kb(), theory(), config(4));
    CHECK(write_definitions(r[0].defs) == write_definitions(direct.defs));

    // An empty layer-1 outcome leaves layer 2 with nothing to invent.
    std::vector<LayerConfig> starved{
        {bias(2, 3), config(4, 2, QualityMeasure::sparsity, 0.5, 10.0)},
        {bias(1, 2, 2), config(4)}};
    std::vector<LayerResult> rs = stack(kb(), starved);
    CHECK(rs[0].defs.empty());
    CHECK(rs[1].theory.size() == 0);
    CHECK(rs[1].defs.empty());
}

TEST_CASE("unfold_through_layers rewrites to the base vocabulary") {
    DefinitionSet F1 = parse_definitions_text(testutil::known_defs_text());
    DefinitionSet top({make_definition("g", 2, S("h1(X), h2(X, Y)"))}, true);
    KnowledgeBase base = kb();
    DefinitionSet flat = unfold_through_layers(top, {F1}, &base);
    REQUIRE(flat.size() == 1);
    CHECK(flat.find("g") != nullptr);
    CHECK(to_string_raw(flat.find("g")->body) == "cancer(V0), friends(V0,V1), smokes(V0)");

    // The flattened body's matches over the base KB equal g's materialized
    // facts computed through the hidden KB route.
    KnowledgeBase hidden = materialize_hidden_kb(base, F1);
    KnowledgeBase via_hidden = materialize_hidden_kb(hidden, top);
    KnowledgeBase via_flat = materialize_hidden_kb(base, flat);
    CHECK(write_kb(via_hidden) == write_kb(via_flat));
    CHECK(write_kb(via_flat) == "g(john,jane).\n");
}

TEST_CASE("unfolding handles single atoms, repeats and merged variables") {
    DefinitionSet F1 = parse_definitions_text(testutil::known_defs_text());
    KnowledgeBase base = kb();

    // A body over a single h unfolds to that h's own body.
    DefinitionSet single({make_definition("g", 2, S("h3(X, Y), h4(X, Y)"))}, true);
    DefinitionSet flat = unfold_through_layers(single, {F1}, &base);
    CHECK(to_string_raw(flat.find("g")->body) ==
          "cancer(V0), friends(V0,V1), smokes(V1)");

    // Repeated head variables merge during substitution.
    DefinitionSet merged({make_definition("g", 1, S("h2(X, X), h1(X)"))}, true);
    DefinitionSet mf = unfold_through_layers(merged, {F1}, &base);
    CHECK(to_string_raw(mf.find("g")->body) ==
          "cancer(V0), friends(V0,V0), smokes(V0)");

    // Distinct upper bodies may flatten to the same base body.
    DefinitionSet upper({make_definition("g1", 2, S("h1(X), h2(X, Y)")),
                         make_definition("g2", 2, S("h2(X, Y), h1(X)"))},
                        false);
    DefinitionSet uf = unfold_through_layers(upper, {F1}, &base);
    CHECK(uf.size() == 2);
    CHECK(to_string_raw(uf.find("g1")->body) == to_string_raw(uf.find("g2")->body));

    // A predicate defined nowhere below is an input error.
    DefinitionSet ghost({make_definition("g", 1, S("h1(X), ghost(X)"))}, true);
    CHECK_THROWS_AS(unfold_through_layers(ghost, {F1}, &base), UnknownHiddenPredicate);
}

TEST_CASE("stacked hidden facts ground their flattened bodies in the base KB") {
    std::vector<LayerConfig> layers{{bias(2, 3), config(4)}, {bias(1, 2, 2), config(4)}};
    KnowledgeBase base = kb();
    std::vector<LayerResult> results = stack(base, layers);
    DefinitionSet flat2 = unfold_through_layers(results[1].defs, {results[0].defs}, &base);

    for (const auto& d : flat2.definitions()) {
        // Every ground hidden fact of this layer-2 predicate must make the
        // flattened body true in the base KB under the head binding.
        for (const auto& f : results[1].hidden_kb.facts()) {
            if (f.predicate != d.head) continue;
            Substitution theta;
            for (int i = 0; i < d.head_arity; ++i) theta[i] = f.terms[static_cast<std::size_t>(i)];
            CHECK(testutil::naive_satisfies(base, apply_substitution(d.body, theta)));
        }
    }
}
