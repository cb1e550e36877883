#include "recon/cli.hpp"

#include "recon/bias.hpp"
#include "recon/codec.hpp"
#include "recon/errors.hpp"
#include "recon/invent.hpp"
#include "recon/kb.hpp"
#include "recon/miner.hpp"
#include "recon/objective.hpp"
#include "recon/parallel.hpp"
#include "recon/selfcheck.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace recon {
namespace {

struct ObjectiveFlags {
    double lambda = 1.0;
    double gamma = 0.5;
    double alpha = 1.0;
    std::string measure = "mdl";
};

void add_objective_flags(CLI::App* cmd, ObjectiveFlags& f) {
    cmd->add_option("--lambda", f.lambda, "Weight of spurious sentences in the loss")
        ->capture_default_str();
    cmd->add_option("--gamma", f.gamma, "Definition-cost weight of the mdl measure")
        ->capture_default_str();
    cmd->add_option("--alpha", f.alpha, "Per-definition weight of the sparsity measure")
        ->capture_default_str();
    cmd->add_option("--measure", f.measure, "Quality measure: mdl | sparsity | fact_compression")
        ->capture_default_str();
}

ObjectiveParams make_params(const ObjectiveFlags& f, int jobs) {
    ObjectiveParams p;
    p.lambda = f.lambda;
    p.gamma = f.gamma;
    p.alpha = f.alpha;
    p.measure = parse_measure(f.measure);
    p.jobs = jobs;
    return p;
}

nlohmann::json report_json(const ReconstructionReport& r) {
    return nlohmann::json::parse(report_to_json(r));
}

// Every emitted report echoes the objective parameters it was computed with.
nlohmann::json wrap_report(const ReconstructionReport& r, const ObjectiveFlags& f,
                           std::optional<long long> budget) {
    nlohmann::json j;
    j["lambda"] = f.lambda;
    j["gamma"] = f.gamma;
    j["alpha"] = f.alpha;
    j["measure"] = to_string(parse_measure(f.measure));
    if (budget) j["budget"] = *budget;
    j["report"] = report_json(r);
    return j;
}

nlohmann::json trace_json(const std::vector<ReconstructionReport>& trace) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : trace) arr.push_back(report_json(r));
    return arr;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + p.string());
    out << text;
    out.flush();
    if (!out) throw ConfigError("short write to " + p.string());
}

std::map<std::string, int> inferred_vocab(const std::vector<Sentence>& xs) {
    std::map<std::string, int> v;
    for (const auto& s : xs)
        for (const auto& a : s.atoms()) v[a.predicate] = static_cast<int>(a.terms.size());
    return v;
}

// The theory comes either from mining the KB (--bias) or from a file
// (--theory, the revision route). In revision mode a bias — the flag when
// given, else the file's own header — gates every sentence, and the file's
// vocabulary must exist in the KB.
Theory resolve_theory(const KnowledgeBase& kb, const std::string& bias_path,
                      const std::string& theory_path, int jobs) {
    if (theory_path.empty() && bias_path.empty())
        throw ConfigError("one of --bias or --theory is required");
    if (theory_path.empty()) {
        LanguageBias b = parse_bias_file(bias_path);
        return extract_theory(kb, b, kb.predicates(), MineOptions{effective_jobs(jobs)});
    }
    TheoryFile tf = parse_theory_file(theory_path);
    std::optional<LanguageBias> gate;
    if (!bias_path.empty())
        gate = parse_bias_file(bias_path);
    else
        gate = tf.bias;
    if (gate)
        for (const auto& s : tf.theory.sentences)
            if (!conforms(*gate, s))
                throw BiasError("theory sentence violates the bias: " + to_string(s));
    for (const auto& [pred, arity] : tf.theory.vocabulary)
        if (!kb.has_predicate(pred) || kb.arity(pred) != arity)
            throw VocabularyMismatch("theory predicate " + pred + "/" + std::to_string(arity) +
                                     " is not declared in the knowledge base");
    return tf.theory;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Relational autoencoder over logical theories: mine the bias-conforming "
                 "sentences true in a ground knowledge base, invent hidden predicates whose "
                 "definitions reconstruct them, and score the reconstruction."};
    app.require_subcommand(1);

    // ---- mine -------------------------------------------------------------
    auto* mine = app.add_subcommand(
        "mine", "Extract the theory: every bias-conforming sentence true in the KB");
    struct {
        std::string kb, bias, out;
        int jobs = 0;
    } m;
    mine->add_option("--kb", m.kb, "Knowledge-base file")->required();
    mine->add_option("--bias", m.bias, "Language-bias file")->required();
    mine->add_option("--out", m.out, "Write the theory here instead of stdout");
    mine->add_option("--jobs", m.jobs, "Worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    mine->callback([&] {
        KnowledgeBase kb = parse_kb_file(m.kb);
        LanguageBias b = parse_bias_file(m.bias);
        Theory t = extract_theory(kb, b, kb.predicates(), MineOptions{effective_jobs(m.jobs)});
        std::string text = write_theory(t, b);
        if (m.out.empty()) {
            std::cout << text;
            std::cerr << "sentences: " << t.size() << "\n";
        } else {
            write_file(m.out, text);
            std::cout << "sentences: " << t.size() << "\n";
        }
    });

    // ---- invent -----------------------------------------------------------
    auto* invent = app.add_subcommand(
        "invent", "Invent hidden predicates whose definitions reconstruct the theory");
    struct {
        std::string kb, bias, theory, hidden_bias, def_bias, out;
        int budget = 0;
        unsigned long long seed = 0;
        int jobs = 0;
        ObjectiveFlags obj;
    } iv;
    invent->add_option("--kb", iv.kb, "Knowledge-base file")->required();
    invent->add_option("--bias", iv.bias, "Language-bias file for mining the theory");
    invent->add_option("--theory", iv.theory,
                       "Take the theory from this file instead of mining (revision mode)");
    invent->add_option("--hidden-bias", iv.hidden_bias, "Language-bias file for the hidden language");
    invent->add_option("--def-bias", iv.def_bias, "Language-bias file for candidate definition bodies");
    invent->add_option("--budget", iv.budget, "Maximum number of invented predicates")
        ->required()
        ->check(CLI::PositiveNumber);
    invent->add_option("--seed", iv.seed, "Seed reserved for randomized tie-breaking")
        ->capture_default_str();
    invent->add_option("--jobs", iv.jobs, "Worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    add_objective_flags(invent, iv.obj);
    invent->add_option("--out", iv.out,
                       "Directory for definitions.defs, hidden.kb, trace.json, report.json");
    invent->callback([&] {
        KnowledgeBase kb = parse_kb_file(iv.kb);
        int jobs = effective_jobs(iv.jobs);
        Theory T = resolve_theory(kb, iv.bias, iv.theory, iv.jobs);
        InventionConfig cfg;
        if (!iv.def_bias.empty()) cfg.def_bias = parse_bias_file(iv.def_bias);
        if (!iv.hidden_bias.empty()) cfg.hidden_bias = parse_bias_file(iv.hidden_bias);
        cfg.budget = iv.budget;
        cfg.params = make_params(iv.obj, jobs);
        cfg.seed = iv.seed;
        validate_config(cfg);
        InventionResult res = greedy_invent(kb, T, cfg);
        std::cerr << write_definitions(res.defs);
        std::cout << wrap_report(res.report, iv.obj, iv.budget).dump(2) << "\n";
        if (!iv.out.empty()) {
            std::filesystem::path dir(iv.out);
            std::filesystem::create_directories(dir);
            write_file(dir / "definitions.defs", write_definitions(res.defs));
            write_file(dir / "hidden.kb", write_kb(materialize_hidden_kb(kb, res.defs)));
            write_file(dir / "trace.json", trace_json(res.trace).dump(2) + "\n");
            write_file(dir / "report.json", wrap_report(res.report, iv.obj, iv.budget).dump(2) + "\n");
        }
    });

    // ---- encode -----------------------------------------------------------
    auto* enc = app.add_subcommand("encode", "Encode a theory file into hidden sentences");
    struct {
        std::string theory, defs, hidden_bias, out;
        int jobs = 0;
    } ec;
    enc->add_option("--theory", ec.theory, "Theory file to encode")->required();
    enc->add_option("--defs", ec.defs, "Definition file")->required();
    enc->add_option("--hidden-bias", ec.hidden_bias, "Language-bias file for the hidden language");
    enc->add_option("--out", ec.out, "Write the encoded theory here instead of stdout");
    enc->add_option("--jobs", ec.jobs, "Worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    enc->callback([&] {
        TheoryFile tf = parse_theory_file(ec.theory);
        DefinitionSet F = parse_definitions_file(ec.defs);
        LanguageBias bq;
        if (!ec.hidden_bias.empty()) bq = parse_bias_file(ec.hidden_bias);
        TheoryEncoding e = encode_theory(tf.theory, F, bq, effective_jobs(ec.jobs));
        std::vector<Sentence> values;
        values.reserve(e.encoded.size());
        for (const auto& [member, hidden] : e.encoded) values.push_back(hidden);
        Theory out = make_theory(values, inferred_vocab(values));
        for (const auto& u : e.uncovered) std::cerr << "uncovered: " << to_string(u) << ".\n";
        std::string text = write_theory(out, bq);
        if (ec.out.empty()) {
            std::cout << text;
            std::cerr << "sentences: " << out.size() << "\n";
        } else {
            write_file(ec.out, text);
            std::cout << "sentences: " << out.size() << "\n";
        }
    });

    // ---- decode -----------------------------------------------------------
    auto* dec = app.add_subcommand("decode", "Decode hidden sentences back over the base vocabulary");
    struct {
        std::string theory, defs, out;
        int jobs = 0;
    } dc;
    dec->add_option("--theory", dc.theory, "Hidden theory file to decode")->required();
    dec->add_option("--defs", dc.defs, "Definition file")->required();
    dec->add_option("--out", dc.out, "Write the decoded theory here instead of stdout");
    dec->add_option("--jobs", dc.jobs, "Worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    dec->callback([&] {
        TheoryFile tf = parse_theory_file(dc.theory);
        DefinitionSet F = parse_definitions_file(dc.defs);
        Theory out = decode_theory(tf.theory.sentences, F, effective_jobs(dc.jobs));
        std::string text = write_theory(out, std::nullopt);
        if (dc.out.empty()) {
            std::cout << text;
            std::cerr << "sentences: " << out.size() << "\n";
        } else {
            write_file(dc.out, text);
            std::cout << "sentences: " << out.size() << "\n";
        }
    });

    // ---- eval -------------------------------------------------------------
    auto* ev = app.add_subcommand(
        "eval", "Score a definition set against a theory (JSON report on stdout)");
    struct {
        std::string kb, bias, theory, defs, hidden_bias;
        int jobs = 0;
        ObjectiveFlags obj;
    } vl;
    ev->add_option("--kb", vl.kb, "Knowledge-base file")->required();
    ev->add_option("--bias", vl.bias, "Language-bias file for mining the theory");
    ev->add_option("--theory", vl.theory,
                   "Take the theory from this file instead of mining (revision mode)");
    ev->add_option("--defs", vl.defs, "Definition file to score")->required();
    ev->add_option("--hidden-bias", vl.hidden_bias, "Language-bias file for the hidden language");
    ev->add_option("--jobs", vl.jobs, "Worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    add_objective_flags(ev, vl.obj);
    ev->callback([&] {
        KnowledgeBase kb = parse_kb_file(vl.kb);
        int jobs = effective_jobs(vl.jobs);
        Theory T = resolve_theory(kb, vl.bias, vl.theory, vl.jobs);
        DefinitionSet F = parse_definitions_file(vl.defs);
        LanguageBias bq;
        if (!vl.hidden_bias.empty()) bq = parse_bias_file(vl.hidden_bias);
        ReconstructionReport r = evaluate(kb, T, F, bq, make_params(vl.obj, jobs));
        std::cout << wrap_report(r, vl.obj, std::nullopt).dump(2) << "\n";
    });

    // ---- stack ------------------------------------------------------------
    auto* st = app.add_subcommand(
        "stack", "Layered invention: each layer mines the previous layer's hidden KB");
    struct {
        std::string kb, bias, hidden_bias, def_bias, out;
        int layers = 1;
        int budget = 0;
        unsigned long long seed = 0;
        int jobs = 0;
        ObjectiveFlags obj;
    } sk;
    st->add_option("--kb", sk.kb, "Knowledge-base file")->required();
    st->add_option("--bias", sk.bias, "Mining bias for layer 1")->required();
    st->add_option("--hidden-bias", sk.hidden_bias,
                   "Hidden-language bias; also the mining bias for layers >= 2");
    st->add_option("--def-bias", sk.def_bias, "Language-bias file for candidate definition bodies");
    st->add_option("--layers", sk.layers, "Number of layers")->required()->check(CLI::PositiveNumber);
    st->add_option("--budget", sk.budget, "Maximum invented predicates per layer")
        ->required()
        ->check(CLI::PositiveNumber);
    st->add_option("--seed", sk.seed, "Seed reserved for randomized tie-breaking")
        ->capture_default_str();
    st->add_option("--jobs", sk.jobs, "Worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    add_objective_flags(st, sk.obj);
    st->add_option("--out", sk.out, "Directory for per-layer artifacts and flattened.defs");
    st->callback([&] {
        KnowledgeBase kb = parse_kb_file(sk.kb);
        int jobs = effective_jobs(sk.jobs);
        InventionConfig cfg;
        if (!sk.def_bias.empty()) cfg.def_bias = parse_bias_file(sk.def_bias);
        if (!sk.hidden_bias.empty()) cfg.hidden_bias = parse_bias_file(sk.hidden_bias);
        cfg.budget = sk.budget;
        cfg.params = make_params(sk.obj, jobs);
        cfg.seed = sk.seed;
        validate_config(cfg);
        LanguageBias layer1 = parse_bias_file(sk.bias);
        std::vector<LayerConfig> layers;
        layers.reserve(static_cast<std::size_t>(sk.layers));
        for (int l = 0; l < sk.layers; ++l)
            layers.push_back({l == 0 ? layer1 : cfg.hidden_bias, cfg});
        std::vector<LayerResult> results = stack(kb, layers);

        // Flatten every layer's definitions down to the base vocabulary.
        std::vector<DefinitionSet> lower;
        std::vector<Definition> flat;
        for (std::size_t l = 0; l < results.size(); ++l) {
            const LayerResult& r = results[l];
            std::cout << "layer " << (l + 1) << ": theory=" << r.theory.size()
                      << " invented=" << r.defs.size() << " objective=" << r.report.objective
                      << "\n";
            const DefinitionSet& base_defs =
                l == 0 ? r.defs : unfold_through_layers(r.defs, lower, &kb);
            for (const auto& d : base_defs.definitions()) flat.push_back(d);
            lower.push_back(r.defs);
        }
        DefinitionSet flattened(flat, /*forbid_equal_bodies=*/false);

        if (!sk.out.empty()) {
            std::filesystem::path dir(sk.out);
            std::filesystem::create_directories(dir);
            for (std::size_t l = 0; l < results.size(); ++l) {
                const LayerResult& r = results[l];
                const std::string tag = std::to_string(l + 1);
                write_file(dir / ("theory_l" + tag + ".thy"), write_theory(r.theory, std::nullopt));
                write_file(dir / ("definitions_l" + tag + ".defs"), write_definitions(r.defs));
                write_file(dir / ("hidden_l" + tag + ".kb"), write_kb(r.hidden_kb));
                write_file(dir / ("trace_l" + tag + ".json"), trace_json(r.trace).dump(2) + "\n");
                write_file(dir / ("report_l" + tag + ".json"),
                           wrap_report(r.report, sk.obj, sk.budget).dump(2) + "\n");
            }
            write_file(dir / "flattened.defs", write_definitions(flattened));
        }
    });

    // ---- oracle-check -----------------------------------------------------
    auto* oc = app.add_subcommand(
        "oracle-check", "Randomized cross-validation: miner vs brute-force oracle, codec round-trips");
    struct {
        int instances = 200;
        int roundtrip = 100;
        unsigned long long seed = 0;
        int jobs = 0;
    } ok;
    oc->add_option("--instances", ok.instances, "Miner-vs-oracle instances")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    oc->add_option("--roundtrip", ok.roundtrip, "Encode/decode round-trip instances")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    oc->add_option("--seed", ok.seed, "Base seed; instance i uses seed + i")->capture_default_str();
    oc->add_option("--jobs", ok.jobs, "Worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    oc->callback([&] {
        long long wl = work_limit_from_env();
        CheckSummary ms = run_miner_oracle_check(ok.instances, ok.seed, wl, effective_jobs(ok.jobs));
        std::cout << "miner-vs-oracle: " << ms.passed << "/" << ok.instances
                  << (ms.ok() ? " OK" : " FAIL") << "\n";
        CheckSummary rs = run_codec_roundtrip_check(ok.roundtrip, ok.seed, effective_jobs(ok.jobs));
        std::cout << "round-trip: " << rs.passed << "/" << ok.roundtrip << (rs.ok() ? " OK" : " FAIL")
                  << "\n";
        if (!ms.ok() || !rs.ok()) {
            std::string seeds;
            for (auto x : ms.failing_seeds) seeds += " " + std::to_string(x);
            for (auto x : rs.failing_seeds) seeds += " " + std::to_string(x);
            throw InternalError("oracle check failed; failing seeds:" + seeds);
        }
    });

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e); // prints help or the error message
        return code == 0 ? 0 : 3;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const VocabularyMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const UnknownHiddenPredicate& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const BiasError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownMeasure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const WorkLimitExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}

} // namespace recon
