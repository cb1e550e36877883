#include "recon/miner.hpp"

#include "recon/errors.hpp"
#include "recon/parallel.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

namespace recon {

bool Theory::contains(const Sentence& canonical) const {
    return std::find(sentences.begin(), sentences.end(), canonical) != sentences.end();
}

long long Theory::atom_cost() const {
    long long n = 0;
    for (const auto& s : sentences) n += s.size();
    return n;
}

Theory make_theory(std::vector<Sentence> sentences, std::map<std::string, int> vocabulary) {
    std::set<Sentence> dedup;
    for (auto& s : sentences) dedup.insert(canonicalize(s));
    std::vector<std::pair<std::string, Sentence>> keyed;
    keyed.reserve(dedup.size());
    for (auto& s : dedup) keyed.emplace_back(to_string(s), s);
    std::sort(keyed.begin(), keyed.end());
    Theory t;
    t.vocabulary = std::move(vocabulary);
    t.sentences.reserve(keyed.size());
    for (auto& [_, s] : keyed) t.sentences.push_back(std::move(s));
    return t;
}

namespace {

void check_vocab(const KnowledgeBase& kb, const std::map<std::string, int>& vocab) {
    for (const auto& [name, arity] : vocab) {
        if (!kb.has_predicate(name))
            throw VocabularyMismatch("vocabulary predicate '" + name +
                                     "' is not declared in the knowledge base");
        if (kb.arity(name) != arity)
            throw VocabularyMismatch("vocabulary predicate '" + name + "/" +
                                     std::to_string(arity) + "' is declared with arity " +
                                     std::to_string(kb.arity(name)));
    }
}

// Enumerates every atom over `pred`/`arity` whose slots draw from the
// variables {0..base_vars-1}, fresh variables introduced consecutively from
// base_vars (first-use order, total capped at vmax), and — when `constants`
// is non-null — any constant. Yields each atom with its fresh-variable count.
template <class Sink>
void enumerate_atoms(const std::string& pred, int arity, int base_vars, int vmax,
                     const std::vector<std::string>* constants, Sink&& sink) {
    std::vector<Term> slots(static_cast<std::size_t>(arity));
    std::function<void(int, int)> fill = [&](int slot, int fresh) {
        if (slot == arity) {
            sink(Atom{pred, slots}, fresh);
            return;
        }
        for (int v = 0; v < base_vars + fresh; ++v) {
            slots[slot] = Term::variable(v);
            fill(slot + 1, fresh);
        }
        if (base_vars + fresh < vmax) {
            slots[slot] = Term::variable(base_vars + fresh);
            fill(slot + 1, fresh + 1);
        }
        if (constants) {
            for (const auto& c : *constants) {
                slots[slot] = Term::constant_term(c);
                fill(slot + 1, fresh);
            }
        }
    };
    fill(0, 0);
}

int max_arity_of(const std::map<std::string, int>& vocab) {
    int m = 0;
    for (const auto& [_, a] : vocab) m = std::max(m, a);
    return m;
}

} // namespace

Theory extract_theory(const KnowledgeBase& kb, const LanguageBias& b,
                      const std::map<std::string, int>& vocab, const MineOptions& opts) {
    check_vocab(kb, vocab);

    std::vector<std::string> consts(kb.constants().begin(), kb.constants().end());
    const std::vector<std::string>* const_slots = b.variables_only ? nullptr : &consts;
    const int vmax = b.max_vars ? *b.max_vars : b.max_len * max_arity_of(vocab);

    std::set<Sentence> satisfiable; // all levels, canonical
    std::set<Sentence> current;     // this level

    for (const auto& [pred, arity] : vocab) {
        enumerate_atoms(pred, arity, 0, vmax, const_slots, [&](const Atom& a, int) {
            Sentence s(std::vector<Atom>{a});
            if (kb.satisfies(s)) current.insert(canonicalize(s));
        });
    }
    satisfiable.insert(current.begin(), current.end());

    for (int level = 2; level <= b.max_len; ++level) {
        std::vector<Sentence> frontier(current.begin(), current.end());
        std::vector<std::vector<Sentence>> slot_results(frontier.size());
        parallel_for(frontier.size(), opts.jobs, [&](std::size_t i) {
            const Sentence& f = frontier[i];
            const int base_vars = f.variable_count();
            std::set<Sentence> out;
            for (const auto& [pred, arity] : vocab) {
                enumerate_atoms(pred, arity, base_vars, vmax, const_slots,
                                [&](const Atom& a, int) {
                    std::vector<Atom> atoms = f.atoms();
                    atoms.push_back(a);
                    Sentence e(std::move(atoms));
                    if (e.size() != f.size() + 1) return; // duplicate atom
                    if (!kb.satisfies(e)) return;         // anti-monotone prune
                    out.insert(canonicalize(e));
                });
            }
            slot_results[i].assign(out.begin(), out.end());
        });
        std::set<Sentence> next;
        for (const auto& chunk : slot_results) next.insert(chunk.begin(), chunk.end());
        current = std::move(next);
        satisfiable.insert(current.begin(), current.end());
        if (current.empty()) break;
    }

    std::vector<Sentence> kept;
    for (const auto& s : satisfiable)
        if (conforms(b, s)) kept.push_back(s);
    return make_theory(std::move(kept), vocab);
}

namespace {

struct WorkBudget {
    long long used = 0;
    long long limit = 0;
    void charge(long long n = 1) {
        used += n;
        if (used > limit)
            throw WorkLimitExceeded("oracle enumeration exceeded the work limit of " +
                                    std::to_string(limit) +
                                    " (set RECON_WORK_LIMIT to raise it)");
    }
};

// Exhaustive satisfiability: tries every assignment of constants to the
// variables 0..var_count-1 in index order, checking each atom as soon as all
// of its variables are bound. Independent of KnowledgeBase::satisfies.
bool exhaustively_satisfiable(const KnowledgeBase& kb, const std::vector<Atom>& atoms,
                              int var_count, const std::vector<std::string>& consts,
                              WorkBudget& budget) {
    // Atoms whose last-bound variable is v are checked right after v binds.
    std::vector<std::vector<const Atom*>> due(static_cast<std::size_t>(var_count) + 1);
    for (const auto& a : atoms) {
        int last = -1;
        for (const auto& t : a.terms)
            if (t.is_variable()) last = std::max(last, t.var);
        due[static_cast<std::size_t>(last + 1)].push_back(&a);
    }

    std::vector<std::string> assign(static_cast<std::size_t>(var_count));
    Atom ground;
    auto check_due = [&](int stage) {
        for (const Atom* a : due[static_cast<std::size_t>(stage)]) {
            ground.predicate = a->predicate;
            ground.terms = a->terms;
            for (auto& t : ground.terms)
                if (t.is_variable()) t = Term::constant_term(assign[static_cast<std::size_t>(t.var)]);
            budget.charge();
            if (!kb.holds(ground)) return false;
        }
        return true;
    };

    if (!check_due(0)) return false; // variable-free atoms
    if (var_count == 0) return true;

    std::function<bool(int)> rec = [&](int v) {
        for (const auto& c : consts) {
            assign[static_cast<std::size_t>(v)] = c;
            if (!check_due(v + 1)) continue;
            if (v + 1 == var_count) return true;
            if (rec(v + 1)) return true;
        }
        return false;
    };
    return rec(0);
}

} // namespace

Theory brute_force_theory(const KnowledgeBase& kb, const LanguageBias& b,
                          const std::map<std::string, int>& vocab,
                          const OracleOptions& opts) {
    check_vocab(kb, vocab);

    std::vector<std::string> consts(kb.constants().begin(), kb.constants().end());
    const std::vector<std::string>* const_slots = b.variables_only ? nullptr : &consts;
    const int vmax = b.max_vars ? *b.max_vars : b.max_len * max_arity_of(vocab);
    WorkBudget budget{0, opts.work_limit};

    std::set<Sentence> found;
    std::vector<Atom> seq;

    std::function<void(int)> rec = [&](int var_count) {
        int n = static_cast<int>(seq.size());
        if (n >= b.min_len && n <= b.max_len) {
            if (exhaustively_satisfiable(kb, seq, var_count, consts, budget)) {
                Sentence s(seq);
                if (static_cast<int>(s.atoms().size()) == n && conforms(b, s))
                    found.insert(canonicalize(s));
            }
        }
        if (n == b.max_len) return;
        for (const auto& [pred, arity] : vocab) {
            enumerate_atoms(pred, arity, var_count, vmax, const_slots,
                            [&](const Atom& a, int fresh) {
                budget.charge();
                if (!seq.empty() && !(seq.back() < a)) return; // ascending atom order
                seq.push_back(a);
                rec(var_count + fresh);
                seq.pop_back();
            });
        }
    };
    rec(0);

    return make_theory({found.begin(), found.end()}, vocab);
}

// --- theory files ----------------------------------------------------------

namespace {

std::string trim_copy(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    auto b2 = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b2 - a + 1);
}

std::map<std::string, int> parse_vocab_header(const std::string& rest, int line_no) {
    std::map<std::string, int> vocab;
    std::istringstream in(rest);
    std::string token;
    while (in >> token) {
        auto slash = token.find('/');
        if (slash == std::string::npos || slash == 0 || slash + 1 >= token.size())
            throw ParseError("malformed vocab entry '" + token + "'", line_no);
        std::string name = token.substr(0, slash);
        int arity = 0;
        try {
            arity = std::stoi(token.substr(slash + 1));
        } catch (const std::exception&) {
            throw ParseError("malformed vocab arity in '" + token + "'", line_no);
        }
        auto [it, inserted] = vocab.emplace(name, arity);
        if (!inserted && it->second != arity)
            throw ArityConflict("vocab lists '" + name + "' twice with different arities",
                                line_no);
    }
    return vocab;
}

} // namespace

TheoryFile parse_theory_text(const std::string& text) {
    TheoryFile out;
    std::optional<std::map<std::string, int>> header_vocab;
    std::vector<Sentence> sentences;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string body = trim_copy(line);
        if (body.empty()) continue;
        if (body[0] == '#') {
            std::string rest = trim_copy(body.substr(1));
            if (rest.rfind("vocab:", 0) == 0) {
                header_vocab = parse_vocab_header(rest.substr(6), line_no);
            } else if (rest.rfind("bias:", 0) == 0) {
                try {
                    out.bias = parse_bias_header(trim_copy(rest.substr(5)));
                } catch (const BiasError& e) {
                    throw BiasError("line " + std::to_string(line_no) + ": " + e.what());
                }
            }
            continue; // other # lines are comments
        }
        if (body[0] == '%') continue;
        try {
            sentences.push_back(canonicalize(parse_sentence(body)));
        } catch (const ParseError& e) {
            if (e.line > 0) throw;
            throw ParseError(e.what(), line_no);
        }
    }

    std::map<std::string, int> vocab;
    if (header_vocab) {
        vocab = *header_vocab;
        for (const auto& s : sentences)
            for (const auto& a : s.atoms()) {
                auto it = vocab.find(a.predicate);
                if (it == vocab.end())
                    throw VocabularyMismatch("sentence predicate '" + a.predicate +
                                             "' missing from the vocab header");
                if (it->second != a.arity())
                    throw VocabularyMismatch("predicate '" + a.predicate + "' used with arity " +
                                             std::to_string(a.arity()) + " but vocab says " +
                                             std::to_string(it->second));
            }
    } else {
        for (const auto& s : sentences)
            for (const auto& a : s.atoms()) {
                auto [it, inserted] = vocab.emplace(a.predicate, a.arity());
                if (!inserted && it->second != a.arity())
                    throw ArityConflict("predicate '" + a.predicate +
                                        "' used with conflicting arities in the theory");
            }
    }

    out.theory = make_theory(std::move(sentences), std::move(vocab));
    return out;
}

TheoryFile parse_theory_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open theory file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_theory_text(buf.str());
}

std::string write_theory(const Theory& t, const std::optional<LanguageBias>& bias) {
    std::ostringstream out;
    out << "# vocab:";
    for (const auto& [name, arity] : t.vocabulary) out << " " << name << "/" << arity;
    out << "\n";
    if (bias) out << "# bias: " << bias_to_header(*bias) << "\n";
    for (const auto& s : t.sentences) out << to_string(s) << ".\n";
    return out.str();
}

} // namespace recon
