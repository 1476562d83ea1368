#pragma once

// Command-line front end. Needs CLI11 on the include path.

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hyperlab/axioms.hpp"
#include "hyperlab/constructions.hpp"
#include "hyperlab/corpus.hpp"
#include "hyperlab/harness.hpp"
#include "hyperlab/ideals.hpp"
#include "hyperlab/io.hpp"
#include "hyperlab/predicates.hpp"
#include "hyperlab/structure.hpp"

namespace hyperlab::cli {

enum Exit : int { kOk = 0, kFindings = 1, kUsage = 2, kPrecondition = 3 };

/// Renders a set of lattice indices as the hyperideals they name.
inline std::string format_ideal_tuple(const HyperStructure& a, const IdealLattice* lattice,
                                      const std::vector<std::size_t>& idx) {
    std::string out = "(";
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) out += ",";
        out += lattice ? a.format((*lattice)[idx[i]]) : std::to_string(idx[i]);
    }
    return out + ")";
}

/// "true s=2 (note)" / "false witness (1,1,2,3)".
inline std::string describe(const HyperStructure& a, const Verdict& v, const IdealLattice* lattice = nullptr) {
    std::string out = v.holds ? "true" : "false";
    if (v.witness_s) out += " s=" + a.name_of(*v.witness_s);
    if (!v.counterexample.empty()) out += " witness " + a.format(v.counterexample);
    if (!v.counterexample_ideals.empty()) out += " witness " + format_ideal_tuple(a, lattice, v.counterexample_ideals);
    for (const auto& r : v.refutations) {
        out += " [s=" + a.name_of(r.s) + ": ";
        out += r.ideals.empty() ? a.format(r.tuple) : format_ideal_tuple(a, lattice, r.ideals);
        out += "]";
    }
    if (!v.note.empty()) out += " (" + v.note + ")";
    return out;
}

inline nlohmann::ordered_json verdict_json(const HyperStructure& a, const Verdict& v, const IdealLattice* lattice) {
    auto names = [&](std::span<const Element> t) {
        std::vector<std::string> out;
        for (Element e : t) out.push_back(a.name_of(e));
        return out;
    };
    auto ideal_names = [&](const std::vector<std::size_t>& idx) {
        nlohmann::ordered_json out = nlohmann::ordered_json::array();
        for (std::size_t i : idx) {
            const ElementSet q = lattice ? (*lattice)[i] : ElementSet{};
            out.push_back(names(q.to_vector()));
        }
        return out;
    };
    nlohmann::ordered_json j;
    j["holds"] = v.holds;
    if (v.witness_s) j["s"] = a.name_of(*v.witness_s);
    if (!v.counterexample.empty()) j["witness"] = names(v.counterexample);
    if (!v.counterexample_ideals.empty()) j["witnessIdeals"] = ideal_names(v.counterexample_ideals);
    if (!v.refutations.empty()) {
        nlohmann::ordered_json rs = nlohmann::ordered_json::array();
        for (const auto& r : v.refutations) {
            nlohmann::ordered_json rj;
            rj["s"] = a.name_of(r.s);
            if (r.ideals.empty())
                rj["witness"] = names(r.tuple);
            else
                rj["witnessIdeals"] = ideal_names(r.ideals);
            rs.push_back(rj);
        }
        j["refutations"] = rs;
    }
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

inline std::string format_violation(const HyperStructure& a, const AxiomViolation& v) {
    std::string out = std::string(to_string(v.axiom)) + " at " + a.format(v.witness);
    if (!v.positions.empty()) {
        out += " positions (";
        for (std::size_t i = 0; i < v.positions.size(); ++i) out += (i ? "," : "") + std::to_string(v.positions[i]);
        out += ")";
    }
    if (v.clause) out += " clause " + std::to_string(v.clause);
    if (!v.detail.empty()) out += ": " + v.detail;
    return out;
}

/// Comma-separated element names to a set; "" is the empty set.
inline ElementSet parse_names(const HyperStructure& a, const std::string& list) {
    ElementSet out;
    if (list.empty()) return out;
    std::istringstream is(list);
    std::string nm;
    while (std::getline(is, nm, ',')) out.insert(a.element(nm));
    if (list.back() == ',') throw UnknownElement("empty element name in '" + list + "'");
    return out;
}

struct Input {
    std::string fixture;
    std::string path;
};

struct Loaded {
    std::string label;
    HyperStructure structure;
    std::optional<ElementSet> q;
    std::optional<ElementSet> s;
};

inline Loaded load_input(const Input& in) {
    if (in.fixture.empty() == in.path.empty()) throw CLI::ValidationError("input", "give exactly one of --fixture or a path");
    if (!in.fixture.empty()) {
        Fixture f = fixture(in.fixture);
        return {in.fixture, std::move(f.structure), f.q, f.s};
    }
    return {in.path, load_structure(in.path), std::nullopt, std::nullopt};
}

inline std::uint64_t default_budget() {
    if (const char* env = std::getenv("HYPERLAB_BUDGET")) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used == std::string(env).size() && v > 0) return v;
        } catch (const std::exception&) {
        }
        throw CLI::ValidationError("HYPERLAB_BUDGET", std::string("not a positive integer: '") + env + "'");
    }
    return PredicateOptions{}.ideal_tuple_budget;
}

inline int cmd_validate(const Input& in, bool first, bool json, std::ostream& out) {
    const Loaded l = load_input(in);
    const auto vs = check_krasner(l.structure, CheckOptions{first});
    if (json) {
        nlohmann::ordered_json j;
        j["structure"] = l.structure.name();
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& v : vs) {
            nlohmann::ordered_json vj;
            vj["axiom"] = to_string(v.axiom);
            std::vector<std::string> w;
            for (Element e : v.witness) w.push_back(l.structure.name_of(e));
            vj["witness"] = w;
            vj["positions"] = v.positions;
            vj["clause"] = v.clause;
            vj["detail"] = v.detail;
            arr.push_back(vj);
        }
        j["violations"] = arr;
        out << j.dump(2) << "\n";
    } else {
        for (const auto& v : vs) out << "VIOLATION " << format_violation(l.structure, v) << "\n";
        out << l.structure.name() << ": " << (vs.empty() ? "valid" : std::to_string(vs.size()) + " violation(s)")
            << "\n";
    }
    return vs.empty() ? kOk : kFindings;
}

inline int cmd_classify(const Input& in, const std::optional<std::string>& ideal,
                        const std::optional<std::string>& mult_set, std::uint64_t budget, bool json, std::ostream& out,
                        std::ostream& err) {
    const Loaded l = load_input(in);
    const HyperStructure& a = l.structure;
    const auto q = ideal ? std::optional<ElementSet>(parse_names(a, *ideal)) : l.q;
    const auto s = mult_set ? std::optional<ElementSet>(parse_names(a, *mult_set)) : l.s;
    if (!q || !s) throw CLI::ValidationError("classify", "--ideal and --mult-set are required for this input");
    if (!check_krasner(a, CheckOptions{true}).empty())
        err << "warning: " << a.name() << " fails the Krasner axioms; verdicts are computed on the tables as given\n";
    detail::require_ideal_pair(a, *q, *s);
    const IdealLattice lattice = enumerate_hyperideals(a);
    const Classification c = classify(a, *q, *s, lattice, PredicateOptions{budget});
    if (json) {
        nlohmann::ordered_json j;
        j["structure"] = a.name();
        std::vector<std::string> qn, sn;
        for (Element e : *q) qn.push_back(a.name_of(e));
        for (Element e : *s) sn.push_back(a.name_of(e));
        j["ideal"] = qn;
        j["multSet"] = sn;
        for (const auto& name : predicate_names()) {
            const Outcome& o = outcome_of(c, name);
            if (o.evaluable())
                j[name] = verdict_json(a, *o.verdict, &lattice);
            else
                j[name] = nlohmann::ordered_json{{"error", o.error}};
        }
        out << j.dump(2) << "\n";
    } else {
        out << "structure: " << a.name() << "\nQ: " << a.format(*q) << "\nS: " << a.format(*s) << "\n";
        for (const auto& name : predicate_names()) {
            const Outcome& o = outcome_of(c, name);
            out << name << ": " << (o.evaluable() ? describe(a, *o.verdict, &lattice) : "error " + o.error) << "\n";
        }
    }
    return kOk;
}

inline int cmd_ideals(const Input& in, bool json, std::ostream& out) {
    const Loaded l = load_input(in);
    const HyperStructure& a = l.structure;
    const IdealLattice lattice = enumerate_hyperideals(a);
    if (json) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < lattice.size(); ++i) {
            std::vector<std::string> names;
            for (Element e : lattice[i]) names.push_back(a.name_of(e));
            arr.push_back(nlohmann::ordered_json{{"ideal", names}, {"prime", lattice.is_prime(i)}});
        }
        out << nlohmann::ordered_json{{"structure", a.name()}, {"ideals", arr}}.dump(2) << "\n";
    } else {
        for (std::size_t i = 0; i < lattice.size(); ++i)
            out << a.format(lattice[i]) << (lattice.is_prime(i) ? " prime" : "") << "\n";
    }
    return kOk;
}

struct CorpusFlags {
    std::vector<std::string> names;
    bool default_corpus = false;
};

inline CorpusSpec corpus_spec(const CorpusFlags& flags, std::uint64_t budget) {
    CorpusSpec spec = CorpusSpec::default_corpus();
    if (!flags.default_corpus && !flags.names.empty()) {
        spec.fixtures.clear();
        for (const auto& n : flags.names) {
            if (n == "none") continue;
            (void)fixture(n);
            spec.fixtures.push_back(n);
        }
    }
    spec.budget = budget;
    return spec;
}

inline int cmd_theorems(const CorpusFlags& flags, std::uint64_t budget, bool json, std::ostream& out) {
    const SuiteResult r = run_suite(corpus_spec(flags, budget));
    if (json) {
        out << to_json(r).dump(2) << "\n";
    } else {
        for (const auto& d : r.discrepancies) out << "DISCREPANCY " << d << "\n";
        for (const auto& rep : r.reports) out << to_text(rep) << "\n";
        out << "verified " << r.count(Status::Verified) << ", counterexample " << r.count(Status::Counterexample)
            << ", skipped " << r.count(Status::Skipped) << "\n";
    }
    return r.failures() == 0 ? kOk : kFindings;
}

inline int cmd_search(const CorpusFlags& flags, const std::string& holds, const std::string& fails,
                      std::uint64_t budget, bool json, std::ostream& out) {
    const Corpus corpus = build_corpus(corpus_spec(flags, budget));
    const auto found = search_separating_instances(corpus, holds, fails);
    if (json) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& f : found) {
            const auto entry = std::find_if(corpus.entries.begin(), corpus.entries.end(),
                                            [&](const EntryPtr& e) { return e->name == f.structure; });
            const HyperStructure& a = (*entry)->a();
            std::vector<std::string> q, s;
            for (Element e : f.q) q.push_back(a.name_of(e));
            for (Element e : f.s) s.push_back(a.name_of(e));
            arr.push_back(nlohmann::ordered_json{{"structure", f.structure}, {"ideal", q}, {"multSet", s}});
        }
        out << arr.dump(2) << "\n";
    } else {
        for (const auto& f : found) out << f.rendering << "\n";
        out << found.size() << " separating instance(s)\n";
    }
    return kOk;
}

/// Runs the tool; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Krasner (m,n)-hyperring workbench"};
    app.require_subcommand(1);
    Input in;
    bool first = false, json = false;
    std::optional<std::string> ideal, mult_set;
    std::optional<std::uint64_t> budget_flag;
    CorpusFlags corpus;
    std::string holds, fails;

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("--fixture", in.fixture, "built-in fixture name");
        sub->add_option("path", in.path, "structure document (JSON)");
        sub->add_flag("--json", json, "machine-readable output");
    };
    auto add_corpus = [&](CLI::App* sub) {
        sub->add_option("--corpus", corpus.names, "fixture names, or 'none'")->expected(1, -1);
        sub->add_flag("--default-corpus", corpus.default_corpus, "use the default corpus");
        sub->add_option("--budget", budget_flag, "ideal-tuple budget per instance");
        sub->add_flag("--json", json, "machine-readable output");
    };

    auto* validate = app.add_subcommand("validate", "check the Krasner axioms");
    add_input(validate);
    validate->add_flag("--first-violation", first, "stop at the first violation");

    auto* classify_cmd = app.add_subcommand("classify", "evaluate every predicate on (Q, S)");
    add_input(classify_cmd);
    classify_cmd->add_option("--ideal", ideal, "comma-separated element names");
    classify_cmd->add_option("--mult-set", mult_set, "comma-separated element names");
    classify_cmd->add_option("--budget", budget_flag, "ideal-tuple budget");

    auto* ideals_cmd = app.add_subcommand("ideals", "list all hyperideals");
    add_input(ideals_cmd);

    auto* theorems = app.add_subcommand("theorems", "run the theorem suite");
    add_corpus(theorems);

    auto* search = app.add_subcommand("search", "find instances separating two predicates");
    add_corpus(search);
    search->add_option("--holds", holds, "predicate that must hold")->required();
    search->add_option("--fails", fails, "predicate that must fail")->required();

    try {
        app.parse(argc, argv);
        const std::uint64_t budget = budget_flag ? *budget_flag : default_budget();
        if (*validate) return cmd_validate(in, first, json, out);
        if (*classify_cmd) return cmd_classify(in, ideal, mult_set, budget, json, out, err);
        if (*ideals_cmd) return cmd_ideals(in, json, out);
        if (*theorems) return cmd_theorems(corpus, budget, json, out);
        if (*search) return cmd_search(corpus, holds, fails, budget, json, out);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    } catch (const DisjointnessViolated& e) {
        err << "error: disjointness violated: " << e.what() << "\n";
        return kPrecondition;
    } catch (const NotAHyperideal& e) {
        err << "error: not a hyperideal: " << e.what() << "\n";
        return kPrecondition;
    } catch (const NotMultiplicative& e) {
        err << "error: not multiplicative: " << e.what() << "\n";
        return kPrecondition;
    } catch (const NotProper& e) {
        err << "error: not proper: " << e.what() << "\n";
        return kPrecondition;
    } catch (const CapacityExceeded& e) {
        err << "error: capacity: " << e.what() << "\n";
        return kPrecondition;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace hyperlab::cli
