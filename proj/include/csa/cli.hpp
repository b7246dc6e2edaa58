/* cli.hpp -- command-line surface over the whole library.
 *
 * One dispatch entry point with subcommands for validation, simulation,
 * membership and emptiness decisions, machine rewrites, syntactic
 * classification, and bounded language enumeration.  Results go to stdout
 * as a single JSON object (see docs/output.schema.json); human-oriented
 * notes go to stderr.  Exit codes: 0 result delivered, 1 parse or
 * validation or usage failure, 2 resource budget exhausted, 3 the request
 * falls outside the decided classes.  The environment variable
 * CSA_BUDGET_STEPS overrides default step and configuration budgets.
 *
 * Input words are spelled per character ("aabb"), or space-separated when
 * a symbol name is longer than one character ("t0 t3 t1"); an empty
 * --input is the empty word.
 */
#pragma once

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "decide.hpp"
#include "format.hpp"
#include "machine.hpp"
#include "ncm.hpp"
#include "simulate.hpp"
#include "transform.hpp"

namespace csa {
namespace cli {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kBudget = 2;
constexpr int kClass = 3;

inline int emit(const json& j, int code) {
    std::cout << j.dump(2) << "\n";
    return code;
}

inline void note(const std::string& msg) { std::cerr << msg << "\n"; }

inline uint64_t env_budget(uint64_t fallback) {
    if (const char* v = std::getenv("CSA_BUDGET_STEPS")) {
        try {
            return std::stoull(v);
        } catch (const std::exception&) {
            note(std::string("ignoring unparsable CSA_BUDGET_STEPS='") + v + "'");
        }
    }
    return fallback;
}

/// Per-character unless the text contains spaces, then token-per-word.
inline Word parse_input_word(const MachineSpec& m, const std::string& text) {
    std::vector<std::string> tokens;
    if (text.find(' ') != std::string::npos) {
        std::istringstream in(text);
        std::string tok;
        while (in >> tok) tokens.push_back(tok);
    } else {
        for (char ch : text) tokens.emplace_back(1, ch);
    }
    Word w;
    for (const std::string& tok : tokens) {
        if (!m.syms.contains(tok))
            throw std::invalid_argument("input symbol '" + tok + "' is not a symbol of machine " +
                                        m.name);
        SymbolId s = m.syms.id(tok);
        if (!m.in_input_alphabet(s))
            throw std::invalid_argument("symbol '" + tok + "' is not in the input alphabet of " +
                                        m.name);
        w.push_back(s);
    }
    return w;
}

inline std::string display_word(const MachineSpec& m, const Word& w) {
    bool multi = false;
    for (SymbolId s : w) multi = multi || m.syms.name(s).size() > 1;
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
        if (multi && i) out += " ";
        out += m.syms.name(w[i]);
    }
    return out;
}

/// Word plus the per-store instruction traces of one accepting run, so the
/// result can be re-verified externally.
inline json witness_json(const MachineSpec& m, const Word& w, const std::vector<size_t>& trace) {
    json out;
    out["word"] = display_word(m, w);
    json symbols = json::array();
    for (SymbolId s : w) symbols.push_back(m.syms.name(s));
    out["symbols"] = symbols;
    json stores = json::array();
    for (const auto& tr : store_traces(m, trace)) {
        json one = json::array();
        for (const Instruction& ins : tr) one.push_back(instruction_name(ins, m.syms));
        stores.push_back(one);
    }
    out["stores"] = stores;
    return out;
}

inline json diag_list(const std::vector<Diagnostic>& diags) {
    json arr = json::array();
    for (const Diagnostic& d : diags) arr.push_back(d.category + ": " + d.message);
    return arr;
}

/// Parse and statically validate; failures are reported on the JSON object
/// and turned into exit code 1 by the caller.
inline MachineSpec load_machine(const std::string& path) {
    MachineSpec m = parse_machine_file(path);
    auto diags = validate_machine(m);
    if (!diags.empty()) {
        std::string msg = "machine " + m.name + " fails validation:";
        for (const Diagnostic& d : diags) msg += "\n  " + d.category + ": " + d.message;
        throw std::invalid_argument(msg);
    }
    return m;
}

inline size_t stack_count(const MachineSpec& m) {
    size_t n = 0;
    for (const auto& s : m.stores)
        if (s.kind == StoreKind::CheckingStack) ++n;
    return n;
}

inline bool has_label(const MachineSpec& m, const std::string& label) {
    auto labels = classify_restrictions(m);
    return std::find(labels.begin(), labels.end(), label) != labels.end();
}

/// Append a counter no transition ever moves, so single-counter reductions
/// also apply to counterless machines; the language is untouched.
inline MachineSpec with_idle_counter(const MachineSpec& m0) {
    MachineSpec m = m0;
    std::string sym = "z";
    for (int i = 0; m.syms.contains(sym); ++i) sym = "z" + std::to_string(i);
    StoreTypeSpec ct;
    ct.kind = StoreKind::RbCounter;
    ct.id = "idle";
    for (int i = 0;; ++i) {
        bool clash = false;
        for (const auto& st : m.stores) clash = clash || st.id == ct.id;
        if (!clash) break;
        ct.id = "idle" + std::to_string(i);
    }
    ct.alphabet = {m.syms.intern(sym)};
    ct.reversal_bound = 1;
    m.stores.push_back(ct);
    for (Transition& t : m.transitions) {
        t.store_reads.push_back(SymbolId(kBottom));
        t.instructions.push_back(stay_ins());
    }
    return m;
}

inline json label_names(const TwoDcm1Instance& inst) {
    json labels = json::array();
    for (SymbolId s : inst.labels) labels.push_back(inst.machine.syms.name(s));
    return labels;
}

/// Source transition indices per label, null where a side contributes no
/// transition.
inline json source_pairs(const TwoDcm1Instance& inst) {
    json sources = json::array();
    for (const auto& src : inst.sources) {
        json pair = json::array();
        for (size_t v : src) {
            if (v == kNoSource)
                pair.push_back(nullptr);
            else
                pair.push_back(v);
        }
        sources.push_back(pair);
    }
    return sources;
}

/* ------------------------------------------------------------------ */
/* Subcommands.                                                        */

inline int cmd_validate(const std::string& path) {
    MachineSpec m;
    try {
        m = parse_machine_file(path);
    } catch (const ParseError& e) {
        note(e.what());
        return emit({{"verdict", "parse-error"}, {"diagnostics", json::array({e.what()})}},
                    kInvalid);
    }
    auto diags = validate_machine(m);
    if (diags.empty()) return emit({{"verdict", "ok"}}, kOk);
    for (const Diagnostic& d : diags) note(d.category + ": " + d.message);
    return emit({{"verdict", "invalid"}, {"diagnostics", diag_list(diags)}}, kInvalid);
}

inline int cmd_run(const std::string& path, const std::string& input, uint64_t max_steps,
                   bool require_consumed) {
    MachineSpec m = load_machine(path);
    Word w = parse_input_word(m, input);
    if (m.deterministic) {
        RunResult r = run_deterministic(m, w, max_steps, require_consumed);
        note("steps: " + std::to_string(r.steps));
        switch (r.verdict) {
            case RunVerdict::Accept:
                return emit({{"verdict", "accept"},
                             {"trace", r.trace},
                             {"witness", witness_json(m, w, r.trace)}},
                            kOk);
            case RunVerdict::Reject: return emit({{"verdict", "reject"}}, kOk);
            case RunVerdict::Budget: return emit({{"verdict", "budget"}}, kBudget);
            case RunVerdict::Conflict:
                return emit({{"verdict", "conflict"},
                             {"diagnostics",
                              json::array({"machine is declared deterministic but has rival "
                                           "enabled transitions"})}},
                            kInvalid);
        }
        return kInvalid;
    }
    BoundedResult r = accepts_bounded(m, w, max_steps, require_consumed);
    note("configurations visited: " + std::to_string(r.visited));
    if (r.accepted)
        return emit(
            {{"verdict", "accept"}, {"trace", r.trace}, {"witness", witness_json(m, w, r.trace)}},
            kOk);
    if (r.complete) return emit({{"verdict", "reject"}}, kOk);
    return emit({{"verdict", "budget"}}, kBudget);
}

inline int cmd_member(const std::string& path, const std::string& input) {
    MachineSpec m = load_machine(path);
    Word w = parse_input_word(m, input);
    if (is_ncm_signature(m)) {
        bool in = ncm_membership(m, w, env_budget(2000000));
        return emit({{"verdict", in ? "accept" : "reject"}}, kOk);
    }
    if (is_csacm_signature(m) && m.oneway && m.heads == 1) {
        if (!m.deterministic)
            throw UndecidableClassError(
                "membership for a nondeterministic checking stack machine is outside the "
                "decided classes");
        uint64_t guard = env_budget(20000000);
        bool in = stack_count(m) == 1 ? decide_membership_dcsacm(m, w, guard)
                                      : decide_membership_kstack(m, w, guard);
        return emit({{"verdict", in ? "accept" : "reject"}}, kOk);
    }
    throw std::invalid_argument(
        "member handles one-way counter machines and one-way deterministic checking stack "
        "machines; " +
        m.name + " is neither");
}

inline int cmd_empty(const std::string& path) {
    MachineSpec m = load_machine(path);
    if (is_ncm_signature(m)) {
        EmptinessVerdict v = ncm_emptiness(m, env_budget(2000000));
        if (!v.note.empty()) note(v.note);
        if (v.empty) return emit({{"verdict", v.exact ? "empty" : "unresolved"}}, kOk);
        return emit({{"verdict", "nonempty"},
                     {"trace", v.trace},
                     {"witness", witness_json(m, v.witness, v.trace)}},
                    kOk);
    }
    if (m.oneway && m.heads == 1 && m.deterministic && is_csacm_signature(m) &&
        stack_count(m) == 1 && m.stores.size() <= 2 && has_label(m, "no-read")) {
        TwoDcm1Instance inst =
            noread_dcsacm1_to_2dcm1(m.stores.size() == 1 ? with_idle_counter(m) : m);
        json artifact = {{"machine", serialize_machine(inst.machine)},
                         {"labels", label_names(inst)},
                         {"sources", source_pairs(inst)}};
        uint64_t budget = env_budget(500000);
        NonemptyResult probe = nonempty_bounded(m, 12, budget);
        if (probe.witness) {
            BoundedResult replay = accepts_bounded(m, *probe.witness, budget);
            json out = {{"verdict", "nonempty"}, {"reduction_artifact", artifact}};
            if (replay.accepted) {
                out["witness"] = witness_json(m, *probe.witness, replay.trace);
                out["trace"] = replay.trace;
            }
            return emit(out, kOk);
        }
        note(probe.complete ? "no witness up to length 12; the reduction instance carries the "
                              "exact question"
                            : "bounded search exhausted its budget");
        return emit({{"verdict", "unresolved"}, {"reduction_artifact", artifact}}, kOk);
    }
    throw UndecidableClassError(
        "emptiness is decided for one-way counter machines exactly, and reduced with a bounded "
        "verdict for no-read deterministic single-stack machines; " + m.name +
        " is outside both classes");
}

inline int cmd_transform(const std::string& kind, const std::string& in1, const std::string& in2,
                         const std::string& outpath, bool allow_nondet,
                         const std::string& input) {
    MachineSpec m = load_machine(in1);
    json extra;
    MachineSpec result;
    if (kind == "label-determinize") {
        result = label_determinize(m);
    } else if (kind == "erase-input") {
        result = erase_input(m);
    } else if (kind == "restrict-lambda") {
        result = restrict_to_lambda(m);
    } else if (kind == "normalize") {
        result = normalize_dcsacm(m);
    } else if (kind == "twoway-to-csacm") {
        result = twoway_counter_to_csacm(m, allow_nondet);
    } else if (kind == "lambda-ncsacm") {
        result = twodcm2_to_lambda_ncsacm(m);
    } else if (kind == "lambda-word") {
        result = make_lambda_machine(m, parse_input_word(m, input));
    } else if (kind == "to-2dcm1") {
        bool counterless = stack_count(m) == 1 && m.stores.size() == 1;
        TwoDcm1Instance inst = noread_dcsacm1_to_2dcm1(counterless ? with_idle_counter(m) : m);
        result = inst.machine;
        extra = {{"labels", label_names(inst)}, {"sources", source_pairs(inst)}};
    } else if (kind == "intersect-empty") {
        if (in2.empty())
            throw std::invalid_argument("transform intersect-empty needs two machine files");
        MachineSpec m2 = load_machine(in2);
        if (stack_count(m) == 1 && m.stores.size() == 1) m = with_idle_counter(m);
        if (stack_count(m2) == 1 && m2.stores.size() == 1) m2 = with_idle_counter(m2);
        TwoDcm1Instance inst = intersection_emptiness_reduction(m, m2);
        result = inst.machine;
        extra = {{"labels", label_names(inst)}, {"sources", source_pairs(inst)}};
    } else {
        throw std::invalid_argument(
            "unknown transform '" + kind +
            "'; kinds: label-determinize erase-input restrict-lambda normalize twoway-to-csacm "
            "lambda-ncsacm lambda-word to-2dcm1 intersect-empty");
    }
    write_machine_file(result, outpath);
    json out = {{"verdict", "ok"}, {"output", outpath}};
    if (!extra.is_null()) out["reduction_artifact"] = extra;
    return emit(out, kOk);
}

inline int cmd_classify(const std::string& path) {
    MachineSpec m = load_machine(path);
    json labels = json::array();
    for (const std::string& l : classify_restrictions(m)) labels.push_back(l);
    return emit({{"verdict", "ok"}, {"labels", labels}}, kOk);
}

inline int cmd_enumerate(const std::string& path, size_t max_len, uint64_t max_steps) {
    MachineSpec m = load_machine(path);
    EnumerationResult r = enumerate_accepted(m, max_len, max_steps);
    json words = json::array();
    for (const Word& w : r.accepted) words.push_back(display_word(m, w));
    json out = {{"verdict", r.complete ? "complete" : "partial"},
                {"words", words},
                {"complete", r.complete}};
    return emit(out, r.complete ? kOk : kBudget);
}

/* ------------------------------------------------------------------ */

inline int cli_main(int argc, char** argv) {
    CLI::App app{"checking stack and reversal-bounded counter machine toolkit"};
    app.require_subcommand(1);

    std::string file, file2, input, outpath, kind;
    uint64_t max_steps = 0;
    size_t max_len = 0;
    bool require_consumed = false, allow_nondet = false;

    CLI::App* validate = app.add_subcommand("validate", "parse and statically check a machine");
    validate->add_option("file", file, "machine file")->required();

    CLI::App* run = app.add_subcommand("run", "run a machine on one input word");
    run->add_option("file", file, "machine file")->required();
    run->add_option("--input", input, "input word; empty means the empty word")->required();
    run->add_option("--max-steps", max_steps, "step or configuration budget");
    run->add_flag("--require-input-consumed", require_consumed,
                  "accept only with the input head on the right end-marker");

    CLI::App* member = app.add_subcommand("member", "decide membership of one word");
    member->add_option("file", file, "machine file")->required();
    member->add_option("--input", input, "input word; empty means the empty word")->required();

    CLI::App* empty = app.add_subcommand("empty", "decide or reduce language emptiness");
    empty->add_option("file", file, "machine file")->required();

    CLI::App* transform = app.add_subcommand("transform", "rewrite a machine into a new file");
    transform->add_option("kind", kind, "transform name")->required();
    transform->add_option("in", file, "machine file")->required();
    transform->add_option("in2", file2, "second machine file (intersect-empty)");
    transform->add_option("-o,--output", outpath, "output machine file")->required();
    transform->add_flag("--allow-nondet", allow_nondet,
                        "let twoway-to-csacm take nondeterministic machines");
    transform->add_option("--input", input, "word argument (lambda-word)");

    CLI::App* classify = app.add_subcommand("classify", "report syntactic restriction labels");
    classify->add_option("file", file, "machine file")->required();

    CLI::App* enumerate = app.add_subcommand("enumerate", "list accepted words up to a length");
    enumerate->add_option("file", file, "machine file")->required();
    enumerate->add_option("--max-len", max_len, "maximum word length")->required();
    enumerate->add_option("--max-steps", max_steps, "per-word configuration budget");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (validate->parsed()) return cmd_validate(file);
        if (run->parsed())
            return cmd_run(file, input, max_steps ? max_steps : env_budget(1000000),
                           require_consumed);
        if (member->parsed()) return cmd_member(file, input);
        if (empty->parsed()) return cmd_empty(file);
        if (transform->parsed())
            return cmd_transform(kind, file, file2, outpath, allow_nondet, input);
        if (classify->parsed()) return cmd_classify(file);
        if (enumerate->parsed())
            return cmd_enumerate(file, max_len, max_steps ? max_steps : env_budget(100000));
    } catch (const UndecidableClassError& e) {
        note(e.what());
        return emit({{"verdict", "undecidable-class"}, {"diagnostics", json::array({e.what()})}},
                    kClass);
    } catch (const RbcResourceError& e) {
        note(e.what());
        return emit({{"verdict", "budget"}, {"diagnostics", json::array({e.what()})}}, kBudget);
    } catch (const ParseError& e) {
        note(e.what());
        return emit({{"verdict", "parse-error"}, {"diagnostics", json::array({e.what()})}},
                    kInvalid);
    } catch (const std::exception& e) {
        note(e.what());
        return emit({{"verdict", "error"}, {"diagnostics", json::array({e.what()})}}, kInvalid);
    }
    return kInvalid;
}

}  // namespace cli
}  // namespace csa
