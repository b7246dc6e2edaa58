/* simulate.hpp -- concrete execution: deterministic runs with traces,
 * bounded reachability for nondeterministic machines, language enumeration
 * and a bounded nonemptiness search that synthesizes the input word while
 * exploring.
 */

#pragma once

#include <deque>
#include <optional>
#include <unordered_set>
#include <vector>

#include "csa/machine.hpp"

namespace csa {

enum class RunVerdict { Accept, Reject, Budget, Conflict };

inline const char* verdict_name(RunVerdict v) {
    switch (v) {
        case RunVerdict::Accept: return "accept";
        case RunVerdict::Reject: return "reject";
        case RunVerdict::Budget: return "budget-exhausted";
        case RunVerdict::Conflict: return "nondeterministic-conflict";
    }
    return "?";
}

struct RunResult {
    RunVerdict verdict = RunVerdict::Reject;
    uint64_t steps = 0;
    std::vector<size_t> trace;  // applied transition indices in order
    Configuration last;
};

/// Follow the unique enabled transition until acceptance, halt or budget.
/// Conflict is reported when more than one transition is enabled at once.
inline RunResult run_deterministic(const MachineSpec& m, const Word& w, uint64_t budget,
                                   bool require_input_consumed = false) {
    RunResult r;
    Configuration c = initial_configuration(m, w);
    auto by_state = transitions_by_state(m);
    for (;;) {
        if (is_accepting(m, c, require_input_consumed)) {
            r.verdict = RunVerdict::Accept;
            r.last = c;
            return r;
        }
        if (r.steps >= budget) {
            r.verdict = RunVerdict::Budget;
            r.last = c;
            return r;
        }
        std::optional<std::pair<size_t, Configuration>> next;
        bool conflict = false;
        for (size_t i : by_state[c.state]) {
            const Transition& t = m.transitions[i];
            if (!transition_enabled_reads(m, c, t)) continue;
            auto nc = apply_transition(m, c, t);
            if (!nc) continue;
            if (next) {
                conflict = true;
                break;
            }
            next.emplace(i, std::move(*nc));
        }
        if (conflict) {
            r.verdict = RunVerdict::Conflict;
            r.last = c;
            return r;
        }
        if (!next) {
            r.verdict = RunVerdict::Reject;
            r.last = c;
            return r;
        }
        r.trace.push_back(next->first);
        c = std::move(next->second);
        ++r.steps;
    }
}

struct BoundedResult {
    bool accepted = false;
    bool complete = true;  // false when the configuration budget was hit first
    uint64_t visited = 0;
    std::vector<size_t> trace;  // transition indices of one accepting run
};

/// Breadth-first search over distinct configurations on a fixed word.
inline BoundedResult accepts_bounded(const MachineSpec& m, const Word& w, uint64_t config_budget,
                                     bool require_input_consumed = false) {
    BoundedResult res;
    struct Node {
        Configuration cfg;
        int64_t parent;
        size_t via;
    };
    std::vector<Node> nodes;
    std::deque<size_t> queue;
    std::unordered_set<std::string> seen;

    Configuration c0 = initial_configuration(m, w);
    seen.insert(c0.key());
    nodes.push_back({std::move(c0), -1, 0});
    queue.push_back(0);
    auto by_state = transitions_by_state(m);

    while (!queue.empty()) {
        size_t at = queue.front();
        queue.pop_front();
        ++res.visited;
        if (is_accepting(m, nodes[at].cfg, require_input_consumed)) {
            res.accepted = true;
            std::vector<size_t> back;
            for (int64_t i = static_cast<int64_t>(at); nodes[i].parent >= 0; i = nodes[i].parent)
                back.push_back(nodes[i].via);
            res.trace.assign(back.rbegin(), back.rend());
            return res;
        }
        if (nodes.size() >= config_budget) {
            res.complete = false;
            continue;  // stop expanding, still drain queued accept checks
        }
        for (size_t i : by_state[nodes[at].cfg.state]) {
            const Transition& t = m.transitions[i];
            if (!transition_enabled_reads(m, nodes[at].cfg, t)) continue;
            auto nc = apply_transition(m, nodes[at].cfg, t);
            if (!nc) continue;
            std::string k = nc->key();
            if (!seen.insert(std::move(k)).second) continue;
            nodes.push_back({std::move(*nc), static_cast<int64_t>(at), i});
            queue.push_back(nodes.size() - 1);
        }
    }
    return res;
}

/// All accepted words of length at most max_len, in length-then-alphabet
/// order (alphabet order as declared).  Each word gets its own bounded
/// search; incomplete searches are recorded so callers can tell exact
/// enumerations from truncated ones.
struct EnumerationResult {
    std::vector<Word> accepted;
    bool complete = true;
};

inline EnumerationResult enumerate_accepted(const MachineSpec& m, size_t max_len,
                                            uint64_t per_word_budget,
                                            bool require_input_consumed = false) {
    EnumerationResult out;
    Word w;
    // Iterative odometer over Sigma^0, Sigma^1, ..., Sigma^max_len.
    for (size_t len = 0; len <= max_len; ++len) {
        if (m.input_alphabet.empty() && len > 0) break;
        w.assign(len, len ? m.input_alphabet[0] : 0);
        std::vector<size_t> digits(len, 0);
        for (;;) {
            for (size_t i = 0; i < len; ++i) w[i] = m.input_alphabet[digits[i]];
            BoundedResult r = accepts_bounded(m, w, per_word_budget, require_input_consumed);
            if (!r.complete) out.complete = false;
            if (r.accepted) out.accepted.push_back(w);
            size_t i = len;
            while (i > 0) {
                if (++digits[i - 1] < m.input_alphabet.size()) break;
                digits[i - 1] = 0;
                --i;
            }
            if (i == 0) break;
        }
    }
    return out;
}

/// Bounded nonemptiness: search configurations while committing the input
/// word lazily.  A node whose head sits one past the committed prefix
/// branches into sealing the word (the head reads the right marker) or
/// extending it by each alphabet symbol.  Acceptance at any node makes the
/// committed prefix a witness, because the run never read beyond it.
struct NonemptyResult {
    std::optional<Word> witness;
    bool complete = true;
    uint64_t visited = 0;
};

inline NonemptyResult nonempty_bounded(const MachineSpec& m, size_t max_len,
                                       uint64_t config_budget) {
    NonemptyResult res;
    struct Node {
        Configuration cfg;
        bool sealed;
    };
    std::deque<Node> queue;
    std::unordered_set<std::string> seen;

    auto node_key = [](const Node& n) {
        std::string k = n.cfg.key();
        k.push_back(n.sealed ? 1 : 0);
        for (SymbolId s : *n.cfg.word) {
            k.push_back(static_cast<char>(s));
            k.push_back(static_cast<char>(s >> 8));
        }
        return k;
    };

    {
        Node n0{initial_configuration(m, Word{}), false};
        seen.insert(node_key(n0));
        queue.push_back(std::move(n0));
    }
    auto by_state = transitions_by_state(m);
    uint64_t expanded = 0;

    auto enqueue = [&](Node&& n) {
        std::string k = node_key(n);
        if (seen.insert(std::move(k)).second) queue.push_back(std::move(n));
    };

    while (!queue.empty()) {
        Node n = std::move(queue.front());
        queue.pop_front();
        ++res.visited;
        if (is_accepting(m, n.cfg)) {
            res.witness = *n.cfg.word;
            return res;
        }
        if (++expanded > config_budget) {
            res.complete = false;
            break;
        }
        const size_t committed = n.cfg.word->size();
        bool fresh = false;
        if (!n.sealed)
            for (uint32_t h : n.cfg.heads)
                if (h == committed + 1) fresh = true;
        if (fresh) {
            Node sealed = n;
            sealed.sealed = true;
            enqueue(std::move(sealed));
            if (committed < max_len) {
                for (SymbolId a : m.input_alphabet) {
                    Node ext = n;
                    Word w2 = *n.cfg.word;
                    w2.push_back(a);
                    ext.cfg.word = std::make_shared<Word>(std::move(w2));
                    enqueue(std::move(ext));
                }
            }
            continue;
        }
        for (size_t i : by_state[n.cfg.state]) {
            const Transition& t = m.transitions[i];
            if (!transition_enabled_reads(m, n.cfg, t)) continue;
            auto nc = apply_transition(m, n.cfg, t);
            if (!nc) continue;
            enqueue(Node{std::move(*nc), n.sealed});
        }
    }
    if (!queue.empty()) res.complete = false;
    return res;
}

/// Per-store instruction sequences of a transition-index trace.
inline std::vector<std::vector<Instruction>> store_traces(const MachineSpec& m,
                                                          const std::vector<size_t>& trace) {
    std::vector<std::vector<Instruction>> out(m.stores.size());
    for (size_t i : trace)
        for (size_t k = 0; k < m.stores.size(); ++k)
            out[k].push_back(m.transitions[i].instructions[k]);
    return out;
}

}  // namespace csa
