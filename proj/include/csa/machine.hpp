/* machine.hpp -- k-store automata: specification records, configurations,
 * the one-step relation, static validation and restriction classification.
 *
 * A machine has r input heads over a two-end-marked tape and k stores.  A
 * transition is keyed on (state, symbol under each head, read symbol of each
 * store) and carries a target state, one instruction per store and one move
 * per head.  Successors whose store update or instruction-language advance
 * is undefined, or whose head would leave the tape, are simply not produced.
 */

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "csa/store.hpp"
#include "csa/symbols.hpp"

namespace csa {

using StateId = uint32_t;

struct Transition {
    StateId from = 0;
    std::vector<SymbolId> reads;        // one per head, in Sigma + {<, >}
    std::vector<SymbolId> store_reads;  // one per store
    StateId to = 0;
    std::vector<Instruction> instructions;  // one per store
    std::vector<int8_t> moves;              // one per head, in {-1, 0, +1}

    bool operator==(const Transition& o) const {
        return from == o.from && reads == o.reads && store_reads == o.store_reads &&
               to == o.to && instructions == o.instructions && moves == o.moves;
    }
};

struct MachineSpec {
    std::string name = "m";
    bool oneway = true;
    uint32_t heads = 1;
    bool deterministic = true;
    SymbolTable syms;
    std::vector<SymbolId> input_alphabet;
    std::vector<StoreTypeSpec> stores;
    std::vector<std::string> states;
    StateId initial = 0;
    std::vector<StateId> finals;
    std::vector<Transition> transitions;

    StateId add_state(const std::string& n) {
        states.push_back(n);
        return static_cast<StateId>(states.size() - 1);
    }

    bool is_final(StateId s) const {
        for (StateId f : finals)
            if (f == s) return true;
        return false;
    }

    bool in_input_alphabet(SymbolId s) const {
        for (SymbolId a : input_alphabet)
            if (a == s) return true;
        return false;
    }

    bool operator==(const MachineSpec& o) const {
        return name == o.name && oneway == o.oneway && heads == o.heads &&
               deterministic == o.deterministic && syms == o.syms &&
               input_alphabet == o.input_alphabet && states == o.states &&
               initial == o.initial && finals == o.finals && transitions == o.transitions &&
               stores_equal(o);
    }

  private:
    bool stores_equal(const MachineSpec& o) const {
        if (stores.size() != o.stores.size()) return false;
        for (size_t i = 0; i < stores.size(); ++i) {
            const auto& a = stores[i];
            const auto& b = o.stores[i];
            if (a.kind != b.kind || a.id != b.id || a.alphabet != b.alphabet ||
                a.reversal_bound != b.reversal_bound)
                return false;
        }
        return true;
    }
};

/* ------------------------------------------------------------------ */
/* Store signature helpers.                                            */

inline size_t count_kind(const MachineSpec& m, StoreKind k) {
    size_t n = 0;
    for (const auto& s : m.stores)
        if (s.kind == k) ++n;
    return n;
}

/// One-way single-head machine whose stores are all reversal-bounded counters.
inline bool is_ncm_signature(const MachineSpec& m) {
    if (!m.oneway || m.heads != 1) return false;
    for (const auto& s : m.stores)
        if (s.kind != StoreKind::RbCounter) return false;
    return true;
}

/// Checking stacks plus reversal-bounded counters, with at least one stack.
inline bool is_csacm_signature(const MachineSpec& m) {
    size_t stacks = 0;
    for (const auto& s : m.stores) {
        if (s.kind == StoreKind::CheckingStack)
            ++stacks;
        else if (s.kind != StoreKind::RbCounter)
            return false;
    }
    return stacks >= 1;
}

/// Two-way single-head machine over reversal-bounded counters only.
inline bool is_twoway_counter_signature(const MachineSpec& m) {
    if (m.heads != 1) return false;
    for (const auto& s : m.stores)
        if (s.kind != StoreKind::RbCounter) return false;
    return true;
}

/* ------------------------------------------------------------------ */
/* Configurations and the step relation.                               */

inline SymbolId symbol_at(const Word& w, uint32_t pos) {
    if (pos == 0) return kLeftMarker;
    if (pos == w.size() + 1) return kRightMarker;
    return w[pos - 1];
}

struct Configuration {
    StateId state = 0;
    std::vector<uint32_t> heads;  // positions in [0, |w|+1]
    std::vector<StoreConfig> stores;
    std::vector<PhaseState> phases;
    std::shared_ptr<const Word> word;

    /// Byte key identifying everything except the fixed input word.
    std::string key() const {
        std::string k;
        auto put32 = [&k](uint32_t v) {
            k.push_back(static_cast<char>(v));
            k.push_back(static_cast<char>(v >> 8));
            k.push_back(static_cast<char>(v >> 16));
            k.push_back(static_cast<char>(v >> 24));
        };
        put32(state);
        for (uint32_t h : heads) put32(h);
        for (const auto& s : stores) {
            put32(static_cast<uint32_t>(s.cells.size()));
            for (SymbolId c : s.cells) put32(c);
            put32(static_cast<uint32_t>(s.head));
            put32(static_cast<uint32_t>(s.value));
            put32(static_cast<uint32_t>(s.value >> 32));
        }
        for (const auto& p : phases) {
            k.push_back(p.reading ? 1 : 0);
            k.push_back(static_cast<char>(p.dir));
            put32(p.reversals);
        }
        return k;
    }
};

inline Configuration initial_configuration(const MachineSpec& m, const Word& w) {
    Configuration c;
    c.state = m.initial;
    c.heads.assign(m.heads, 1);  // position 1: first letter, or > when w is empty
    c.stores.resize(m.stores.size());
    for (size_t i = 0; i < m.stores.size(); ++i) c.stores[i] = initial_config(m.stores[i]);
    c.phases.assign(m.stores.size(), PhaseState{});
    c.word = std::make_shared<Word>(w);
    return c;
}

inline bool transition_enabled_reads(const MachineSpec& m, const Configuration& c,
                                     const Transition& t) {
    if (t.from != c.state) return false;
    for (uint32_t j = 0; j < m.heads; ++j)
        if (t.reads[j] != symbol_at(*c.word, c.heads[j])) return false;
    for (size_t i = 0; i < m.stores.size(); ++i)
        if (t.store_reads[i] != read_store(m.stores[i], c.stores[i])) return false;
    return true;
}

/// Apply one transition; nullopt when a store update, a phase advance or a
/// head move is undefined.
inline std::optional<Configuration> apply_transition(const MachineSpec& m,
                                                     const Configuration& c,
                                                     const Transition& t) {
    Configuration r = c;
    r.state = t.to;
    const uint32_t last = static_cast<uint32_t>(c.word->size() + 1);
    for (uint32_t j = 0; j < m.heads; ++j) {
        int64_t p = static_cast<int64_t>(c.heads[j]) + t.moves[j];
        if (p < 0 || p > last) return std::nullopt;
        if (m.oneway && t.moves[j] < 0) return std::nullopt;
        r.heads[j] = static_cast<uint32_t>(p);
    }
    for (size_t i = 0; i < m.stores.size(); ++i) {
        auto ns = apply_instruction(m.stores[i], c.stores[i], t.instructions[i]);
        if (!ns) return std::nullopt;
        auto np = advance_phase(m.stores[i], c.phases[i], t.instructions[i]);
        if (!np) return std::nullopt;
        r.stores[i] = std::move(*ns);
        r.phases[i] = *np;
    }
    return r;
}

/// All enabled successors, in transition order.
inline std::vector<std::pair<size_t, Configuration>> step(const MachineSpec& m,
                                                          const Configuration& c) {
    std::vector<std::pair<size_t, Configuration>> out;
    for (size_t i = 0; i < m.transitions.size(); ++i) {
        const Transition& t = m.transitions[i];
        if (!transition_enabled_reads(m, c, t)) continue;
        auto nc = apply_transition(m, c, t);
        if (nc) out.emplace_back(i, std::move(*nc));
    }
    return out;
}

inline bool is_accepting(const MachineSpec& m, const Configuration& c,
                         bool require_input_consumed = false) {
    if (!m.is_final(c.state)) return false;
    if (require_input_consumed) {
        const uint32_t last = static_cast<uint32_t>(c.word->size() + 1);
        for (uint32_t h : c.heads)
            if (h != last) return false;
    }
    return true;
}

/// Transition indices grouped by source state.
inline std::vector<std::vector<size_t>> transitions_by_state(const MachineSpec& m) {
    std::vector<std::vector<size_t>> idx(m.states.size());
    for (size_t i = 0; i < m.transitions.size(); ++i) idx[m.transitions[i].from].push_back(i);
    return idx;
}

/* ------------------------------------------------------------------ */
/* Static validation.                                                  */

struct Diagnostic {
    std::string category;  // arity | symbol | instruction | mode | determinism | structure
    std::string message;
};

inline std::vector<Diagnostic> validate_machine(const MachineSpec& m) {
    std::vector<Diagnostic> out;
    auto bad = [&out](const std::string& cat, const std::string& msg) {
        out.push_back({cat, msg});
    };

    if (m.heads < 1) bad("structure", "machine needs at least one head");
    if (m.initial >= m.states.size()) bad("structure", "initial state out of range");
    for (StateId f : m.finals)
        if (f >= m.states.size()) bad("structure", "final state out of range");
    for (const auto& s : m.stores) {
        if (s.kind == StoreKind::RbCounter && s.reversal_bound < 1)
            bad("structure", "store " + s.id + ": reversal bound must be >= 1");
        if (is_counter_kind(s.kind) && s.alphabet.size() != 1)
            bad("structure", "store " + s.id + ": counter alphabet must be one symbol");
    }

    for (size_t i = 0; i < m.transitions.size(); ++i) {
        const Transition& t = m.transitions[i];
        const std::string at = "transition " + std::to_string(i);
        if (t.from >= m.states.size() || t.to >= m.states.size()) {
            bad("structure", at + ": state out of range");
            continue;
        }
        if (t.reads.size() != m.heads || t.moves.size() != m.heads ||
            t.store_reads.size() != m.stores.size() ||
            t.instructions.size() != m.stores.size()) {
            bad("arity", at + ": field count does not match heads/stores");
            continue;
        }
        for (SymbolId s : t.reads)
            if (s != kLeftMarker && s != kRightMarker && !m.in_input_alphabet(s))
                bad("symbol", at + ": input read " + m.syms.name(s) + " not in alphabet");
        for (size_t k = 0; k < m.stores.size(); ++k) {
            const auto& st = m.stores[k];
            SymbolId r = t.store_reads[k];
            bool ok = r == kBottom || st.in_alphabet(r) || (is_stack_kind(st.kind) && r == kTop);
            if (!ok)
                bad("symbol", at + ": store read " + m.syms.name(r) + " not readable on " + st.id);
            const Instruction& ins = t.instructions[k];
            if (!is_stack_kind(st.kind) &&
                (ins.op == Op::Down || ins.op == Op::Snoop || ins.op == Op::Up))
                bad("instruction", at + ": head move instruction on non-stack store " + st.id);
            if (ins.op == Op::Push && !st.in_alphabet(ins.sym))
                bad("instruction",
                    at + ": push symbol " + m.syms.name(ins.sym) + " not in " + st.id);
        }
        for (int8_t mv : t.moves) {
            if (mv < -1 || mv > 1) bad("structure", at + ": move out of range");
            if (m.oneway && mv < 0) bad("mode", at + ": move -1 in a one-way machine");
        }
    }

    if (m.deterministic) {
        for (size_t i = 0; i < m.transitions.size(); ++i) {
            for (size_t j = i + 1; j < m.transitions.size(); ++j) {
                const Transition &a = m.transitions[i], &b = m.transitions[j];
                if (a.from != b.from || a.reads != b.reads || a.store_reads != b.store_reads)
                    continue;
                if (a == b)
                    bad("duplicate", "transitions " + std::to_string(i) + " and " +
                                         std::to_string(j) + " are identical");
                else
                    bad("determinism", "transitions " + std::to_string(i) + " and " +
                                           std::to_string(j) + " share a key");
            }
        }
    }
    return out;
}

/* ------------------------------------------------------------------ */
/* Syntactic restriction classes.                                      */

/// Labels that hold syntactically.  The no-read family restricts what may
/// happen before the single head reaches the right end-marker: no stack
/// reading, additionally no counter decrease, additionally no counter use.
inline std::vector<std::string> classify_restrictions(const MachineSpec& m) {
    std::vector<std::string> labels;
    size_t stacks = count_kind(m, StoreKind::CheckingStack);
    if (stacks >= 1 && m.heads == 1) {
        bool no_read = true, no_decrease = true, no_counter = true;
        for (const Transition& t : m.transitions) {
            if (t.reads[0] == kRightMarker) continue;
            for (size_t i = 0; i < m.stores.size(); ++i) {
                const Instruction& ins = t.instructions[i];
                if (m.stores[i].kind == StoreKind::CheckingStack) {
                    if (ins.op == Op::Down || ins.op == Op::Snoop || ins.op == Op::Up)
                        no_read = false;
                } else if (is_counter_kind(m.stores[i].kind)) {
                    if (ins.op == Op::Pop) no_decrease = false;
                    if (ins.op != Op::Stay) no_counter = false;
                }
            }
        }
        if (no_read) {
            labels.push_back("no-read");
            if (no_decrease) {
                labels.push_back("no-read/no-decrease");
                if (no_counter) labels.push_back("no-read/no-counter");
            }
        }
    }
    if (m.oneway && m.heads == 1 && stacks == 1 &&
        stacks + count_kind(m, StoreKind::RbCounter) == m.stores.size())
        labels.push_back("d-crossing-candidate");
    return labels;
}

}  // namespace csa
