/* transform.hpp -- machine-to-machine constructions that trade one
 * resource for another while preserving a stated property.
 *
 * Three rewrites work purely on a one-way machine's input interface.
 * label_determinize replaces the input with one fresh label per transition
 * so a deterministic machine can replay any chosen run; erase_input
 * internalizes the guessed letters into the finite control; and
 * restrict_to_lambda gates the machine behind a right-marker check so only
 * the empty word survives.  The first two share a pinning discipline for
 * transitions that do not move the head: a position's letter is fixed by
 * the first transition that reads it, later reads at the same position
 * must agree, and a position once identified with the right end-marker
 * stays the end-marker.  A chain of labels is therefore accepted exactly
 * when some real input word carries the corresponding run, which makes the
 * constructions emptiness-preserving in both directions.
 *
 * Two stack constructions go the other way around.  twoway_counter_to_csacm
 * copies the input of a two-way counter machine onto a checking stack and
 * then simulates the two-way head inside the frozen reading phase, cell
 * position standing in for input position (bottom symbol for the left
 * marker, top symbol for the right one).  twodcm2_to_lambda_ncsacm is the
 * guessing variant: it writes a nondeterministically chosen word instead,
 * so the result accepts the empty word exactly when the source accepts
 * something.
 *
 * crossing_count instruments a checking stack instruction trace, counting
 * reading-phase head moves across a chosen cell boundary.
 */
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "machine.hpp"

namespace csa {

namespace detail {

constexpr SymbolId kUnpinned = kLeftMarker;  // position's letter still open

/* Finite-control residue of the input interface: the simulated state, the
 * letter the current position is known to hold (kUnpinned when nothing has
 * read it yet) and whether the head already sits on the right end-marker. */
struct PinKey {
    StateId q = 0;
    SymbolId pend = kUnpinned;
    uint8_t zone = 0;

    bool operator<(const PinKey& o) const {
        return std::tie(q, pend, zone) < std::tie(o.q, o.pend, o.zone);
    }
};

/// Advance the pinning discipline by one source transition, or nullopt when
/// the transition's read contradicts what the position already holds.
inline std::optional<PinKey> pin_step(const PinKey& k, const Transition& t) {
    const SymbolId r = t.reads[0];
    const bool advance = t.moves[0] != 0;
    if (r == kLeftMarker) return std::nullopt;  // one-way runs start right of <
    if (r == kRightMarker) {
        if (advance) return std::nullopt;  // nothing right of the end-marker
        if (k.zone || k.pend == kUnpinned) return PinKey{t.to, kUnpinned, 1};
        return std::nullopt;  // position holds a letter, not the marker
    }
    if (k.zone) return std::nullopt;
    if (k.pend != kUnpinned && k.pend != r) return std::nullopt;
    return PinKey{t.to, advance ? SymbolId(kUnpinned) : r, 0};
}

/// Intern n label symbols t<base>..t<base+n-1>, shifting base upward until
/// none of the names collides with a symbol already present.
inline std::vector<SymbolId> fresh_labels(SymbolTable& syms, size_t n) {
    size_t base = 0;
    for (bool clash = true; clash;) {
        clash = false;
        for (size_t i = 0; i < n; ++i)
            if (syms.contains("t" + std::to_string(base + i))) {
                base += i + 1;
                clash = true;
                break;
            }
    }
    std::vector<SymbolId> labels;
    labels.reserve(n);
    for (size_t i = 0; i < n; ++i) labels.push_back(syms.intern("t" + std::to_string(base + i)));
    return labels;
}

/* Shared worker for label_determinize and erase_input: breadth-first
 * closure over (state, pinned letter, zone), one output transition per
 * legal source transition application.  Labeled mode reads one fresh label
 * per source transition and always moves right; unlabeled mode reads the
 * right end-marker of an empty input in place. */
inline MachineSpec pinned_control(const MachineSpec& m, bool labeled, const char* tag,
                                  const char* suffix, const char* who) {
    if (!m.oneway) throw std::invalid_argument(std::string(who) + ": two-way machine");
    if (m.heads != 1) throw std::invalid_argument(std::string(who) + ": several input heads");

    MachineSpec out;
    out.name = m.name + suffix;
    out.oneway = true;
    out.heads = 1;
    out.deterministic = labeled;
    out.syms = m.syms;
    out.stores = m.stores;
    std::vector<SymbolId> labels;
    if (labeled) labels = fresh_labels(out.syms, m.transitions.size());
    out.input_alphabet = labels;

    auto by_state = transitions_by_state(m);
    std::map<PinKey, StateId> ids;
    std::vector<PinKey> order;
    auto state_of = [&](const PinKey& k) {
        auto it = ids.find(k);
        if (it != ids.end()) return it->second;
        std::string nm = m.states[k.q] + "~" + tag + ".";
        if (k.zone)
            nm += ">";
        else if (k.pend == kUnpinned)
            nm += "_";
        else
            nm += out.syms.name(k.pend);
        StateId id = out.add_state(nm);
        ids.emplace(k, id);
        order.push_back(k);
        if (m.is_final(k.q)) out.finals.push_back(id);
        return id;
    };

    out.initial = state_of(PinKey{m.initial, kUnpinned, 0});
    for (size_t at = 0; at < order.size(); ++at) {
        const PinKey cur = order[at];
        const StateId from = ids.at(cur);
        for (size_t ti : by_state[cur.q]) {
            const Transition& t = m.transitions[ti];
            auto nxt = pin_step(cur, t);
            if (!nxt) continue;
            Transition o;
            o.from = from;
            o.reads = {labeled ? labels[ti] : SymbolId(kRightMarker)};
            o.store_reads = t.store_reads;
            o.to = state_of(*nxt);
            o.instructions = t.instructions;
            o.moves = {static_cast<int8_t>(labeled ? 1 : 0)};
            out.transitions.push_back(std::move(o));
        }
    }
    std::sort(out.finals.begin(), out.finals.end());
    return out;
}

}  // namespace detail

/// Deterministic machine over a fresh label alphabet, one label per source
/// transition, applying that transition's store instructions while always
/// moving right.  Empty exactly when the source machine is empty.  The
/// source must be one-way with no validation diagnostics.
inline MachineSpec label_determinize(const MachineSpec& m) {
    if (!m.oneway) throw std::invalid_argument("label_determinize: two-way machine");
    if (!validate_machine(m).empty())
        throw std::invalid_argument("label_determinize: machine has diagnostics");
    return detail::pinned_control(m, true, "lab", "~det", "label_determinize");
}

/// Machine over the empty input alphabet that guesses the source's input
/// letters in its finite control; accepts the empty word exactly when the
/// source accepts something.  Stores pass through untouched.
inline MachineSpec erase_input(const MachineSpec& m) {
    return detail::pinned_control(m, false, "guess", "~erased", "erase_input");
}

/// Machine accepting L(m) intersected with {empty word}: a fresh initial
/// state demands the right end-marker before handing over to the source's
/// initial state, and every transition reading anything else is dropped.
inline MachineSpec restrict_to_lambda(const MachineSpec& m) {
    if (!m.oneway) throw std::invalid_argument("restrict_to_lambda: two-way machine");
    MachineSpec out = m;
    out.name = m.name + "~lambda";

    std::string gate = "gate";
    for (int i = 0; std::find(out.states.begin(), out.states.end(), gate) != out.states.end(); ++i)
        gate = "gate" + std::to_string(i);
    StateId g = out.add_state(gate);
    out.initial = g;

    std::vector<Transition> kept;
    Transition enter;
    enter.from = g;
    enter.reads.assign(m.heads, kRightMarker);
    enter.store_reads.assign(m.stores.size(), kBottom);
    enter.to = m.initial;
    enter.instructions.assign(m.stores.size(), stay_ins());
    enter.moves.assign(m.heads, 0);
    kept.push_back(std::move(enter));
    for (const Transition& t : m.transitions) {
        bool marker_only = true;
        for (SymbolId r : t.reads)
            if (r != kRightMarker) marker_only = false;
        if (marker_only) kept.push_back(t);
    }
    out.transitions = std::move(kept);
    return out;
}

/// Read the source word back off a chain of labels: replay the pinning
/// discipline, collecting each position's letter the first time a label's
/// transition fixes it.  The labels must spell a transition chain from the
/// source's initial state (pass the consumed prefix of a witness; an
/// accepted label word can end with one unread label).
inline Word label_witness_word(const MachineSpec& m, const MachineSpec& labeled,
                               const Word& labels) {
    std::map<SymbolId, size_t> which;
    for (size_t i = 0; i < labeled.input_alphabet.size(); ++i)
        which[labeled.input_alphabet[i]] = i;
    detail::PinKey k{m.initial, detail::kUnpinned, 0};
    Word w;
    for (SymbolId s : labels) {
        auto it = which.find(s);
        if (it == which.end())
            throw std::invalid_argument("label_witness_word: symbol is not a label");
        const Transition& t = m.transitions[it->second];
        if (t.from != k.q)
            throw std::invalid_argument("label_witness_word: broken state chain");
        if (!k.zone && k.pend == detail::kUnpinned && t.reads[0] != kLeftMarker &&
            t.reads[0] != kRightMarker)
            w.push_back(t.reads[0]);
        auto nxt = detail::pin_step(k, t);
        if (!nxt) throw std::invalid_argument("label_witness_word: inconsistent pinning");
        k = *nxt;
    }
    return w;
}

namespace detail {

/* Shared worker for the two copy-to-stack constructions.  The output first
 * fills a checking stack with the input word (read from the real input, or
 * guessed when the input alphabet is erased), snoops to freeze it, walks
 * back down to the bottom, and then replays the source machine with the
 * stack head standing in for the two-way input head. */
inline MachineSpec twoway_stack_simulation(const MachineSpec& m, bool guess, const char* who) {
    if (m.oneway) throw std::invalid_argument(std::string(who) + ": one-way machine");
    if (m.heads != 1) throw std::invalid_argument(std::string(who) + ": several input heads");
    for (const StoreTypeSpec& s : m.stores)
        if (!is_counter_kind(s.kind))
            throw std::invalid_argument(std::string(who) + ": counter stores expected");

    MachineSpec out;
    out.name = m.name + (guess ? "~ncsacm" : "~csacm");
    out.oneway = true;
    out.heads = 1;
    out.deterministic = !guess && m.deterministic;
    out.syms = m.syms;
    if (!guess) out.input_alphabet = m.input_alphabet;

    StoreTypeSpec stack;
    stack.kind = StoreKind::CheckingStack;
    stack.id = "s";
    for (int i = 0;; ++i) {
        bool taken = false;
        for (const StoreTypeSpec& s : m.stores) taken = taken || s.id == stack.id;
        if (!taken) break;
        stack.id = "s" + std::to_string(i);
    }
    stack.alphabet = m.input_alphabet;
    out.stores.push_back(std::move(stack));
    for (const StoreTypeSpec& s : m.stores) out.stores.push_back(s);

    StateId load = out.add_state("load");
    StateId unwind = out.add_state("unwind");
    std::vector<StateId> sim(m.states.size());
    for (size_t q = 0; q < m.states.size(); ++q)
        sim[q] = out.add_state(m.states[q] + "~sim");
    out.initial = load;
    for (StateId f : m.finals) out.finals.push_back(sim[f]);
    std::sort(out.finals.begin(), out.finals.end());

    const size_t k = m.stores.size();
    auto idle = [&](Instruction stack_ins) {
        std::vector<Instruction> ins{stack_ins};
        ins.insert(ins.end(), k, stay_ins());
        return ins;
    };
    auto zeros = [&](SymbolId top) {
        std::vector<SymbolId> rd{top};
        rd.insert(rd.end(), k, SymbolId(kBottom));
        return rd;
    };
    std::vector<SymbolId> tops{SymbolId(kBottom)};
    tops.insert(tops.end(), m.input_alphabet.begin(), m.input_alphabet.end());

    for (SymbolId top : tops)
        for (SymbolId a : m.input_alphabet)
            out.transitions.push_back({load,
                                       {guess ? SymbolId(kRightMarker) : a},
                                       zeros(top),
                                       load,
                                       idle(push_ins(a)),
                                       {static_cast<int8_t>(guess ? 0 : 1)}});
    for (SymbolId top : tops)
        out.transitions.push_back(
            {load, {SymbolId(kRightMarker)}, zeros(top), unwind, idle(snoop_ins()), {0}});
    for (SymbolId a : m.input_alphabet)
        out.transitions.push_back(
            {unwind, {SymbolId(kRightMarker)}, zeros(a), unwind, idle(down_ins()), {0}});
    out.transitions.push_back({unwind,
                               {SymbolId(kRightMarker)},
                               zeros(SymbolId(kBottom)),
                               sim[m.initial],
                               idle(up_ins()),
                               {0}});

    for (const Transition& t : m.transitions) {
        const SymbolId r = t.reads[0];
        const SymbolId cell = r == kLeftMarker    ? SymbolId(kBottom)
                              : r == kRightMarker ? SymbolId(kTop)
                                                  : r;
        const Instruction walk = t.moves[0] < 0   ? down_ins()
                                 : t.moves[0] > 0 ? up_ins()
                                                  : snoop_ins();
        Transition o;
        o.from = sim[t.from];
        o.reads = {SymbolId(kRightMarker)};
        o.store_reads.reserve(k + 1);
        o.store_reads.push_back(cell);
        o.store_reads.insert(o.store_reads.end(), t.store_reads.begin(), t.store_reads.end());
        o.to = sim[t.to];
        o.instructions.reserve(k + 1);
        o.instructions.push_back(walk);
        o.instructions.insert(o.instructions.end(), t.instructions.begin(), t.instructions.end());
        o.moves = {0};
        out.transitions.push_back(std::move(o));
    }
    return out;
}

}  // namespace detail

/// One-way machine with one checking stack plus the source's counters,
/// accepting the same language as the two-way counter machine m: the input
/// is copied cell by cell onto the stack, frozen, and the two-way head is
/// then simulated on the stack during the reading phase.  The copy phase
/// touches neither the counters nor the stack's reading moves, so the
/// output classifies as no-read/no-counter.
inline MachineSpec twoway_counter_to_csacm(const MachineSpec& m, bool nondet_allowed) {
    if (!m.deterministic && !nondet_allowed)
        throw std::invalid_argument("twoway_counter_to_csacm: nondeterministic machine");
    return detail::twoway_stack_simulation(m, false, "twoway_counter_to_csacm");
}

/// Nondeterministic empty-input machine that guesses a word onto its
/// checking stack and then simulates the deterministic two-counter two-way
/// machine m on it; accepts the empty word exactly when L(m) is nonempty.
inline MachineSpec twodcm2_to_lambda_ncsacm(const MachineSpec& m) {
    if (!m.deterministic)
        throw std::invalid_argument("twodcm2_to_lambda_ncsacm: nondeterministic machine");
    if (m.stores.size() != 2)
        throw std::invalid_argument("twodcm2_to_lambda_ncsacm: exactly two counters expected");
    return detail::twoway_stack_simulation(m, true, "twodcm2_to_lambda_ncsacm");
}

/// Number of reading-phase head moves across the boundary between cell
/// positions `boundary` and `boundary + 1` in a single checking stack's
/// instruction trace (position 0 is the bottom marker).  Rejects traces
/// that are not of the writing-then-reading shape or that walk the head out
/// of range.
inline size_t crossing_count(const std::vector<Instruction>& trace, size_t boundary) {
    size_t cells = 0, head = 0, count = 0;
    bool reading = false;
    for (const Instruction& ins : trace) {
        switch (ins.op) {
            case Op::Push:
                if (reading)
                    throw std::invalid_argument("crossing_count: push after reading started");
                ++cells;
                head = cells;
                break;
            case Op::Stay:
                if (reading)
                    throw std::invalid_argument("crossing_count: stay after reading started");
                break;
            case Op::Down:
                reading = true;
                if (head == 0) throw std::invalid_argument("crossing_count: head below bottom");
                if (head == boundary + 1) ++count;
                --head;
                break;
            case Op::Snoop:
                reading = true;
                break;
            case Op::Up:
                reading = true;
                if (head > cells) throw std::invalid_argument("crossing_count: head above top");
                if (head == boundary) ++count;
                ++head;
                break;
            default:
                throw std::invalid_argument("crossing_count: not a checking stack instruction");
        }
    }
    return count;
}

/// Largest crossing_count over all cell boundaries of the trace; a run is
/// d-crossing exactly when this does not exceed d for every stack.
inline size_t max_crossing_count(const std::vector<Instruction>& trace) {
    size_t cells = 0;
    for (const Instruction& ins : trace)
        if (ins.op == Op::Push) ++cells;
    size_t best = 0;
    for (size_t b = 0; b <= cells; ++b) best = std::max(best, crossing_count(trace, b));
    return best;
}

}  // namespace csa
