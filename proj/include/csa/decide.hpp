/* decide.hpp -- membership decision for deterministic checking-stack
 * machines with reversal-bounded counters, and reductions from their
 * emptiness questions to two-way counter machines over label alphabets.
 *
 * The route to a decision is: internalize the input word into the finite
 * control (make_lambda_machine), rewrite the machine so that every writing
 * step pushes and acceptance happens exactly with empty counters at the
 * stack bottom (normalize_dcsacm), classify the writing phase as finite or
 * infinite (detect_infinite_writing), and finally run the reading phase
 * with a pigeonhole window that detects non-accepting loops
 * (decide_lambda_dcsacm).  A step is "quiet" when no counter pops, no
 * counter leaves zero and no counter reverses direction; within a quiet
 * stretch every store read is constant, so once (state, stack top) or
 * (state, stack position) repeats, determinism replays the stretch forever.
 * Quiet windows are sized over the full (state, top-symbol) range rather
 * than states alone: a machine can funnel information through the pushed
 * symbol, so the smaller window would miss loops.
 *
 * The writing-phase classifier has a second, independent engine that
 * rebuilds the question as emptiness of a counter machine reading the
 * pushed word (infinite_writing_ncm); the two must always agree.
 *
 * noread_dcsacm1_to_2dcm1 and intersection_emptiness_reduction emit
 * reduction artifacts: two-way deterministic one-counter machines whose
 * input alphabet is a set of labels naming source transitions.  No
 * emptiness claim is decided here; callers pair the artifact with a
 * bounded two-sided search.
 */

#pragma once

#include <array>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "csa/ncm.hpp"

namespace csa {

/// Raised when a question falls outside the decidable family handled here
/// (in particular membership for nondeterministic checking-stack machines).
class UndecidableClassError : public std::runtime_error {
  public:
    explicit UndecidableClassError(const std::string& msg) : std::runtime_error(msg) {}
};

/* ------------------------------------------------------------------ */
/* Word internalization.                                               */

/// Product of m with a fixed input word w: a one-way single-head machine
/// over the empty input alphabet whose states carry m's state plus every
/// head position.  Store reads and instructions pass through verbatim, so
/// the new machine accepts the empty word exactly when m accepts w, with
/// identical store behaviour.  Works for any head count and for two-way m.
inline MachineSpec make_lambda_machine(const MachineSpec& m, const Word& w) {
    for (SymbolId a : w)
        if (!m.in_input_alphabet(a))
            throw std::invalid_argument("make_lambda_machine: word letter outside the alphabet");

    MachineSpec out;
    std::string suffix;
    for (SymbolId a : w) suffix += m.syms.name(a);
    out.name = m.name + "~on." + suffix;
    out.oneway = true;
    out.heads = 1;
    out.deterministic = m.deterministic;
    out.syms = m.syms;
    out.stores = m.stores;

    const int64_t last = static_cast<int64_t>(w.size()) + 1;
    struct Key {
        StateId q;
        std::vector<uint32_t> pos;
        bool operator<(const Key& o) const {
            if (q != o.q) return q < o.q;
            return pos < o.pos;
        }
    };
    std::map<Key, StateId> ids;
    std::deque<Key> queue;
    auto intern = [&](const Key& key) -> StateId {
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        std::string name = m.states[key.q] + "@";
        for (size_t j = 0; j < key.pos.size(); ++j)
            name += (j ? "." : "") + std::to_string(key.pos[j]);
        StateId id = out.add_state(name);
        ids.emplace(key, id);
        queue.push_back(key);
        return id;
    };

    out.initial = intern({m.initial, std::vector<uint32_t>(m.heads, 1)});
    auto by_state = transitions_by_state(m);
    while (!queue.empty()) {
        Key cur = queue.front();
        queue.pop_front();
        StateId cur_id = ids.at(cur);
        for (size_t ti : by_state[cur.q]) {
            const Transition& t = m.transitions[ti];
            bool ok = true;
            std::vector<uint32_t> np = cur.pos;
            for (uint32_t j = 0; j < m.heads && ok; ++j) {
                if (t.reads[j] != symbol_at(w, cur.pos[j])) {
                    ok = false;
                    break;
                }
                int64_t p = static_cast<int64_t>(cur.pos[j]) + t.moves[j];
                if (p < 0 || p > last || (m.oneway && t.moves[j] < 0))
                    ok = false;
                else
                    np[j] = static_cast<uint32_t>(p);
            }
            if (!ok) continue;
            StateId to_id = intern({t.to, np});
            out.transitions.push_back(
                {cur_id, {kRightMarker}, t.store_reads, to_id, t.instructions, {0}});
        }
    }
    for (const auto& [key, id] : ids)
        if (m.is_final(key.q)) out.finals.push_back(id);
    std::sort(out.finals.begin(), out.finals.end());
    return out;
}

/* ------------------------------------------------------------------ */
/* Normal form.                                                        */

namespace detail {

inline std::vector<size_t> counter_stores(const MachineSpec& m) {
    std::vector<size_t> out;
    for (size_t i = 0; i < m.stores.size(); ++i)
        if (m.stores[i].kind == StoreKind::RbCounter) out.push_back(i);
    return out;
}

inline size_t single_stack_store(const MachineSpec& m, const char* who) {
    size_t at = m.stores.size();
    for (size_t i = 0; i < m.stores.size(); ++i) {
        if (m.stores[i].kind == StoreKind::CheckingStack) {
            if (at != m.stores.size())
                throw std::invalid_argument(std::string(who) + ": expected exactly one stack");
            at = i;
        } else if (m.stores[i].kind != StoreKind::RbCounter) {
            throw std::invalid_argument(std::string(who) + ": stores must be a checking stack "
                                                          "plus reversal-bounded counters");
        }
    }
    if (at == m.stores.size())
        throw std::invalid_argument(std::string(who) + ": expected exactly one stack");
    return at;
}

}  // namespace detail

/// Rewrite a deterministic one-way machine with one checking stack and
/// reversal-bounded counters into an equivalent one where
///   - every counter is 1-reversal (states remember alternation blocks,
///     values migrate to a fresh split counter through stationary drains),
///   - every writing step pushes: steps that held the stack push a filler
///     symbol instead, and the reading phase steps over filler cells,
///   - acceptance happens in a single state reached by a cleanup chain
///     that first empties every counter, then walks the stack head to the
///     bottom.  The cleanup starts the moment an accepting control state
///     is reached, so the language is unchanged.
///
/// States carry what the stack head rests on: `top` states track the last
/// real symbol while the head is (logically) at the top, `skip` states
/// cross filler runs, `mid` states sit on a real cell or an end zone.
inline MachineSpec normalize_dcsacm(const MachineSpec& m) {
    if (!m.deterministic)
        throw std::invalid_argument("normalize_dcsacm: machine must be deterministic");
    if (!m.oneway || m.heads != 1)
        throw std::invalid_argument("normalize_dcsacm: machine must be one-way with one head");
    detail::single_stack_store(m, "normalize_dcsacm");

    const MachineSpec base = to_phase_automaton(m);
    const size_t sk = detail::single_stack_store(base, "normalize_dcsacm");
    const std::vector<size_t> ctr = detail::counter_stores(base);
    if (ctr.size() >= 20)
        throw std::invalid_argument("normalize_dcsacm: too many counters to enumerate");
    const size_t nstores = base.stores.size();

    MachineSpec out;
    out.name = m.name + "~norm";
    out.oneway = true;
    out.heads = 1;
    out.deterministic = true;
    out.syms = base.syms;
    out.input_alphabet = base.input_alphabet;
    out.stores = base.stores;

    std::string dname = "$";
    for (int i = 0; out.syms.contains(dname); ++i) dname = "$" + std::to_string(i);
    const SymbolId dollar = out.syms.intern(dname);
    out.stores[sk].alphabet.push_back(dollar);

    std::vector<SymbolId> letters = base.input_alphabet;
    letters.push_back(kRightMarker);
    std::vector<SymbolId> sreads{kBottom};
    for (SymbolId g : base.stores[sk].alphabet) sreads.push_back(g);
    sreads.push_back(dollar);
    sreads.push_back(kTop);

    enum Fam : uint8_t { FamTop, FamSkip, FamMid, FamClean, FamCleanStack, FamAccept };
    struct Key {
        uint8_t fam = FamTop;
        StateId q = 0;       // base state; for FamClean the counter ordinal
        SymbolId top = 0;    // FamTop only
        uint8_t dir = 0;     // FamSkip: 0 down, 1 up
        uint8_t extra = 0;   // FamSkip: step over one real cell first
        bool operator<(const Key& o) const {
            if (fam != o.fam) return fam < o.fam;
            if (q != o.q) return q < o.q;
            if (top != o.top) return top < o.top;
            if (dir != o.dir) return dir < o.dir;
            return extra < o.extra;
        }
    };
    std::map<Key, StateId> ids;
    std::deque<Key> queue;
    auto intern = [&](const Key& key) -> StateId {
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        std::string name;
        switch (key.fam) {
            case FamTop: name = base.states[key.q] + "~top." + out.syms.name(key.top); break;
            case FamSkip:
                name = base.states[key.q] + "~skip." + (key.dir ? "u" : "d") +
                       (key.extra ? "x" : "");
                break;
            case FamMid: name = base.states[key.q] + "~mid"; break;
            case FamClean: name = "drain~c" + std::to_string(key.q); break;
            case FamCleanStack: name = "drain~stack"; break;
            case FamAccept: name = "accept"; break;
        }
        StateId id = out.add_state(name);
        ids.emplace(key, id);
        queue.push_back(key);
        return id;
    };

    const Key accept_key{FamAccept, 0, 0, 0, 0};
    const Key clean_start = ctr.empty() ? Key{FamCleanStack, 0, 0, 0, 0}
                                        : Key{FamClean, 0, 0, 0, 0};
    auto csym = [&](size_t ci) { return base.stores[ci].alphabet[0]; };

    // Enumerated counter-read patterns over ctr[from..): calls f once per
    // pattern with the reads vector prefilled outside the range.
    auto counter_patterns = [&](std::vector<SymbolId>& reads, size_t from, auto&& f) {
        const size_t n = ctr.size() - from;
        for (uint32_t b = 0; b < (uint32_t(1) << n); ++b) {
            for (size_t j = 0; j < n; ++j)
                reads[ctr[from + j]] = (b >> j & 1) ? csym(ctr[from + j]) : kBottom;
            f();
        }
    };

    // Unconditional handoff into the cleanup chain, from any state whose
    // underlying control state accepts.
    auto emit_cleanup_entry = [&](StateId from_id) {
        StateId to_id = intern(clean_start);
        std::vector<Instruction> ins(nstores, stay_ins());
        ins[sk] = snoop_ins();
        for (SymbolId sigma : letters) {
            std::vector<SymbolId> reads(nstores, kBottom);
            counter_patterns(reads, 0, [&] {
                for (SymbolId r : sreads) {
                    reads[sk] = r;
                    out.transitions.push_back({from_id, {sigma}, reads, to_id, ins, {0}});
                }
            });
        }
    };

    out.initial = intern({FamTop, base.initial, kBottom, 0, 0});
    auto by_state = transitions_by_state(base);

    while (!queue.empty()) {
        Key cur = queue.front();
        queue.pop_front();
        StateId cur_id = ids.at(cur);

        if ((cur.fam == FamTop || cur.fam == FamSkip || cur.fam == FamMid) &&
            base.is_final(cur.q)) {
            emit_cleanup_entry(cur_id);
            continue;
        }

        switch (cur.fam) {
            case FamTop:
                // The physical top is the tracked symbol or a filler pushed
                // over it; base transitions key on the tracked symbol.
                for (size_t ti : by_state[cur.q]) {
                    const Transition& t = base.transitions[ti];
                    if (t.store_reads[sk] != cur.top) continue;
                    for (int a = 0; a < 2; ++a) {
                        std::vector<SymbolId> reads = t.store_reads;
                        reads[sk] = a ? dollar : cur.top;
                        std::vector<Instruction> ins = t.instructions;
                        Key nk{};
                        switch (t.instructions[sk].op) {
                            case Op::Stay:
                                ins[sk] = push_ins(dollar);
                                nk = {FamTop, t.to, cur.top, 0, 0};
                                break;
                            case Op::Push:
                                nk = {FamTop, t.to, t.instructions[sk].sym, 0, 0};
                                break;
                            case Op::Snoop:
                                nk = {FamTop, t.to, cur.top, 0, 0};
                                break;
                            case Op::Down:
                                // from above the tracked cell the walk must
                                // additionally pass the tracked cell itself
                                nk = {FamSkip, t.to, 0, 0, uint8_t(a ? 1 : 0)};
                                break;
                            case Op::Up:
                                nk = {FamSkip, t.to, 0, 1, 0};
                                break;
                            case Op::Pop:
                                continue;  // not a checking-stack instruction
                        }
                        out.transitions.push_back(
                            {cur_id, t.reads, reads, intern(nk), ins, t.moves});
                    }
                }
                break;

            case FamSkip: {
                // Cross filler cells toward the next real cell or end zone;
                // nothing else changes, so input and counters hold still.
                for (SymbolId sigma : letters) {
                    std::vector<SymbolId> reads(nstores, kBottom);
                    counter_patterns(reads, 0, [&] {
                        std::vector<Instruction> ins(nstores, stay_ins());
                        for (SymbolId r : sreads) {
                            reads[sk] = r;
                            if (r == dollar) {
                                ins[sk] = cur.dir ? up_ins() : down_ins();
                                out.transitions.push_back(
                                    {cur_id, {sigma}, reads, cur_id, ins, {0}});
                            } else if (cur.extra) {
                                if (r == kBottom || r == kTop) continue;  // nothing to pass
                                ins[sk] = down_ins();
                                StateId to_id = intern({FamSkip, cur.q, 0, 0, 0});
                                out.transitions.push_back(
                                    {cur_id, {sigma}, reads, to_id, ins, {0}});
                            } else {
                                ins[sk] = snoop_ins();
                                StateId to_id = intern({FamMid, cur.q, 0, 0, 0});
                                out.transitions.push_back(
                                    {cur_id, {sigma}, reads, to_id, ins, {0}});
                            }
                        }
                    });
                }
                break;
            }

            case FamMid:
                // On a real cell (or Zb/Zt): only reading steps can fire.
                for (size_t ti : by_state[cur.q]) {
                    const Transition& t = base.transitions[ti];
                    std::vector<Instruction> ins = t.instructions;
                    Key nk{};
                    switch (t.instructions[sk].op) {
                        case Op::Down: nk = {FamSkip, t.to, 0, 0, 0}; break;
                        case Op::Up: nk = {FamSkip, t.to, 0, 1, 0}; break;
                        case Op::Snoop: nk = {FamMid, t.to, 0, 0, 0}; break;
                        default: continue;  // writing away from the top never fires
                    }
                    out.transitions.push_back(
                        {cur_id, t.reads, t.store_reads, intern(nk), ins, t.moves});
                }
                break;

            case FamClean: {
                // Pop counter ctr[cur.q] to zero, earlier ones already empty.
                const size_t ci = ctr[cur.q];
                StateId next_id = intern(cur.q + 1 < ctr.size()
                                             ? Key{FamClean, static_cast<StateId>(cur.q + 1), 0,
                                                   0, 0}
                                             : Key{FamCleanStack, 0, 0, 0, 0});
                for (SymbolId sigma : letters) {
                    std::vector<SymbolId> reads(nstores, kBottom);
                    counter_patterns(reads, cur.q + 1, [&] {
                        for (SymbolId r : sreads) {
                            reads[sk] = r;
                            std::vector<Instruction> ins(nstores, stay_ins());
                            ins[sk] = snoop_ins();
                            reads[ci] = csym(ci);
                            ins[ci] = pop_ins();
                            out.transitions.push_back(
                                {cur_id, {sigma}, reads, cur_id, ins, {0}});
                            reads[ci] = kBottom;
                            ins[ci] = stay_ins();
                            out.transitions.push_back(
                                {cur_id, {sigma}, reads, next_id, ins, {0}});
                        }
                    });
                }
                break;
            }

            case FamCleanStack: {
                // Walk the stack head down to the bottom, then accept.
                StateId acc_id = intern(accept_key);
                for (SymbolId sigma : letters) {
                    std::vector<SymbolId> reads(nstores, kBottom);
                    for (SymbolId r : sreads) {
                        reads[sk] = r;
                        std::vector<Instruction> ins(nstores, stay_ins());
                        if (r == kBottom) {
                            ins[sk] = snoop_ins();
                            out.transitions.push_back(
                                {cur_id, {sigma}, reads, acc_id, ins, {0}});
                        } else {
                            ins[sk] = down_ins();
                            out.transitions.push_back(
                                {cur_id, {sigma}, reads, cur_id, ins, {0}});
                        }
                    }
                }
                break;
            }

            case FamAccept:
                break;
        }
    }

    auto acc = ids.find(accept_key);
    if (acc != ids.end()) out.finals.push_back(acc->second);
    return out;
}

/* ------------------------------------------------------------------ */
/* Writing-phase analysis.                                             */

enum class WritingVerdict { Finite, Infinite };

struct WritingPhaseOutcome {
    WritingVerdict verdict = WritingVerdict::Finite;
    bool entered_reading = false;  // Finite only; false means the run halted mid-writing
    StateId state = 0;             // control state at the phase boundary
    std::vector<uint64_t> counter_values;
    std::vector<Word> stack_words;  // frozen stack content per checking stack
    uint64_t steps = 0;             // writing steps executed
    Configuration at;               // configuration at the phase boundary
};

namespace detail {

inline void require_normalized(const MachineSpec& m, const char* who) {
    if (!m.deterministic || !m.oneway || m.heads != 1)
        throw std::invalid_argument(std::string(who) +
                                    ": expects a deterministic one-way single-head machine");
    size_t sk = single_stack_store(m, who);
    for (size_t i = 0; i < m.stores.size(); ++i)
        if (i != sk && m.stores[i].reversal_bound != 1)
            throw std::invalid_argument(std::string(who) + ": counters must be 1-reversal");
    for (const Transition& t : m.transitions)
        if (t.instructions[sk].op == Op::Stay)
            throw std::invalid_argument(std::string(who) +
                                        ": writing steps must push (stack stay found)");
}

/// The unique enabled successor of a deterministic machine, if any.
inline std::optional<std::pair<size_t, Configuration>> unique_step(
    const MachineSpec& m, const std::vector<std::vector<size_t>>& by_state,
    const Configuration& c) {
    std::optional<std::pair<size_t, Configuration>> pick;
    for (size_t i : by_state[c.state]) {
        const Transition& t = m.transitions[i];
        if (!transition_enabled_reads(m, c, t)) continue;
        auto nc = apply_transition(m, c, t);
        if (!nc) continue;
        if (pick)
            throw std::invalid_argument(m.name + ": deterministic run hit conflicting transitions");
        pick.emplace(i, std::move(*nc));
    }
    return pick;
}

/// No counter pops, leaves zero, or reverses: within a stretch of such
/// steps every store read stays constant, which is what makes the
/// pigeonhole windows sound.
inline bool quiet_counter_step(const MachineSpec& m, const Configuration& c,
                               const Transition& t) {
    for (size_t i = 0; i < m.stores.size(); ++i) {
        if (!is_counter_kind(m.stores[i].kind)) continue;
        const Op op = t.instructions[i].op;
        if (op == Op::Pop) return false;
        if (op == Op::Push && (c.stores[i].value == 0 || c.phases[i].dir == 1)) return false;
    }
    return true;
}

}  // namespace detail

/// Classify the writing phase of a normalized machine's run on the empty
/// word by direct simulation.  A quiet stretch of s*(|Gamma|+1)+1 steps
/// must repeat a (state, top symbol) pair with every counter read frozen,
/// and a deterministic machine then replays the stretch forever.  Finite
/// verdicts report the frozen stack word and the boundary configuration.
inline WritingPhaseOutcome detect_infinite_writing(const MachineSpec& m,
                                                   uint64_t step_guard = 20000000) {
    detail::require_normalized(m, "detect_infinite_writing");
    const size_t sk = detail::single_stack_store(m, "detect_infinite_writing");
    const uint64_t window =
        static_cast<uint64_t>(m.states.size()) * (m.stores[sk].alphabet.size() + 1) + 1;

    WritingPhaseOutcome out;
    Configuration c = initial_configuration(m, Word{});
    auto by_state = transitions_by_state(m);
    uint64_t streak = 0;

    auto finish = [&](WritingVerdict v, bool reading) -> WritingPhaseOutcome& {
        out.verdict = v;
        out.entered_reading = reading;
        out.state = c.state;
        for (size_t i = 0; i < m.stores.size(); ++i)
            if (is_counter_kind(m.stores[i].kind))
                out.counter_values.push_back(c.stores[i].value);
        out.stack_words.push_back(c.stores[sk].cells);
        out.at = c;
        return out;
    };

    for (;;) {
        auto pick = detail::unique_step(m, by_state, c);
        if (!pick) return finish(WritingVerdict::Finite, false);
        const Transition& t = m.transitions[pick->first];
        if (t.instructions[sk].op != Op::Push) return finish(WritingVerdict::Finite, true);
        streak = detail::quiet_counter_step(m, c, t) ? streak + 1 : 0;
        if (streak >= window) return finish(WritingVerdict::Infinite, false);
        c = std::move(pick->second);
        ++out.steps;
        if (out.steps > step_guard)
            throw std::logic_error("detect_infinite_writing: window guarantee violated");
    }
}

/// Second engine for the same question: a one-way counter machine over the
/// stack alphabet that reads the pushed word, carries the source counters,
/// and accepts exactly when a full quiet window occurs.  Because the source
/// is deterministic the counter machine can only trace its real run, so
/// nonemptiness here says exactly "the writing phase is infinite".
inline MachineSpec infinite_writing_ncm(const MachineSpec& m) {
    detail::require_normalized(m, "infinite_writing_ncm");
    const size_t sk = detail::single_stack_store(m, "infinite_writing_ncm");
    const std::vector<size_t> ctr = detail::counter_stores(m);
    const uint64_t window =
        static_cast<uint64_t>(m.states.size()) * (m.stores[sk].alphabet.size() + 1) + 1;

    MachineSpec out;
    out.name = m.name + "~quiet";
    out.oneway = true;
    out.heads = 1;
    out.deterministic = true;
    out.syms = m.syms;
    out.input_alphabet = m.stores[sk].alphabet;
    for (size_t i : ctr) out.stores.push_back(m.stores[i]);

    struct Key {
        StateId q;
        SymbolId last;    // symbol on top of the stack so far (Zb initially)
        uint64_t streak;  // consecutive quiet steps, capped at the window
        bool operator<(const Key& o) const {
            if (q != o.q) return q < o.q;
            if (last != o.last) return last < o.last;
            return streak < o.streak;
        }
    };
    std::map<Key, StateId> ids;
    std::deque<Key> queue;
    auto intern = [&](const Key& key) -> StateId {
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        StateId id = out.add_state(m.states[key.q] + "~last." + m.syms.name(key.last) + "~n" +
                                   std::to_string(key.streak));
        ids.emplace(key, id);
        queue.push_back(key);
        return id;
    };

    out.initial = intern({m.initial, kBottom, 0});
    auto by_state = transitions_by_state(m);
    while (!queue.empty()) {
        Key cur = queue.front();
        queue.pop_front();
        if (cur.streak == window) continue;  // accepting, nothing more to prove
        StateId cur_id = ids.at(cur);
        for (size_t ti : by_state[cur.q]) {
            const Transition& t = m.transitions[ti];
            if (t.reads[0] != kRightMarker || t.moves[0] != 0) continue;
            if (t.instructions[sk].op != Op::Push) continue;
            if (t.store_reads[sk] != cur.last) continue;
            bool quiet = true;
            for (size_t i : ctr) {
                if (t.instructions[i].op == Op::Pop) quiet = false;
                if (t.instructions[i].op == Op::Push && t.store_reads[i] == kBottom)
                    quiet = false;
            }
            std::vector<SymbolId> reads;
            std::vector<Instruction> ins;
            for (size_t i : ctr) {
                reads.push_back(t.store_reads[i]);
                ins.push_back(t.instructions[i]);
            }
            StateId to_id = intern({t.to, t.instructions[sk].sym, quiet ? cur.streak + 1 : 0});
            out.transitions.push_back(
                {cur_id, {t.instructions[sk].sym}, reads, to_id, ins, {1}});
        }
    }
    for (const auto& [key, id] : ids)
        if (key.streak == window) out.finals.push_back(id);
    std::sort(out.finals.begin(), out.finals.end());
    return out;
}

inline bool infinite_writing_by_reduction(const MachineSpec& m, uint64_t node_budget = 2000000,
                                          uint64_t replay_budget = 4000000) {
    return !ncm_emptiness(infinite_writing_ncm(m), node_budget, replay_budget).empty;
}

/* ------------------------------------------------------------------ */
/* Empty-word membership.                                              */

struct LambdaRunStats {
    bool accepted = false;
    std::string reason;  // accepted | halted-writing | infinite-writing |
                         // halted-reading | reading-loop
    uint64_t writing_steps = 0;
    uint64_t reading_steps = 0;
    uint64_t reading_window = 0;
    uint64_t max_streak = 0;       // longest quiet stretch while reading
    uint64_t nonquiet_events = 0;  // reading-phase streak resets
    WritingPhaseOutcome writing;
};

/// Decide whether the empty word is accepted.  The machine is normalized,
/// its writing phase classified, and a finite reading phase then runs
/// under a quiet window of s*(d+2)+1 steps over the frozen stack of
/// length d: a full window repeats (state, stack position) with constant
/// counter reads, so the loop never accepts.
inline LambdaRunStats decide_lambda_stats(const MachineSpec& m0,
                                          uint64_t step_guard = 20000000) {
    const MachineSpec n =
        normalize_dcsacm(m0.oneway && m0.heads == 1 ? m0 : make_lambda_machine(m0, Word{}));
    LambdaRunStats st;
    st.writing = detect_infinite_writing(n, step_guard);
    st.writing_steps = st.writing.steps;
    if (st.writing.verdict == WritingVerdict::Infinite) {
        st.reason = "infinite-writing";
        return st;
    }
    if (!st.writing.entered_reading) {
        st.reason = "halted-writing";  // accepting states divert to cleanup, so not final
        return st;
    }

    const uint64_t d = st.writing.stack_words[0].size();
    st.reading_window = static_cast<uint64_t>(n.states.size()) * (d + 2) + 1;
    Configuration c = st.writing.at;
    auto by_state = transitions_by_state(n);
    uint64_t streak = 0;
    for (;;) {
        if (is_accepting(n, c)) {
            st.accepted = true;
            st.reason = "accepted";
            return st;
        }
        auto pick = detail::unique_step(n, by_state, c);
        if (!pick) {
            st.reason = "halted-reading";
            return st;
        }
        if (detail::quiet_counter_step(n, c, n.transitions[pick->first])) {
            ++streak;
        } else {
            ++st.nonquiet_events;
            streak = 0;
        }
        if (streak > st.max_streak) st.max_streak = streak;
        if (streak >= st.reading_window) {
            st.reason = "reading-loop";
            return st;
        }
        c = std::move(pick->second);
        ++st.reading_steps;
        if (st.reading_steps > step_guard)
            throw std::logic_error("decide_lambda: window guarantee violated");
    }
}

inline bool decide_lambda_dcsacm(const MachineSpec& m, uint64_t step_guard = 20000000) {
    return decide_lambda_stats(m, step_guard).accepted;
}

/// Membership for a deterministic machine with one checking stack and
/// reversal-bounded counters: internalize the word, then ask for the
/// empty word.
inline bool decide_membership_dcsacm(const MachineSpec& m, const Word& w,
                                     uint64_t step_guard = 20000000) {
    if (!m.deterministic)
        throw UndecidableClassError(
            "membership is decided for deterministic machines only; " + m.name +
            " is declared nondeterministic");
    for (const auto& s : m.stores)
        if (s.kind != StoreKind::CheckingStack && s.kind != StoreKind::RbCounter)
            throw std::invalid_argument(
                "decide_membership_dcsacm: stores must be a checking stack plus counters");
    return decide_lambda_dcsacm(make_lambda_machine(m, w), step_guard);
}

/* ------------------------------------------------------------------ */
/* Multi-stack membership.                                             */

struct MembershipRunStats {
    bool accepted = false;
    std::string reason;  // accepted | halted | loop
    uint64_t steps = 0;
    uint64_t window_final = 0;  // window in force when the run ended
    uint64_t window_max = 0;
    uint64_t max_streak = 0;
    uint64_t resets = 0;  // non-quiet steps and phase switches
    std::vector<uint64_t> frozen_len;  // stack word length at its phase switch
};

/// Membership for a deterministic machine with any number of checking
/// stacks plus counters, by instrumented simulation of the internalized
/// word.  The quiet window adapts to the stack phases: a still-writing
/// stack contributes its alphabet (|Gamma|+1, counting the empty read), a
/// frozen one its head range (d+2).  Phase switches freeze d and reset the
/// quiet streak, so each stretch argues pigeonhole over a fixed space.
inline MembershipRunStats decide_membership_kstack_stats(const MachineSpec& m, const Word& w,
                                                         uint64_t step_guard = 20000000) {
    if (!m.deterministic)
        throw UndecidableClassError(
            "membership is decided for deterministic machines only; " + m.name +
            " is declared nondeterministic");
    std::vector<size_t> sks;
    for (size_t i = 0; i < m.stores.size(); ++i) {
        if (m.stores[i].kind == StoreKind::CheckingStack)
            sks.push_back(i);
        else if (m.stores[i].kind != StoreKind::RbCounter)
            throw std::invalid_argument(
                "decide_membership_kstack: stores must be checking stacks plus counters");
    }
    if (sks.empty())
        throw std::invalid_argument("decide_membership_kstack: no checking stack");

    const MachineSpec L = make_lambda_machine(m, w);
    MembershipRunStats st;
    st.frozen_len.assign(sks.size(), 0);
    std::vector<bool> frozen(sks.size(), false);

    auto window_now = [&]() -> uint64_t {
        uint64_t v = L.states.size();
        for (size_t j = 0; j < sks.size(); ++j) {
            const uint64_t f = frozen[j] ? st.frozen_len[j] + 2
                                         : L.stores[sks[j]].alphabet.size() + 1;
            if (f != 0 && v > (uint64_t(1) << 45) / f)
                throw std::runtime_error("decide_membership_kstack: window bound too large");
            v *= f;
        }
        return v + 1;
    };

    Configuration c = initial_configuration(L, Word{});
    auto by_state = transitions_by_state(L);
    uint64_t window = window_now();
    st.window_max = window;
    uint64_t streak = 0;

    for (;;) {
        if (is_accepting(L, c)) {
            st.accepted = true;
            st.reason = "accepted";
            st.window_final = window;
            return st;
        }
        auto pick = detail::unique_step(L, by_state, c);
        if (!pick) {
            st.reason = "halted";
            st.window_final = window;
            return st;
        }
        bool quiet = detail::quiet_counter_step(L, c, L.transitions[pick->first]);
        for (size_t j = 0; j < sks.size(); ++j) {
            if (!frozen[j] && pick->second.phases[sks[j]].reading) {
                frozen[j] = true;
                st.frozen_len[j] = pick->second.stores[sks[j]].cells.size();
                quiet = false;
            }
        }
        if (quiet) {
            ++streak;
        } else {
            ++st.resets;
            streak = 0;
            window = window_now();
            if (window > st.window_max) st.window_max = window;
        }
        if (streak > st.max_streak) st.max_streak = streak;
        if (streak >= window) {
            st.reason = "loop";
            st.window_final = window;
            return st;
        }
        c = std::move(pick->second);
        ++st.steps;
        if (st.steps > step_guard)
            throw std::logic_error("decide_membership_kstack: window guarantee violated");
    }
}

inline bool decide_membership_kstack(const MachineSpec& m, const Word& w,
                                     uint64_t step_guard = 20000000) {
    return decide_membership_kstack_stats(m, w, step_guard).accepted;
}

/* ------------------------------------------------------------------ */
/* Reduction artifacts.                                                */

constexpr size_t kNoSource = static_cast<size_t>(-1);

/// A two-way deterministic one-counter machine whose input alphabet names
/// source transitions.  sources[i] are the transition indices behind label
/// labels[i]: [first-machine, second-machine], kNoSource when absent.
struct TwoDcm1Instance {
    MachineSpec machine;
    std::vector<SymbolId> labels;
    std::vector<std::array<size_t, 2>> sources;
};

namespace detail {

inline void require_noread_11(const MachineSpec& m, const char* who) {
    if (!m.deterministic || !m.oneway || m.heads != 1)
        throw std::invalid_argument(std::string(who) +
                                    ": expects a deterministic one-way single-head machine");
    single_stack_store(m, who);
    if (counter_stores(m).size() != 1)
        throw std::invalid_argument(std::string(who) + ": expects exactly one counter");
    auto labels = classify_restrictions(m);
    for (const std::string& l : labels)
        if (l == "no-read") return;
    throw std::invalid_argument(std::string(who) +
                                ": stack reading before the end-marker (not no-read)");
}

constexpr SymbolId kNoPend = kLeftMarker;  // never a pending input letter

}  // namespace detail

/// Rebuild a no-read machine's membership structure over its own writing
/// transitions: the instance machine scans a label word left to right,
/// checking that consecutive labels chain states, keep a stationary head
/// on one letter, agree with the tracked stack top and replay the counter;
/// after the scan it walks the label word as the frozen stack, simulating
/// the reading phase (cells are the pushing labels, others are stepped
/// over).  The instance accepts some label word iff the source accepts
/// some input word.
inline TwoDcm1Instance noread_dcsacm1_to_2dcm1(const MachineSpec& m) {
    detail::require_noread_11(m, "noread_dcsacm1_to_2dcm1");
    const size_t cs = detail::single_stack_store(m, "noread_dcsacm1_to_2dcm1");
    const size_t ct = detail::counter_stores(m)[0];
    const SymbolId csym = m.stores[ct].alphabet[0];

    TwoDcm1Instance inst;
    MachineSpec& out = inst.machine;
    out.name = m.name + "~labels";
    out.oneway = false;
    out.heads = 1;
    out.deterministic = true;
    out.syms = m.syms;
    out.stores = {m.stores[ct]};

    std::vector<size_t> writing;  // transition index per label
    for (size_t ti = 0; ti < m.transitions.size(); ++ti) {
        const Op op = m.transitions[ti].instructions[cs].op;
        if (op != Op::Push && op != Op::Stay) continue;
        SymbolId l = out.syms.intern("t" + std::to_string(ti));
        out.input_alphabet.push_back(l);
        inst.labels.push_back(l);
        inst.sources.push_back({ti, kNoSource});
        writing.push_back(ti);
    }

    enum Fam : uint8_t { FamScan, FamSeek, FamSim };
    struct Key {
        uint8_t fam = FamScan;
        StateId q = 0;
        uint8_t zone = 0;  // FamScan: 1 once the source head reached its end-marker
        SymbolId pend = 0;  // FamScan: letter a stationary head rests on
        SymbolId top = 0;   // FamScan: current stack top
        uint8_t dir = 0;    // FamSeek: 0 left, 1 right
        bool operator<(const Key& o) const {
            if (fam != o.fam) return fam < o.fam;
            if (q != o.q) return q < o.q;
            if (zone != o.zone) return zone < o.zone;
            if (pend != o.pend) return pend < o.pend;
            if (top != o.top) return top < o.top;
            return dir < o.dir;
        }
    };
    std::map<Key, StateId> ids;
    std::deque<Key> queue;
    auto intern = [&](const Key& key) -> StateId {
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        std::string name = m.states[key.q];
        switch (key.fam) {
            case FamScan:
                name += "~scan." + std::string(key.zone ? "a" : "b") + "." +
                        (key.pend == detail::kNoPend ? std::string("_")
                                                     : m.syms.name(key.pend)) +
                        "." + m.syms.name(key.top);
                break;
            case FamSeek: name += key.dir ? "~seek.r" : "~seek.l"; break;
            case FamSim: name += "~sim"; break;
        }
        StateId id = out.add_state(name);
        ids.emplace(key, id);
        queue.push_back(key);
        return id;
    };

    out.initial = intern({FamScan, m.initial, 0, detail::kNoPend, kBottom, 0});

    // Reading steps of the source, looked up by (state, counter read,
    // stack read) during the simulation walk.
    auto reading_step = [&](StateId q, SymbolId cread, SymbolId sread) -> const Transition* {
        for (const Transition& t : m.transitions) {
            if (t.from != q || t.reads[0] != kRightMarker) continue;
            const Op op = t.instructions[cs].op;
            if (op != Op::Down && op != Op::Snoop && op != Op::Up) continue;
            if (t.store_reads[ct] == cread && t.store_reads[cs] == sread) return &t;
        }
        return nullptr;
    };

    while (!queue.empty()) {
        Key cur = queue.front();
        queue.pop_front();
        StateId cur_id = ids.at(cur);

        if (cur.fam == FamScan) {
            for (size_t li = 0; li < writing.size(); ++li) {
                const Transition& t = m.transitions[writing[li]];
                if (t.from != cur.q) continue;
                if (t.store_reads[cs] != cur.top) continue;
                const SymbolId sigma = t.reads[0];
                uint8_t nz;
                SymbolId npend;
                if (sigma == kLeftMarker) continue;
                if (sigma == kRightMarker) {
                    if (!cur.zone && cur.pend != detail::kNoPend) continue;
                    nz = 1;
                    npend = detail::kNoPend;
                } else {
                    if (cur.zone) continue;
                    if (cur.pend != detail::kNoPend && cur.pend != sigma) continue;
                    nz = 0;
                    npend = t.moves[0] == 1 ? detail::kNoPend : sigma;
                }
                const SymbolId ntop = t.instructions[cs].op == Op::Push
                                          ? t.instructions[cs].sym
                                          : cur.top;
                StateId to_id = intern({FamScan, t.to, nz, npend, ntop, 0});
                out.transitions.push_back({cur_id, {inst.labels[li]}, {t.store_reads[ct]},
                                           to_id, {t.instructions[ct]}, {1}});
            }
            // scan done: only a head with no pending letter can be at the
            // source end-marker, where the reading phase starts
            if (cur.zone || cur.pend == detail::kNoPend) {
                StateId to_id = intern({FamSeek, cur.q, 0, 0, 0, 0});
                for (SymbolId r : {SymbolId(kBottom), csym})
                    out.transitions.push_back(
                        {cur_id, {kRightMarker}, {r}, to_id, {stay_ins()}, {-1}});
            }
            continue;
        }

        if (cur.fam == FamSeek) {
            const int8_t mv = cur.dir ? 1 : -1;
            StateId sim_id = intern({FamSim, cur.q, 0, 0, 0, 0});
            for (SymbolId r : {SymbolId(kBottom), csym}) {
                for (size_t li = 0; li < writing.size(); ++li) {
                    const bool cell = m.transitions[writing[li]].instructions[cs].op == Op::Push;
                    out.transitions.push_back({cur_id, {inst.labels[li]}, {r},
                                               cell ? sim_id : cur_id, {stay_ins()},
                                               {cell ? int8_t(0) : mv}});
                }
                if (!cur.dir)
                    out.transitions.push_back(
                        {cur_id, {kLeftMarker}, {r}, sim_id, {stay_ins()}, {0}});
                else
                    out.transitions.push_back(
                        {cur_id, {kRightMarker}, {r}, sim_id, {stay_ins()}, {0}});
            }
            continue;
        }

        // FamSim: on a cell of the frozen stack (a pushing label) or an end
        // zone; apply the source's unique reading step for what is read.
        for (SymbolId r : {SymbolId(kBottom), csym}) {
            auto emit = [&](SymbolId x, SymbolId sread) {
                const Transition* t2 = reading_step(cur.q, r, sread);
                if (!t2) return;
                Key nk{};
                int8_t mv = 0;
                switch (t2->instructions[cs].op) {
                    case Op::Down: nk = {FamSeek, t2->to, 0, 0, 0, 0}; mv = -1; break;
                    case Op::Up: nk = {FamSeek, t2->to, 0, 0, 0, 1}; mv = 1; break;
                    default: nk = {FamSim, t2->to, 0, 0, 0, 0}; break;
                }
                out.transitions.push_back(
                    {cur_id, {x}, {r}, intern(nk), {t2->instructions[ct]}, {mv}});
            };
            for (size_t li = 0; li < writing.size(); ++li) {
                const Transition& t = m.transitions[writing[li]];
                if (t.instructions[cs].op == Op::Push)
                    emit(inst.labels[li], t.instructions[cs].sym);
            }
            emit(kLeftMarker, kBottom);
            emit(kRightMarker, kTop);
        }
    }

    for (const auto& [key, id] : ids)
        if (m.is_final(key.q)) out.finals.push_back(id);
    std::sort(out.finals.begin(), out.finals.end());
    return inst;
}

/// Rebuild emptiness of an intersection of two no-read one-stack
/// one-counter machines over pair labels.  A label carries one writing
/// transition from each source when both consume the same letter, or a
/// single non-consuming transition and a blank.  The instance verifies the
/// first component's chain, simulates its reading phase over the pushing
/// labels, and on acceptance drains its counter, rewinds, and repeats the
/// whole check for the second component, so one counter serves both.  The
/// instance accepts some label word iff some input word is accepted by
/// both sources.
inline TwoDcm1Instance intersection_emptiness_reduction(const MachineSpec& m1,
                                                        const MachineSpec& m2) {
    detail::require_noread_11(m1, "intersection_emptiness_reduction");
    detail::require_noread_11(m2, "intersection_emptiness_reduction");
    const std::array<const MachineSpec*, 2> ms{&m1, &m2};
    std::array<size_t, 2> cs{}, ct{};
    for (int c = 0; c < 2; ++c) {
        cs[c] = detail::single_stack_store(*ms[c], "intersection_emptiness_reduction");
        ct[c] = detail::counter_stores(*ms[c])[0];
    }

    TwoDcm1Instance inst;
    MachineSpec& out = inst.machine;
    out.name = m1.name + "~x~" + m2.name;
    out.oneway = false;
    out.heads = 1;
    out.deterministic = true;
    out.syms = m1.syms;
    const SymbolId csym = m1.stores[ct[0]].alphabet[0];
    StoreTypeSpec store = m1.stores[ct[0]];
    store.reversal_bound =
        m1.stores[ct[0]].reversal_bound + m2.stores[ct[1]].reversal_bound + 2;
    out.stores = {store};

    // Label alphabet: consuming pairs over a shared letter (matched by
    // name, the machines own separate symbol tables), then each side's
    // non-consuming writing transitions alone.
    std::array<std::vector<size_t>, 2> cons, stays;
    for (int c = 0; c < 2; ++c)
        for (size_t ti = 0; ti < ms[c]->transitions.size(); ++ti) {
            const Transition& t = ms[c]->transitions[ti];
            const Op op = t.instructions[cs[c]].op;
            if ((op != Op::Push && op != Op::Stay) || t.reads[0] == kLeftMarker) continue;
            const bool consume = t.reads[0] != kRightMarker && t.moves[0] == 1;
            (consume ? cons : stays)[c].push_back(ti);
        }
    for (size_t ri : cons[0])
        for (size_t sj : cons[1])
            if (m1.syms.name(ms[0]->transitions[ri].reads[0]) ==
                m2.syms.name(ms[1]->transitions[sj].reads[0]))
                inst.sources.push_back({ri, sj});
    for (size_t ri : stays[0]) inst.sources.push_back({ri, kNoSource});
    for (size_t sj : stays[1]) inst.sources.push_back({kNoSource, sj});
    for (size_t li = 0; li < inst.sources.size(); ++li) {
        SymbolId l = out.syms.intern("t" + std::to_string(li));
        out.input_alphabet.push_back(l);
        inst.labels.push_back(l);
    }
    std::vector<SymbolId> every_input = inst.labels;
    every_input.push_back(kLeftMarker);
    every_input.push_back(kRightMarker);

    enum Fam : uint8_t { KScan, KSeek, KSim, KDrain, KRewind, KAcc };
    struct Key {
        uint8_t fam = KScan;
        uint8_t comp = 0;
        StateId q = 0;
        uint8_t zone = 0;
        SymbolId pend = 0;
        SymbolId top = 0;
        uint8_t dir = 0;
        bool operator<(const Key& o) const {
            if (fam != o.fam) return fam < o.fam;
            if (comp != o.comp) return comp < o.comp;
            if (q != o.q) return q < o.q;
            if (zone != o.zone) return zone < o.zone;
            if (pend != o.pend) return pend < o.pend;
            if (top != o.top) return top < o.top;
            return dir < o.dir;
        }
    };
    std::map<Key, StateId> ids;
    std::deque<Key> queue;
    auto intern = [&](const Key& key) -> StateId {
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        std::string name;
        const std::string tag(1, char('1' + key.comp));
        switch (key.fam) {
            case KScan:
                name = ms[key.comp]->states[key.q] + "~scan" + tag + "." +
                       (key.zone ? "a" : "b") + "." +
                       (key.pend == detail::kNoPend ? std::string("_")
                                                    : ms[key.comp]->syms.name(key.pend)) +
                       "." + ms[key.comp]->syms.name(key.top);
                break;
            case KSeek:
                name = ms[key.comp]->states[key.q] + "~seek" + tag + "." +
                       (key.dir ? "r" : "l");
                break;
            case KSim: name = ms[key.comp]->states[key.q] + "~sim" + tag; break;
            case KDrain: name = "drain~ctr"; break;
            case KRewind: name = "rewind"; break;
            case KAcc: name = "accept"; break;
        }
        StateId id = out.add_state(name);
        ids.emplace(key, id);
        queue.push_back(key);
        return id;
    };

    const Key drain_key{KDrain, 0, 0, 0, 0, 0, 0};
    const Key rewind_key{KRewind, 0, 0, 0, 0, 0, 0};
    const Key acc_key{KAcc, 0, 0, 0, 0, 0, 0};
    const Key scan2_key{KScan, 1, ms[1]->initial, 0, detail::kNoPend, kBottom, 0};

    // The source counters replay on the shared counter with its symbol.
    auto xins = [&](const Instruction& i) {
        switch (i.op) {
            case Op::Push: return push_ins(csym);
            case Op::Pop: return pop_ins();
            default: return stay_ins();
        }
    };
    auto reading_step = [&](int c, StateId q, bool zero, SymbolId sread) -> const Transition* {
        for (const Transition& t : ms[c]->transitions) {
            if (t.from != q || t.reads[0] != kRightMarker) continue;
            const Op op = t.instructions[cs[c]].op;
            if (op != Op::Down && op != Op::Snoop && op != Op::Up) continue;
            if ((t.store_reads[ct[c]] == kBottom) == zero && t.store_reads[cs[c]] == sread)
                return &t;
        }
        return nullptr;
    };
    auto emit_divert = [&](StateId from_id, StateId to_id) {
        for (SymbolId x : every_input)
            for (SymbolId r : {SymbolId(kBottom), csym})
                out.transitions.push_back({from_id, {x}, {r}, to_id, {stay_ins()}, {0}});
    };

    out.initial = intern({KScan, 0, ms[0]->initial, 0, detail::kNoPend, kBottom, 0});

    while (!queue.empty()) {
        Key cur = queue.front();
        queue.pop_front();
        StateId cur_id = ids.at(cur);

        // A component that reached acceptance stops being verified: the
        // first hands over to the counter drain, the second accepts.
        if ((cur.fam == KScan || cur.fam == KSeek || cur.fam == KSim) &&
            ms[cur.comp]->is_final(cur.q)) {
            emit_divert(cur_id, intern(cur.comp == 0 ? drain_key : acc_key));
            continue;
        }

        switch (cur.fam) {
            case KScan: {
                const int c = cur.comp;
                for (size_t li = 0; li < inst.sources.size(); ++li) {
                    const size_t ti = inst.sources[li][c];
                    if (ti == kNoSource) {
                        // the other component's private step: hold still
                        for (SymbolId r : {SymbolId(kBottom), csym})
                            out.transitions.push_back(
                                {cur_id, {inst.labels[li]}, {r}, cur_id, {stay_ins()}, {1}});
                        continue;
                    }
                    const Transition& t = ms[c]->transitions[ti];
                    if (t.from != cur.q) continue;
                    if (t.store_reads[cs[c]] != cur.top) continue;
                    const SymbolId sigma = t.reads[0];
                    uint8_t nz;
                    SymbolId npend;
                    if (sigma == kRightMarker) {
                        if (!cur.zone && cur.pend != detail::kNoPend) continue;
                        nz = 1;
                        npend = detail::kNoPend;
                    } else {
                        if (cur.zone) continue;
                        if (cur.pend != detail::kNoPend && cur.pend != sigma) continue;
                        nz = 0;
                        npend = t.moves[0] == 1 ? detail::kNoPend : sigma;
                    }
                    const SymbolId ntop = t.instructions[cs[c]].op == Op::Push
                                              ? t.instructions[cs[c]].sym
                                              : cur.top;
                    StateId to_id =
                        intern({KScan, static_cast<uint8_t>(c), t.to, nz, npend, ntop, 0});
                    out.transitions.push_back(
                        {cur_id, {inst.labels[li]},
                         {t.store_reads[ct[c]] == kBottom ? kBottom : csym}, to_id,
                         {xins(t.instructions[ct[c]])}, {1}});
                }
                if (cur.zone || cur.pend == detail::kNoPend) {
                    StateId to_id = intern({KSeek, cur.comp, cur.q, 0, 0, 0, 0});
                    for (SymbolId r : {SymbolId(kBottom), csym})
                        out.transitions.push_back(
                            {cur_id, {kRightMarker}, {r}, to_id, {stay_ins()}, {-1}});
                }
                break;
            }

            case KSeek: {
                const int c = cur.comp;
                const int8_t mv = cur.dir ? 1 : -1;
                StateId sim_id = intern({KSim, cur.comp, cur.q, 0, 0, 0, 0});
                for (SymbolId r : {SymbolId(kBottom), csym}) {
                    for (size_t li = 0; li < inst.sources.size(); ++li) {
                        const size_t ti = inst.sources[li][c];
                        const bool cell =
                            ti != kNoSource &&
                            ms[c]->transitions[ti].instructions[cs[c]].op == Op::Push;
                        out.transitions.push_back({cur_id, {inst.labels[li]}, {r},
                                                   cell ? sim_id : cur_id, {stay_ins()},
                                                   {cell ? int8_t(0) : mv}});
                    }
                    out.transitions.push_back({cur_id,
                                               {cur.dir ? kRightMarker : kLeftMarker},
                                               {r}, sim_id, {stay_ins()}, {0}});
                }
                break;
            }

            case KSim: {
                const int c = cur.comp;
                for (bool zero : {true, false}) {
                    const SymbolId r = zero ? kBottom : csym;
                    auto emit = [&](SymbolId x, SymbolId sread) {
                        const Transition* t2 = reading_step(c, cur.q, zero, sread);
                        if (!t2) return;
                        Key nk{};
                        int8_t mv = 0;
                        switch (t2->instructions[cs[c]].op) {
                            case Op::Down:
                                nk = {KSeek, static_cast<uint8_t>(c), t2->to, 0, 0, 0, 0};
                                mv = -1;
                                break;
                            case Op::Up:
                                nk = {KSeek, static_cast<uint8_t>(c), t2->to, 0, 0, 0, 1};
                                mv = 1;
                                break;
                            default:
                                nk = {KSim, static_cast<uint8_t>(c), t2->to, 0, 0, 0, 0};
                                break;
                        }
                        out.transitions.push_back({cur_id, {x}, {r}, intern(nk),
                                                   {xins(t2->instructions[ct[c]])}, {mv}});
                    };
                    for (size_t li = 0; li < inst.sources.size(); ++li) {
                        const size_t ti = inst.sources[li][c];
                        if (ti == kNoSource) continue;
                        const Transition& t = ms[c]->transitions[ti];
                        if (t.instructions[cs[c]].op == Op::Push)
                            emit(inst.labels[li], t.instructions[cs[c]].sym);
                    }
                    emit(kLeftMarker, kBottom);
                    emit(kRightMarker, kTop);
                }
                break;
            }

            case KDrain: {
                StateId rewind_id = intern(rewind_key);
                StateId scan2_id = intern(scan2_key);
                for (SymbolId x : every_input) {
                    out.transitions.push_back({cur_id, {x}, {csym}, cur_id, {pop_ins()}, {0}});
                    if (x == kLeftMarker)
                        out.transitions.push_back(
                            {cur_id, {x}, {kBottom}, scan2_id, {stay_ins()}, {1}});
                    else
                        out.transitions.push_back(
                            {cur_id, {x}, {kBottom}, rewind_id, {stay_ins()}, {-1}});
                }
                break;
            }

            case KRewind: {
                StateId scan2_id = intern(scan2_key);
                for (SymbolId x : every_input) {
                    if (x == kLeftMarker)
                        out.transitions.push_back(
                            {cur_id, {x}, {kBottom}, scan2_id, {stay_ins()}, {1}});
                    else
                        out.transitions.push_back(
                            {cur_id, {x}, {kBottom}, cur_id, {stay_ins()}, {-1}});
                }
                break;
            }

            case KAcc:
                break;
        }
    }

    auto acc = ids.find(acc_key);
    if (acc != ids.end()) out.finals.push_back(acc->second);
    return inst;
}

/// Read a source word back out of an accepted label word: the letters of
/// the chosen component's consuming transitions, in scan order.  Replaying
/// it on the source machine is how instance witnesses are confirmed.
inline Word decode_instance_witness(const TwoDcm1Instance& inst, const MachineSpec& source,
                                    size_t component, const Word& u) {
    std::map<SymbolId, size_t> at;
    for (size_t i = 0; i < inst.labels.size(); ++i) at.emplace(inst.labels[i], i);
    Word w;
    for (SymbolId a : u) {
        auto it = at.find(a);
        if (it == at.end())
            throw std::invalid_argument("decode_instance_witness: not a label word");
        const size_t ti = inst.sources[it->second][component];
        if (ti == kNoSource) continue;
        const Transition& t = source.transitions[ti];
        if (t.moves[0] == 1 && t.reads[0] != kLeftMarker && t.reads[0] != kRightMarker)
            w.push_back(t.reads[0]);
    }
    return w;
}

}  // namespace csa
