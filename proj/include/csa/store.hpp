/* store.hpp -- store kinds (pushdown, counter, reversal-bounded counter,
 * stack, checking stack) with their read/write semantics and instruction
 * language tracking.
 *
 * A store configuration is interpreted against a StoreTypeSpec.  The write
 * function is partial: apply_instruction returns nullopt where undefined,
 * never a clamped result.  Membership of an instruction sequence in the
 * store's instruction language is tracked incrementally by PhaseState and
 * advance_phase; validate_trace folds a whole sequence.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "csa/symbols.hpp"

namespace csa {

enum class StoreKind : uint8_t {
    Pushdown,
    Counter,
    RbCounter,
    Stack,
    CheckingStack,
};

inline bool is_stack_kind(StoreKind k) {
    return k == StoreKind::Stack || k == StoreKind::CheckingStack;
}

inline bool is_counter_kind(StoreKind k) {
    return k == StoreKind::Counter || k == StoreKind::RbCounter;
}

struct StoreTypeSpec {
    StoreKind kind = StoreKind::Counter;
    std::string id;                  // store name from the machine description
    std::vector<SymbolId> alphabet;  // working symbols; {c} for counters
    uint32_t reversal_bound = 0;     // RbCounter only, >= 1

    bool in_alphabet(SymbolId s) const {
        for (SymbolId a : alphabet)
            if (a == s) return true;
        return false;
    }
};

enum class Op : uint8_t { Push, Pop, Stay, Down, Snoop, Up };

struct Instruction {
    Op op = Op::Stay;
    SymbolId sym = 0;  // Push only

    bool operator==(const Instruction& o) const { return op == o.op && sym == o.sym; }
};

inline Instruction push_ins(SymbolId s) { return {Op::Push, s}; }
inline Instruction pop_ins() { return {Op::Pop, 0}; }
inline Instruction stay_ins() { return {Op::Stay, 0}; }
inline Instruction down_ins() { return {Op::Down, 0}; }
inline Instruction snoop_ins() { return {Op::Snoop, 0}; }
inline Instruction up_ins() { return {Op::Up, 0}; }

/* One store's contents.  Stack kinds use cells plus a head position h:
 * the content is Zb cells Zt and the read/write head sits immediately to
 * the right of Zb (h = 0), of cells[h-1] (1 <= h <= n), or of Zt (h = n+1).
 * Counters keep the unary content as a number; a run can only change it by
 * one per step, so 64 bits cannot overflow within any bounded run. */
struct StoreConfig {
    std::vector<SymbolId> cells;
    size_t head = 0;
    uint64_t value = 0;

    bool operator==(const StoreConfig& o) const {
        return cells == o.cells && head == o.head && value == o.value;
    }
};

/* Instruction-language state.  For a checking stack: writing vs reading
 * phase.  For a reversal-bounded counter: current direction (0 while in a
 * nondecreasing block, 1 in a nonincreasing one) and alternations used. */
struct PhaseState {
    bool reading = false;
    uint8_t dir = 0;
    uint32_t reversals = 0;

    bool operator==(const PhaseState& o) const {
        return reading == o.reading && dir == o.dir && reversals == o.reversals;
    }
};

inline StoreConfig initial_config(const StoreTypeSpec&) { return StoreConfig{}; }

/// Symbol under the read function: top symbol, Zb on empty, Zt past the top.
inline SymbolId read_store(const StoreTypeSpec& spec, const StoreConfig& c) {
    switch (spec.kind) {
        case StoreKind::Pushdown:
            return c.cells.empty() ? kBottom : c.cells.back();
        case StoreKind::Counter:
        case StoreKind::RbCounter:
            return c.value == 0 ? kBottom : spec.alphabet.at(0);
        case StoreKind::Stack:
        case StoreKind::CheckingStack:
            if (c.head == 0) return kBottom;
            if (c.head == c.cells.size() + 1) return kTop;
            return c.cells[c.head - 1];
    }
    return kBottom;
}

/// The partial write function g.  nullopt wherever g is undefined:
/// pop on an empty pushdown or counter, push/pop/stay with the stack head away
/// from the top, D at the bottom, U past Zt, push of a foreign symbol, or an
/// instruction outside the kind's instruction set.
inline std::optional<StoreConfig> apply_instruction(const StoreTypeSpec& spec,
                                                    const StoreConfig& c,
                                                    const Instruction& ins) {
    StoreConfig r = c;
    switch (spec.kind) {
        case StoreKind::Pushdown:
            switch (ins.op) {
                case Op::Push:
                    if (!spec.in_alphabet(ins.sym)) return std::nullopt;
                    r.cells.push_back(ins.sym);
                    return r;
                case Op::Pop:
                    if (r.cells.empty()) return std::nullopt;
                    r.cells.pop_back();
                    return r;
                case Op::Stay:
                    return r;
                default:
                    return std::nullopt;
            }
        case StoreKind::Counter:
        case StoreKind::RbCounter:
            switch (ins.op) {
                case Op::Push:
                    if (!spec.in_alphabet(ins.sym)) return std::nullopt;
                    r.value += 1;
                    return r;
                case Op::Pop:
                    if (r.value == 0) return std::nullopt;
                    r.value -= 1;
                    return r;
                case Op::Stay:
                    return r;
                default:
                    return std::nullopt;
            }
        case StoreKind::Stack:
        case StoreKind::CheckingStack: {
            const size_t n = r.cells.size();
            switch (ins.op) {
                case Op::Push:
                    if (r.head != n || !spec.in_alphabet(ins.sym)) return std::nullopt;
                    r.cells.push_back(ins.sym);
                    r.head = n + 1;
                    return r;
                case Op::Pop:
                    if (r.head != n || n == 0) return std::nullopt;
                    r.cells.pop_back();
                    r.head = n - 1;
                    return r;
                case Op::Stay:
                    if (r.head != n) return std::nullopt;
                    return r;
                case Op::Down:
                    if (r.head == 0) return std::nullopt;
                    r.head -= 1;
                    return r;
                case Op::Snoop:
                    return r;
                case Op::Up:
                    if (r.head > n) return std::nullopt;
                    r.head += 1;
                    return r;
            }
        }
    }
    return std::nullopt;
}

/// Advance the instruction-language state; nullopt when appending the
/// instruction would leave the store's instruction language.
inline std::optional<PhaseState> advance_phase(const StoreTypeSpec& spec,
                                               const PhaseState& ph,
                                               const Instruction& ins) {
    PhaseState r = ph;
    switch (spec.kind) {
        case StoreKind::Pushdown:
        case StoreKind::Counter:
            switch (ins.op) {
                case Op::Push:
                case Op::Pop:
                case Op::Stay:
                    return r;
                default:
                    return std::nullopt;
            }
        case StoreKind::RbCounter:
            switch (ins.op) {
                case Op::Push:
                    if (r.dir == 1) {
                        if (r.reversals + 1 > spec.reversal_bound) return std::nullopt;
                        r.reversals += 1;
                        r.dir = 0;
                    }
                    return r;
                case Op::Pop:
                    if (r.dir == 0) {
                        if (r.reversals + 1 > spec.reversal_bound) return std::nullopt;
                        r.reversals += 1;
                        r.dir = 1;
                    }
                    return r;
                case Op::Stay:
                    return r;
                default:
                    return std::nullopt;
            }
        case StoreKind::Stack:
            return r;  // L_I = I*
        case StoreKind::CheckingStack:
            switch (ins.op) {
                case Op::Push:
                case Op::Stay:
                    if (r.reading) return std::nullopt;
                    return r;
                case Op::Pop:
                    return std::nullopt;  // never part of {push,stay}*{D,S,U}*
                case Op::Down:
                case Op::Snoop:
                case Op::Up:
                    r.reading = true;
                    return r;
            }
    }
    return std::nullopt;
}

/// Whole-sequence membership in the store's instruction language.
/// A trace is valid when, starting from the empty store, every instruction
/// is both applicable (the partial update is defined) and permitted by the
/// store's instruction language so far.
inline bool validate_trace(const StoreTypeSpec& spec, const std::vector<Instruction>& trace) {
    StoreConfig cfg = initial_config(spec);
    PhaseState ph;
    for (const Instruction& ins : trace) {
        auto next_cfg = apply_instruction(spec, cfg, ins);
        if (!next_cfg) return false;
        auto next_ph = advance_phase(spec, ph, ins);
        if (!next_ph) return false;
        cfg = std::move(*next_cfg);
        ph = *next_ph;
    }
    return true;
}

inline std::string instruction_name(const Instruction& ins, const SymbolTable& syms) {
    switch (ins.op) {
        case Op::Push:
            return "push:" + syms.name(ins.sym);
        case Op::Pop:
            return "pop";
        case Op::Stay:
            return "stay";
        case Op::Down:
            return "D";
        case Op::Snoop:
            return "S";
        case Op::Up:
            return "U";
    }
    return "?";
}

}  // namespace csa
