/* Small hand-built machines used as independent fixtures across test files.
 * These are written out transition by transition on purpose: they serve as
 * oracles for the builders and algorithms under test, so they must not be
 * produced by the code they check.
 */

#pragma once

#include "csa/machine.hpp"

namespace csa::testing {

/// One-way deterministic counter machine for { a^n b^n : n >= 1 }.
inline MachineSpec make_anbn_ncm() {
    MachineSpec m;
    m.name = "anbn_ncm";
    m.oneway = true;
    m.heads = 1;
    m.deterministic = true;
    SymbolId a = m.syms.intern("a");
    SymbolId b = m.syms.intern("b");
    SymbolId c = m.syms.intern("c");
    m.input_alphabet = {a, b};
    StoreTypeSpec ct;
    ct.kind = StoreKind::RbCounter;
    ct.id = "c1";
    ct.alphabet = {c};
    ct.reversal_bound = 1;
    m.stores.push_back(ct);
    StateId qa = m.add_state("q_a");
    StateId qb = m.add_state("q_b");
    StateId qf = m.add_state("q_f");
    m.initial = qa;
    m.finals = {qf};
    m.transitions = {
        {qa, {a}, {kBottom}, qa, {push_ins(c)}, {1}},
        {qa, {a}, {c}, qa, {push_ins(c)}, {1}},
        {qa, {b}, {c}, qb, {pop_ins()}, {1}},
        {qb, {b}, {c}, qb, {pop_ins()}, {1}},
        {qb, {kRightMarker}, {kBottom}, qf, {stay_ins()}, {0}},
    };
    return m;
}

/// Two-way deterministic one-counter machine for { a^n b^n : n >= 1 }:
/// count the a-block moving right, skip the b-block, then walk back left
/// popping once per b and accept exactly when the counter empties on the
/// last a.
inline MachineSpec make_anbn_2dcm1() {
    MachineSpec m;
    m.name = "anbn_2dcm1";
    m.oneway = false;
    m.heads = 1;
    m.deterministic = true;
    SymbolId a = m.syms.intern("a");
    SymbolId b = m.syms.intern("b");
    SymbolId c = m.syms.intern("c");
    m.input_alphabet = {a, b};
    StoreTypeSpec ct;
    ct.kind = StoreKind::RbCounter;
    ct.id = "c1";
    ct.alphabet = {c};
    ct.reversal_bound = 1;
    m.stores.push_back(ct);
    StateId q0 = m.add_state("q0");
    StateId q1 = m.add_state("q1");
    StateId q2 = m.add_state("q2");
    StateId q3 = m.add_state("q3");
    m.initial = q0;
    m.finals = {q3};
    m.transitions = {
        {q0, {a}, {kBottom}, q0, {push_ins(c)}, {1}},
        {q0, {a}, {c}, q0, {push_ins(c)}, {1}},
        {q0, {b}, {c}, q1, {stay_ins()}, {1}},
        {q1, {b}, {c}, q1, {stay_ins()}, {1}},
        {q1, {kRightMarker}, {c}, q2, {stay_ins()}, {-1}},
        {q2, {b}, {c}, q2, {pop_ins()}, {-1}},
        {q2, {a}, {kBottom}, q3, {stay_ins()}, {0}},
    };
    return m;
}

/// Reference membership predicate for { a^n b^n : n >= 1 } on interned words.
inline bool is_anbn(const MachineSpec& m, const Word& w) {
    SymbolId a = m.syms.id("a"), b = m.syms.id("b");
    size_t i = 0;
    while (i < w.size() && w[i] == a) ++i;
    size_t na = i;
    while (i < w.size() && w[i] == b) ++i;
    return i == w.size() && na >= 1 && w.size() == 2 * na;
}

/// Deterministic checking-stack machine that copies its whole input and
/// reads the stack only at the right end-marker.
inline MachineSpec make_copy_noread_csa() {
    MachineSpec m;
    m.name = "copy_noread";
    m.oneway = true;
    m.heads = 1;
    m.deterministic = true;
    SymbolId a = m.syms.intern("a");
    SymbolId x = m.syms.intern("x");
    m.input_alphabet = {a};
    StoreTypeSpec st;
    st.kind = StoreKind::CheckingStack;
    st.id = "s";
    st.alphabet = {x};
    m.stores.push_back(st);
    StateId p = m.add_state("p");
    StateId f = m.add_state("f");
    m.initial = p;
    m.finals = {f};
    m.transitions = {
        {p, {a}, {kBottom}, p, {push_ins(x)}, {1}},
        {p, {a}, {x}, p, {push_ins(x)}, {1}},
        {p, {kRightMarker}, {x}, f, {snoop_ins()}, {0}},
    };
    return m;
}

inline Word word_of(const MachineSpec& m, const std::string& letters) {
    Word w;
    for (char ch : letters) w.push_back(m.syms.id(std::string(1, ch)));
    return w;
}

}  // namespace csa::testing
