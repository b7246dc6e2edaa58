/* corpus.hpp -- reference machines, definitional language oracles, and a
 * seeded machine generator for differential testing.
 *
 * The fixed machines cover: the segment language {(a^n #)^n : n >= 1} on a
 * stack plus one counter, the product language {a^i b^j c^k : i,j >= 1,
 * k = i*j} on one counter sweeping a frozen stack, {a^n b^n : n >= 1}
 * three ways (one-way with a counter, two-way with one counter, two-way
 * with two counters), a two-stack {a^n b^n c^n : n >= 1} machine, a
 * counter machine that is empty because its balance constraints are
 * infeasible, and a nondeterministic stack guesser.  Builders are pure and
 * deterministic, so serialized corpus files regenerate byte for byte.
 *
 * oracle_membership answers membership for the named languages straight
 * from their defining arithmetic, independent of any machine.
 *
 * random_machine draws a valid machine from a seeded generator.  The
 * profile fixes the store signature and size caps; deterministic profiles
 * get at most one transition per (state, reads, store reads) key, so the
 * determinism claim holds by construction.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "machine.hpp"

namespace csa {

/* ------------------------------------------------------------------ */
/* Fixed reference machines.                                           */

/// {(a^n #)^n : n >= 1}: the first segment is copied to the stack, every
/// further segment walks the frozen stack end to end (alternating down and
/// up), and the counter counts segments.  Each # is only legal at a walk
/// boundary, so segments of the wrong length die mid-walk.  States split
/// into "fresh" (just turned around, a full walk pending) and "mid-walk";
/// the end-marker drain starts only from a fresh state and pops one count
/// per cell, so it accepts exactly when the segment count equals the
/// segment length.  One stack, one 1-reversal counter.
inline MachineSpec example1_machine() {
    MachineSpec m;
    m.name = "example1";
    m.oneway = true;
    m.heads = 1;
    m.deterministic = true;
    SymbolId a = m.syms.intern("a");
    SymbolId hash = m.syms.intern("#");
    SymbolId c = m.syms.intern("c");
    m.input_alphabet = {a, hash};
    StoreTypeSpec st;
    st.kind = StoreKind::CheckingStack;
    st.id = "s";
    st.alphabet = {a};
    StoreTypeSpec ct;
    ct.kind = StoreKind::RbCounter;
    ct.id = "c1";
    ct.alphabet = {c};
    ct.reversal_bound = 1;
    m.stores = {st, ct};
    StateId s0 = m.add_state("s0");
    StateId fd = m.add_state("fresh_down");
    StateId wd = m.add_state("walk_down");
    StateId fu = m.add_state("fresh_up");
    StateId wu = m.add_state("walk_up");
    StateId dd = m.add_state("drain_down");
    StateId du = m.add_state("drain_up");
    StateId acc = m.add_state("acc");
    m.initial = s0;
    m.finals = {acc};
    m.transitions = {
        {s0, {a}, {SymbolId(kBottom), SymbolId(kBottom)}, s0, {push_ins(a), stay_ins()}, {1}},
        {s0, {a}, {a, SymbolId(kBottom)}, s0, {push_ins(a), stay_ins()}, {1}},
        {s0, {hash}, {a, SymbolId(kBottom)}, fd, {snoop_ins(), push_ins(c)}, {1}},
        {fd, {a}, {a, c}, wd, {down_ins(), stay_ins()}, {1}},
        {fd, {kRightMarker}, {a, c}, dd, {down_ins(), pop_ins()}, {0}},
        {wd, {a}, {a, c}, wd, {down_ins(), stay_ins()}, {1}},
        {wd, {hash}, {SymbolId(kBottom), c}, fu, {up_ins(), push_ins(c)}, {1}},
        {fu, {a}, {a, c}, wu, {up_ins(), stay_ins()}, {1}},
        {fu, {kRightMarker}, {a, c}, du, {up_ins(), pop_ins()}, {0}},
        {wu, {a}, {a, c}, wu, {up_ins(), stay_ins()}, {1}},
        {wu, {hash}, {SymbolId(kTop), c}, fd, {down_ins(), push_ins(c)}, {1}},
        {dd, {kRightMarker}, {a, c}, dd, {down_ins(), pop_ins()}, {0}},
        {dd, {kRightMarker}, {SymbolId(kBottom), SymbolId(kBottom)}, acc,
         {snoop_ins(), stay_ins()}, {0}},
        {du, {kRightMarker}, {a, c}, du, {up_ins(), pop_ins()}, {0}},
        {du, {kRightMarker}, {SymbolId(kTop), SymbolId(kBottom)}, acc,
         {snoop_ins(), stay_ins()}, {0}},
    };
    return m;
}

/// {a^i b^j c^k : i,j >= 1, k = i*j}: the a-block is copied to the stack,
/// each b bumps the counter, and the c-block sweeps the frozen stack end
/// to end, one cell per c.  Each completed sweep pops the counter through
/// an input-stationary turnaround, so exactly i*j letters c survive.
inline MachineSpec example2_machine() {
    MachineSpec m;
    m.name = "example2";
    m.oneway = true;
    m.heads = 1;
    m.deterministic = true;
    SymbolId a = m.syms.intern("a");
    SymbolId b = m.syms.intern("b");
    SymbolId c = m.syms.intern("c");
    SymbolId d = m.syms.intern("d");
    m.input_alphabet = {a, b, c};
    StoreTypeSpec st;
    st.kind = StoreKind::CheckingStack;
    st.id = "s";
    st.alphabet = {a};
    StoreTypeSpec ct;
    ct.kind = StoreKind::RbCounter;
    ct.id = "c1";
    ct.alphabet = {d};
    ct.reversal_bound = 1;
    m.stores = {st, ct};
    StateId sa = m.add_state("sa");
    StateId sb = m.add_state("sb");
    StateId cd = m.add_state("cd");
    StateId cu = m.add_state("cu");
    StateId fin = m.add_state("fin");
    StateId acc = m.add_state("acc");
    m.initial = sa;
    m.finals = {acc};
    m.transitions = {
        {sa, {a}, {SymbolId(kBottom), SymbolId(kBottom)}, sa, {push_ins(a), stay_ins()}, {1}},
        {sa, {a}, {a, SymbolId(kBottom)}, sa, {push_ins(a), stay_ins()}, {1}},
        {sa, {b}, {a, SymbolId(kBottom)}, sb, {snoop_ins(), push_ins(d)}, {1}},
        {sb, {b}, {a, d}, sb, {snoop_ins(), push_ins(d)}, {1}},
        {sb, {c}, {a, d}, cd, {down_ins(), stay_ins()}, {1}},
        {cd, {c}, {a, d}, cd, {down_ins(), stay_ins()}, {1}},
        {cd, {c}, {SymbolId(kBottom), d}, cu, {up_ins(), pop_ins()}, {0}},
        {cd, {kRightMarker}, {SymbolId(kBottom), d}, fin, {snoop_ins(), pop_ins()}, {0}},
        {cu, {c}, {a, d}, cu, {up_ins(), stay_ins()}, {1}},
        {cu, {c}, {SymbolId(kTop), d}, cd, {down_ins(), pop_ins()}, {0}},
        {cu, {kRightMarker}, {SymbolId(kTop), d}, fin, {snoop_ins(), pop_ins()}, {0}},
        {fin, {kRightMarker}, {SymbolId(kBottom), SymbolId(kBottom)}, acc,
         {snoop_ins(), stay_ins()}, {0}},
        {fin, {kRightMarker}, {SymbolId(kTop), SymbolId(kBottom)}, acc,
         {snoop_ins(), stay_ins()}, {0}},
    };
    return m;
}

/// One-way deterministic counter machine for {a^n b^n : n >= 1}.
inline MachineSpec anbn_ncm_machine() {
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
    m.stores = {ct};
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

/// Two-way deterministic one-counter machine for {a^n b^n : n >= 1}: count
/// the a-block on the way right, then walk back popping one per b and
/// accept on hitting the a-block with an empty counter.
inline MachineSpec anbn_2dcm1_machine() {
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
    m.stores = {ct};
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

/// Two-way deterministic two-counter machine for {a^n b^n : n >= 1}: one
/// counter takes the a-block going right, the other takes the b-block on
/// the way back, and both drain in lockstep at the left end-marker.
inline MachineSpec anbn_2dcm2_machine() {
    MachineSpec m;
    m.name = "anbn_2dcm2";
    m.oneway = false;
    m.heads = 1;
    m.deterministic = true;
    SymbolId a = m.syms.intern("a");
    SymbolId b = m.syms.intern("b");
    SymbolId x = m.syms.intern("x");
    SymbolId y = m.syms.intern("y");
    m.input_alphabet = {a, b};
    StoreTypeSpec c1;
    c1.kind = StoreKind::RbCounter;
    c1.id = "c1";
    c1.alphabet = {x};
    c1.reversal_bound = 1;
    StoreTypeSpec c2 = c1;
    c2.id = "c2";
    c2.alphabet = {y};
    m.stores = {c1, c2};
    StateId q0 = m.add_state("q0");
    StateId q1 = m.add_state("q1");
    StateId q2 = m.add_state("q2");
    StateId q3 = m.add_state("q3");
    StateId qf = m.add_state("qf");
    m.initial = q0;
    m.finals = {qf};
    m.transitions = {
        {q0, {a}, {SymbolId(kBottom), SymbolId(kBottom)}, q0, {push_ins(x), stay_ins()}, {1}},
        {q0, {a}, {x, SymbolId(kBottom)}, q0, {push_ins(x), stay_ins()}, {1}},
        {q0, {b}, {x, SymbolId(kBottom)}, q1, {stay_ins(), stay_ins()}, {1}},
        {q1, {b}, {x, SymbolId(kBottom)}, q1, {stay_ins(), stay_ins()}, {1}},
        {q1, {kRightMarker}, {x, SymbolId(kBottom)}, q2, {stay_ins(), stay_ins()}, {-1}},
        {q2, {b}, {x, SymbolId(kBottom)}, q2, {stay_ins(), push_ins(y)}, {-1}},
        {q2, {b}, {x, y}, q2, {stay_ins(), push_ins(y)}, {-1}},
        {q2, {a}, {x, y}, q3, {stay_ins(), stay_ins()}, {-1}},
        {q3, {a}, {x, y}, q3, {stay_ins(), stay_ins()}, {-1}},
        {q3, {kLeftMarker}, {x, y}, q3, {pop_ins(), pop_ins()}, {0}},
        {q3, {kLeftMarker}, {SymbolId(kBottom), SymbolId(kBottom)}, qf,
         {stay_ins(), stay_ins()}, {0}},
    };
    return m;
}

/// Two checking stacks for {a^n b^n c^n : n >= 1}: the a-block fills one
/// stack, the b-block the other, and the c-block walks both down together,
/// accepting only when both bottoms arrive with the right end-marker.
inline MachineSpec anbncn_2stack_machine() {
    MachineSpec m;
    m.name = "anbncn_2stack";
    m.oneway = true;
    m.heads = 1;
    m.deterministic = true;
    SymbolId a = m.syms.intern("a");
    SymbolId b = m.syms.intern("b");
    SymbolId c = m.syms.intern("c");
    m.input_alphabet = {a, b, c};
    StoreTypeSpec sa;
    sa.kind = StoreKind::CheckingStack;
    sa.id = "A";
    sa.alphabet = {a};
    StoreTypeSpec sb = sa;
    sb.id = "B";
    sb.alphabet = {b};
    m.stores = {sa, sb};
    StateId wa = m.add_state("wa");
    StateId wb = m.add_state("wb");
    StateId wc = m.add_state("wc");
    StateId acc = m.add_state("acc");
    m.initial = wa;
    m.finals = {acc};
    m.transitions = {
        {wa, {a}, {SymbolId(kBottom), SymbolId(kBottom)}, wa, {push_ins(a), stay_ins()}, {1}},
        {wa, {a}, {a, SymbolId(kBottom)}, wa, {push_ins(a), stay_ins()}, {1}},
        {wa, {b}, {a, SymbolId(kBottom)}, wb, {snoop_ins(), push_ins(b)}, {1}},
        {wb, {b}, {a, b}, wb, {snoop_ins(), push_ins(b)}, {1}},
        {wb, {c}, {a, b}, wc, {down_ins(), down_ins()}, {1}},
        {wc, {c}, {a, b}, wc, {down_ins(), down_ins()}, {1}},
        {wc, {kRightMarker}, {SymbolId(kBottom), SymbolId(kBottom)}, acc,
         {snoop_ins(), snoop_ins()}, {0}},
    };
    return m;
}

/// Counter machine whose only path to the final state demands an empty
/// counter right after a forced increment; empty by arithmetic.
inline MachineSpec ncm_inc_then_zero_machine() {
    MachineSpec m;
    m.name = "ncm_inc_then_zero";
    m.oneway = true;
    m.heads = 1;
    m.deterministic = true;
    SymbolId a = m.syms.intern("a");
    SymbolId c = m.syms.intern("c");
    m.input_alphabet = {a};
    StoreTypeSpec ct;
    ct.kind = StoreKind::RbCounter;
    ct.id = "c1";
    ct.alphabet = {c};
    ct.reversal_bound = 1;
    m.stores = {ct};
    StateId q0 = m.add_state("q0");
    StateId q1 = m.add_state("q1");
    StateId f = m.add_state("f");
    m.initial = q0;
    m.finals = {f};
    m.transitions = {
        {q0, {a}, {kBottom}, q1, {push_ins(c)}, {1}},
        {q1, {kRightMarker}, {kBottom}, f, {stay_ins()}, {0}},
    };
    return m;
}

/// Nondeterministic checking stack machine: on each a it either keeps
/// writing or commits to the final state, two rival transitions per key.
inline MachineSpec ncsacm_guess_machine() {
    MachineSpec m;
    m.name = "ncsacm_guess";
    m.oneway = true;
    m.heads = 1;
    m.deterministic = false;
    SymbolId a = m.syms.intern("a");
    SymbolId x = m.syms.intern("x");
    m.input_alphabet = {a};
    StoreTypeSpec st;
    st.kind = StoreKind::CheckingStack;
    st.id = "s";
    st.alphabet = {x};
    m.stores = {st};
    StateId p = m.add_state("p");
    StateId f = m.add_state("f");
    m.initial = p;
    m.finals = {f};
    m.transitions = {
        {p, {a}, {kBottom}, p, {push_ins(x)}, {1}},
        {p, {a}, {kBottom}, f, {push_ins(x)}, {1}},
        {p, {a}, {x}, p, {push_ins(x)}, {1}},
        {p, {a}, {x}, f, {push_ins(x)}, {1}},
    };
    return m;
}

/// Every fixed corpus machine, in manifest order.
inline std::vector<MachineSpec> corpus_machines() {
    return {example1_machine(),      example2_machine(),      anbn_ncm_machine(),
            anbn_2dcm1_machine(),    anbn_2dcm2_machine(),    anbncn_2stack_machine(),
            ncm_inc_then_zero_machine(), ncsacm_guess_machine()};
}

/* ------------------------------------------------------------------ */
/* Definitional oracles.                                               */

namespace detail {

inline bool oracle_example1(const std::string& w) {
    if (w.empty() || w.back() != '#') return false;
    size_t seg = 0, count = 0, run = 0;
    bool first = true;
    for (char ch : w) {
        if (ch == 'a') {
            ++run;
        } else if (ch == '#') {
            if (first) {
                seg = run;
                first = false;
            } else if (run != seg) {
                return false;
            }
            ++count;
            run = 0;
        } else {
            return false;
        }
    }
    return seg >= 1 && count == seg;
}

inline bool oracle_example2(const std::string& w) {
    size_t i = 0, j = 0, k = 0, at = 0;
    while (at < w.size() && w[at] == 'a') ++i, ++at;
    while (at < w.size() && w[at] == 'b') ++j, ++at;
    while (at < w.size() && w[at] == 'c') ++k, ++at;
    return at == w.size() && i >= 1 && j >= 1 && k == i * j;
}

inline bool oracle_blocks(const std::string& w, const char* letters, size_t nblocks) {
    std::vector<size_t> len(nblocks, 0);
    size_t at = 0;
    for (size_t bi = 0; bi < nblocks; ++bi)
        while (at < w.size() && w[at] == letters[bi]) ++len[bi], ++at;
    if (at != w.size() || len[0] < 1) return false;
    for (size_t bi = 1; bi < nblocks; ++bi)
        if (len[bi] != len[0]) return false;
    return true;
}

}  // namespace detail

/// Membership by definition for the named corpus languages: "example1" is
/// {(a^n #)^n : n >= 1}, "example2" is {a^i b^j c^k : i,j >= 1, k = i*j},
/// "anbn" and "anbncn" are the equal-block languages with n >= 1.
inline bool oracle_membership(const std::string& language_id, const std::string& w) {
    if (language_id == "example1") return detail::oracle_example1(w);
    if (language_id == "example2") return detail::oracle_example2(w);
    if (language_id == "anbn") return detail::oracle_blocks(w, "ab", 2);
    if (language_id == "anbncn") return detail::oracle_blocks(w, "abc", 3);
    throw std::invalid_argument("oracle_membership: unknown language " + language_id);
}

/* ------------------------------------------------------------------ */
/* Seeded machine generation.                                          */

/// Shape request for random_machine: a store signature such as "NCM(2,1)"
/// or "DCSACM(1,1)" (counters, then the counter reversal bound, default 1;
/// the CSACM forms add one checking stack; D means deterministic) plus
/// size caps.
struct MachineProfile {
    std::string signature;
    size_t max_states = 3;
    size_t max_transitions = 12;
};

namespace detail {

struct ProfileSignature {
    bool deterministic = true;
    bool stack = false;
    size_t counters = 1;
    uint32_t reversals = 1;
};

inline ProfileSignature parse_profile_signature(const std::string& s) {
    ProfileSignature sig;
    size_t open = s.find('(');
    if (open == std::string::npos || s.back() != ')')
        throw std::invalid_argument("random_machine: bad signature " + s);
    std::string head = s.substr(0, open);
    if (head == "DCM" || head == "NCM")
        sig.stack = false;
    else if (head == "DCSACM" || head == "NCSACM")
        sig.stack = true;
    else
        throw std::invalid_argument("random_machine: bad signature " + s);
    sig.deterministic = head[0] == 'D';
    std::string args = s.substr(open + 1, s.size() - open - 2);
    size_t comma = args.find(',');
    try {
        if (comma == std::string::npos) {
            sig.counters = std::stoul(args);
        } else {
            sig.counters = std::stoul(args.substr(0, comma));
            sig.reversals = static_cast<uint32_t>(std::stoul(args.substr(comma + 1)));
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("random_machine: bad signature " + s);
    }
    if (sig.reversals < 1) throw std::invalid_argument("random_machine: bad signature " + s);
    return sig;
}

}  // namespace detail

inline MachineSpec random_machine(uint64_t seed, const MachineProfile& profile) {
    const detail::ProfileSignature sig = detail::parse_profile_signature(profile.signature);
    std::mt19937_64 rng(seed);
    MachineSpec m;
    m.name = "rnd" + std::to_string(seed);
    m.oneway = true;
    m.heads = 1;
    m.deterministic = sig.deterministic;
    SymbolId a = m.syms.intern("a");
    SymbolId b = m.syms.intern("b");
    m.input_alphabet = {a, b};

    std::vector<std::vector<SymbolId>> read_options;  // per store
    if (sig.stack) {
        SymbolId x = m.syms.intern("x");
        SymbolId y = m.syms.intern("y");
        StoreTypeSpec st;
        st.kind = StoreKind::CheckingStack;
        st.id = "s";
        st.alphabet = {x, y};
        m.stores.push_back(st);
        read_options.push_back({SymbolId(kBottom), x, y, SymbolId(kTop)});
    }
    for (size_t i = 0; i < sig.counters; ++i) {
        SymbolId cs = m.syms.intern(std::string(1, static_cast<char>('c' + i)));
        StoreTypeSpec ct;
        ct.kind = StoreKind::RbCounter;
        ct.id = "k" + std::to_string(i);
        ct.alphabet = {cs};
        ct.reversal_bound = sig.reversals;
        m.stores.push_back(ct);
        read_options.push_back({SymbolId(kBottom), cs});
    }

    const size_t lo = 2;
    const size_t hi = profile.max_states < lo ? lo : profile.max_states;
    const size_t ns = lo + (hi > lo ? rng() % (hi - lo + 1) : 0);
    for (size_t i = 0; i < ns; ++i) m.add_state("p" + std::to_string(i));
    m.initial = 0;
    for (size_t i = 0; i < ns; ++i)
        if (rng() % 3 == 0) m.finals.push_back(static_cast<StateId>(i));

    // All store-read combinations, in a fixed mixed-radix order.
    std::vector<std::vector<SymbolId>> combos{{}};
    for (const auto& opts : read_options) {
        std::vector<std::vector<SymbolId>> next;
        for (const auto& base : combos)
            for (SymbolId r : opts) {
                auto row = base;
                row.push_back(r);
                next.push_back(row);
            }
        combos = next;
    }

    auto roll_instructions = [&]() {
        std::vector<Instruction> ins;
        for (const StoreTypeSpec& st : m.stores) {
            if (st.kind == StoreKind::CheckingStack) {
                switch (rng() % 6) {
                    case 0: ins.push_back(push_ins(st.alphabet[0])); break;
                    case 1: ins.push_back(push_ins(st.alphabet[1])); break;
                    case 2: ins.push_back(stay_ins()); break;
                    case 3: ins.push_back(snoop_ins()); break;
                    case 4: ins.push_back(down_ins()); break;
                    default: ins.push_back(up_ins()); break;
                }
            } else {
                switch (rng() % 3) {
                    case 0: ins.push_back(push_ins(st.alphabet[0])); break;
                    case 1: ins.push_back(pop_ins()); break;
                    default: ins.push_back(stay_ins()); break;
                }
            }
        }
        return ins;
    };

    const SymbolId reads[3] = {a, b, SymbolId(kRightMarker)};
    if (sig.deterministic) {
        struct Key {
            size_t q, r, c;
        };
        std::vector<Key> keys;
        for (size_t q = 0; q < ns; ++q)
            for (size_t r = 0; r < 3; ++r)
                for (size_t c = 0; c < combos.size(); ++c) keys.push_back({q, r, c});
        std::shuffle(keys.begin(), keys.end(), rng);
        for (const Key& k : keys) {
            if (m.transitions.size() >= profile.max_transitions) break;
            if (rng() % 100 >= 55) continue;
            Transition t;
            t.from = static_cast<StateId>(k.q);
            t.reads = {reads[k.r]};
            t.store_reads = combos[k.c];
            t.to = static_cast<StateId>(rng() % ns);
            t.instructions = roll_instructions();
            t.moves = {reads[k.r] == kRightMarker ? int8_t(0) : static_cast<int8_t>(rng() % 2)};
            m.transitions.push_back(std::move(t));
        }
    } else {
        const size_t nt = 2 + rng() % (profile.max_transitions > 2 ? profile.max_transitions - 1
                                                                   : 1);
        auto same = [](const Transition& u, const Transition& v) {
            return u.from == v.from && u.reads == v.reads && u.store_reads == v.store_reads &&
                   u.to == v.to && u.moves == v.moves &&
                   std::equal(u.instructions.begin(), u.instructions.end(),
                              v.instructions.begin(), v.instructions.end(),
                              [](const Instruction& p, const Instruction& q) {
                                  return p.op == q.op && p.sym == q.sym;
                              });
        };
        size_t attempts = 0;
        while (m.transitions.size() < nt && attempts++ < 64 * nt) {
            Transition t;
            t.from = static_cast<StateId>(rng() % ns);
            SymbolId r = reads[rng() % 3];
            t.reads = {r};
            t.store_reads = combos[rng() % combos.size()];
            t.to = static_cast<StateId>(rng() % ns);
            t.instructions = roll_instructions();
            t.moves = {r == kRightMarker ? int8_t(0) : static_cast<int8_t>(rng() % 2)};
            bool dup = false;
            for (const Transition& u : m.transitions) dup = dup || same(u, t);
            if (!dup) m.transitions.push_back(std::move(t));
        }
    }
    return m;
}

}  // namespace csa
