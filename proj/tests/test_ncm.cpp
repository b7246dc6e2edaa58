/* tests for counter-machine decision procedures: reversal splitting, the
 * region graph, flow-system construction, emptiness, and membership */

#include <algorithm>
#include <catch2/catch_amalgamated.hpp>

#include "csa/ncm.hpp"
#include "helpers.hpp"

using namespace csa;
using csa::testing::make_anbn_ncm;
using csa::testing::word_of;

namespace {

/// { a^n b^n c^n : n >= 1 } with two 1-reversal counters: the first matches
/// b's against a's, the second matches c's against b's.
MachineSpec make_anbncn_ncm() {
    MachineSpec m;
    m.name = "anbncn_ncm";
    m.oneway = true;
    m.heads = 1;
    m.deterministic = true;
    SymbolId a = m.syms.intern("a");
    SymbolId b = m.syms.intern("b");
    SymbolId c = m.syms.intern("c");
    SymbolId d1 = m.syms.intern("x");
    SymbolId d2 = m.syms.intern("y");
    m.input_alphabet = {a, b, c};
    const std::vector<std::pair<std::string, SymbolId>> counters = {{"c1", d1}, {"c2", d2}};
    for (const auto& [id, sym] : counters) {
        StoreTypeSpec st;
        st.kind = StoreKind::RbCounter;
        st.id = id;
        st.alphabet = {sym};
        st.reversal_bound = 1;
        m.stores.push_back(st);
    }
    StateId p0 = m.add_state("p0");
    StateId p1 = m.add_state("p1");
    StateId p2 = m.add_state("p2");
    StateId pf = m.add_state("pf");
    m.initial = p0;
    m.finals = {pf};
    m.transitions = {
        {p0, {a}, {kBottom, kBottom}, p0, {push_ins(d1), stay_ins()}, {1}},
        {p0, {a}, {d1, kBottom}, p0, {push_ins(d1), stay_ins()}, {1}},
        {p0, {b}, {d1, kBottom}, p1, {pop_ins(), push_ins(d2)}, {1}},
        {p1, {b}, {d1, d2}, p1, {pop_ins(), push_ins(d2)}, {1}},
        {p1, {c}, {kBottom, d2}, p2, {stay_ins(), pop_ins()}, {1}},
        {p2, {c}, {kBottom, d2}, p2, {stay_ins(), pop_ins()}, {1}},
        {p2, {kRightMarker}, {kBottom, kBottom}, pf, {stay_ins(), stay_ins()}, {0}},
    };
    return m;
}

/// { a^i b^j c^m : 1 <= j <= i, m >= 1 } when the counter may alternate
/// twice (up, down, up again); with a single alternation the c-block pushes
/// are illegal and the language collapses to the empty set.
MachineSpec make_up_down_up_ncm(uint32_t bound) {
    MachineSpec m;
    m.name = "up_down_up_" + std::to_string(bound);
    m.oneway = true;
    m.heads = 1;
    m.deterministic = true;
    SymbolId a = m.syms.intern("a");
    SymbolId b = m.syms.intern("b");
    SymbolId c = m.syms.intern("c");
    SymbolId d = m.syms.intern("x");
    m.input_alphabet = {a, b, c};
    StoreTypeSpec st;
    st.kind = StoreKind::RbCounter;
    st.id = "c1";
    st.alphabet = {d};
    st.reversal_bound = bound;
    m.stores.push_back(st);
    StateId r0 = m.add_state("r0");
    StateId r1 = m.add_state("r1");
    StateId r2 = m.add_state("r2");
    StateId rf = m.add_state("rf");
    m.initial = r0;
    m.finals = {rf};
    m.transitions = {
        {r0, {a}, {kBottom}, r0, {push_ins(d)}, {1}},
        {r0, {a}, {d}, r0, {push_ins(d)}, {1}},
        {r0, {b}, {d}, r1, {pop_ins()}, {1}},
        {r1, {b}, {d}, r1, {pop_ins()}, {1}},
        {r1, {c}, {d}, r2, {push_ins(d)}, {1}},       // leftover a's: j < i
        {r1, {c}, {kBottom}, r2, {push_ins(d)}, {1}},  // exact match: j = i
        {r2, {c}, {d}, r2, {push_ins(d)}, {1}},
        {r2, {kRightMarker}, {d}, rf, {stay_ins()}, {0}},
    };
    return m;
}

/// Accepts "a" by pushing once; the counter never returns to zero.
MachineSpec make_push_no_pop_ncm() {
    MachineSpec m;
    m.name = "push_no_pop";
    m.oneway = true;
    m.heads = 1;
    m.deterministic = true;
    SymbolId a = m.syms.intern("a");
    SymbolId d = m.syms.intern("x");
    m.input_alphabet = {a};
    StoreTypeSpec st;
    st.kind = StoreKind::RbCounter;
    st.id = "c1";
    st.alphabet = {d};
    st.reversal_bound = 1;
    m.stores.push_back(st);
    StateId s0 = m.add_state("s0");
    StateId s1 = m.add_state("s1");
    m.initial = s0;
    m.finals = {s1};
    m.transitions = {{s0, {a}, {kBottom}, s1, {push_ins(d)}, {1}}};
    return m;
}

/// Two reads of the same input cell without moving; the cell cannot hold
/// both letters, so with distinct letters the language is empty.
MachineSpec make_stationary_reads_ncm(bool same_letter) {
    MachineSpec m;
    m.name = same_letter ? "stationary_same" : "stationary_mixed";
    m.oneway = true;
    m.heads = 1;
    m.deterministic = true;
    SymbolId a = m.syms.intern("a");
    SymbolId b = m.syms.intern("b");
    m.input_alphabet = {a, b};
    StateId m0 = m.add_state("m0");
    StateId m1 = m.add_state("m1");
    StateId mf = m.add_state("mf");
    m.initial = m0;
    m.finals = {mf};
    m.transitions = {
        {m0, {a}, {}, m1, {}, {0}},
        {m1, {same_letter ? a : b}, {}, mf, {}, {0}},
    };
    return m;
}

std::vector<Word> sorted_words(std::vector<Word> w) {
    std::sort(w.begin(), w.end());
    return w;
}

}  // namespace

TEST_CASE("reversal splitting keeps a 1-reversal machine's language") {
    MachineSpec m = make_anbn_ncm();
    MachineSpec split = to_phase_automaton(m);
    REQUIRE(validate_machine(split).empty());
    REQUIRE(split.deterministic);
    REQUIRE(split.stores.size() == 1);
    REQUIRE(split.stores[0].id == "c1~1");
    REQUIRE(split.stores[0].reversal_bound == 1);
    EnumerationResult a = enumerate_accepted(m, 6, 100000);
    EnumerationResult b = enumerate_accepted(split, 6, 100000);
    REQUIRE(a.complete);
    REQUIRE(b.complete);
    REQUIRE(sorted_words(a.accepted) == sorted_words(b.accepted));
}

TEST_CASE("split counter counts follow the alternation budget") {
    // blocks pair up two per split counter: bounds 1..4 need 1, 2, 2, 3
    for (auto [bound, expect] : std::vector<std::pair<uint32_t, size_t>>{
             {1, 1}, {2, 2}, {3, 2}, {4, 3}}) {
        MachineSpec split = to_phase_automaton(make_up_down_up_ncm(bound));
        REQUIRE(split.stores.size() == expect);
        for (const auto& st : split.stores) REQUIRE(st.reversal_bound == 1);
    }
}

TEST_CASE("the drain loop transfers a live value to the next split counter") {
    MachineSpec m = make_up_down_up_ncm(2);
    MachineSpec split = to_phase_automaton(m);
    REQUIRE(validate_machine(split).empty());
    REQUIRE(split.deterministic);
    EnumerationResult a = enumerate_accepted(m, 5, 100000);
    EnumerationResult b = enumerate_accepted(split, 5, 100000);
    REQUIRE(a.complete);
    REQUIRE(b.complete);
    REQUIRE(!a.accepted.empty());
    // "aabc" carries one unit across the b-to-c turn, exercising the drain
    REQUIRE(std::find(a.accepted.begin(), a.accepted.end(), word_of(m, "aabc")) !=
            a.accepted.end());
    REQUIRE(sorted_words(a.accepted) == sorted_words(b.accepted));
}

TEST_CASE("splitting drops moves that would exceed the alternation budget") {
    MachineSpec split = to_phase_automaton(make_up_down_up_ncm(1));
    EnumerationResult e = enumerate_accepted(split, 5, 100000);
    REQUIRE(e.complete);
    REQUIRE(e.accepted.empty());
}

TEST_CASE("the region graph demands 1-reversal counters") {
    REQUIRE_THROWS_AS(build_region_graph(make_up_down_up_ncm(2)), std::invalid_argument);
    REQUIRE_NOTHROW(build_region_graph(make_up_down_up_ncm(1)));
}

TEST_CASE("a counter-free accepting machine yields a forced unit flow") {
    MachineSpec m;
    m.name = "one_letter";
    m.oneway = true;
    m.heads = 1;
    m.deterministic = true;
    SymbolId a = m.syms.intern("a");
    m.input_alphabet = {a};
    StateId q0 = m.add_state("q0");
    StateId qf = m.add_state("qf");
    m.initial = q0;
    m.finals = {qf};
    m.transitions = {{q0, {a}, {}, qf, {}, {1}}};

    FlowSystem fs = build_flow_system(m, true);
    REQUIRE(fs.num_vars == 2);  // the lone edge plus its accept choice
    FlowSolution sol = solve_flow(fs);
    REQUIRE(sol.status == FlowStatus::Feasible);
    REQUIRE(sol.assignment == std::vector<uint64_t>{1, 1});
}

TEST_CASE("end-zero systems reject a push that is never matched") {
    MachineSpec m = make_push_no_pop_ncm();
    REQUIRE(solve_flow(build_flow_system(m, true)).status == FlowStatus::Infeasible);
    REQUIRE(solve_flow(build_flow_system(m, false)).status == FlowStatus::Feasible);
    // raw acceptance does not ask the counter to end at zero
    EmptinessVerdict v = ncm_emptiness(m);
    REQUIRE(!v.empty);
    REQUIRE(v.witness == word_of(m, "a"));
}

TEST_CASE("emptiness finds the shortest balanced witness for a^n b^n") {
    MachineSpec m = make_anbn_ncm();
    EmptinessVerdict v = ncm_emptiness(m);
    REQUIRE(!v.empty);
    REQUIRE(v.witness == word_of(m, "ab"));
    REQUIRE(!v.trace.empty());
    // the recorded trace is a real accepting run of the input machine
    Configuration c = initial_configuration(m, v.witness);
    for (size_t ti : v.trace) {
        auto next = apply_transition(m, c, m.transitions[ti]);
        REQUIRE(next.has_value());
        c = *next;
    }
    REQUIRE(is_accepting(m, c));
}

TEST_CASE("emptiness couples counters through shared transitions") {
    MachineSpec m = make_anbncn_ncm();
    EmptinessVerdict v = ncm_emptiness(m);
    REQUIRE(!v.empty);
    REQUIRE(v.witness == word_of(m, "abc"));
}

TEST_CASE("machines without accepting possibilities are exactly empty") {
    MachineSpec m = make_anbn_ncm();
    m.finals.clear();
    EmptinessVerdict v = ncm_emptiness(m);
    REQUIRE(v.empty);
    REQUIRE(v.exact);

    MachineSpec u;
    u.name = "unreachable_final";
    u.oneway = true;
    u.heads = 1;
    u.deterministic = true;
    SymbolId a = u.syms.intern("a");
    u.input_alphabet = {a};
    StateId u0 = u.add_state("u0");
    StateId u1 = u.add_state("u1");
    u.initial = u0;
    u.finals = {u1};
    u.transitions = {{u0, {a}, {}, u0, {}, {1}}};
    EmptinessVerdict v2 = ncm_emptiness(u);
    REQUIRE(v2.empty);
    REQUIRE(v2.exact);
}

TEST_CASE("an empty-language 2-alternation machine is proven empty after splitting") {
    EmptinessVerdict v = ncm_emptiness(make_up_down_up_ncm(1));
    REQUIRE(v.empty);
    REQUIRE(v.exact);
}

TEST_CASE("stationary reads must agree on the cell under the head") {
    EmptinessVerdict blocked = ncm_emptiness(make_stationary_reads_ncm(false));
    REQUIRE(blocked.empty);
    REQUIRE(blocked.exact);

    // when both reads want the same letter the witness is that single
    // letter, supplied by the head position that was never stepped past
    EmptinessVerdict ok = ncm_emptiness(make_stationary_reads_ncm(true));
    REQUIRE(!ok.empty);
    MachineSpec m = make_stationary_reads_ncm(true);
    REQUIRE(ok.witness == word_of(m, "a"));
}

TEST_CASE("an accepting initial state gives the empty witness") {
    MachineSpec m;
    m.name = "lambda_acceptor";
    m.oneway = true;
    m.heads = 1;
    m.deterministic = true;
    StateId q0 = m.add_state("q0");
    m.initial = q0;
    m.finals = {q0};
    EmptinessVerdict v = ncm_emptiness(m);
    REQUIRE(!v.empty);
    REQUIRE(v.witness.empty());
}

TEST_CASE("emptiness rejects machines outside the counter family") {
    MachineSpec m = make_anbn_ncm();
    m.oneway = false;
    REQUIRE_THROWS_AS(ncm_emptiness(m), std::invalid_argument);
}

TEST_CASE("membership agrees with direct simulation on short words") {
    MachineSpec m = make_anbncn_ncm();
    REQUIRE(ncm_membership(m, word_of(m, "abc")));
    REQUIRE(ncm_membership(m, word_of(m, "aabbcc")));
    REQUIRE(!ncm_membership(m, word_of(m, "aabbc")));
    REQUIRE(!ncm_membership(m, word_of(m, "")));

    std::vector<Word> words = {{}};
    for (size_t len = 1; len <= 4; ++len) {
        std::vector<Word> next;
        for (const Word& w : words)
            if (w.size() == len - 1)
                for (SymbolId s : m.input_alphabet) {
                    Word e = w;
                    e.push_back(s);
                    next.push_back(e);
                }
        words.insert(words.end(), next.begin(), next.end());
    }
    for (const Word& w : words) {
        bool direct = accepts_bounded(m, w, 100000).accepted;
        REQUIRE(ncm_membership(m, w) == direct);
    }
}

TEST_CASE("the word product machine is well formed") {
    MachineSpec m = make_anbn_ncm();
    MachineSpec p = word_product(m, word_of(m, "aabb"));
    REQUIRE(validate_machine(p).empty());
    REQUIRE(p.input_alphabet.empty());
    for (const Transition& t : p.transitions) {
        REQUIRE(t.reads == std::vector<SymbolId>{kRightMarker});
        REQUIRE(t.moves == std::vector<int8_t>{0});
    }
    REQUIRE(!ncm_emptiness(p).empty);
}
