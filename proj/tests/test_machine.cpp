/* Machine model: configurations, the step relation, validation diagnostics,
 * restriction labels, and the text format round trip.
 */

#include <catch2/catch_amalgamated.hpp>

#include "csa/format.hpp"
#include "csa/machine.hpp"
#include "helpers.hpp"

using namespace csa;
using namespace csa::testing;

TEST_CASE("initial configuration starts every head at position 1") {
    MachineSpec m = make_anbn_ncm();
    Word w = word_of(m, "ab");
    Configuration c = initial_configuration(m, w);
    CHECK(c.state == m.initial);
    REQUIRE(c.heads.size() == 1);
    CHECK(c.heads[0] == 1);
    CHECK(symbol_at(*c.word, 0) == kLeftMarker);
    CHECK(symbol_at(*c.word, 1) == m.syms.id("a"));
    CHECK(symbol_at(*c.word, 2) == m.syms.id("b"));
    CHECK(symbol_at(*c.word, 3) == kRightMarker);
}

TEST_CASE("step produces exactly the enabled, defined successors") {
    MachineSpec m = make_anbn_ncm();
    Word w = word_of(m, "ab");
    Configuration c = initial_configuration(m, w);

    auto s1 = step(m, c);
    REQUIRE(s1.size() == 1);
    CHECK(s1[0].first == 0);  // a with empty counter
    c = s1[0].second;
    CHECK(c.stores[0].value == 1);
    CHECK(c.heads[0] == 2);

    auto s2 = step(m, c);
    REQUIRE(s2.size() == 1);
    CHECK(s2[0].first == 2);  // b with positive counter
    c = s2[0].second;
    CHECK(c.stores[0].value == 0);

    auto s3 = step(m, c);
    REQUIRE(s3.size() == 1);
    CHECK(s3[0].first == 4);
    c = s3[0].second;
    CHECK(is_accepting(m, c));
    CHECK(step(m, c).empty());
}

TEST_CASE("undefined store updates exclude a transition from step") {
    MachineSpec m = make_anbn_ncm();
    // force a pop on the empty counter: word "b" in state q_a matches nothing,
    // but a transition reading Zb with a pop instruction must also be skipped
    m.transitions.push_back(
        {0, {m.syms.id("b")}, {kBottom}, 1, {pop_ins()}, {1}});
    Word w = word_of(m, "b");
    Configuration c = initial_configuration(m, w);
    CHECK(step(m, c).empty());
}

TEST_CASE("one-way machines refuse leftward moves dynamically and statically") {
    MachineSpec m = make_anbn_ncm();
    m.transitions.push_back({0, {m.syms.id("a")}, {kBottom}, 0, {stay_ins()}, {-1}});
    bool found = false;
    for (const auto& d : validate_machine(m))
        if (d.category == "mode") found = true;
    CHECK(found);

    Word w = word_of(m, "a");
    Configuration c = initial_configuration(m, w);
    for (auto& [idx, nc] : step(m, c)) CHECK(idx != m.transitions.size() - 1);
}

TEST_CASE("head moves stay within the end markers") {
    MachineSpec m = make_anbn_2dcm1();
    // a transition moving left from the left marker must be dropped
    m.transitions.push_back({0, {kLeftMarker}, {kBottom}, 0, {stay_ins()}, {-1}});
    Word w = word_of(m, "a");
    Configuration c = initial_configuration(m, w);
    c.heads[0] = 0;
    CHECK(step(m, c).empty());
}

TEST_CASE("validation catches arity, symbol, instruction and range mistakes") {
    MachineSpec m = make_anbn_ncm();
    CHECK(validate_machine(m).empty());

    SECTION("field counts") {
        m.transitions[0].reads.push_back(kRightMarker);
        REQUIRE_FALSE(validate_machine(m).empty());
        CHECK(validate_machine(m)[0].category == "arity");
    }
    SECTION("unknown input symbol") {
        m.transitions[0].reads[0] = m.syms.intern("z");
        REQUIRE_FALSE(validate_machine(m).empty());
        CHECK(validate_machine(m)[0].category == "symbol");
    }
    SECTION("store read outside the store alphabet") {
        m.transitions[0].store_reads[0] = m.syms.id("a");
        REQUIRE_FALSE(validate_machine(m).empty());
        CHECK(validate_machine(m)[0].category == "symbol");
    }
    SECTION("counter reading the top marker") {
        m.transitions[0].store_reads[0] = kTop;
        REQUIRE_FALSE(validate_machine(m).empty());
        CHECK(validate_machine(m)[0].category == "symbol");
    }
    SECTION("scan instruction on a counter") {
        m.transitions[0].instructions[0] = down_ins();
        bool found = false;
        for (const auto& d : validate_machine(m))
            if (d.category == "instruction") found = true;
        CHECK(found);
    }
    SECTION("state out of range") {
        m.transitions[0].to = 99;
        REQUIRE_FALSE(validate_machine(m).empty());
        CHECK(validate_machine(m)[0].category == "structure");
    }
    SECTION("reversal bound zero") {
        m.stores[0].reversal_bound = 0;
        REQUIRE_FALSE(validate_machine(m).empty());
        CHECK(validate_machine(m)[0].category == "structure");
    }
}

TEST_CASE("determinism check flags shared keys and exact duplicates") {
    MachineSpec m = make_anbn_ncm();
    SECTION("conflicting right-hand sides") {
        Transition t = m.transitions[0];
        t.to = 1;
        m.transitions.push_back(t);
        bool found = false;
        for (const auto& d : validate_machine(m))
            if (d.category == "determinism") found = true;
        CHECK(found);
    }
    SECTION("exact duplicate") {
        m.transitions.push_back(m.transitions[0]);
        bool found = false;
        for (const auto& d : validate_machine(m))
            if (d.category == "duplicate") found = true;
        CHECK(found);
    }
    SECTION("no complaint for declared nondeterminism") {
        Transition t = m.transitions[0];
        t.to = 1;
        m.transitions.push_back(t);
        m.deterministic = false;
        CHECK(validate_machine(m).empty());
    }
}

TEST_CASE("store signature helpers") {
    CHECK(is_ncm_signature(make_anbn_ncm()));
    CHECK(!is_ncm_signature(make_anbn_2dcm1()));  // two-way
    CHECK(is_twoway_counter_signature(make_anbn_2dcm1()));
    CHECK(!is_csacm_signature(make_anbn_ncm()));
    CHECK(is_csacm_signature(make_copy_noread_csa()));
}

TEST_CASE("restriction labels") {
    CHECK(classify_restrictions(make_anbn_ncm()).empty());
    auto labels = classify_restrictions(make_copy_noread_csa());
    REQUIRE(labels.size() == 4);
    CHECK(labels[0] == "no-read");
    CHECK(labels[1] == "no-read/no-decrease");
    CHECK(labels[2] == "no-read/no-counter");
    CHECK(labels[3] == "d-crossing-candidate");

    // reading the stack before the end marker loses the whole no-read family
    MachineSpec m = make_copy_noread_csa();
    m.transitions.push_back({0, {m.syms.id("a")}, {m.syms.id("x")}, 0, {snoop_ins()}, {1}});
    m.deterministic = false;
    auto l2 = classify_restrictions(m);
    REQUIRE(l2.size() == 1);
    CHECK(l2[0] == "d-crossing-candidate");
}

TEST_CASE("serialize then parse is the identity") {
    for (MachineSpec m : {make_anbn_ncm(), make_anbn_2dcm1(), make_copy_noread_csa()}) {
        std::string text = serialize_machine(m);
        MachineSpec back = parse_machine(text);
        CHECK(back == m);
        CHECK(serialize_machine(back) == text);
    }
}

TEST_CASE("parsing a hand-written file") {
    std::string text =
        "# words with a '#' separator, so comments must own their line\n"
        "machine sep\n"
        "mode oneway\n"
        "heads 1\n"
        "deterministic true\n"
        "input a #\n"
        "store s checking_stack a\n"
        "store k rb_counter:2\n"
        "states q0 q1\n"
        "initial q0\n"
        "final q1\n"
        "trans q0 | a | Zb Zb -> q0 | push:a stay | +1\n"
        "trans q0 | # | a Zb -> q1 | S push:c | 0\n";
    MachineSpec m = parse_machine(text);
    CHECK(m.name == "sep");
    CHECK(m.heads == 1);
    REQUIRE(m.stores.size() == 2);
    CHECK(m.stores[0].kind == StoreKind::CheckingStack);
    CHECK(m.stores[1].kind == StoreKind::RbCounter);
    CHECK(m.stores[1].reversal_bound == 2);
    CHECK(m.stores[1].alphabet == std::vector<SymbolId>{m.syms.id("c")});  // implicit
    REQUIRE(m.transitions.size() == 2);
    CHECK(m.transitions[1].reads[0] == m.syms.id("#"));
    CHECK(m.transitions[1].instructions[0] == snoop_ins());
    CHECK(validate_machine(m).empty());
}

TEST_CASE("synthetic t<digits> symbols parse and serialize") {
    std::string text =
        "machine labels\n"
        "mode oneway\n"
        "heads 1\n"
        "deterministic false\n"
        "input t0 t12\n"
        "states q\n"
        "initial q\n"
        "final q\n"
        "trans q | t12 |  -> q |  | +1\n";
    MachineSpec m = parse_machine(text);
    CHECK(m.input_alphabet.size() == 2);
    CHECK(m.syms.name(m.transitions[0].reads[0]) == "t12");
    CHECK(parse_machine(serialize_machine(m)) == m);
}

TEST_CASE("parse errors carry line numbers and causes") {
    auto expect_error = [](const std::string& text, const std::string& needle) {
        try {
            parse_machine(text);
            FAIL("expected a parse error mentioning: " << needle);
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    std::string base =
        "machine m\nmode oneway\nheads 1\ndeterministic true\ninput a\n"
        "states q\ninitial q\nfinal q\n";
    expect_error("bogus directive\n", "unknown directive");
    expect_error(base + "trans q | a |  -> q |  | +2\n", "move");
    expect_error(base + "trans q | b |  -> q |  | +1\n", "not in alphabet");
    expect_error(base + "trans q | a |  -> zz |  | +1\n", "unknown state");
    expect_error(base + "trans q | a | Zb -> q | stay | +1\n", "one symbol per store");
    expect_error(base + "machine again\n", "duplicate 'machine'");
    expect_error("mode oneway\nheads 1\ndeterministic true\ninput a\nstates q\ninitial q\nfinal q\n",
                 "missing 'machine'");
    expect_error(base + "trans q | a |  -> q |  | +1 +1\n", "one move per head");
    expect_error("machine m\nmode oneway\nheads 1\ndeterministic true\ninput Zb\n"
                     "states q\ninitial q\nfinal q\n",
                 "bad symbol");
    expect_error("machine m\nmode sideways\nheads 1\ndeterministic true\ninput a\n"
                     "states q\ninitial q\nfinal q\n",
                 "mode");
}

TEST_CASE("configuration keys separate distinct configurations") {
    MachineSpec m = make_anbn_ncm();
    Word w = word_of(m, "aabb");
    Configuration c = initial_configuration(m, w);
    std::string k0 = c.key();
    auto s = step(m, c);
    REQUIRE(!s.empty());
    CHECK(s[0].second.key() != k0);
    Configuration c2 = c;
    CHECK(c2.key() == k0);
    c2.phases[0].reversals = 1;
    CHECK(c2.key() != k0);
}
