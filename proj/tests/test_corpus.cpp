#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "csa/corpus.hpp"
#include "csa/decide.hpp"
#include "csa/format.hpp"
#include "csa/ncm.hpp"
#include "csa/simulate.hpp"
#include "csa/transform.hpp"
#include "helpers.hpp"

using namespace csa;
using csa::testing::word_of;

namespace {

std::vector<std::string> words_up_to(const std::string& letters, size_t max_len) {
    std::vector<std::string> out{""};
    size_t begin = 0;
    for (size_t len = 1; len <= max_len; ++len) {
        size_t end = out.size();
        for (size_t i = begin; i < end; ++i)
            for (char ch : letters) out.push_back(out[i] + ch);
        begin = end;
    }
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool det_accepts(const MachineSpec& m, const std::string& w, uint64_t budget = 100000) {
    RunResult r = run_deterministic(m, word_of(m, w), budget);
    REQUIRE(r.verdict != RunVerdict::Budget);
    REQUIRE(r.verdict != RunVerdict::Conflict);
    return r.verdict == RunVerdict::Accept;
}

}  // namespace

TEST_CASE("fixed corpus machines validate and carry their advertised signatures") {
    for (const MachineSpec& m : corpus_machines()) {
        INFO(m.name);
        CHECK(validate_machine(m).empty());
    }
    CHECK(is_csacm_signature(example1_machine()));
    CHECK(is_csacm_signature(example2_machine()));
    CHECK(is_csacm_signature(ncsacm_guess_machine()));
    CHECK_FALSE(ncsacm_guess_machine().deterministic);
    CHECK(is_ncm_signature(anbn_ncm_machine()));
    CHECK(is_ncm_signature(ncm_inc_then_zero_machine()));
    CHECK(is_twoway_counter_signature(anbn_2dcm1_machine()));
    CHECK(is_twoway_counter_signature(anbn_2dcm2_machine()));
    // Two stacks still fit the stack-plus-counters shape; single-stack
    // routing has to count stores, not just test the signature.
    CHECK(is_csacm_signature(anbncn_2stack_machine()));
    CHECK(anbncn_2stack_machine().stores.size() == 2);
    auto labels = classify_restrictions(example1_machine());
    CHECK(std::find(labels.begin(), labels.end(), "d-crossing-candidate") != labels.end());
}

TEST_CASE("the named corpus words behave as documented") {
    MachineSpec e1 = example1_machine();
    CHECK(det_accepts(e1, "a#"));
    CHECK(det_accepts(e1, "aa#aa#"));
    CHECK(det_accepts(e1, "aaa#aaa#aaa#"));
    CHECK_FALSE(det_accepts(e1, "aa#aa#aa#"));
    CHECK_FALSE(det_accepts(e1, ""));
    CHECK_FALSE(det_accepts(e1, "#"));
    CHECK_FALSE(det_accepts(e1, "a"));
    CHECK_FALSE(det_accepts(e1, "a#a#"));

    MachineSpec e2 = example2_machine();
    CHECK(det_accepts(e2, "abc"));
    CHECK(det_accepts(e2, "aaabbcccccc"));
    CHECK(det_accepts(e2, "aabcc"));
    CHECK_FALSE(det_accepts(e2, "aabbc"));
    CHECK_FALSE(det_accepts(e2, "abcc"));
    CHECK_FALSE(det_accepts(e2, "abbc"));
    CHECK_FALSE(det_accepts(e2, ""));
    CHECK_FALSE(det_accepts(e2, "ab"));

    SECTION("the full membership decision agrees on the same words") {
        CHECK(decide_membership_dcsacm(e1, word_of(e1, "a#")));
        CHECK(decide_membership_dcsacm(e1, word_of(e1, "aaa#aaa#aaa#")));
        CHECK_FALSE(decide_membership_dcsacm(e1, word_of(e1, "aa#aa#aa#")));
        CHECK(decide_membership_dcsacm(e2, word_of(e2, "abc")));
        CHECK(decide_membership_dcsacm(e2, word_of(e2, "aaabbcccccc")));
        CHECK_FALSE(decide_membership_dcsacm(e2, word_of(e2, "aabbc")));
    }
}

TEST_CASE("oracles follow the defining arithmetic") {
    CHECK(oracle_membership("example1", "a#"));
    CHECK(oracle_membership("example1", "aa#aa#"));
    CHECK(oracle_membership("example1", "aaa#aaa#aaa#"));
    CHECK_FALSE(oracle_membership("example1", "aa#aa#aa#"));
    CHECK_FALSE(oracle_membership("example1", ""));
    CHECK_FALSE(oracle_membership("example1", "a"));
    CHECK_FALSE(oracle_membership("example1", "#"));
    CHECK_FALSE(oracle_membership("example1", "a#a#"));
    CHECK_FALSE(oracle_membership("example1", "a#b"));

    CHECK(oracle_membership("example2", "abc"));
    CHECK(oracle_membership("example2", "aaabbcccccc"));
    CHECK(oracle_membership("example2", "aabcc"));
    CHECK_FALSE(oracle_membership("example2", "aabbc"));
    CHECK_FALSE(oracle_membership("example2", "ac"));
    CHECK_FALSE(oracle_membership("example2", "bc"));
    CHECK_FALSE(oracle_membership("example2", "abca"));

    CHECK(oracle_membership("anbn", "ab"));
    CHECK(oracle_membership("anbn", "aabb"));
    CHECK_FALSE(oracle_membership("anbn", ""));
    CHECK_FALSE(oracle_membership("anbn", "ba"));
    CHECK_FALSE(oracle_membership("anbn", "aab"));

    CHECK(oracle_membership("anbncn", "abc"));
    CHECK(oracle_membership("anbncn", "aabbcc"));
    CHECK_FALSE(oracle_membership("anbncn", ""));
    CHECK_FALSE(oracle_membership("anbncn", "aabbc"));
    CHECK_FALSE(oracle_membership("anbncn", "acb"));

    CHECK_THROWS_AS(oracle_membership("nosuch", "a"), std::invalid_argument);
}

TEST_CASE("machines agree with their oracles on short exhaustive sweeps") {
    SECTION("segment language") {
        MachineSpec m = example1_machine();
        for (const std::string& w : words_up_to("a#", 8)) {
            INFO(w);
            CHECK(det_accepts(m, w) == oracle_membership("example1", w));
        }
    }
    SECTION("product language") {
        MachineSpec m = example2_machine();
        for (const std::string& w : words_up_to("abc", 7)) {
            INFO(w);
            CHECK(det_accepts(m, w) == oracle_membership("example2", w));
        }
    }
    SECTION("equal blocks, three machines") {
        MachineSpec ncm = anbn_ncm_machine();
        MachineSpec two1 = anbn_2dcm1_machine();
        MachineSpec two2 = anbn_2dcm2_machine();
        for (const std::string& w : words_up_to("ab", 6)) {
            INFO(w);
            bool want = oracle_membership("anbn", w);
            CHECK(det_accepts(ncm, w) == want);
            CHECK(det_accepts(two1, w) == want);
            CHECK(det_accepts(two2, w) == want);
        }
    }
    SECTION("equal triple blocks on two stacks") {
        MachineSpec m = anbncn_2stack_machine();
        for (const std::string& w : words_up_to("abc", 8)) {
            INFO(w);
            bool want = oracle_membership("anbncn", w);
            CHECK(det_accepts(m, w) == want);
            CHECK(decide_membership_kstack(m, word_of(m, w)) == want);
        }
    }
}

TEST_CASE("committed corpus files match their builders byte for byte") {
    const std::string dir = std::string(CSA_SOURCE_DIR) + "/machines/";
    std::string index = slurp(dir + "index.txt");
    for (const MachineSpec& m : corpus_machines()) {
        INFO(m.name);
        const std::string file = dir + m.name + ".machine";
        std::string committed = slurp(file);
        CHECK(committed == serialize_machine(m));
        // And the text round-trips through the parser unchanged.
        CHECK(serialize_machine(parse_machine(committed)) == committed);
        CHECK(index.find(m.name + ".machine") != std::string::npos);
    }
}

TEST_CASE("seeded generation is deterministic and respects profiles") {
    SECTION("same seed, same bytes") {
        for (const char* sigtext : {"DCSACM(1)", "NCM(2,1)", "NCSACM(1,2)"}) {
            MachineProfile p;
            p.signature = sigtext;
            for (uint64_t seed = 0; seed < 10; ++seed) {
                INFO(sigtext << " seed " << seed);
                CHECK(serialize_machine(random_machine(seed, p)) ==
                      serialize_machine(random_machine(seed, p)));
            }
        }
    }
    SECTION("deterministic stack profile") {
        MachineProfile p;
        p.signature = "DCSACM(1)";
        p.max_states = 3;
        std::set<std::string> bodies;
        for (uint64_t seed = 0; seed < 100; ++seed) {
            MachineSpec m = random_machine(seed, p);
            INFO("seed " << seed);
            CHECK(validate_machine(m).empty());
            CHECK(m.deterministic);
            CHECK(is_csacm_signature(m));
            CHECK(m.states.size() >= 2);
            CHECK(m.states.size() <= 3);
            CHECK(m.transitions.size() <= p.max_transitions);
            auto labels = classify_restrictions(m);
            CHECK(std::find(labels.begin(), labels.end(), "d-crossing-candidate") !=
                  labels.end());
            std::string text = serialize_machine(m);
            bodies.insert(text.substr(text.find('\n')));  // drop the name line
        }
        CHECK(bodies.size() >= 20);
    }
    SECTION("counter-only profile") {
        MachineProfile p;
        p.signature = "NCM(2,1)";
        p.max_states = 4;
        for (uint64_t seed = 0; seed < 100; ++seed) {
            MachineSpec m = random_machine(seed, p);
            INFO("seed " << seed);
            CHECK(validate_machine(m).empty());
            CHECK(is_ncm_signature(m));
            REQUIRE(m.stores.size() == 2);
            CHECK(m.stores[0].reversal_bound == 1);
            CHECK(m.states.size() <= 4);
        }
    }
    SECTION("nondeterministic profile with a looser reversal bound") {
        MachineProfile p;
        p.signature = "NCSACM(1,2)";
        for (uint64_t seed = 0; seed < 50; ++seed) {
            MachineSpec m = random_machine(seed, p);
            INFO("seed " << seed);
            CHECK(validate_machine(m).empty());
            CHECK_FALSE(m.deterministic);
            CHECK(is_csacm_signature(m));
            REQUIRE(m.stores.size() == 2);
            CHECK(m.stores[1].reversal_bound == 2);
        }
    }
    SECTION("malformed signatures are rejected") {
        for (const char* bad : {"XCM(1)", "NCM", "NCM(x)", "NCM(1,0)", "DCSACM(1"}) {
            MachineProfile p;
            p.signature = bad;
            CHECK_THROWS_AS(random_machine(0, p), std::invalid_argument);
        }
    }
}

TEST_CASE("small seeded counter machines go straight through the emptiness decider") {
    MachineProfile p;
    p.signature = "NCM(2,1)";
    p.max_states = 3;
    size_t empty_seen = 0, nonempty_seen = 0;
    for (uint64_t seed = 0; seed < 30; ++seed) {
        MachineSpec m = random_machine(seed, p);
        INFO("seed " << seed);
        EmptinessVerdict v = ncm_emptiness(m);
        CHECK(v.exact);
        if (v.empty) {
            ++empty_seen;
            NonemptyResult probe = nonempty_bounded(m, 5, 100000);
            if (probe.complete) CHECK_FALSE(probe.witness.has_value());
        } else {
            ++nonempty_seen;
            CHECK(accepts_bounded(m, v.witness, 200000).accepted);
        }
    }
    CHECK(empty_seen >= 1);
    CHECK(nonempty_seen >= 1);
}

TEST_CASE("crossing counts on the segment machine follow the alternating walk") {
    MachineSpec m = example1_machine();
    auto stack_trace = [&](const std::string& w) {
        RunResult r = run_deterministic(m, word_of(m, w), 100000);
        REQUIRE(r.verdict == RunVerdict::Accept);
        return store_traces(m, r.trace)[0];
    };
    // One comparison walk plus the end-marker drain cross each boundary
    // below the final head position; the top boundary is crossed once.
    std::vector<Instruction> two = stack_trace("aa#aa#");
    CHECK(crossing_count(two, 0) == 2);
    CHECK(crossing_count(two, 1) == 2);
    CHECK(crossing_count(two, 2) == 1);
    CHECK(max_crossing_count(two) == 2);

    std::vector<Instruction> three = stack_trace("aaa#aaa#aaa#");
    CHECK(crossing_count(three, 0) == 3);
    CHECK(crossing_count(three, 1) == 3);
    CHECK(crossing_count(three, 2) == 3);
    CHECK(crossing_count(three, 3) == 2);
    CHECK(max_crossing_count(three) == 3);

    std::vector<Instruction> one = stack_trace("a#");
    CHECK(crossing_count(one, 0) == 1);
    CHECK(crossing_count(one, 1) == 0);
    CHECK(max_crossing_count(one) == 1);
}

TEST_CASE("the guessed-copy rewrite of the stored two-counter machine accepts lambda") {
    MachineSpec out = twodcm2_to_lambda_ncsacm(anbn_2dcm2_machine());
    CHECK(validate_machine(out).empty());
    CHECK(accepts_bounded(out, {}, 500000).accepted);
}
