/* tests for the integer flow/feasibility solver */

#include <catch2/catch_amalgamated.hpp>

#include "csa/flow.hpp"

using namespace csa;

namespace {

LinearRow row(std::vector<std::pair<size_t, int64_t>> terms, LinearRow::Kind kind,
              int64_t rhs, std::string note = "") {
    LinearRow r;
    r.terms = std::move(terms);
    r.kind = kind;
    r.rhs = rhs;
    r.note = std::move(note);
    return r;
}

}  // namespace

TEST_CASE("a single forced variable is found") {
    FlowSystem fs;
    fs.num_vars = 1;
    fs.var_cap = 4;
    fs.rows.push_back(row({{0, 1}}, LinearRow::Eq, 1));
    FlowSolution sol = solve_flow(fs);
    REQUIRE(sol.status == FlowStatus::Feasible);
    REQUIRE(sol.assignment == std::vector<uint64_t>{1});
}

TEST_CASE("an odd total split into two equal halves is rejected exactly") {
    // x = y together with x + y = 1 has no integer solution
    FlowSystem fs;
    fs.num_vars = 2;
    fs.rows.push_back(row({{0, 1}, {1, -1}}, LinearRow::Eq, 0));
    fs.rows.push_back(row({{0, 1}, {1, 1}}, LinearRow::Eq, 1));
    fs.var_cap = small_solution_bound(2, 2, 1, 1);
    fs.cap_is_exact = true;
    FlowSolution sol = solve_flow(fs);
    REQUIRE(sol.status == FlowStatus::Infeasible);
}

TEST_CASE("the cap ladder returns a small solution first") {
    FlowSystem fs;
    fs.num_vars = 2;
    fs.var_cap = 8;
    fs.rows.push_back(row({{0, 1}, {1, 2}}, LinearRow::Eq, 4));
    FlowSolution sol = solve_flow(fs);
    REQUIRE(sol.status == FlowStatus::Feasible);
    // the first rung that fits caps both variables at 2, forcing (2, 1)
    REQUIRE(sol.assignment == std::vector<uint64_t>{2, 1});
}

TEST_CASE("lower-bound rows are honored") {
    FlowSystem fs;
    fs.num_vars = 1;
    fs.var_cap = 8;
    fs.rows.push_back(row({{0, 1}}, LinearRow::Ge, 3));
    FlowSolution sol = solve_flow(fs);
    REQUIRE(sol.status == FlowStatus::Feasible);
    REQUIRE(sol.assignment == std::vector<uint64_t>{3});
}

TEST_CASE("mixed-sign coefficients satisfy their row") {
    FlowSystem fs;
    fs.num_vars = 2;
    fs.var_cap = 8;
    fs.rows.push_back(row({{0, 2}, {1, -3}}, LinearRow::Eq, 5));
    FlowSolution sol = solve_flow(fs);
    REQUIRE(sol.status == FlowStatus::Feasible);
    REQUIRE(2 * int64_t(sol.assignment[0]) - 3 * int64_t(sol.assignment[1]) == 5);
}

TEST_CASE("a forced edge disconnected from the source kills feasibility") {
    // vertices 0 (source) -> 1, plus a 2 <-> 3 cycle nothing connects to
    FlowSystem fs;
    fs.num_vars = 3;
    fs.var_cap = 4;
    fs.rows.push_back(row({{0, 1}}, LinearRow::Eq, 1));
    fs.rows.push_back(row({{1, 1}, {2, -1}}, LinearRow::Eq, 0));
    fs.rows.push_back(row({{1, 1}}, LinearRow::Ge, 1));
    fs.has_graph = true;
    fs.num_vertices = 4;
    fs.source = 0;
    fs.edges = {{0, 0, 1}, {1, 2, 3}, {2, 3, 2}};

    FlowSolution sol = solve_flow(fs);
    REQUIRE(sol.status == FlowStatus::Infeasible);

    FlowSystem relaxed = fs;
    relaxed.has_graph = false;
    FlowSolution sol2 = solve_flow(relaxed);
    REQUIRE(sol2.status == FlowStatus::Feasible);
    REQUIRE(sol2.assignment[1] == sol2.assignment[2]);
    REQUIRE(sol2.assignment[1] >= 1);
}

TEST_CASE("a tiny node budget reports a resource overrun") {
    // x + y = 20 and x - y = 3 stall interval propagation with ten candidate
    // values for x, more than the node budget allows
    FlowSystem fs;
    fs.num_vars = 2;
    fs.var_cap = 32;
    fs.rows.push_back(row({{0, 1}, {1, 1}}, LinearRow::Eq, 20));
    fs.rows.push_back(row({{0, 1}, {1, -1}}, LinearRow::Eq, 3));
    FlowSolution sol = solve_flow(fs, 5);
    REQUIRE(sol.status == FlowStatus::Resource);
    REQUIRE(sol.nodes > 5);
}

TEST_CASE("systems without variables are judged by their constants") {
    FlowSystem fs;
    REQUIRE(solve_flow(fs).status == FlowStatus::Feasible);
    fs.rows.push_back(row({}, LinearRow::Ge, 0));
    REQUIRE(solve_flow(fs).status == FlowStatus::Feasible);
    fs.rows.push_back(row({}, LinearRow::Eq, 1));
    REQUIRE(solve_flow(fs).status == FlowStatus::Infeasible);
}

TEST_CASE("variables outside every row are pinned to zero") {
    FlowSystem fs;
    fs.num_vars = 2;
    fs.var_cap = 8;
    fs.rows.push_back(row({{0, 1}}, LinearRow::Eq, 1));
    FlowSolution sol = solve_flow(fs);
    REQUIRE(sol.status == FlowStatus::Feasible);
    REQUIRE(sol.assignment == std::vector<uint64_t>{1, 0});
}

TEST_CASE("the small-solution bound saturates instead of overflowing") {
    REQUIRE(small_solution_bound(2, 2, 1, 1) >= 2);
    REQUIRE(small_solution_bound(10, 10, 1000000, 1000000) == uint64_t(1) << 40);
}

TEST_CASE("dumps list one constraint per line with notes and edges") {
    FlowSystem fs;
    fs.num_vars = 2;
    fs.var_cap = 4;
    fs.rows.push_back(row({{0, 1}, {1, -2}}, LinearRow::Eq, 1, "demo"));
    fs.has_graph = true;
    fs.num_vertices = 2;
    fs.source = 0;
    fs.edges = {{0, 0, 1}};
    fs.var_notes = {"first", ""};
    fs.vertex_names = {"(start)", "(stop)"};

    std::string d = dump_flow_system(fs);
    REQUIRE(d.find("x0[first] - 2*x1 = 1   (demo)") != std::string::npos);
    REQUIRE(d.find("connect:") != std::string::npos);
    REQUIRE(d.find("edge x0[first]: (start) -> (stop)") != std::string::npos);
}
