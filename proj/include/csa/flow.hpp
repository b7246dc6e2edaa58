/* flow.hpp -- nonnegative-integer feasibility for small linear systems,
 * with an optional path-connectivity side condition over a directed
 * multigraph whose edge multiplicities are the variables.
 *
 * The solver is a depth-first search with interval propagation.  Every
 * variable ranges over [0, cap] where cap comes from the system; a system
 * whose cap is at least a sound small-solution bound (cap_is_exact) gets an
 * unconditional Infeasible on exhaustion, otherwise Infeasible means "no
 * solution with multiplicities up to the recorded cap".  The search ladder
 * tries small caps first so minimal solutions surface early.  Node budgets
 * turn overruns into a Resource status, never into a wrong answer.
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace csa {

struct LinearRow {
    enum Kind { Eq, Ge };
    std::vector<std::pair<size_t, int64_t>> terms;  // (variable, coefficient)
    Kind kind = Eq;
    int64_t rhs = 0;
    std::string note;
};

/// Edge of the optional connectivity graph; the variable is the multiplicity.
struct FlowEdge {
    size_t var = 0;
    uint32_t tail = 0;
    uint32_t head = 0;
};

struct FlowSystem {
    size_t num_vars = 0;
    std::vector<LinearRow> rows;
    uint64_t var_cap = 1;
    bool cap_is_exact = false;

    // When present, a feasible assignment must additionally have all
    // positive-multiplicity edges weakly connected to the source vertex.
    bool has_graph = false;
    uint32_t num_vertices = 0;
    uint32_t source = 0;
    std::vector<FlowEdge> edges;

    std::vector<std::string> var_notes;     // optional, for dumps
    std::vector<std::string> vertex_names;  // optional, for dumps
};

/// Coarse small-solution ceiling for A x = b over nonnegative integers,
/// from system dimensions and magnitudes, saturated at 2^40.
inline uint64_t small_solution_bound(size_t num_vars, size_t num_rows, uint64_t max_coeff,
                                     uint64_t max_rhs) {
    const uint64_t ceiling = uint64_t(1) << 40;
    uint64_t base = num_rows * std::max<uint64_t>(max_coeff, 1) + max_rhs + 1;
    if (base < 2) base = 2;
    uint64_t out = num_vars + num_rows + 1;
    for (size_t i = 0; i < 2 * num_rows + 1; ++i) {
        if (out > ceiling / base) return ceiling;
        out *= base;
    }
    return std::min(out, ceiling);
}

enum class FlowStatus { Feasible, Infeasible, Resource };

struct FlowSolution {
    FlowStatus status = FlowStatus::Infeasible;
    std::vector<uint64_t> assignment;
    uint64_t nodes = 0;
};

namespace detail {

struct FlowSearch {
    const FlowSystem& fs;
    uint64_t budget;
    uint64_t nodes = 0;
    std::vector<int64_t> lo, hi;
    bool out_of_budget = false;

    explicit FlowSearch(const FlowSystem& f, uint64_t b) : fs(f), budget(b) {}

    static int64_t div_floor(int64_t a, int64_t b) {
        int64_t q = a / b, r = a % b;
        return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
    }
    static int64_t div_ceil(int64_t a, int64_t b) { return -div_floor(-a, b); }

    // Interval propagation to a fixpoint; false on a contradiction.
    bool propagate() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const LinearRow& row : fs.rows) {
                int64_t sum_lo = 0, sum_hi = 0;
                for (auto& [v, c] : row.terms) {
                    sum_lo += c > 0 ? c * lo[v] : c * hi[v];
                    sum_hi += c > 0 ? c * hi[v] : c * lo[v];
                }
                if (row.kind == LinearRow::Eq && (sum_lo > row.rhs || sum_hi < row.rhs))
                    return false;
                if (row.kind == LinearRow::Ge && sum_hi < row.rhs) return false;
                for (auto& [v, c] : row.terms) {
                    if (c == 0) continue;
                    int64_t rest_lo = sum_lo - (c > 0 ? c * lo[v] : c * hi[v]);
                    int64_t rest_hi = sum_hi - (c > 0 ? c * hi[v] : c * lo[v]);
                    int64_t nlo = lo[v], nhi = hi[v];
                    if (row.kind == LinearRow::Eq) {
                        // c*x in [rhs - rest_hi, rhs - rest_lo]
                        if (c > 0) {
                            nlo = std::max(nlo, div_ceil(row.rhs - rest_hi, c));
                            nhi = std::min(nhi, div_floor(row.rhs - rest_lo, c));
                        } else {
                            nlo = std::max(nlo, div_ceil(row.rhs - rest_lo, c));
                            nhi = std::min(nhi, div_floor(row.rhs - rest_hi, c));
                        }
                    } else {  // c*x >= rhs - rest_hi
                        if (c > 0)
                            nlo = std::max(nlo, div_ceil(row.rhs - rest_hi, c));
                        else
                            nhi = std::min(nhi, div_floor(row.rhs - rest_hi, c));
                    }
                    if (nlo > nhi) return false;
                    if (nlo != lo[v] || nhi != hi[v]) {
                        lo[v] = nlo;
                        hi[v] = nhi;
                        changed = true;
                    }
                }
            }
        }
        return true;
    }

    bool connected() const {
        if (!fs.has_graph) return true;
        std::vector<std::vector<uint32_t>> adj(fs.num_vertices);
        bool any = false;
        for (const FlowEdge& e : fs.edges) {
            if (lo[e.var] <= 0) continue;
            any = true;
            adj[e.tail].push_back(e.head);
            adj[e.head].push_back(e.tail);
        }
        if (!any) return true;
        std::vector<char> seen(fs.num_vertices, 0);
        std::vector<uint32_t> stack = {fs.source};
        seen[fs.source] = 1;
        while (!stack.empty()) {
            uint32_t v = stack.back();
            stack.pop_back();
            for (uint32_t u : adj[v])
                if (!seen[u]) {
                    seen[u] = 1;
                    stack.push_back(u);
                }
        }
        for (const FlowEdge& e : fs.edges)
            if (lo[e.var] > 0 && (!seen[e.tail] || !seen[e.head])) return false;
        return true;
    }

    bool rows_hold() const {
        for (const LinearRow& row : fs.rows) {
            int64_t sum = 0;
            for (auto& [v, c] : row.terms) sum += c * lo[v];
            if (row.kind == LinearRow::Eq && sum != row.rhs) return false;
            if (row.kind == LinearRow::Ge && sum < row.rhs) return false;
        }
        return true;
    }

    // Depth-first search; true when a full assignment passes every check.
    bool search() {
        if (!propagate()) return false;
        size_t branch = fs.num_vars;
        int64_t best_range = std::numeric_limits<int64_t>::max();
        for (size_t v = 0; v < fs.num_vars; ++v) {
            if (lo[v] == hi[v]) continue;
            int64_t range = hi[v] - lo[v];
            if (range < best_range) {
                best_range = range;
                branch = v;
            }
        }
        if (branch == fs.num_vars) return rows_hold() && connected();
        auto saved_lo = lo;
        auto saved_hi = hi;
        for (int64_t val = saved_lo[branch]; val <= saved_hi[branch]; ++val) {
            if (++nodes > budget) {
                out_of_budget = true;
                return false;
            }
            lo = saved_lo;
            hi = saved_hi;
            lo[branch] = hi[branch] = val;
            if (search()) return true;
        }
        return false;
    }
};

}  // namespace detail

/// Ladder of per-variable caps up to fs.var_cap; a Feasible result carries
/// the assignment, Infeasible means the full-cap search was exhausted.
inline FlowSolution solve_flow(const FlowSystem& fs, uint64_t node_budget = 2000000) {
    FlowSolution out;
    if (fs.num_vars == 0) {
        bool ok = true;
        for (const LinearRow& row : fs.rows) {
            if (row.kind == LinearRow::Eq && row.rhs != 0) ok = false;
            if (row.kind == LinearRow::Ge && row.rhs > 0) ok = false;
        }
        out.status = ok ? FlowStatus::Feasible : FlowStatus::Infeasible;
        return out;
    }

    std::vector<char> in_rows(fs.num_vars, 0);
    for (const LinearRow& row : fs.rows)
        for (auto& [v, c] : row.terms)
            if (c != 0) in_rows[v] = 1;

    std::vector<uint64_t> ladder;
    for (uint64_t cap = 1; cap < fs.var_cap; cap *= 2) ladder.push_back(cap);
    ladder.push_back(fs.var_cap);

    uint64_t used = 0;
    for (uint64_t cap : ladder) {
        detail::FlowSearch s(fs, node_budget > used ? node_budget - used : 0);
        s.lo.assign(fs.num_vars, 0);
        s.hi.assign(fs.num_vars, static_cast<int64_t>(cap));
        // variables outside every row cannot affect feasibility: a walk never
        // needs a cycle that touches no constraint, so pin them to zero
        for (size_t v = 0; v < fs.num_vars; ++v)
            if (!in_rows[v]) s.hi[v] = 0;
        bool found = s.search();
        used += s.nodes;
        out.nodes = used;
        if (found) {
            out.status = FlowStatus::Feasible;
            out.assignment.assign(fs.num_vars, 0);
            for (size_t v = 0; v < fs.num_vars; ++v)
                out.assignment[v] = static_cast<uint64_t>(s.lo[v]);
            return out;
        }
        if (s.out_of_budget) {
            out.status = FlowStatus::Resource;
            return out;
        }
    }
    out.status = FlowStatus::Infeasible;
    return out;
}

inline std::string dump_flow_system(const FlowSystem& fs) {
    std::ostringstream o;
    o << "vars " << fs.num_vars << " cap " << fs.var_cap
      << (fs.cap_is_exact ? " (covers small-solution bound)" : " (family cap)") << "\n";
    auto vname = [&fs](size_t v) {
        std::string n = "x" + std::to_string(v);
        if (v < fs.var_notes.size() && !fs.var_notes[v].empty()) n += "[" + fs.var_notes[v] + "]";
        return n;
    };
    for (const LinearRow& row : fs.rows) {
        bool first = true;
        for (auto& [v, c] : row.terms) {
            if (c == 0) continue;
            if (c > 0)
                o << (first ? "" : " + ") << (c == 1 ? "" : std::to_string(c) + "*") << vname(v);
            else
                o << (first ? "-" : " - ") << (c == -1 ? "" : std::to_string(-c) + "*")
                  << vname(v);
            first = false;
        }
        if (first) o << "0";
        o << (row.kind == LinearRow::Eq ? " = " : " >= ") << row.rhs;
        if (!row.note.empty()) o << "   (" << row.note << ")";
        o << "\n";
    }
    if (fs.has_graph) {
        auto vert = [&fs](uint32_t v) {
            return v < fs.vertex_names.size() ? fs.vertex_names[v] : std::to_string(v);
        };
        o << "connect: positive-multiplicity edges must be weakly connected to "
          << vert(fs.source) << "\n";
        for (const FlowEdge& e : fs.edges)
            o << "edge " << vname(e.var) << ": " << vert(e.tail) << " -> " << vert(e.head)
              << "\n";
    }
    return o.str();
}

}  // namespace csa
