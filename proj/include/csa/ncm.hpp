/* ncm.hpp -- decision procedures for one-way machines over reversal-bounded
 * counters: reversal splitting to 1-reversal form, a region graph whose
 * paths are exactly the abstract accepting runs, Parikh-style flow systems,
 * emptiness with verified witnesses, and membership via a word product.
 *
 * Region discipline.  After splitting, every counter is 1-reversal: its value
 * is zero for a while (Z0), increases while positive (PU), decreases while
 * positive (PD), and may return to zero for good (ZF).  Vertices track the
 * machine state, the per-counter region, and the input letter currently
 * committed under the head (reads without moving must agree on the letter).
 * A path through this graph is realizable by a concrete run if and only if
 * per-counter totals work out: increments equal decrements when the path
 * ends with the counter in Z0/ZF (the edge into ZF claims the value hits
 * exactly zero, and later Zb reads depend on it), and increments are at
 * least decrements when it ends in PD.  Totals are decided as a flow
 * feasibility problem; connectivity of the chosen multiplicities makes the
 * flow an Euler path, from which the witness word is read off and then
 * replayed on the original machine as an unconditional soundness check.
 *
 * Empty verdicts are exact when the graph analysis alone rules out every
 * accepting path; otherwise they additionally rely on the flow search cap
 * recorded in the system (solutions with every multiplicity at most the cap
 * are excluded exhaustively), which the verdict reports via `exact`/`note`.
 */

#pragma once

#include <deque>
#include <map>
#include <stdexcept>

#include "csa/flow.hpp"
#include "csa/simulate.hpp"

namespace csa {

class RbcResourceError : public std::runtime_error {
  public:
    explicit RbcResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

/* ------------------------------------------------------------------ */
/* Reversal splitting: every counter becomes 1-reversal.               */

/// Replace each counter of reversal bound l by ceil((l+1)/2) one-reversal
/// counters.  States are annotated with each counter's alternation block
/// (odd blocks nondecreasing, even blocks nonincreasing); block 2j-1 and 2j
/// live on split counter j.  Entering block 2j+1 with a positive value
/// transfers it from split j to split j+1 through a drain loop that holds
/// the input head still.  Transitions that would exceed a counter's
/// alternation budget are dropped.
///
/// Checking stacks pass through untouched, except that drain loops must
/// carry them: a still-writing stack holds position with stay, a reading
/// one with S, so states additionally remember which stacks have started
/// reading.
inline MachineSpec to_phase_automaton(const MachineSpec& m) {
    if (!m.oneway || m.heads != 1)
        throw std::invalid_argument("to_phase_automaton: machine must be one-way with one head");
    for (const auto& s : m.stores)
        if (s.kind != StoreKind::RbCounter && s.kind != StoreKind::CheckingStack)
            throw std::invalid_argument(
                "to_phase_automaton: stores must be reversal-bounded counters or checking stacks");
    const size_t k = m.stores.size();
    std::vector<size_t> offset(k), nsplit(k);
    std::vector<bool> is_ctr(k);
    size_t total = 0;
    for (size_t i = 0; i < k; ++i) {
        is_ctr[i] = m.stores[i].kind == StoreKind::RbCounter;
        nsplit[i] = is_ctr[i] ? (m.stores[i].reversal_bound + 2) / 2 : 1;
        offset[i] = total;
        total += nsplit[i];
    }

    MachineSpec out;
    out.name = m.name + "~phase";
    out.oneway = true;
    out.heads = 1;
    out.deterministic = m.deterministic;
    out.syms = m.syms;
    out.input_alphabet = m.input_alphabet;
    for (size_t i = 0; i < k; ++i) {
        if (!is_ctr[i]) {
            out.stores.push_back(m.stores[i]);
            continue;
        }
        for (size_t j = 0; j < nsplit[i]; ++j) {
            StoreTypeSpec st;
            st.kind = StoreKind::RbCounter;
            st.id = m.stores[i].id + "~" + std::to_string(j + 1);
            st.alphabet = m.stores[i].alphabet;
            st.reversal_bound = 1;
            out.stores.push_back(std::move(st));
        }
    }

    // active split counter for original counter i in block p (1-based block)
    auto active = [&](size_t i, uint8_t p) { return offset[i] + (p + 1) / 2 - 1; };
    auto csym = [&](size_t i) { return m.stores[i].alphabet[0]; };

    struct Key {
        StateId q;
        std::vector<uint8_t> blocks;
        uint32_t drain;
        uint32_t rbits;  // stacks that have started reading
        bool operator<(const Key& o) const {
            if (q != o.q) return q < o.q;
            if (blocks != o.blocks) return blocks < o.blocks;
            if (drain != o.drain) return drain < o.drain;
            return rbits < o.rbits;
        }
    };
    std::map<Key, StateId> ids;
    std::deque<Key> queue;
    auto intern = [&](const Key& key) -> StateId {
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        std::string name = m.states[key.q] + "~b";
        for (size_t i = 0; i < key.blocks.size(); ++i)
            name += (i ? "." : "") + std::to_string(key.blocks[i]);
        if (key.drain) {
            name += "~d";
            bool first = true;
            for (size_t i = 0; i < k; ++i)
                if (key.drain >> i & 1) {
                    name += (first ? "" : ".") + std::to_string(i);
                    first = false;
                }
        }
        if (key.rbits) {
            name += "~r";
            bool first = true;
            for (size_t i = 0; i < k; ++i)
                if (key.rbits >> i & 1) {
                    name += (first ? "" : ".") + std::to_string(i);
                    first = false;
                }
        }
        StateId id = out.add_state(name);
        ids.emplace(key, id);
        queue.push_back(key);
        return id;
    };

    Key start{m.initial, std::vector<uint8_t>(k, 1), 0, 0};
    out.initial = intern(start);
    auto by_state = transitions_by_state(m);

    while (!queue.empty()) {
        Key cur = queue.front();
        queue.pop_front();
        StateId cur_id = ids.at(cur);

        if (cur.drain == 0) {
            for (size_t ti : by_state[cur.q]) {
                const Transition& t = m.transitions[ti];
                std::vector<uint8_t> np = cur.blocks;
                uint32_t drain = 0;
                uint32_t rbits = cur.rbits;
                std::vector<SymbolId> reads(total, kBottom);
                std::vector<Instruction> ins(total, stay_ins());
                bool ok = true;
                for (size_t i = 0; i < k && ok; ++i) {
                    if (!is_ctr[i]) {
                        reads[offset[i]] = t.store_reads[i];
                        ins[offset[i]] = t.instructions[i];
                        switch (t.instructions[i].op) {
                            case Op::Push:
                            case Op::Stay:
                                // writing after reading began can never fire
                                if (cur.rbits >> i & 1) ok = false;
                                break;
                            case Op::Down:
                            case Op::Snoop:
                            case Op::Up:
                                rbits |= uint32_t(1) << i;
                                break;
                            default:
                                ok = false;  // pop is not a checking-stack instruction
                        }
                        continue;
                    }
                    const uint8_t p = cur.blocks[i];
                    const uint8_t last = static_cast<uint8_t>(m.stores[i].reversal_bound + 1);
                    const SymbolId sr = t.store_reads[i];
                    reads[active(i, p)] = sr;
                    switch (t.instructions[i].op) {
                        case Op::Stay:
                            break;
                        case Op::Push:
                            if (p % 2 == 1) {
                                ins[active(i, p)] = t.instructions[i];
                            } else if (p + 1 > last) {
                                ok = false;  // alternation budget exceeded
                            } else {
                                np[i] = p + 1;
                                ins[active(i, np[i])] = t.instructions[i];
                                if (sr != kBottom) drain |= uint32_t(1) << i;
                            }
                            break;
                        case Op::Pop:
                            if (sr == kBottom) {
                                ok = false;  // a pop on an empty counter never fires
                            } else if (p % 2 == 0) {
                                ins[active(i, p)] = pop_ins();
                            } else if (p + 1 > last) {
                                ok = false;
                            } else {
                                np[i] = p + 1;
                                ins[active(i, np[i])] = pop_ins();
                            }
                            break;
                        default:
                            ok = false;  // scan instructions are invalid on counters
                    }
                }
                if (!ok) continue;
                StateId to_id = intern({t.to, np, drain, rbits});
                out.transitions.push_back({cur_id, t.reads, reads, to_id, ins, t.moves});
            }
        } else {
            // transfer the lowest draining counter, one unit per step
            size_t di = 0;
            while (!(cur.drain >> di & 1)) ++di;
            const size_t oldv = offset[di] + (cur.blocks[di] - 1) / 2 - 1;
            const size_t newv = oldv + 1;

            // pinned reads for draining counters, enumerated slots for the
            // rest: a free counter is either empty or not, a stack may show
            // anything; stacks hold position (stay while writing, S after)
            std::vector<SymbolId> base(total, kBottom);
            std::vector<Instruction> hold(total, stay_ins());
            std::vector<size_t> slot_pos;
            std::vector<std::vector<SymbolId>> slot_opts;
            for (size_t j = 0; j < k; ++j) {
                if (!is_ctr[j]) {
                    std::vector<SymbolId> opts{kBottom};
                    opts.insert(opts.end(), m.stores[j].alphabet.begin(),
                                m.stores[j].alphabet.end());
                    opts.push_back(kTop);
                    slot_pos.push_back(offset[j]);
                    slot_opts.push_back(std::move(opts));
                    if (cur.rbits >> j & 1) hold[offset[j]] = snoop_ins();
                    continue;
                }
                if (j == di) continue;
                if (cur.drain >> j & 1) {
                    base[offset[j] + (cur.blocks[j] - 1) / 2 - 1] = csym(j);
                    base[offset[j] + (cur.blocks[j] - 1) / 2] = csym(j);
                } else {
                    slot_pos.push_back(active(j, cur.blocks[j]));
                    slot_opts.push_back({kBottom, csym(j)});
                }
            }
            base[newv] = csym(di);

            std::vector<SymbolId> letters = m.input_alphabet;
            letters.push_back(kRightMarker);
            std::vector<size_t> digits(slot_pos.size(), 0);
            for (SymbolId sigma : letters) {
                std::fill(digits.begin(), digits.end(), 0);
                for (;;) {
                    std::vector<SymbolId> reads = base;
                    for (size_t s = 0; s < slot_pos.size(); ++s)
                        reads[slot_pos[s]] = slot_opts[s][digits[s]];

                    std::vector<Instruction> loop_ins = hold;
                    loop_ins[oldv] = pop_ins();
                    loop_ins[newv] = push_ins(csym(di));
                    auto loop_reads = reads;
                    loop_reads[oldv] = csym(di);
                    out.transitions.push_back(
                        {cur_id, {sigma}, loop_reads, cur_id, loop_ins, {0}});

                    auto exit_reads = reads;
                    exit_reads[oldv] = kBottom;
                    StateId exit_id = intern(
                        {cur.q, cur.blocks, cur.drain & ~(uint32_t(1) << di), cur.rbits});
                    out.transitions.push_back(
                        {cur_id, {sigma}, exit_reads, exit_id, hold, {0}});

                    size_t s = 0;
                    while (s < digits.size() && ++digits[s] == slot_opts[s].size())
                        digits[s++] = 0;
                    if (s == digits.size()) break;
                }
            }
        }
    }

    for (const auto& [key, id] : ids)
        if (m.is_final(key.q)) out.finals.push_back(id);
    std::sort(out.finals.begin(), out.finals.end());
    return out;
}

/* ------------------------------------------------------------------ */
/* Region graph over a 1-reversal machine.                             */

enum RegionTag : uint8_t { kRegZ0 = 0, kRegPU = 1, kRegPD = 2, kRegZF = 3 };

constexpr SymbolId kNoCommit = 0xFFFFFFFFu;
constexpr SymbolId kNoLetter = 0xFFFFFFFFu;

struct RegionVertex {
    StateId state = 0;
    SymbolId commit = kNoCommit;
    std::vector<uint8_t> regions;
    std::string name;
};

struct RegionEdge {
    uint32_t tail = 0;
    uint32_t head = 0;
    size_t trans = 0;            // transition index in the machine
    SymbolId consumed = kNoLetter;  // input letter consumed by this edge
    std::vector<int8_t> delta;      // per-counter value change
};

struct RegionGraph {
    std::vector<RegionVertex> vertices;
    uint32_t source = 0;
    std::vector<RegionEdge> edges;
    size_t num_counters = 0;
};

inline RegionGraph build_region_graph(const MachineSpec& m) {
    if (!is_ncm_signature(m))
        throw std::invalid_argument("build_region_graph: not a one-way counter machine");
    for (const auto& st : m.stores)
        if (st.reversal_bound != 1)
            throw std::invalid_argument("build_region_graph: counters must be 1-reversal");
    const size_t k = m.stores.size();
    RegionGraph g;
    g.num_counters = k;

    std::map<std::tuple<StateId, SymbolId, std::vector<uint8_t>>, uint32_t> ids;
    std::deque<uint32_t> queue;
    static const char* kRegionChar = "0UDF";
    auto intern = [&](StateId q, SymbolId commit, const std::vector<uint8_t>& regs) {
        auto key = std::make_tuple(q, commit, regs);
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        RegionVertex v;
        v.state = q;
        v.commit = commit;
        v.regions = regs;
        std::string cn = commit == kNoCommit      ? "-"
                         : commit == kRightMarker ? ">"
                                                  : m.syms.name(commit);
        v.name = "(" + m.states[q] + "|" + cn + "|";
        for (uint8_t r : regs) v.name += kRegionChar[r];
        v.name += ")";
        uint32_t id = static_cast<uint32_t>(g.vertices.size());
        g.vertices.push_back(std::move(v));
        ids.emplace(std::move(key), id);
        queue.push_back(id);
        return id;
    };

    g.source = intern(m.initial, kNoCommit, std::vector<uint8_t>(k, kRegZ0));
    auto by_state = transitions_by_state(m);

    while (!queue.empty()) {
        uint32_t vid = queue.front();
        queue.pop_front();
        const StateId q = g.vertices[vid].state;
        const SymbolId commit = g.vertices[vid].commit;
        const std::vector<uint8_t> regs = g.vertices[vid].regions;

        for (size_t ti : by_state[q]) {
            const Transition& t = m.transitions[ti];
            const SymbolId sigma = t.reads[0];
            const int8_t mv = t.moves[0];
            SymbolId ncommit, consumed = kNoLetter;
            if (sigma == kLeftMarker) continue;  // a one-way head never returns to 0
            if (sigma == kRightMarker) {
                if (mv != 0) continue;
                if (commit != kNoCommit && commit != kRightMarker) continue;
                ncommit = kRightMarker;
            } else {
                if (commit != kNoCommit && commit != sigma) continue;
                ncommit = mv == 1 ? kNoCommit : sigma;
                if (mv == 1) consumed = sigma;
            }

            std::vector<std::vector<std::pair<uint8_t, int8_t>>> opts(k);
            bool ok = true;
            for (size_t i = 0; i < k && ok; ++i) {
                const uint8_t r = regs[i];
                const SymbolId expected =
                    (r == kRegZ0 || r == kRegZF) ? kBottom : m.stores[i].alphabet[0];
                if (t.store_reads[i] != expected) {
                    ok = false;
                    break;
                }
                switch (t.instructions[i].op) {
                    case Op::Push:
                        if (r == kRegZ0 || r == kRegPU) opts[i] = {{kRegPU, +1}};
                        break;
                    case Op::Pop:
                        if (r == kRegPU || r == kRegPD)
                            opts[i] = {{kRegPD, -1}, {kRegZF, -1}};
                        break;
                    case Op::Stay:
                        opts[i] = {{r, 0}};
                        break;
                    default:
                        break;
                }
                if (opts[i].empty()) ok = false;
            }
            if (!ok) continue;

            std::vector<size_t> pick(k, 0);
            for (;;) {
                std::vector<uint8_t> nregs(k);
                std::vector<int8_t> delta(k);
                for (size_t i = 0; i < k; ++i) {
                    nregs[i] = opts[i][pick[i]].first;
                    delta[i] = opts[i][pick[i]].second;
                }
                uint32_t hid = intern(t.to, ncommit, nregs);
                g.edges.push_back({vid, hid, ti, consumed, std::move(delta)});
                size_t i = k;
                while (i > 0) {
                    if (++pick[i - 1] < opts[i - 1].size()) break;
                    pick[i - 1] = 0;
                    --i;
                }
                if (i == 0) break;
            }
        }
    }
    return g;
}

/// Row pattern of a final vertex: per counter, 'E' demands increments equal
/// decrements (ends zero), 'G' demands increments >= decrements, 'N' none.
inline std::string sink_pattern(const RegionVertex& v) {
    std::string p;
    for (uint8_t r : v.regions)
        p += (r == kRegZ0 || r == kRegZF) ? 'E' : (r == kRegPD ? 'G' : 'N');
    return p;
}

/* ------------------------------------------------------------------ */
/* Flow systems over the region graph.                                 */

constexpr uint64_t kFlowFamilyCap = 32;

struct BuiltFlowSystem {
    FlowSystem fs;
    std::vector<size_t> edge_of_var;     // real variables -> region edge index
    std::vector<uint32_t> sink_of_virtual;  // virtual variables -> sink vertex
    size_t num_real = 0;
};

inline BuiltFlowSystem make_region_flow_system(const MachineSpec& m, const RegionGraph& g,
                                               const std::vector<char>& alive,
                                               const std::vector<uint32_t>& sinks,
                                               const std::string& pattern) {
    BuiltFlowSystem out;
    FlowSystem& fs = out.fs;
    const uint32_t T = static_cast<uint32_t>(g.vertices.size());

    for (size_t e = 0; e < g.edges.size(); ++e) {
        if (!alive[e]) continue;
        size_t var = fs.num_vars++;
        out.edge_of_var.push_back(e);
        fs.edges.push_back({var, g.edges[e].tail, g.edges[e].head});
        fs.var_notes.push_back("t" + std::to_string(g.edges[e].trans) + " " +
                               g.vertices[g.edges[e].tail].name + "->" +
                               g.vertices[g.edges[e].head].name);
    }
    out.num_real = fs.num_vars;
    for (uint32_t s : sinks) {
        size_t var = fs.num_vars++;
        out.sink_of_virtual.push_back(s);
        fs.edges.push_back({var, s, T});
        fs.var_notes.push_back("accept " + g.vertices[s].name);
    }

    // conservation: in - out = -1 at the source, 0 elsewhere (T handled by
    // the accept-choice row)
    std::vector<LinearRow> conserve(g.vertices.size());
    std::vector<char> touched(g.vertices.size(), 0);
    for (const FlowEdge& e : fs.edges) {
        if (e.tail == e.head) {  // a self-loop moves no net flow
            touched[e.tail] = 1;
            continue;
        }
        if (e.tail != T) {
            conserve[e.tail].terms.push_back({e.var, -1});
            touched[e.tail] = 1;
        }
        if (e.head != T) {
            conserve[e.head].terms.push_back({e.var, +1});
            touched[e.head] = 1;
        }
    }
    for (uint32_t v = 0; v < g.vertices.size(); ++v) {
        if (!touched[v] && v != g.source) continue;
        conserve[v].kind = LinearRow::Eq;
        conserve[v].rhs = v == g.source ? -1 : 0;
        conserve[v].note = "conserve " + g.vertices[v].name;
        fs.rows.push_back(std::move(conserve[v]));
    }
    {
        LinearRow choice;
        choice.kind = LinearRow::Eq;
        choice.rhs = 1;
        choice.note = "accept-choice";
        for (size_t i = 0; i < out.sink_of_virtual.size(); ++i)
            choice.terms.push_back({out.num_real + i, +1});
        fs.rows.push_back(std::move(choice));
    }
    for (size_t i = 0; i < g.num_counters; ++i) {
        if (pattern[i] == 'N') continue;
        LinearRow row;
        row.kind = pattern[i] == 'E' ? LinearRow::Eq : LinearRow::Ge;
        row.rhs = 0;
        row.note = std::string("balance ") + m.stores[i].id +
                   (pattern[i] == 'E' ? " (ends zero)" : " (stays nonnegative)");
        for (size_t var = 0; var < out.num_real; ++var) {
            int8_t d = g.edges[out.edge_of_var[var]].delta[i];
            if (d != 0) row.terms.push_back({var, d});
        }
        fs.rows.push_back(std::move(row));
    }

    fs.var_cap = kFlowFamilyCap;
    fs.cap_is_exact = false;
    fs.has_graph = true;
    fs.num_vertices = T + 1;
    fs.source = g.source;
    for (const RegionVertex& v : g.vertices) fs.vertex_names.push_back(v.name);
    fs.vertex_names.push_back("(accept)");
    return out;
}

/// Graph-level pruning for one sink group.  Keeps only edges on some
/// source-to-sink route and deletes counter edges that can never be
/// balanced; returns false when no accepting path survives, which is an
/// exact emptiness proof for this group.  reachable_sinks receives the
/// surviving sink vertices.
inline bool prune_region_graph(const RegionGraph& g, const std::vector<uint32_t>& sinks,
                               const std::string& pattern, std::vector<char>& alive,
                               std::vector<uint32_t>& reachable_sinks) {
    const size_t n = g.vertices.size();
    for (;;) {
        std::vector<char> reach(n, 0), coreach(n, 0);
        std::vector<std::vector<size_t>> out_e(n), in_e(n);
        for (size_t e = 0; e < g.edges.size(); ++e) {
            if (!alive[e]) continue;
            out_e[g.edges[e].tail].push_back(e);
            in_e[g.edges[e].head].push_back(e);
        }
        std::deque<uint32_t> q = {g.source};
        reach[g.source] = 1;
        while (!q.empty()) {
            uint32_t v = q.front();
            q.pop_front();
            for (size_t e : out_e[v])
                if (!reach[g.edges[e].head]) {
                    reach[g.edges[e].head] = 1;
                    q.push_back(g.edges[e].head);
                }
        }
        reachable_sinks.clear();
        for (uint32_t s : sinks)
            if (reach[s]) {
                reachable_sinks.push_back(s);
                if (!coreach[s]) {
                    coreach[s] = 1;
                    q.push_back(s);
                }
            }
        if (reachable_sinks.empty()) return false;
        while (!q.empty()) {
            uint32_t v = q.front();
            q.pop_front();
            for (size_t e : in_e[v])
                if (!coreach[g.edges[e].tail]) {
                    coreach[g.edges[e].tail] = 1;
                    q.push_back(g.edges[e].tail);
                }
        }

        bool changed = false;
        for (size_t e = 0; e < g.edges.size(); ++e)
            if (alive[e] && (!reach[g.edges[e].tail] || !coreach[g.edges[e].head])) {
                alive[e] = 0;
                changed = true;
            }
        for (size_t i = 0; i < g.num_counters; ++i) {
            if (pattern[i] == 'N') continue;
            bool has_inc = false, has_dec = false;
            for (size_t e = 0; e < g.edges.size(); ++e) {
                if (!alive[e]) continue;
                if (g.edges[e].delta[i] > 0) has_inc = true;
                if (g.edges[e].delta[i] < 0) has_dec = true;
            }
            // equality: increments need matching decrements and vice versa;
            // the >= 0 pattern still forbids decrements without increments
            bool kill_inc = pattern[i] == 'E' && has_inc && !has_dec;
            bool kill_dec = !has_inc && has_dec;
            if (kill_inc || kill_dec)
                for (size_t e = 0; e < g.edges.size(); ++e)
                    if (alive[e] && ((kill_inc && g.edges[e].delta[i] > 0) ||
                                     (kill_dec && g.edges[e].delta[i] < 0))) {
                        alive[e] = 0;
                        changed = true;
                    }
        }
        if (!changed) return true;
    }
}

/// Single-system view used for inspection and dumps.  end_zero = true keeps
/// only accepting vertices whose counters all end at zero and demands exact
/// balance; end_zero = false keeps every accepting vertex under the sound
/// relaxation "increments >= decrements" (the full decision procedure in
/// ncm_emptiness instead builds one exact system per final-region pattern).
inline FlowSystem build_flow_system(const MachineSpec& m, bool end_zero) {
    RegionGraph g = build_region_graph(m);
    std::vector<uint32_t> sinks;
    for (uint32_t v = 0; v < g.vertices.size(); ++v) {
        if (!m.is_final(g.vertices[v].state)) continue;
        if (end_zero && sink_pattern(g.vertices[v]) !=
                            std::string(g.num_counters, 'E'))
            continue;
        sinks.push_back(v);
    }
    std::vector<char> alive(g.edges.size(), 1);
    std::string pattern(g.num_counters, end_zero ? 'E' : 'G');
    return make_region_flow_system(m, g, alive, sinks, pattern).fs;
}

/* ------------------------------------------------------------------ */
/* Witness extraction and the emptiness verdict.                       */

namespace detail {

/// Euler path over the multigraph selected by the assignment, starting at
/// the source and ending on a virtual accept edge; ties broken by lowest
/// transition index so witnesses are reproducible.
inline Word euler_witness(const RegionGraph& g, const BuiltFlowSystem& b,
                          const std::vector<uint64_t>& x) {
    struct Out {
        size_t order;  // transition index; accept edges sort last
        size_t var;
        uint64_t remaining;
    };
    const uint32_t T = static_cast<uint32_t>(g.vertices.size());
    std::vector<std::vector<Out>> outs(T + 1);
    uint64_t total = 0;
    for (size_t var = 0; var < b.fs.num_vars; ++var) {
        if (x[var] == 0) continue;
        const FlowEdge& e = b.fs.edges[var];
        size_t order = var < b.num_real ? g.edges[b.edge_of_var[var]].trans : SIZE_MAX;
        outs[e.tail].push_back({order, var, x[var]});
        total += x[var];
    }
    for (auto& v : outs)
        std::sort(v.begin(), v.end(), [](const Out& a, const Out& b2) {
            return a.order != b2.order ? a.order < b2.order : a.var < b2.var;
        });

    std::vector<size_t> cursor(T + 1, 0);
    std::vector<uint32_t> vstack = {g.source};
    std::vector<size_t> estack;
    std::vector<size_t> euler;  // variable per traversed edge, reversed
    while (!vstack.empty()) {
        uint32_t v = vstack.back();
        auto& lst = outs[v];
        size_t& c = cursor[v];
        while (c < lst.size() && lst[c].remaining == 0) ++c;
        if (c < lst.size()) {
            --lst[c].remaining;
            estack.push_back(lst[c].var);
            vstack.push_back(b.fs.edges[lst[c].var].head);
        } else {
            vstack.pop_back();
            if (!estack.empty()) {
                euler.push_back(estack.back());
                estack.pop_back();
            }
        }
    }
    if (euler.size() != total)
        throw std::logic_error("flow solution did not form a single path");
    std::reverse(euler.begin(), euler.end());

    Word w;
    for (size_t var : euler) {
        if (var >= b.num_real) continue;
        SymbolId c = g.edges[b.edge_of_var[var]].consumed;
        if (c != kNoLetter) w.push_back(c);
    }
    if (euler.empty() || euler.back() < b.num_real)
        throw std::logic_error("flow path does not end on an accept edge");
    const RegionVertex& sink = g.vertices[b.fs.edges[euler.back()].tail];
    if (sink.commit != kNoCommit && sink.commit != kRightMarker) w.push_back(sink.commit);
    return w;
}

}  // namespace detail

struct EmptinessVerdict {
    bool empty = true;
    Word witness;
    std::vector<size_t> trace;  // accepting transition sequence on the input machine
    bool exact = true;
    std::string note;
};

/// Exact when the region graph rules every group out structurally; when a
/// group needs the flow search, Empty additionally means no solution with
/// per-edge multiplicity up to the recorded cap.  Nonempty is always sound:
/// the witness is replayed on the given machine before being returned.
inline EmptinessVerdict ncm_emptiness(const MachineSpec& m, uint64_t node_budget = 2000000,
                                      uint64_t replay_budget = 4000000) {
    if (!is_ncm_signature(m))
        throw std::invalid_argument("ncm_emptiness: not a one-way counter machine");
    EmptinessVerdict out;
    if (m.finals.empty()) {
        out.note = "no accepting states";
        return out;
    }
    MachineSpec m1 = to_phase_automaton(m);
    RegionGraph g = build_region_graph(m1);

    std::map<std::string, std::vector<uint32_t>> groups;
    for (uint32_t v = 0; v < g.vertices.size(); ++v)
        if (m1.is_final(g.vertices[v].state))
            groups[sink_pattern(g.vertices[v])].push_back(v);

    bool all_structural = true;
    bool resource = false;
    for (const auto& [pattern, sinks] : groups) {
        std::vector<char> alive(g.edges.size(), 1);
        std::vector<uint32_t> live_sinks;
        if (!prune_region_graph(g, sinks, pattern, alive, live_sinks)) continue;
        BuiltFlowSystem built = make_region_flow_system(m1, g, alive, live_sinks, pattern);
        FlowSolution sol = solve_flow(built.fs, node_budget);
        if (sol.status == FlowStatus::Feasible) {
            Word w = detail::euler_witness(g, built, sol.assignment);
            BoundedResult replay = accepts_bounded(m, w, replay_budget);
            if (!replay.accepted)
                throw std::logic_error("ncm_emptiness: witness failed to replay");
            out.empty = false;
            out.witness = std::move(w);
            out.trace = std::move(replay.trace);
            out.note = "witness extracted from a flow solution and replayed";
            return out;
        }
        all_structural = false;
        if (sol.status == FlowStatus::Resource) resource = true;
    }
    if (resource) throw RbcResourceError("ncm_emptiness: flow search budget exhausted");
    out.empty = true;
    out.exact = all_structural;
    out.note = all_structural
                   ? "no accepting path in the region graph"
                   : "no balanced accepting path; flow multiplicities searched up to cap " +
                         std::to_string(kFlowFamilyCap);
    return out;
}

/* ------------------------------------------------------------------ */
/* Membership via the word product.                                    */

/// Machine over the empty alphabet whose runs are m's runs on the fixed
/// word w; it accepts the empty word exactly when m accepts w.
inline MachineSpec word_product(const MachineSpec& m, const Word& w) {
    if (!is_ncm_signature(m))
        throw std::invalid_argument("word_product: not a one-way counter machine");
    MachineSpec out;
    out.name = m.name + "~word";
    out.oneway = true;
    out.heads = 1;
    out.deterministic = m.deterministic;
    out.syms = m.syms;
    out.stores = m.stores;

    std::map<std::pair<StateId, uint32_t>, StateId> ids;
    std::deque<std::pair<StateId, uint32_t>> queue;
    auto intern = [&](StateId q, uint32_t i) {
        auto key = std::make_pair(q, i);
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        StateId id = out.add_state(m.states[q] + "@" + std::to_string(i));
        ids.emplace(key, id);
        queue.push_back(key);
        return id;
    };
    out.initial = intern(m.initial, 0);
    auto by_state = transitions_by_state(m);

    while (!queue.empty()) {
        auto [q, i] = queue.front();
        queue.pop_front();
        StateId from = ids.at({q, i});
        for (size_t ti : by_state[q]) {
            const Transition& t = m.transitions[ti];
            const SymbolId sigma = t.reads[0];
            uint32_t ni;
            if (sigma == kLeftMarker) continue;
            if (sigma == kRightMarker) {
                if (i != w.size() || t.moves[0] != 0) continue;
                ni = i;
            } else {
                if (i >= w.size() || w[i] != sigma) continue;
                ni = i + (t.moves[0] == 1 ? 1 : 0);
            }
            StateId to = intern(t.to, ni);
            out.transitions.push_back(
                {from, {kRightMarker}, t.store_reads, to, t.instructions, {0}});
        }
    }
    for (const auto& [key, id] : ids)
        if (m.is_final(key.first)) out.finals.push_back(id);
    std::sort(out.finals.begin(), out.finals.end());
    return out;
}

inline bool ncm_membership(const MachineSpec& m, const Word& w, uint64_t node_budget = 2000000,
                           uint64_t replay_budget = 4000000) {
    return !ncm_emptiness(word_product(m, w), node_budget, replay_budget).empty;
}

}  // namespace csa
