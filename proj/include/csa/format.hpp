/* format.hpp -- line-oriented machine description files.
 *
 * Directives (one per line, any order; '#' comments occupy a whole line so
 * that '#' stays usable as an input symbol):
 *
 *   machine <name>
 *   mode oneway|twoway
 *   heads <r>
 *   deterministic true|false
 *   input [sym ...]
 *   store <id> pushdown|counter|rb_counter:<l>|stack|checking_stack [sym ...]
 *   states <name ...>
 *   initial <name>
 *   final [name ...]
 *   trans <from> | <reads> | <store-reads> -> <to> | <instructions> | <moves>
 *
 * Symbols are single characters or synthetic t<digits> tokens; the tokens
 * <  >  Zb  Zt are reserved.  Counter stores default to the alphabet {c}.
 * Instructions: push:<sym> pop stay D S U.  Moves: -1 0 +1.
 */

#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "csa/machine.hpp"

namespace csa {

class ParseError : public std::runtime_error {
  public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

inline bool is_symbol_token(const std::string& t) {
    if (t == "<" || t == ">" || t == "Zb" || t == "Zt") return false;
    if (t.size() == 1) return !std::isspace(static_cast<unsigned char>(t[0]));
    if (t.size() >= 2 && t[0] == 't') {
        for (size_t i = 1; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    }
    return false;
}

[[noreturn]] inline void fail(int line, const std::string& msg) {
    throw ParseError("line " + std::to_string(line) + ": " + msg);
}

}  // namespace detail

inline MachineSpec parse_machine(const std::string& text) {
    using namespace detail;

    struct Line {
        int no;
        std::string body;
    };
    std::vector<Line> machine_l, mode_l, heads_l, det_l, input_l, store_l, states_l,
        initial_l, final_l, trans_l;

    {
        std::istringstream in(text);
        std::string raw;
        int no = 0;
        while (std::getline(in, raw)) {
            ++no;
            std::string line = trim(raw);
            if (line.empty() || line[0] == '#') continue;
            size_t sp = line.find_first_of(" \t");
            std::string head = sp == std::string::npos ? line : line.substr(0, sp);
            std::string rest = sp == std::string::npos ? "" : trim(line.substr(sp + 1));
            if (head == "machine")
                machine_l.push_back({no, rest});
            else if (head == "mode")
                mode_l.push_back({no, rest});
            else if (head == "heads")
                heads_l.push_back({no, rest});
            else if (head == "deterministic")
                det_l.push_back({no, rest});
            else if (head == "input")
                input_l.push_back({no, rest});
            else if (head == "store")
                store_l.push_back({no, rest});
            else if (head == "states")
                states_l.push_back({no, rest});
            else if (head == "initial")
                initial_l.push_back({no, rest});
            else if (head == "final")
                final_l.push_back({no, rest});
            else if (head == "trans")
                trans_l.push_back({no, rest});
            else
                fail(no, "unknown directive '" + head + "'");
        }
    }

    auto single = [](std::vector<Line>& v, const char* what) -> Line& {
        if (v.empty()) throw ParseError(std::string("missing '") + what + "' directive");
        if (v.size() > 1) fail(v[1].no, std::string("duplicate '") + what + "' directive");
        return v[0];
    };

    MachineSpec m;
    m.name = trim(single(machine_l, "machine").body);
    if (m.name.empty()) fail(machine_l[0].no, "machine name required");

    {
        Line& l = single(mode_l, "mode");
        if (l.body == "oneway")
            m.oneway = true;
        else if (l.body == "twoway")
            m.oneway = false;
        else
            fail(l.no, "mode must be oneway or twoway");
    }
    {
        Line& l = single(heads_l, "heads");
        try {
            int h = std::stoi(l.body);
            if (h < 1 || h > 16) throw std::out_of_range("");
            m.heads = static_cast<uint32_t>(h);
        } catch (const std::exception&) {
            fail(l.no, "heads must be an integer in [1, 16]");
        }
    }
    {
        Line& l = single(det_l, "deterministic");
        if (l.body == "true")
            m.deterministic = true;
        else if (l.body == "false")
            m.deterministic = false;
        else
            fail(l.no, "deterministic must be true or false");
    }

    auto intern_symbol = [&m](int line, const std::string& tok) -> SymbolId {
        if (!is_symbol_token(tok))
            fail(line, "bad symbol token '" + tok + "' (single char or t<digits>)");
        return m.syms.intern(tok);
    };

    {
        Line& l = single(input_l, "input");
        for (const std::string& tok : split_ws(l.body)) {
            SymbolId s = intern_symbol(l.no, tok);
            if (m.in_input_alphabet(s)) fail(l.no, "duplicate input symbol '" + tok + "'");
            m.input_alphabet.push_back(s);
        }
    }

    for (Line& l : store_l) {
        auto toks = split_ws(l.body);
        if (toks.size() < 2) fail(l.no, "store needs an id and a kind");
        StoreTypeSpec st;
        st.id = toks[0];
        for (const auto& other : m.stores)
            if (other.id == st.id) fail(l.no, "duplicate store id '" + st.id + "'");
        std::string kind = toks[1];
        if (kind == "pushdown")
            st.kind = StoreKind::Pushdown;
        else if (kind == "counter")
            st.kind = StoreKind::Counter;
        else if (kind.rfind("rb_counter:", 0) == 0) {
            st.kind = StoreKind::RbCounter;
            try {
                int l2 = std::stoi(kind.substr(11));
                if (l2 < 1) throw std::out_of_range("");
                st.reversal_bound = static_cast<uint32_t>(l2);
            } catch (const std::exception&) {
                fail(l.no, "rb_counter bound must be an integer >= 1");
            }
        } else if (kind == "stack")
            st.kind = StoreKind::Stack;
        else if (kind == "checking_stack")
            st.kind = StoreKind::CheckingStack;
        else
            fail(l.no, "unknown store kind '" + kind + "'");

        for (size_t i = 2; i < toks.size(); ++i) {
            SymbolId s = intern_symbol(l.no, toks[i]);
            if (st.in_alphabet(s)) fail(l.no, "duplicate store symbol '" + toks[i] + "'");
            st.alphabet.push_back(s);
        }
        if (is_counter_kind(st.kind)) {
            if (st.alphabet.empty()) st.alphabet.push_back(m.syms.intern("c"));
            if (st.alphabet.size() != 1) fail(l.no, "counter alphabet must be one symbol");
        }
        if (is_stack_kind(st.kind) && st.alphabet.empty())
            fail(l.no, "stack store needs a nonempty alphabet");
        m.stores.push_back(std::move(st));
    }

    {
        Line& l = single(states_l, "states");
        for (const std::string& tok : split_ws(l.body)) {
            for (const auto& s : m.states)
                if (s == tok) fail(l.no, "duplicate state '" + tok + "'");
            m.states.push_back(tok);
        }
        if (m.states.empty()) fail(l.no, "at least one state required");
    }

    auto state_id = [&m](int line, const std::string& tok) -> StateId {
        for (size_t i = 0; i < m.states.size(); ++i)
            if (m.states[i] == tok) return static_cast<StateId>(i);
        fail(line, "unknown state '" + tok + "'");
    };

    {
        Line& l = single(initial_l, "initial");
        auto toks = split_ws(l.body);
        if (toks.size() != 1) fail(l.no, "initial takes exactly one state");
        m.initial = state_id(l.no, toks[0]);
    }
    {
        Line& l = single(final_l, "final");
        for (const std::string& tok : split_ws(l.body)) {
            StateId f = state_id(l.no, tok);
            if (m.is_final(f)) fail(l.no, "duplicate final state '" + tok + "'");
            m.finals.push_back(f);
        }
    }

    auto input_read = [&m](int line, const std::string& tok) -> SymbolId {
        if (tok == "<") return kLeftMarker;
        if (tok == ">") return kRightMarker;
        if (m.syms.contains(tok)) {
            SymbolId s = m.syms.id(tok);
            if (m.in_input_alphabet(s)) return s;
        }
        fail(line, "input read '" + tok + "' not in alphabet");
    };
    auto store_read = [&m](int line, size_t k, const std::string& tok) -> SymbolId {
        if (tok == "Zb") return kBottom;
        if (tok == "Zt" && is_stack_kind(m.stores[k].kind)) return kTop;
        if (m.syms.contains(tok)) {
            SymbolId s = m.syms.id(tok);
            if (m.stores[k].in_alphabet(s)) return s;
        }
        fail(line, "store read '" + tok + "' not readable on " + m.stores[k].id);
    };
    auto instruction = [&m](int line, size_t k, const std::string& tok) -> Instruction {
        if (tok == "pop") return pop_ins();
        if (tok == "stay") return stay_ins();
        if (tok == "D") return down_ins();
        if (tok == "S") return snoop_ins();
        if (tok == "U") return up_ins();
        if (tok.rfind("push:", 0) == 0) {
            std::string sym = tok.substr(5);
            if (m.syms.contains(sym)) {
                SymbolId s = m.syms.id(sym);
                if (m.stores[k].in_alphabet(s)) return push_ins(s);
            }
            fail(line, "push symbol '" + sym + "' not in store " + m.stores[k].id);
        }
        fail(line, "unknown instruction '" + tok + "'");
    };
    auto move = [](int line, const std::string& tok) -> int8_t {
        if (tok == "-1") return -1;
        if (tok == "0") return 0;
        if (tok == "+1" || tok == "1") return 1;
        fail(line, "move must be -1, 0 or +1");
    };

    for (Line& l : trans_l) {
        auto arrow = l.body.find("->");
        if (arrow == std::string::npos) fail(l.no, "transition needs '->'");
        auto lhs = split_on(l.body.substr(0, arrow), '|');
        auto rhs = split_on(l.body.substr(arrow + 2), '|');
        if (lhs.size() != 3 || rhs.size() != 3)
            fail(l.no, "transition needs 'from | reads | store-reads -> to | instructions | moves'");

        Transition t;
        auto from_toks = split_ws(trim(lhs[0]));
        auto to_toks = split_ws(trim(rhs[0]));
        if (from_toks.size() != 1 || to_toks.size() != 1)
            fail(l.no, "transition endpoints must be single states");
        t.from = state_id(l.no, from_toks[0]);
        t.to = state_id(l.no, to_toks[0]);

        auto read_toks = split_ws(trim(lhs[1]));
        if (read_toks.size() != m.heads) fail(l.no, "reads field must list one symbol per head");
        for (const auto& tok : read_toks) t.reads.push_back(input_read(l.no, tok));

        auto sr_toks = split_ws(trim(lhs[2]));
        if (sr_toks.size() != m.stores.size())
            fail(l.no, "store-reads field must list one symbol per store");
        for (size_t k = 0; k < sr_toks.size(); ++k)
            t.store_reads.push_back(store_read(l.no, k, sr_toks[k]));

        auto ins_toks = split_ws(trim(rhs[1]));
        if (ins_toks.size() != m.stores.size())
            fail(l.no, "instructions field must list one instruction per store");
        for (size_t k = 0; k < ins_toks.size(); ++k)
            t.instructions.push_back(instruction(l.no, k, ins_toks[k]));

        auto mv_toks = split_ws(trim(rhs[2]));
        if (mv_toks.size() != m.heads) fail(l.no, "moves field must list one move per head");
        for (const auto& tok : mv_toks) t.moves.push_back(move(l.no, tok));

        m.transitions.push_back(std::move(t));
    }
    return m;
}

inline MachineSpec parse_machine_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_machine(buf.str());
}

/* ------------------------------------------------------------------ */

inline std::string serialize_machine(const MachineSpec& m) {
    std::ostringstream out;
    out << "machine " << m.name << "\n";
    out << "mode " << (m.oneway ? "oneway" : "twoway") << "\n";
    out << "heads " << m.heads << "\n";
    out << "deterministic " << (m.deterministic ? "true" : "false") << "\n";
    out << "input";
    for (SymbolId s : m.input_alphabet) out << " " << m.syms.name(s);
    out << "\n";
    for (const auto& st : m.stores) {
        out << "store " << st.id << " ";
        switch (st.kind) {
            case StoreKind::Pushdown: out << "pushdown"; break;
            case StoreKind::Counter: out << "counter"; break;
            case StoreKind::RbCounter: out << "rb_counter:" << st.reversal_bound; break;
            case StoreKind::Stack: out << "stack"; break;
            case StoreKind::CheckingStack: out << "checking_stack"; break;
        }
        for (SymbolId s : st.alphabet) out << " " << m.syms.name(s);
        out << "\n";
    }
    out << "states";
    for (const auto& s : m.states) out << " " << s;
    out << "\n";
    out << "initial " << m.states[m.initial] << "\n";
    out << "final";
    for (StateId f : m.finals) out << " " << m.states[f];
    out << "\n";

    auto read_name = [&m](SymbolId s) -> std::string {
        if (s == kLeftMarker) return "<";
        if (s == kRightMarker) return ">";
        return m.syms.name(s);
    };
    for (const Transition& t : m.transitions) {
        out << "trans " << m.states[t.from] << " |";
        for (SymbolId s : t.reads) out << " " << read_name(s);
        out << " |";
        for (SymbolId s : t.store_reads) out << " " << m.syms.name(s);
        out << " -> " << m.states[t.to] << " |";
        for (const Instruction& ins : t.instructions) out << " " << instruction_name(ins, m.syms);
        out << " |";
        for (int8_t mv : t.moves) out << " " << (mv == 1 ? "+1" : mv == 0 ? "0" : "-1");
        out << "\n";
    }
    return out.str();
}

inline void write_machine_file(const MachineSpec& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << serialize_machine(m);
}

}  // namespace csa
