// Regenerates the committed corpus: one .machine file per fixed reference
// machine plus a tab-separated index.  Output is deterministic, so a fresh
// run must reproduce the committed bytes exactly.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "csa/corpus.hpp"
#include "csa/format.hpp"

int main(int argc, char** argv) {
    std::filesystem::path dir = argc > 1 ? argv[1] : "machines";
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        std::cerr << "cannot create " << dir << ": " << ec.message() << "\n";
        return 1;
    }

    std::ofstream index(dir / "index.txt");
    index << "# file\tstates\ttransitions\tstores\tcontrol\n";
    for (const csa::MachineSpec& m : csa::corpus_machines()) {
        const std::string file = m.name + ".machine";
        csa::write_machine_file(m, (dir / file).string());
        std::string stores;
        for (const csa::StoreTypeSpec& st : m.stores) {
            if (!stores.empty()) stores += "+";
            stores += st.kind == csa::StoreKind::CheckingStack
                          ? "checking_stack"
                          : "counter(r" + std::to_string(st.reversal_bound) + ")";
        }
        if (stores.empty()) stores = "none";
        index << file << "\t" << m.states.size() << "\t" << m.transitions.size() << "\t"
              << stores << "\t" << (m.deterministic ? "det" : "nondet") << "\n";
        std::cout << "wrote " << (dir / file).string() << "\n";
    }
    std::cout << "wrote " << (dir / "index.txt").string() << "\n";
    return 0;
}
