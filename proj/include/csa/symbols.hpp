/* symbols.hpp -- interned symbol ids shared by input and store alphabets. */

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace csa {

using SymbolId = uint32_t;

/// Well-known ids, present in every table at fixed positions.
enum ReservedSymbol : SymbolId {
    kLeftMarker = 0,   // '<', input left end-marker
    kRightMarker = 1,  // '>', input right end-marker
    kBottom = 2,       // "Zb", store bottom-of-stack / empty-counter read
    kTop = 3,          // "Zt", stack top sentinel
    kReservedCount = 4,
};

/// Bidirectional name <-> id map. Ids are dense and allocation order is
/// deterministic, so identical construction sequences yield identical tables.
class SymbolTable {
  public:
    SymbolTable() {
        intern("<");
        intern(">");
        intern("Zb");
        intern("Zt");
    }

    SymbolId intern(const std::string& name) {
        auto it = ids_.find(name);
        if (it != ids_.end()) return it->second;
        SymbolId id = static_cast<SymbolId>(names_.size());
        names_.push_back(name);
        ids_.emplace(name, id);
        return id;
    }

    /// Lookup without interning; throws on unknown names.
    SymbolId id(const std::string& name) const {
        auto it = ids_.find(name);
        if (it == ids_.end()) throw std::out_of_range("unknown symbol: " + name);
        return it->second;
    }

    bool contains(const std::string& name) const { return ids_.count(name) != 0; }

    const std::string& name(SymbolId id) const { return names_.at(id); }

    size_t size() const { return names_.size(); }

    bool operator==(const SymbolTable& o) const { return names_ == o.names_; }

  private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, SymbolId> ids_;
};

using Word = std::vector<SymbolId>;

}  // namespace csa
