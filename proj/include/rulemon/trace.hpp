// trace.hpp — finite traces: ordered cells of observation sets.

#ifndef RULEMON_TRACE_HPP
#define RULEMON_TRACE_HPP

#include <algorithm>
#include <string>
#include <vector>

namespace rulemon {

// One position of a trace.  Observations are kept sorted and deduplicated.
struct Cell {
    std::vector<std::string> observations;

    bool contains(const std::string& name) const {
        return std::binary_search(observations.begin(), observations.end(), name);
    }
    void insert(std::string name) {
        auto it = std::lower_bound(observations.begin(), observations.end(), name);
        if (it == observations.end() || *it != name) observations.insert(it, std::move(name));
    }
    bool operator==(const Cell&) const = default;
};

// A complete finite trace; the final cell conceptually carries the END
// marker.  Length must be >= 1 for monitoring and oracle evaluation.
struct Trace {
    std::vector<Cell> cells;

    int length() const { return static_cast<int>(cells.size()); }
    bool operator==(const Trace&) const = default;
};

}  // namespace rulemon

#endif
