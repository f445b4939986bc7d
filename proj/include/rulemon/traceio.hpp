// traceio.hpp — textual trace format, random generation and streaming.
//
// Format: cells separated by `-`, observations within a cell by `,`,
// empty cells written `_`, an optional END token in the last cell:
//
//   c - a - b,d - b,END
//
// END is trace metadata (the end-of-input marker), never an observation.

#ifndef RULEMON_TRACEIO_HPP
#define RULEMON_TRACEIO_HPP

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rulemon/trace.hpp"

namespace rulemon {

class TraceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Trace parse_trace(const std::string& text);
std::string serialize_trace(const Trace& trace);  // always writes the END token

// Each observation of `alphabet` is present in each cell independently
// with probability `density`; deterministic for a fixed seed.
Trace gen_random_trace(const std::vector<std::string>& alphabet, int n_cells, double density,
                       std::uint64_t seed);

// One cell per line in the cell syntax above; a line `END` (alone, or a
// cell suffixed `,END`) marks the final cell.  After the final cell the
// provider yields nothing.  A source that ends without END leaves the
// stream unterminated; the caller observes this as provider exhaustion.
class LineCellSource {
public:
    explicit LineCellSource(std::istream& in) : in_(&in) {}

    std::optional<std::pair<Cell, bool>> next();  // (cell, is_last)
    bool terminated() const { return terminated_; }
    int line_number() const { return line_; }

private:
    std::istream* in_;
    bool terminated_ = false;
    int line_ = 0;
};

std::function<std::optional<std::pair<Cell, bool>>()> stream_cells(LineCellSource& source);

}  // namespace rulemon

#endif
