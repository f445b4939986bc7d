#include "rulemon/traceio.hpp"

#include <cctype>
#include <random>
#include <sstream>

namespace rulemon {

namespace {

std::string strip(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool valid_observation(const std::string& name) {
    if (name.empty() || !std::islower(static_cast<unsigned char>(name[0]))) return false;
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

// Parses one cell token; returns (cell, had_end_token).
std::pair<Cell, bool> parse_cell(const std::string& token, const std::string& where) {
    Cell cell;
    bool end_marked = false;
    std::stringstream ss(token);
    std::string part;
    bool any = false;
    while (std::getline(ss, part, ',')) {
        part = strip(part);
        any = true;
        if (part == "END") {
            end_marked = true;
            continue;
        }
        if (part == "_") continue;  // empty-cell placeholder
        if (!valid_observation(part))
            throw TraceError("bad observation '" + part + "' " + where);
        cell.insert(part);
    }
    if (!any || strip(token).empty())
        throw TraceError("empty cell token " + where + " (write '_' for an empty cell)");
    return {cell, end_marked};
}

}  // namespace

Trace parse_trace(const std::string& text) {
    if (strip(text).empty()) throw TraceError("empty trace text");
    Trace trace;
    std::stringstream ss(text);
    std::string token;
    bool end_seen = false;
    int index = 0;
    while (std::getline(ss, token, '-')) {
        ++index;
        if (end_seen)
            throw TraceError("END marked at cell " + std::to_string(index - 1) +
                             " but more cells follow");
        auto [cell, end] = parse_cell(token, "in cell " + std::to_string(index));
        end_seen = end;
        trace.cells.push_back(std::move(cell));
    }
    return trace;
}

std::string serialize_trace(const Trace& trace) {
    std::string out;
    for (int i = 0; i < trace.length(); ++i) {
        if (i) out += " - ";
        const Cell& cell = trace.cells[static_cast<std::size_t>(i)];
        if (cell.observations.empty())
            out += "_";
        else
            for (std::size_t j = 0; j < cell.observations.size(); ++j) {
                if (j) out += ",";
                out += cell.observations[j];
            }
        if (i + 1 == trace.length()) out += ",END";
    }
    return out;
}

Trace gen_random_trace(const std::vector<std::string>& alphabet, int n_cells, double density,
                       std::uint64_t seed) {
    if (alphabet.empty()) throw TraceError("gen_random_trace: empty alphabet");
    if (n_cells < 1) throw TraceError("gen_random_trace: need at least one cell");
    if (density < 0.0 || density > 1.0) throw TraceError("gen_random_trace: bad density");

    std::mt19937_64 rng(seed);
    std::bernoulli_distribution keep(density);
    Trace trace;
    trace.cells.resize(static_cast<std::size_t>(n_cells));
    for (Cell& cell : trace.cells)
        for (const std::string& obs : alphabet)
            if (keep(rng)) cell.insert(obs);
    return trace;
}

std::optional<std::pair<Cell, bool>> LineCellSource::next() {
    if (terminated_) return std::nullopt;
    std::string line;
    while (std::getline(*in_, line)) {
        ++line_;
        if (strip(line).empty()) continue;
        try {
            auto [cell, end] = parse_cell(strip(line), "");
            terminated_ = end;
            return std::make_pair(std::move(cell), end);
        } catch (const TraceError& e) {
            throw TraceError(std::string(e.what()) + " at line " + std::to_string(line_));
        }
    }
    return std::nullopt;  // source exhausted without END: unterminated
}

std::function<std::optional<std::pair<Cell, bool>>()> stream_cells(LineCellSource& source) {
    return [&source]() { return source.next(); };
}

}  // namespace rulemon
