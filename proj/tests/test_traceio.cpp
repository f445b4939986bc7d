#include <random>
#include <sstream>

#include "doctest.h"
#include "rulemon/traceio.hpp"

using namespace rulemon;

TEST_CASE("parse_trace: the worked trace") {
    Trace t = parse_trace("c - a - b,d - b,END");
    REQUIRE(t.length() == 4);
    CHECK(t.cells[0].observations == std::vector<std::string>{"c"});
    CHECK(t.cells[1].observations == std::vector<std::string>{"a"});
    CHECK(t.cells[2].observations == std::vector<std::string>{"b", "d"});
    CHECK(t.cells[3].observations == std::vector<std::string>{"b"});
}

TEST_CASE("parse_trace: empty cell and two-cell traces") {
    CHECK(parse_trace("_").length() == 1);
    CHECK(parse_trace("_").cells[0].observations.empty());
    Trace t = parse_trace("b - b");
    REQUIRE(t.length() == 2);
    CHECK(t.cells[0].contains("b"));
}

TEST_CASE("parse_trace: errors and deduplication") {
    CHECK_THROWS_AS(parse_trace(""), TraceError);
    CHECK_THROWS_AS(parse_trace("a -  - b"), TraceError);   // empty token needs '_'
    CHECK_THROWS_AS(parse_trace("a,END - b"), TraceError);  // END mid-trace
    CHECK_THROWS_AS(parse_trace("a - B1"), TraceError);     // bad observation name
    Trace t = parse_trace("a,a,a");
    CHECK(t.cells[0].observations == std::vector<std::string>{"a"});
}

TEST_CASE("round trip: parse(serialize(t)) == t") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 200; ++i) {
        Trace t = gen_random_trace({"a", "b", "c"}, 1 + static_cast<int>(rng() % 6), 0.4, rng());
        CHECK(parse_trace(serialize_trace(t)) == t);
    }
}

TEST_CASE("gen_random_trace: deterministic for a fixed seed") {
    Trace a = gen_random_trace({"a", "b"}, 50, 0.5, 1234);
    Trace b = gen_random_trace({"a", "b"}, 50, 0.5, 1234);
    CHECK(a == b);
    CHECK(gen_random_trace({"a", "b"}, 10, 0.0, 7).cells[3].observations.empty());
    CHECK_THROWS_AS(gen_random_trace({}, 3, 0.5, 7), TraceError);
}

TEST_CASE("gen_random_trace: cell sizes follow the density") {
    std::vector<std::string> alphabet;
    for (char c = 'a'; c <= 'z'; ++c) alphabet.push_back(std::string(1, c));
    const int n = 100000;
    const double density = 0.3;
    Trace t = gen_random_trace(alphabet, n, density, 99);
    double total = 0;
    for (const Cell& cell : t.cells) total += static_cast<double>(cell.observations.size());
    double mean = total / n;
    double expected = 26.0 * density;
    double sigma = std::sqrt(26.0 * density * (1 - density) / n);
    CHECK(std::abs(mean - expected) <= 3 * sigma);
}

TEST_CASE("stream_cells: per-line cells with END on the last") {
    std::istringstream in("c\na\nb,d,END\n");
    LineCellSource source(in);
    auto provider = stream_cells(source);
    auto c1 = provider();
    REQUIRE(c1.has_value());
    CHECK_FALSE(c1->second);
    auto c2 = provider();
    REQUIRE(c2.has_value());
    auto c3 = provider();
    REQUIRE(c3.has_value());
    CHECK(c3->second);
    CHECK(c3->first.contains("b"));
    CHECK(c3->first.contains("d"));
    CHECK_FALSE(provider().has_value());
    CHECK(source.terminated());
}

TEST_CASE("stream_cells: a bare END line is an empty final cell") {
    std::istringstream in("END\n");
    LineCellSource source(in);
    auto cell = source.next();
    REQUIRE(cell.has_value());
    CHECK(cell->second);
    CHECK(cell->first.observations.empty());
}

TEST_CASE("stream_cells: exhaustion without END leaves the source unterminated") {
    std::istringstream in("a\nb\n");
    LineCellSource source(in);
    CHECK(source.next().has_value());
    CHECK(source.next().has_value());
    CHECK_FALSE(source.next().has_value());
    CHECK_FALSE(source.terminated());
}

TEST_CASE("stream_cells: malformed line carries the line number") {
    std::istringstream in("a\n!!\n");
    LineCellSource source(in);
    CHECK(source.next().has_value());
    try {
        source.next();
        FAIL("expected a trace error");
    } catch (const TraceError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("stream matches batch parsing") {
    Trace t = gen_random_trace({"a", "b"}, 20, 0.5, 4242);
    std::string lines;
    for (int i = 0; i < t.length(); ++i) {
        const Cell& cell = t.cells[static_cast<std::size_t>(i)];
        if (cell.observations.empty())
            lines += "_";
        else
            for (std::size_t j = 0; j < cell.observations.size(); ++j)
                lines += (j ? "," : "") + cell.observations[j];
        if (i + 1 == t.length()) lines += ",END";
        lines += "\n";
    }
    std::istringstream in(lines);
    LineCellSource source(in);
    Trace streamed;
    while (auto cell = source.next()) streamed.cells.push_back(cell->first);
    CHECK(streamed == t);
}
