// bench.hpp — timing harness: monitors randomly generated traces and
// reports compile and per-cell monitoring cost as CSV.

#ifndef RULEMON_BENCH_HPP
#define RULEMON_BENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rulemon/engine.hpp"

namespace rulemon {

// One benchmark subject: observations are drawn from `alphabet` so that no
// early verdict fires; `ensure_one_of`, when nonempty, forces at least one
// of those observations into every cell (needed to keep safety properties
// alive for the whole run).
struct BenchSpec {
    std::string name;
    std::string formula;
    std::vector<std::string> alphabet;
    std::vector<std::string> ensure_one_of;
    double density = 0.3;
};

struct BenchRecord {
    std::string formula;  // spec name
    long long n_cells = 0;
    int rep = 0;
    double compile_ms = 0.0;
    double total_ms = 0.0;
    double avg_ms_per_cell = 0.0;
    std::uint64_t seed = 0;
};

// The three stock subjects: an eventuality, a four-way safety disjunction
// and a nested mix with strong and weak next.
std::vector<BenchSpec> default_bench_specs();

std::vector<BenchRecord> run_bench(const std::vector<BenchSpec>& specs,
                                   const std::vector<long long>& cell_counts,
                                   std::uint64_t seed, int repetitions,
                                   EvalMode mode = EvalMode::SinglePass);

// Schema: formula,n_cells,rep,compile_ms,total_ms,avg_ms_per_cell,seed
std::string bench_csv(const std::vector<BenchRecord>& records);

}  // namespace rulemon

#endif
