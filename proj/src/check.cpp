#include "rulemon/check.hpp"

#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

#include "rulemon/enumerate.hpp"
#include "rulemon/mapsem.hpp"
#include "rulemon/oracle.hpp"
#include "rulemon/traceio.hpp"

namespace rulemon {

namespace {

struct Tally {
    long long pairs = 0;
    long long mismatches = 0;
    long long early_verdicts = 0;
    long long early_stop_violations = 0;
    long long single_pass_divergences = 0;
    long long map_chain_steps = 0;
    long long map_chain_violations = 0;
    std::vector<std::string> samples;

    void merge(const Tally& other) {
        pairs += other.pairs;
        mismatches += other.mismatches;
        early_verdicts += other.early_verdicts;
        early_stop_violations += other.early_stop_violations;
        single_pass_divergences += other.single_pass_divergences;
        map_chain_steps += other.map_chain_steps;
        map_chain_violations += other.map_chain_violations;
        samples.insert(samples.end(), other.samples.begin(), other.samples.end());
    }
};

class FormulaChecker {
public:
    FormulaChecker(const CheckOptions& opts, const Formula& f, Tally& tally)
        : opts_(opts), formula_(f), tally_(tally) {
        sys_ = initialise(f);
        if (opts.saboteur) opts.saboteur(sys_);
        engine_.emplace(sys_);
        n_subsets_ = 1u << opts.alphabet.size();
        cells_.resize(n_subsets_);
        for (unsigned m = 0; m < n_subsets_; ++m)
            for (std::size_t b = 0; b < opts.alphabet.size(); ++b)
                if (m & (1u << b)) cells_[m].insert(opts_.alphabet[b]);
    }

    void run() {
        prefix_.cells.clear();
        walk(engine_->initial_state(), 0);
    }

private:
    void note(const std::string& kind, const Trace& trace, const std::string& detail) {
        if (tally_.samples.size() < static_cast<std::size_t>(opts_.max_samples)) {
            std::ostringstream os;
            os << kind << ": " << print_formula(formula_) << "  over  "
               << serialize_trace(trace) << (detail.empty() ? "" : "  [" + detail + "]");
            tally_.samples.push_back(os.str());
        }
    }

    // Evaluates the ingested state in both modes, reporting divergence.
    // Returns the fixpoint-mode state.
    MonitorState evaluate_both(MonitorState&& state) {
        if (!opts_.check_single_pass) {
            try {
                engine_->evaluate_fixpoint(state);
            } catch (const MonitorError&) {
                state = MonitorState();  // marks the error; caller sees empty
            }
            return std::move(state);
        }
        MonitorState fixpoint = state;
        bool fx_error = false, sp_error = false;
        try {
            engine_->evaluate_fixpoint(fixpoint);
        } catch (const MonitorError&) {
            fx_error = true;
        }
        try {
            engine_->evaluate_single_pass(state);
        } catch (const MonitorError&) {
            sp_error = true;
        }
        if (fx_error != sp_error || (!fx_error && !(fixpoint == state))) {
            ++tally_.single_pass_divergences;
            note("single-pass divergence", prefix_, "");
        }
        if (fx_error) return MonitorState();
        return fixpoint;
    }

    bool errored(const MonitorState& s) const { return s.phase() == Phase::AwaitingCell && s.atoms().empty() && s.cell_index() == 1; }

    void walk(const MonitorState& state, int depth) {
        for (unsigned m = 0; m < n_subsets_; ++m) {
            prefix_.cells.push_back(cells_[m]);

            // complete trace: this cell is the last one
            {
                MonitorState s = state;
                engine_->ingest_cell(s, cells_[m], true);
                MonitorState evaluated = evaluate_both(std::move(s));
                ++tally_.pairs;
                bool expected = oracle_eval(formula_, prefix_, 0);
                auto v = errored(evaluated) ? std::nullopt : engine_->verdict(evaluated);
                if (!v || v->success() != expected) {
                    ++tally_.mismatches;
                    note("verdict mismatch", prefix_,
                         !v ? "no verdict or contradictory state"
                            : (v->success() ? "got SUCCESS, oracle says FALSE"
                                            : "got FAILURE, oracle says TRUE"));
                }
            }

            // the trace continues past this cell
            if (depth + 1 < opts_.max_len) {
                MonitorState s = state;
                engine_->ingest_cell(s, cells_[m], false);
                MonitorState evaluated = evaluate_both(std::move(s));
                if (errored(evaluated)) {
                    ++tally_.mismatches;
                    note("evaluation error mid-trace", prefix_, "");
                } else if (auto v = engine_->verdict(evaluated)) {
                    ++tally_.early_verdicts;
                    check_early(*v);
                } else {
                    engine_->react(evaluated);
                    walk(evaluated, depth + 1);
                }
            }
            prefix_.cells.pop_back();
        }
    }

    // A verdict before the final cell commits every extension; it must
    // match the oracle on all of them.
    void check_early(const Verdict& v) {
        // exhaustive within the suite bounds
        int room = opts_.max_len - prefix_.length();
        Trace extended = prefix_;
        std::function<void(int)> extend = [&](int remaining) {
            ++tally_.pairs;
            if (oracle_eval(formula_, extended, 0) != v.success()) {
                ++tally_.mismatches;
                note("early verdict wrong on extension", extended, "");
            }
            if (remaining == 0) return;
            for (unsigned m = 0; m < n_subsets_; ++m) {
                extended.cells.push_back(cells_[m]);
                extend(remaining - 1);
                extended.cells.pop_back();
            }
        };
        extend(room);

        if (opts_.check_early_stop) {
            auto inv = oracle_irrevocable(formula_, prefix_, prefix_.length(), opts_.alphabet,
                                          opts_.horizon);
            bool ok = v.success() ? inv == Irrevocability::AlwaysTrue
                                  : inv == Irrevocability::AlwaysFalse;
            if (!ok) {
                ++tally_.early_stop_violations;
                note("early verdict not irrevocable", prefix_, "");
            }
        }
    }

    const CheckOptions& opts_;
    const Formula& formula_;
    Tally& tally_;
    RuleSystem sys_;
    std::optional<Engine> engine_;
    unsigned n_subsets_ = 0;
    std::vector<Cell> cells_;
    Trace prefix_;
};

}  // namespace

CheckReport run_equivalence_check(const CheckOptions& options) {
    // materialise the formula list lazily per thread, processing every
    // k-th formula; enumeration is cheap next to monitoring
    long long total = 0;
    for (int n = 1; n <= options.max_nodes; ++n)
        total += count_formulas(n, static_cast<int>(options.alphabet.size()));
    if (total > options.formula_budget)
        throw std::runtime_error("equivalence check: formula budget exceeded (" +
                                 std::to_string(total) + " formulae)");

    int n_threads = std::max(1, options.threads);
    std::vector<Tally> tallies(static_cast<std::size_t>(n_threads));
    std::vector<std::thread> workers;
    std::atomic<long long> processed{0};

    for (int t = 0; t < n_threads; ++t) {
        workers.emplace_back([&, t]() {
            Tally& tally = tallies[static_cast<std::size_t>(t)];
            long long index = 0;
            enumerate_formulas_up_to(options.max_nodes, options.alphabet, [&](const Formula& f) {
                if (index++ % n_threads != t) return;
                FormulaChecker checker(options, f, tally);
                checker.run();
                if (options.check_map_chains)
                    check_formula_chains(f, options.alphabet, options.max_len,
                                         tally.map_chain_steps, tally.map_chain_violations,
                                         tally.samples, options.max_samples);
                processed.fetch_add(1, std::memory_order_relaxed);
            });
        });
    }
    for (auto& w : workers) w.join();

    CheckReport report;
    report.formulas = total;
    Tally merged;
    for (const Tally& t : tallies) merged.merge(t);
    report.pairs = merged.pairs;
    report.mismatches = merged.mismatches;
    report.early_verdicts = merged.early_verdicts;
    report.early_stop_violations = merged.early_stop_violations;
    report.single_pass_divergences = merged.single_pass_divergences;
    report.map_chain_steps = merged.map_chain_steps;
    report.map_chain_violations = merged.map_chain_violations;
    report.samples = std::move(merged.samples);
    if (report.samples.size() > static_cast<std::size_t>(options.max_samples))
        report.samples.resize(static_cast<std::size_t>(options.max_samples));
    return report;
}

std::string format_report(const CheckReport& r) {
    std::ostringstream os;
    os << "formulas:                " << r.formulas << "\n"
       << "verdict comparisons:     " << r.pairs << "\n"
       << "mismatches:              " << r.mismatches << "\n"
       << "early verdicts:          " << r.early_verdicts << "\n"
       << "early-stop violations:   " << r.early_stop_violations << "\n"
       << "single-pass divergences: " << r.single_pass_divergences << "\n";
    if (r.map_chain_steps > 0 || r.map_chain_violations > 0)
        os << "map-chain steps:         " << r.map_chain_steps << "\n"
           << "map-chain violations:    " << r.map_chain_violations << "\n";
    for (const std::string& s : r.samples) os << "  " << s << "\n";
    return os.str();
}

}  // namespace rulemon
