// engine.hpp — forward-chaining execution of a rule system over a trace:
// per-cell closed-world ingestion, evaluation to fixpoint (or in a single
// post-order pass), verdict detection and the reactivation flush.

#ifndef RULEMON_ENGINE_HPP
#define RULEMON_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rulemon/rulegen.hpp"
#include "rulemon/trace.hpp"

namespace rulemon {

class MonitorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Phase : std::uint8_t { AwaitingCell, Evaluated, Halted };

enum class EvalMode : std::uint8_t { Fixpoint, SinglePass };

struct Verdict {
    enum class Outcome : std::uint8_t { Success, Failure };
    Outcome outcome;
    int at_cell = 0;  // 1-based cell where the verdict was issued
    long long cells_consumed = 0;

    bool success() const { return outcome == Outcome::Success; }
};

// The mutable per-trace state: a set of atoms over the rule system's atom
// universe plus the extra observations of the current cell that no rule
// mentions (kept for display only).
class MonitorState {
public:
    MonitorState() = default;
    MonitorState(int atom_count, std::vector<AtomId> initial);

    Phase phase() const { return phase_; }
    int cell_index() const { return cell_index_; }
    bool cell_ready() const { return cell_ready_; }
    int fc_rounds() const { return fc_rounds_; }

    bool has(AtomId id) const {
        return (words_[static_cast<std::size_t>(id) >> 6] >> (id & 63)) & 1u;
    }
    void set(AtomId id) { words_[static_cast<std::size_t>(id) >> 6] |= 1ull << (id & 63); }

    std::vector<AtomId> atoms() const;          // sorted
    int atom_count() const;                     // population
    const std::vector<std::string>& extra_observations() const { return extra_obs_; }

    bool operator==(const MonitorState& other) const { return words_ == other.words_; }

private:
    friend class Engine;
    std::vector<std::uint64_t> words_;
    std::vector<std::string> extra_obs_;
    Phase phase_ = Phase::AwaitingCell;
    bool cell_ready_ = false;
    int cell_index_ = 1;
    int fc_rounds_ = 0;
};

// Observer hooks for the explain view and the map-function checker.
struct EngineObserver {
    virtual ~EngineObserver() = default;
    virtual void on_atom_derived(AtomId /*atom*/) {}
};

// Compiled per rule system, shareable across concurrent monitor states.
class Engine {
public:
    explicit Engine(const RuleSystem& sys);

    const RuleSystem& system() const { return *sys_; }
    MonitorState initial_state() const;

    // Adds the cell's observations, the closed-world absence atoms and the
    // END/not-END marker.  Requires phase AwaitingCell.
    void ingest_cell(MonitorState& state, const Cell& cell, bool is_last) const;

    // Closes the state under the evaluation rules; phase becomes Evaluated,
    // or Halted when SUCCESS/FAILURE was derived.
    void evaluate_fixpoint(MonitorState& state, EngineObserver* obs = nullptr) const;
    void evaluate_single_pass(MonitorState& state, EngineObserver* obs = nullptr) const;

    // One application of the reactivation rules; the result replaces the
    // state (flush).  Requires phase Evaluated.
    void react(MonitorState& state) const;

    std::optional<Verdict> verdict(const MonitorState& state) const;

private:
    struct Compiled {
        std::vector<std::pair<std::uint32_t, std::uint64_t>> body;  // (word, mask)
        AtomId head;
    };
    void evaluate(MonitorState& state, EngineObserver* obs, bool single_pass) const;
    bool fires(const Compiled& rule, const std::vector<std::uint64_t>& words) const;

    const RuleSystem* sys_;
    std::vector<Compiled> eval_, react_;
    std::vector<std::pair<std::string, AtomId>> obs_atoms_;   // present
    std::vector<std::pair<std::string, AtomId>> abs_atoms_;   // absent
    AtomId end_id_, not_end_id_, success_id_, failure_id_;
    int atom_count_;
    int word_count_;
};

// Pure forward chaining: the heads of the rules whose bodies are contained
// in `atoms`.
std::vector<AtomId> fc_step(const RuleSystem& sys, const std::vector<Rule>& rules,
                            const std::vector<AtomId>& atoms);

// Monitors a complete trace; never reads past the halting cell.  Throws
// MonitorError when the trace ends without a verdict or a state derives
// both verdicts (either indicates a corrupt rule system).
Verdict monitor_trace(const RuleSystem& sys, const Trace& trace,
                      EvalMode mode = EvalMode::SinglePass, EngineObserver* obs = nullptr);

// Pull-based online monitoring.
class StreamMonitor {
public:
    explicit StreamMonitor(const RuleSystem& sys, EvalMode mode = EvalMode::SinglePass);

    // Feeds one cell; returns the verdict once reached (Pending = nullopt).
    std::optional<Verdict> feed(const Cell& cell, bool is_last);

    bool halted() const { return state_.phase() == Phase::Halted; }
    long long cells_consumed() const { return consumed_; }
    const MonitorState& state() const { return state_; }
    const Engine& engine() const { return engine_; }

private:
    Engine engine_;
    MonitorState state_;
    EvalMode mode_;
    long long consumed_ = 0;
    bool saw_last_ = false;
};

using CellProvider = std::function<std::optional<std::pair<Cell, bool>>()>;

// Drives a StreamMonitor from a provider; reports an unterminated stream
// (provider exhausted before an END-marked cell) as MonitorError.
Verdict monitor_stream(const RuleSystem& sys, const CellProvider& provider,
                       EvalMode mode = EvalMode::SinglePass);

// Renders the four-row evolution table (state / + obs / eval / react) for
// each consumed cell; `color` adds ANSI highlighting.
std::string format_evolution(const RuleSystem& sys, const Trace& trace,
                             EvalMode mode = EvalMode::SinglePass, bool color = false);

}  // namespace rulemon

#endif
