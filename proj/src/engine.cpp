#include "rulemon/engine.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace rulemon {

MonitorState::MonitorState(int atom_count, std::vector<AtomId> initial)
    : words_(static_cast<std::size_t>((atom_count + 63) / 64), 0) {
    for (AtomId id : initial) set(id);
}

std::vector<AtomId> MonitorState::atoms() const {
    std::vector<AtomId> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t bits = words_[w];
        while (bits) {
            int b = std::countr_zero(bits);
            out.push_back(static_cast<AtomId>(w * 64 + static_cast<std::size_t>(b)));
            bits &= bits - 1;
        }
    }
    return out;
}

int MonitorState::atom_count() const {
    int n = 0;
    for (std::uint64_t w : words_) n += std::popcount(w);
    return n;
}

Engine::Engine(const RuleSystem& sys) : sys_(&sys) {
    auto require = [&](const StateAtom& a) {
        auto id = sys.atoms.find(a);
        if (!id) throw MonitorError("engine: rule system is missing a marker atom");
        return *id;
    };
    end_id_ = require(StateAtom::end_marker());
    not_end_id_ = require(StateAtom::not_end());
    success_id_ = require(StateAtom::success());
    failure_id_ = require(StateAtom::failure());
    atom_count_ = sys.atoms.size();
    word_count_ = (atom_count_ + 63) / 64;

    auto compile = [&](const std::vector<Rule>& rules, std::vector<Compiled>& out) {
        out.reserve(rules.size());
        for (const Rule& r : rules) {
            Compiled c;
            c.head = r.head;
            for (AtomId id : r.body) {
                std::uint32_t w = static_cast<std::uint32_t>(id) >> 6;
                std::uint64_t m = 1ull << (id & 63);
                bool merged = false;
                for (auto& [cw, cm] : c.body)
                    if (cw == w) {
                        cm |= m;
                        merged = true;
                        break;
                    }
                if (!merged) c.body.emplace_back(w, m);
            }
            out.push_back(std::move(c));
        }
    };
    compile(sys.eval_rules, eval_);
    compile(sys.react_rules, react_);

    for (const std::string& name : sys.obs_names) {
        if (auto id = sys.atoms.find(StateAtom::obs_present(name))) obs_atoms_.emplace_back(name, *id);
        if (auto id = sys.atoms.find(StateAtom::obs_absent(name))) abs_atoms_.emplace_back(name, *id);
    }
}

MonitorState Engine::initial_state() const {
    return MonitorState(atom_count_, sys_->initial_state);
}

void Engine::ingest_cell(MonitorState& state, const Cell& cell, bool is_last) const {
    if (state.phase_ != Phase::AwaitingCell)
        throw MonitorError("ingest_cell: monitor is not awaiting a cell");
    if (state.cell_ready_) throw MonitorError("ingest_cell: cell already ingested");

    for (const auto& [name, id] : obs_atoms_)
        if (cell.contains(name)) state.set(id);
    for (const auto& [name, id] : abs_atoms_)
        if (!cell.contains(name)) state.set(id);
    for (const std::string& obs : cell.observations)
        if (!std::binary_search(sys_->obs_names.begin(), sys_->obs_names.end(), obs))
            state.extra_obs_.push_back(obs);
    state.set(is_last ? end_id_ : not_end_id_);
    state.cell_ready_ = true;
}

bool Engine::fires(const Compiled& rule, const std::vector<std::uint64_t>& words) const {
    for (const auto& [w, m] : rule.body)
        if ((words[w] & m) != m) return false;
    return true;
}

void Engine::evaluate(MonitorState& state, EngineObserver* obs, bool single_pass) const {
    if (state.phase_ != Phase::AwaitingCell || !state.cell_ready_)
        throw MonitorError("evaluate: no cell has been ingested");

    auto& words = state.words_;
    int rounds = 0;
    bool grew = true;
    while (grew) {
        grew = false;
        ++rounds;
        for (const Compiled& r : eval_) {
            if (!fires(r, words)) continue;
            std::uint64_t& word = words[static_cast<std::size_t>(r.head) >> 6];
            std::uint64_t mask = 1ull << (r.head & 63);
            if (word & mask) continue;
            word |= mask;
            grew = true;
            if (obs) obs->on_atom_derived(r.head);
        }
        if (single_pass) break;
    }
    state.fc_rounds_ = rounds;

    bool success = state.has(success_id_);
    bool failure = state.has(failure_id_);
    if (success && failure)
        throw MonitorError("evaluate: SUCCESS and FAILURE both derived (corrupt rule system)");
    state.phase_ = (success || failure) ? Phase::Halted : Phase::Evaluated;
}

void Engine::evaluate_fixpoint(MonitorState& state, EngineObserver* obs) const {
    evaluate(state, obs, false);
}

void Engine::evaluate_single_pass(MonitorState& state, EngineObserver* obs) const {
    evaluate(state, obs, true);
}

void Engine::react(MonitorState& state) const {
    if (state.phase_ == Phase::Halted) throw MonitorError("react: monitor already halted");
    if (state.phase_ != Phase::Evaluated) throw MonitorError("react: state not evaluated");

    std::vector<std::uint64_t> next(state.words_.size(), 0);
    for (const Compiled& r : react_)
        if (fires(r, state.words_)) next[static_cast<std::size_t>(r.head) >> 6] |= 1ull << (r.head & 63);
    state.words_ = std::move(next);
    state.extra_obs_.clear();
    state.cell_ready_ = false;
    state.phase_ = Phase::AwaitingCell;
    ++state.cell_index_;
}

std::optional<Verdict> Engine::verdict(const MonitorState& state) const {
    if (state.phase_ != Phase::Halted) return std::nullopt;
    Verdict v;
    v.outcome = state.has(success_id_) ? Verdict::Outcome::Success : Verdict::Outcome::Failure;
    v.at_cell = state.cell_index_;
    v.cells_consumed = state.cell_index_;
    return v;
}

std::vector<AtomId> fc_step(const RuleSystem& sys, const std::vector<Rule>& rules,
                            const std::vector<AtomId>& atoms) {
    std::vector<AtomId> sorted = atoms;
    std::sort(sorted.begin(), sorted.end());
    std::vector<AtomId> heads;
    for (const Rule& r : rules) {
        bool ok = true;
        for (AtomId b : r.body)
            if (!std::binary_search(sorted.begin(), sorted.end(), b)) {
                ok = false;
                break;
            }
        if (ok) heads.push_back(r.head);
    }
    std::sort(heads.begin(), heads.end());
    heads.erase(std::unique(heads.begin(), heads.end()), heads.end());
    (void)sys;
    return heads;
}

Verdict monitor_trace(const RuleSystem& sys, const Trace& trace, EvalMode mode,
                      EngineObserver* obs) {
    if (trace.length() == 0) throw MonitorError("monitor_trace: empty trace");
    Engine engine(sys);
    MonitorState state = engine.initial_state();
    for (int i = 0; i < trace.length(); ++i) {
        bool is_last = i + 1 == trace.length();
        engine.ingest_cell(state, trace.cells[static_cast<std::size_t>(i)], is_last);
        if (mode == EvalMode::SinglePass)
            engine.evaluate_single_pass(state, obs);
        else
            engine.evaluate_fixpoint(state, obs);
        if (auto v = engine.verdict(state)) return *v;
        if (is_last) throw MonitorError("monitor_trace: trace ended without a verdict");
        engine.react(state);
    }
    throw MonitorError("monitor_trace: unreachable");
}

StreamMonitor::StreamMonitor(const RuleSystem& sys, EvalMode mode)
    : engine_(sys), state_(engine_.initial_state()), mode_(mode) {}

std::optional<Verdict> StreamMonitor::feed(const Cell& cell, bool is_last) {
    if (halted()) throw MonitorError("feed: monitor already halted");
    if (saw_last_) throw MonitorError("feed: a cell was fed after the final cell");
    engine_.ingest_cell(state_, cell, is_last);
    if (mode_ == EvalMode::SinglePass)
        engine_.evaluate_single_pass(state_);
    else
        engine_.evaluate_fixpoint(state_);
    ++consumed_;
    saw_last_ = is_last;
    if (auto v = engine_.verdict(state_)) {
        Verdict out = *v;
        out.cells_consumed = consumed_;
        return out;
    }
    if (is_last) throw MonitorError("feed: trace ended without a verdict");
    engine_.react(state_);
    return std::nullopt;
}

Verdict monitor_stream(const RuleSystem& sys, const CellProvider& provider, EvalMode mode) {
    StreamMonitor monitor(sys, mode);
    while (auto item = provider()) {
        if (auto v = monitor.feed(item->first, item->second)) return *v;
    }
    throw MonitorError("monitor_stream: stream ended before an END-marked cell");
}

// ── evolution rendering ─────────────────────────────────────────────────

namespace {

struct RowCollector : EngineObserver {
    std::vector<AtomId> derived;
    void on_atom_derived(AtomId id) override { derived.push_back(id); }
};

std::string join_atoms(const RuleSystem& sys, const std::vector<AtomId>& ids,
                       const std::vector<std::string>& extra_obs) {
    std::string s;
    bool first = true;
    auto append = [&](const std::string& text) {
        if (!first) s += ", ";
        s += text;
        first = false;
    };
    for (AtomId id : ids) append(print_atom(sys.atoms.at(id), sys.subformulas));
    for (const std::string& o : extra_obs) append(o);
    return s;
}

// display order: activations, then observations, then truth atoms, then
// markers; internal bookkeeping atoms are hidden
std::vector<AtomId> display_atoms(const RuleSystem& sys, const MonitorState& state,
                                  bool truths) {
    std::vector<AtomId> acts, obs, markers, rest;
    for (AtomId id : state.atoms()) {
        const StateAtom& a = sys.atoms.at(id);
        switch (a.kind) {
            case StateAtom::Kind::RuleAct: acts.push_back(id); break;
            case StateAtom::Kind::ObsPresent: obs.push_back(id); break;
            case StateAtom::Kind::EndMarker: markers.push_back(id); break;
            case StateAtom::Kind::ObsAbsent:
            case StateAtom::Kind::NotEnd:
            case StateAtom::Kind::Repeat: break;
            case StateAtom::Kind::Truth:
            case StateAtom::Kind::Success:
            case StateAtom::Kind::Failure:
                if (truths) rest.push_back(id);
                break;
        }
    }
    std::vector<AtomId> out = acts;
    out.insert(out.end(), obs.begin(), obs.end());
    out.insert(out.end(), markers.begin(), markers.end());
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

}  // namespace

std::string format_evolution(const RuleSystem& sys, const Trace& trace, EvalMode mode,
                             bool color) {
    const char* bold = color ? "\x1b[1m" : "";
    const char* green = color ? "\x1b[32m" : "";
    const char* red = color ? "\x1b[31m" : "";
    const char* reset = color ? "\x1b[0m" : "";

    Engine engine(sys);
    MonitorState state = engine.initial_state();
    std::ostringstream out;

    for (int i = 0; i < trace.length(); ++i) {
        bool is_last = i + 1 == trace.length();
        const Cell& cell = trace.cells[static_cast<std::size_t>(i)];

        out << bold << "cell " << (i + 1) << reset << "\n";
        out << "  state | " << join_atoms(sys, display_atoms(sys, state, false), {}) << "\n";

        engine.ingest_cell(state, cell, is_last);
        out << "  + obs | "
            << join_atoms(sys, display_atoms(sys, state, false), state.extra_observations())
            << "\n";

        RowCollector rows;
        if (mode == EvalMode::SinglePass)
            engine.evaluate_single_pass(state, &rows);
        else
            engine.evaluate_fixpoint(state, &rows);

        std::vector<AtomId> shown;
        for (AtomId id : rows.derived) {
            const StateAtom& a = sys.atoms.at(id);
            if (a.kind == StateAtom::Kind::Truth || a.kind == StateAtom::Kind::Success ||
                a.kind == StateAtom::Kind::Failure)
                shown.push_back(id);
        }
        out << "  eval  | " << join_atoms(sys, shown, {}) << "\n";

        if (auto v = engine.verdict(state)) {
            bool ok = v->outcome == Verdict::Outcome::Success;
            out << "  STOP  | " << (ok ? green : red)
                << (ok ? "PROPERTY SATISFIED" : "PROPERTY FALSIFIED") << reset << "\n";
            return out.str();
        }
        if (is_last) throw MonitorError("format_evolution: trace ended without a verdict");
        engine.react(state);
        out << "  react | " << join_atoms(sys, display_atoms(sys, state, false), {}) << "\n\n";
    }
    return out.str();
}

}  // namespace rulemon
