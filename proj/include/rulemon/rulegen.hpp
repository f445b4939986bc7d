// rulegen.hpp — compilation of NNF formulae into rule systems: evaluation
// rules, reactivation rules and the initial state.
//
// Every rule is a Horn clause in implication form over state atoms.  Rules
// with several head conjuncts (reactivations) are stored as one clause per
// head.  Rule bodies are positive: "a is not observed" conditions use
// ObsAbsent atoms materialised by the engine's per-cell closed-world step.

#ifndef RULEMON_RULEGEN_HPP
#define RULEMON_RULEGEN_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rulemon/formula.hpp"

namespace rulemon {

enum class TruthValue : std::uint8_t { T, F, U };  // U prints as "?"

enum class Qualifier : std::uint8_t { None, B, L, R, A, M, K };

char qualifier_letter(Qualifier q);  // '\0' for None

// One element of the monitor state.
struct StateAtom {
    enum class Kind : std::uint8_t {
        ObsPresent,   // obs:a      — a observed in the current cell
        ObsAbsent,    // !obs:a     — a not observed (closed world)
        EndMarker,    // END        — current cell is the last one
        NotEnd,       // !END
        RuleAct,      // R[phi]Z    — node under scrutiny, mode Z
        Truth,        // [phi]VZ    — truth evaluation of node
        Success,
        Failure,
        Repeat,
    };

    Kind kind = Kind::Success;
    int node = -1;                        // RuleAct / Truth
    TruthValue value = TruthValue::T;     // Truth
    Qualifier qual = Qualifier::None;     // RuleAct / Truth
    std::string obs;                      // ObsPresent / ObsAbsent

    static StateAtom obs_present(std::string name);
    static StateAtom obs_absent(std::string name);
    static StateAtom end_marker();
    static StateAtom not_end();
    static StateAtom rule_act(int node, Qualifier q = Qualifier::None);
    static StateAtom truth(int node, TruthValue v, Qualifier q = Qualifier::None);
    static StateAtom success();
    static StateAtom failure();
    static StateAtom repeat();

    friend auto operator<=>(const StateAtom&, const StateAtom&) = default;
};

using AtomId = std::int32_t;

// Interns StateAtoms to dense ids for the chaining engine.
class AtomTable {
public:
    AtomId intern(const StateAtom& atom);
    std::optional<AtomId> find(const StateAtom& atom) const;
    const StateAtom& at(AtomId id) const { return atoms_[static_cast<std::size_t>(id)]; }
    int size() const { return static_cast<int>(atoms_.size()); }

private:
    std::vector<StateAtom> atoms_;
    std::map<StateAtom, AtomId> index_;
};

enum class RuleStage : std::uint8_t { Evaluation, Reactivation };

struct Rule {
    std::vector<AtomId> body;  // sorted, distinct, nonempty
    AtomId head = -1;
    RuleStage stage = RuleStage::Evaluation;
    int owner = -1;  // post-order index of the node the rule belongs to
};

struct RuleSystem {
    FormulaPtr formula;           // compiled formula (after operand normalisation)
    SubformulaTable subformulas;  // post-order table over `formula`
    AtomTable atoms;
    std::vector<Rule> eval_rules;   // sorted by owner post-order index
    std::vector<Rule> react_rules;
    std::vector<AtomId> initial_state;       // sorted
    std::vector<std::string> obs_names;      // observation names (closed world)
    int root = -1;

    int rule_count() const {
        return static_cast<int>(eval_rules.size() + react_rules.size());
    }
};

// ── evaluation tables ───────────────────────────────────────────────────
//
// A TableCell is one row of an operator's evaluation table: under
// activation mode `mode`, with the child truth values of `inputs` (and the
// END condition), the node evaluates to (out_value, out_qual).  Cells for
// leaves use observation inputs instead of child truth values.

struct TableCell {
    struct Input {
        enum class Kind : std::uint8_t { ChildTruth, ObsPresent, ObsAbsent };
        Kind kind = Kind::ChildTruth;
        int child = 0;  // 0 = left/only child, 1 = right child
        TruthValue value = TruthValue::T;
        Qualifier qual = Qualifier::None;
    };
    enum class EndCond : std::uint8_t { Any, OnlyEnd, OnlyNotEnd };

    Qualifier mode = Qualifier::None;
    std::vector<Input> inputs;
    EndCond end = EndCond::Any;
    TruthValue out_value = TruthValue::T;
    Qualifier out_qual = Qualifier::None;
};

// Child information build_tables needs: the operator decides both which
// truth values the child can produce mid-trace and the child's forced
// value in the last cell (strong next is false at END, weak next true).
struct TableContext {
    Op op;                          // operator the table is for
    std::optional<Op> left_child;   // absent for leaves
    std::optional<Op> right_child;  // binary operators only
};

std::vector<TableCell> build_tables(Op op, const TableContext& ctx);

// Truth values a node with this operator can emit mid-trace.
std::vector<std::pair<TruthValue, Qualifier>> truth_domain(Op op);

// Activation modes an operator's rules are generated for.
std::vector<Qualifier> activation_modes(Op op);

// ── compilation ─────────────────────────────────────────────────────────

struct CompileOptions {
    // Normalises until/eventually/always operands whose top-level strong or
    // weak next operator the rule vocabulary cannot track, using
    // semantics-preserving identities (e.g. (X a) U (X b) = X(a U b)).
    bool normalize_operands = true;
};

// Algorithm: recursive post-order assembly.  Leaves contribute two
// evaluation rules and no reactivation rules; composite operators merge the
// child systems and add their own table rules, reactivation rules and
// initial activations; the root gets the SUCCESS/FAILURE/REPEAT rules.
RuleSystem initialise(const Formula& f, const CompileOptions& options = {});

// parse + NNF + operand normalisation + initialise
RuleSystem compile_formula(const std::string& text, const CompileOptions& options = {});

// The operand normalisation pass on its own (exposed for testing: every
// rewrite must be oracle-equivalent).
FormulaPtr normalize_operands(const Formula& f);

// ── printing ────────────────────────────────────────────────────────────

std::string print_atom(const StateAtom& atom, const SubformulaTable& table);
std::string print_rule(const Rule& rule, const RuleSystem& sys);

// Line-oriented dump: sections # EVALUATION, # REACTIVATION, # INITIAL.
std::string dump_rule_system(const RuleSystem& sys);

}  // namespace rulemon

#endif
