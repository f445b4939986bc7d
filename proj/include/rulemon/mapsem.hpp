// mapsem.hpp — translation of monitor states into FLTL judgements and the
// rewriting-chain checker: every intermediate state of a run must map onto
// a judgement reachable from [u,0 |= phi] by valid rewriting steps
// (value substitution, lattice simplification, definitional expansion and
// the index increment at reactivation).

#ifndef RULEMON_MAPSEM_HPP
#define RULEMON_MAPSEM_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "rulemon/engine.hpp"
#include "rulemon/rulegen.hpp"
#include "rulemon/trace.hpp"

namespace rulemon {

class MapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Expression over { top, bottom, [u,i |= psi], join, meet }.
struct Judgement {
    enum class Kind : std::uint8_t { Top, Bottom, Judge, Join, Meet };
    Kind kind = Kind::Top;
    int index = 0;         // Judge
    FormulaPtr formula;    // Judge (owned; may be synthesised, e.g. X(a U b))
    std::unique_ptr<Judgement> lhs, rhs;
};
using JudgementPtr = std::unique_ptr<Judgement>;

JudgementPtr jtop();
JudgementPtr jbottom();
JudgementPtr jatom(int index, const Formula& formula);
JudgementPtr jjoin(JudgementPtr l, JudgementPtr r);
JudgementPtr jmeet(JudgementPtr l, JudgementPtr r);
JudgementPtr jclone(const Judgement& j);

bool jequal(const Judgement& a, const Judgement& b);
std::string print_judgement(const Judgement& j);

// top|x = top, bottom|x = x, bottom&x = bottom, top&x = x, applied to a
// fixed point.
JudgementPtr simplify(const Judgement& j);

// Reading of the until "B" clause (the pending-left reading is what the
// generated tables implement; the other two are kept for comparison).
enum class UntilBMap : std::uint8_t {
    AsWritten,   // map(psi2) meet map(X(psi1 U psi2))
    Unfolding,   // map(psi2) join (map(psi1) meet map(X(psi1 U psi2)))
    LeftChain,   // map(psi1) meet map(X(psi1 U psi2))
};

// Translates a monitor state into a judgement with trace indices based at
// `index`.  Eventually/Always nodes are unsupported by design.
JudgementPtr map_state(const RuleSystem& sys, const MonitorState& state, int index,
                       UntilBMap b_clause = UntilBMap::LeftChain);

// ── rewriting chains ────────────────────────────────────────────────────

struct ChainStep {
    std::string state_text;      // the state snapshot, printed
    std::string judgement_text;  // its map image (simplified)
    bool valid = true;           // step from the previous snapshot is a
                                 // valid rewriting
    bool reacted = false;        // an index increment happened before it
};

struct ChainResult {
    std::vector<ChainStep> steps;
    long long violations = 0;
    bool final_matches_verdict = false;
    Verdict verdict{Verdict::Outcome::Failure, 0, 0};
};

// Runs the monitor over the trace, mapping every intermediate state
// (initial, after observation, after each derived atom, after each
// reactivation) and validating each consecutive judgement pair.
ChainResult check_rewriting_chain(const Formula& f, const Trace& trace,
                                  UntilBMap b_clause = UntilBMap::LeftChain);

// Bulk driver used by the equivalence harness: checks the chains of every
// trace of length 1..max_len over the alphabet.  No-op for formulae with
// Eventually/Always nodes.
void check_formula_chains(const Formula& f, const std::vector<std::string>& alphabet,
                          int max_len, long long& steps, long long& violations,
                          std::vector<std::string>& samples, int max_samples);

}  // namespace rulemon

#endif
