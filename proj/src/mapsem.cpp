#include "rulemon/mapsem.hpp"

#include <algorithm>
#include <sstream>

#include "rulemon/enumerate.hpp"
#include "rulemon/oracle.hpp"
#include "rulemon/traceio.hpp"

namespace rulemon {

JudgementPtr jtop() {
    auto j = std::make_unique<Judgement>();
    j->kind = Judgement::Kind::Top;
    return j;
}
JudgementPtr jbottom() {
    auto j = std::make_unique<Judgement>();
    j->kind = Judgement::Kind::Bottom;
    return j;
}
JudgementPtr jatom(int index, const Formula& formula) {
    auto j = std::make_unique<Judgement>();
    j->kind = Judgement::Kind::Judge;
    j->index = index;
    j->formula = clone(formula);
    return j;
}
JudgementPtr jjoin(JudgementPtr l, JudgementPtr r) {
    auto j = std::make_unique<Judgement>();
    j->kind = Judgement::Kind::Join;
    j->lhs = std::move(l);
    j->rhs = std::move(r);
    return j;
}
JudgementPtr jmeet(JudgementPtr l, JudgementPtr r) {
    auto j = std::make_unique<Judgement>();
    j->kind = Judgement::Kind::Meet;
    j->lhs = std::move(l);
    j->rhs = std::move(r);
    return j;
}
JudgementPtr jclone(const Judgement& j) {
    auto c = std::make_unique<Judgement>();
    c->kind = j.kind;
    c->index = j.index;
    if (j.formula) c->formula = clone(*j.formula);
    if (j.lhs) c->lhs = jclone(*j.lhs);
    if (j.rhs) c->rhs = jclone(*j.rhs);
    return c;
}

bool jequal(const Judgement& a, const Judgement& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Judgement::Kind::Top:
        case Judgement::Kind::Bottom: return true;
        case Judgement::Kind::Judge:
            return a.index == b.index && structurally_equal(*a.formula, *b.formula);
        case Judgement::Kind::Join:
        case Judgement::Kind::Meet:
            return jequal(*a.lhs, *b.lhs) && jequal(*a.rhs, *b.rhs);
    }
    return false;
}

std::string print_judgement(const Judgement& j) {
    switch (j.kind) {
        case Judgement::Kind::Top: return "T";
        case Judgement::Kind::Bottom: return "_|_";
        case Judgement::Kind::Judge:
            return "[u," + std::to_string(j.index) + " |= " + print_formula(*j.formula) + "]";
        case Judgement::Kind::Join:
            return "(" + print_judgement(*j.lhs) + " | " + print_judgement(*j.rhs) + ")";
        case Judgement::Kind::Meet:
            return "(" + print_judgement(*j.lhs) + " & " + print_judgement(*j.rhs) + ")";
    }
    return "?";
}

JudgementPtr simplify(const Judgement& j) {
    switch (j.kind) {
        case Judgement::Kind::Top: return jtop();
        case Judgement::Kind::Bottom: return jbottom();
        case Judgement::Kind::Judge: return jclone(j);
        case Judgement::Kind::Join: {
            JudgementPtr l = simplify(*j.lhs);
            JudgementPtr r = simplify(*j.rhs);
            if (l->kind == Judgement::Kind::Top || r->kind == Judgement::Kind::Top) return jtop();
            if (l->kind == Judgement::Kind::Bottom) return r;
            if (r->kind == Judgement::Kind::Bottom) return l;
            return jjoin(std::move(l), std::move(r));
        }
        case Judgement::Kind::Meet: {
            JudgementPtr l = simplify(*j.lhs);
            JudgementPtr r = simplify(*j.rhs);
            if (l->kind == Judgement::Kind::Bottom || r->kind == Judgement::Kind::Bottom)
                return jbottom();
            if (l->kind == Judgement::Kind::Top) return r;
            if (r->kind == Judgement::Kind::Top) return l;
            return jmeet(std::move(l), std::move(r));
        }
    }
    return jtop();
}

// ── map ─────────────────────────────────────────────────────────────────

namespace {

struct Mapper {
    const RuleSystem& sys;
    const MonitorState& state;
    int index;
    UntilBMap b_clause;

    bool has(const StateAtom& a) const {
        auto id = sys.atoms.find(a);
        return id && state.has(*id);
    }

    // the qualifier of the node's undecided evaluation or activation
    std::optional<Qualifier> aux_of(int node) const {
        for (auto [v, q] : truth_domain(sys.subformulas.at(node).op))
            if (v == TruthValue::U && has(StateAtom::truth(node, TruthValue::U, q))) return q;
        for (Qualifier q : activation_modes(sys.subformulas.at(node).op))
            if (has(StateAtom::rule_act(node, q))) return q;
        return std::nullopt;
    }

    JudgementPtr next_until_atom(const Formula& f) const {
        FormulaPtr until = make_binary(Op::Until, clone(f.left()), clone(f.right()));
        FormulaPtr wrapped = make_unary(Op::Next, std::move(until));
        JudgementPtr j = std::make_unique<Judgement>();
        j->kind = Judgement::Kind::Judge;
        j->index = index;
        j->formula = std::move(wrapped);
        return j;
    }

    JudgementPtr map(const Formula& f) const {
        const int node = f.post_index;
        if (has(StateAtom::success())) return jtop();
        if (has(StateAtom::failure())) return jbottom();
        if (has(StateAtom::truth(node, TruthValue::T))) return jtop();
        if (has(StateAtom::truth(node, TruthValue::F))) return jbottom();

        std::optional<Qualifier> aux = aux_of(node);
        if (!aux) throw MapError("map_state: node " + print_formula(f) + " not tracked by state");

        switch (f.op) {
            case Op::True: return jtop();
            case Op::End: return jatom(index, f);
            case Op::Atom:
            case Op::NegAtom: return jatom(index, f);
            case Op::Or:
            case Op::And: {
                if (*aux == Qualifier::L) return map(f.left());
                if (*aux == Qualifier::R) return map(f.right());
                JudgementPtr l = map(f.left());
                JudgementPtr r = map(f.right());
                return f.op == Op::Or ? jjoin(std::move(l), std::move(r))
                                      : jmeet(std::move(l), std::move(r));
            }
            case Op::Until: {
                if (*aux == Qualifier::L) return map(f.left());
                if (*aux == Qualifier::R) return map(f.right());
                if (*aux == Qualifier::A)
                    return jjoin(map(f.right()),
                                 jmeet(map(f.left()), next_until_atom(f)));
                switch (b_clause) {
                    case UntilBMap::AsWritten:
                        return jmeet(map(f.right()), next_until_atom(f));
                    case UntilBMap::Unfolding:
                        return jjoin(map(f.right()),
                                     jmeet(map(f.left()), next_until_atom(f)));
                    case UntilBMap::LeftChain:
                        return jmeet(map(f.left()), next_until_atom(f));
                }
                return jtop();
            }
            case Op::Next:
            case Op::WeakNext:
                if (*aux == Qualifier::M) return map(f.left());
                return jatom(index, f);
            case Op::Eventually:
            case Op::Always:
                throw MapError("map_state: eventually/always are outside the map translation");
            case Op::Not: break;
        }
        throw MapError("map_state: corrupt formula");
    }
};

}  // namespace

JudgementPtr map_state(const RuleSystem& sys, const MonitorState& state, int index,
                       UntilBMap b_clause) {
    Mapper m{sys, state, index, b_clause};
    return m.map(*sys.formula);
}

// ── chain validation ────────────────────────────────────────────────────

namespace {

// Definitional expansion to a canonical shape: or/and judgement atoms
// split, until atoms unfold one step (the X-wrapped until below stays as a
// leaf), true becomes top.  Strong/weak next and literal atoms stay.
JudgementPtr expand(const Judgement& j) {
    switch (j.kind) {
        case Judgement::Kind::Top: return jtop();
        case Judgement::Kind::Bottom: return jbottom();
        case Judgement::Kind::Join: return jjoin(expand(*j.lhs), expand(*j.rhs));
        case Judgement::Kind::Meet: return jmeet(expand(*j.lhs), expand(*j.rhs));
        case Judgement::Kind::Judge: {
            const Formula& f = *j.formula;
            switch (f.op) {
                case Op::True: return jtop();
                case Op::Or:
                    return jjoin(expand(*jatom(j.index, f.left())),
                                 expand(*jatom(j.index, f.right())));
                case Op::And:
                    return jmeet(expand(*jatom(j.index, f.left())),
                                 expand(*jatom(j.index, f.right())));
                case Op::Until: {
                    FormulaPtr wrapped = make_unary(
                        Op::Next, make_binary(Op::Until, clone(f.left()), clone(f.right())));
                    JudgementPtr tail = jatom(j.index, *wrapped);
                    return jjoin(expand(*jatom(j.index, f.right())),
                                 jmeet(expand(*jatom(j.index, f.left())), std::move(tail)));
                }
                default: return jclone(j);
            }
        }
    }
    return jtop();
}

// At reactivation indices advance: [i |= X psi] and [i |= W psi] become
// [i+1 |= psi].
JudgementPtr strip_next(const Judgement& j) {
    switch (j.kind) {
        case Judgement::Kind::Top: return jtop();
        case Judgement::Kind::Bottom: return jbottom();
        case Judgement::Kind::Join: return jjoin(strip_next(*j.lhs), strip_next(*j.rhs));
        case Judgement::Kind::Meet: return jmeet(strip_next(*j.lhs), strip_next(*j.rhs));
        case Judgement::Kind::Judge:
            if (j.formula->op == Op::Next || j.formula->op == Op::WeakNext)
                return jatom(j.index + 1, j.formula->left());
            return jclone(j);
    }
    return jtop();
}

void collect_leaves(Judgement& j, std::vector<Judgement*>& out) {
    if (j.kind == Judgement::Kind::Judge) {
        out.push_back(&j);
        return;
    }
    if (j.lhs) collect_leaves(*j.lhs, out);
    if (j.rhs) collect_leaves(*j.rhs, out);
}

// Substitutes the leaves selected by `mask` (in depth-first order) with
// their oracle truth over u.
JudgementPtr substitute(const Judgement& j, unsigned mask, const Trace& u) {
    struct Sub {
        unsigned mask;
        const Trace& u;
        int counter = 0;

        JudgementPtr walk(const Judgement& n) {
            switch (n.kind) {
                case Judgement::Kind::Top: return jtop();
                case Judgement::Kind::Bottom: return jbottom();
                case Judgement::Kind::Join: {
                    auto l = walk(*n.lhs);
                    auto r = walk(*n.rhs);
                    return jjoin(std::move(l), std::move(r));
                }
                case Judgement::Kind::Meet: {
                    auto l = walk(*n.lhs);
                    auto r = walk(*n.rhs);
                    return jmeet(std::move(l), std::move(r));
                }
                case Judgement::Kind::Judge: {
                    int i = counter++;
                    if (mask & (1u << i)) {
                        bool v = n.index < u.length() && oracle_eval(*n.formula, u, n.index);
                        return v ? jtop() : jbottom();
                    }
                    return jclone(n);
                }
            }
            return jtop();
        }
    };
    Sub sub{mask, u};
    return sub.walk(j);
}

// r2 is reachable from r1 by substituting some judgement atoms with their
// truth over u, plus lattice simplification (and, when `reacted`, the
// index increment applied first).
bool valid_step(const Judgement& r1, const Judgement& r2, const Trace& u, bool reacted) {
    JudgementPtr from = reacted ? strip_next(r1) : jclone(r1);
    JudgementPtr e1 = expand(*from);
    JudgementPtr e2 = simplify(*expand(r2));

    std::vector<Judgement*> leaves;
    collect_leaves(*e1, leaves);
    if (leaves.size() > 16) return jequal(*simplify(*e1), *e2);  // give up on search

    const unsigned n = 1u << leaves.size();
    for (unsigned mask = 0; mask < n; ++mask) {
        JudgementPtr candidate = simplify(*substitute(*e1, mask, u));
        if (jequal(*candidate, *e2)) return true;
    }
    return false;
}

struct Recorder : EngineObserver {
    std::vector<AtomId> derived;
    void on_atom_derived(AtomId id) override { derived.push_back(id); }
};

}  // namespace

namespace {

bool contains_derived_ops(const Formula& f) {
    if (f.op == Op::Eventually || f.op == Op::Always) return true;
    if (f.lhs && contains_derived_ops(*f.lhs)) return true;
    return f.rhs && contains_derived_ops(*f.rhs);
}

}  // namespace

ChainResult check_rewriting_chain(const Formula& f, const Trace& trace, UntilBMap b_clause) {
    if (contains_derived_ops(f))
        throw MapError("check_rewriting_chain: desugar eventually/always first");

    RuleSystem sys = initialise(f);
    Engine engine(sys);
    ChainResult result;

    MonitorState state = engine.initial_state();
    int index = 0;
    JudgementPtr prev;

    auto push = [&](const MonitorState& s, bool reacted) {
        JudgementPtr j = simplify(*map_state(sys, s, index, b_clause));
        ChainStep step;
        step.reacted = reacted;
        step.valid = !prev || valid_step(*prev, *j, trace, reacted);
        if (!step.valid) ++result.violations;
        std::string atoms;
        for (AtomId id : s.atoms()) {
            const StateAtom& a = sys.atoms.at(id);
            if (a.kind == StateAtom::Kind::ObsAbsent || a.kind == StateAtom::Kind::NotEnd ||
                a.kind == StateAtom::Kind::Repeat)
                continue;
            if (!atoms.empty()) atoms += ", ";
            atoms += print_atom(a, sys.subformulas);
        }
        step.state_text = atoms;
        step.judgement_text = print_judgement(*j);
        result.steps.push_back(std::move(step));
        prev = std::move(j);
    };

    push(state, false);
    for (int i = 0; i < trace.length(); ++i) {
        bool is_last = i + 1 == trace.length();
        engine.ingest_cell(state, trace.cells[static_cast<std::size_t>(i)], is_last);
        push(state, false);

        // replay the evaluation atom by atom to map every intermediate state
        MonitorState shadow = state;
        Recorder recorder;
        engine.evaluate_single_pass(state, &recorder);
        for (AtomId id : recorder.derived) {
            shadow.set(id);
            push(shadow, false);
        }

        if (auto v = engine.verdict(state)) {
            result.verdict = *v;
            bool top = prev->kind == Judgement::Kind::Top;
            bool bottom = prev->kind == Judgement::Kind::Bottom;
            result.final_matches_verdict = v->success() ? top : bottom;
            return result;
        }
        if (is_last) throw MonitorError("check_rewriting_chain: no verdict at trace end");
        engine.react(state);
        ++index;
        push(state, true);
    }
    return result;
}

void check_formula_chains(const Formula& f, const std::vector<std::string>& alphabet,
                          int max_len, long long& steps, long long& violations,
                          std::vector<std::string>& samples, int max_samples) {
    if (contains_derived_ops(f)) return;

    for (int len = 1; len <= max_len; ++len) {
        enumerate_traces(len, alphabet, [&](const Trace& u) {
            ChainResult r = check_rewriting_chain(f, u);
            steps += static_cast<long long>(r.steps.size());
            long long bad = r.violations + (r.final_matches_verdict ? 0 : 1);
            if (bad > 0) {
                violations += bad;
                if (samples.size() < static_cast<std::size_t>(max_samples))
                    samples.push_back("map-chain violation: " + print_formula(f) + "  over  " +
                                      serialize_trace(u));
            }
        });
    }
}

}  // namespace rulemon
