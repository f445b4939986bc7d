#include "rulemon/rulegen.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>

namespace rulemon {

char qualifier_letter(Qualifier q) {
    switch (q) {
        case Qualifier::None: return '\0';
        case Qualifier::B: return 'B';
        case Qualifier::L: return 'L';
        case Qualifier::R: return 'R';
        case Qualifier::A: return 'A';
        case Qualifier::M: return 'M';
        case Qualifier::K: return 'K';
    }
    return '\0';
}

StateAtom StateAtom::obs_present(std::string name) {
    StateAtom a;
    a.kind = Kind::ObsPresent;
    a.obs = std::move(name);
    return a;
}
StateAtom StateAtom::obs_absent(std::string name) {
    StateAtom a;
    a.kind = Kind::ObsAbsent;
    a.obs = std::move(name);
    return a;
}
StateAtom StateAtom::end_marker() {
    StateAtom a;
    a.kind = Kind::EndMarker;
    return a;
}
StateAtom StateAtom::not_end() {
    StateAtom a;
    a.kind = Kind::NotEnd;
    return a;
}
StateAtom StateAtom::rule_act(int node, Qualifier q) {
    StateAtom a;
    a.kind = Kind::RuleAct;
    a.node = node;
    a.qual = q;
    return a;
}
StateAtom StateAtom::truth(int node, TruthValue v, Qualifier q) {
    StateAtom a;
    a.kind = Kind::Truth;
    a.node = node;
    a.value = v;
    a.qual = q;
    return a;
}
StateAtom StateAtom::success() {
    StateAtom a;
    a.kind = Kind::Success;
    return a;
}
StateAtom StateAtom::failure() {
    StateAtom a;
    a.kind = Kind::Failure;
    return a;
}
StateAtom StateAtom::repeat() {
    StateAtom a;
    a.kind = Kind::Repeat;
    return a;
}

AtomId AtomTable::intern(const StateAtom& atom) {
    auto it = index_.find(atom);
    if (it != index_.end()) return it->second;
    AtomId id = static_cast<AtomId>(atoms_.size());
    atoms_.push_back(atom);
    index_.emplace(atom, id);
    return id;
}

std::optional<AtomId> AtomTable::find(const StateAtom& atom) const {
    auto it = index_.find(atom);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

// ── operand normalisation ───────────────────────────────────────────────
//
// The rule vocabulary indexes activations and truth evaluations by node,
// so a node can carry at most one pending obligation.  A strong/weak next
// operand of a reactivating operator would need two (the pending one and
// the freshly restarted one); these identities move the next operator out
// of that position.  Each is an FLTL equivalence, property-tested against
// the oracle:
//
//   X a | X b = X(a | b)      X a & X b = X(a & b)      (likewise W/W, X/W)
//   F X a = X F a             F W a = true
//   G X a = false             G W a = W G a
//   (X a) U (X b) = X(a U b)
//   (X a) U (W b) = END | X((a U b) | (a U (a & END)))
//   (X a) U b     = b | X(a U (a & b))
//   (W a) U b     = (X a) U b   — chain positions never fall on the last cell
//   a U (b | c)   = (a U b) | (a U c)   — applied when the right side
//                                          carries a next operator

namespace {

bool is_next_like(const Formula& f) {
    return f.op == Op::Next || f.op == Op::WeakNext;
}

// true if the subtree contains X/W not shielded below U, F or G
bool has_open_next(const Formula& f) {
    if (is_next_like(f)) return true;
    if (f.op == Op::Or || f.op == Op::And)
        return has_open_next(f.left()) || has_open_next(f.right());
    return false;
}

FormulaPtr make_false_literal(const Formula& context) {
    std::vector<std::string> names = observation_names(context);
    std::string z = names.empty() ? "a" : names.front();
    return make_binary(Op::And, make_atom(z), make_neg_atom(z));
}

FormulaPtr normalize_rec(const Formula& f);

FormulaPtr norm(FormulaPtr f) {
    return normalize_rec(*f);
}

FormulaPtr normalize_rec(const Formula& f) {
    if (is_leaf(f.op)) return clone(f);

    FormulaPtr l = f.lhs ? normalize_rec(*f.lhs) : nullptr;
    FormulaPtr r = f.rhs ? normalize_rec(*f.rhs) : nullptr;

    switch (f.op) {
        case Op::Or:
        case Op::And: {
            if (is_next_like(*l) && is_next_like(*r)) {
                bool weak = f.op == Op::Or ? (l->op == Op::WeakNext || r->op == Op::WeakNext)
                                           : (l->op == Op::WeakNext && r->op == Op::WeakNext);
                return make_unary(weak ? Op::WeakNext : Op::Next,
                                  norm(make_binary(f.op, std::move(l->lhs), std::move(r->lhs))));
            }
            return make_binary(f.op, std::move(l), std::move(r));
        }
        case Op::Eventually: {
            if (l->op == Op::Next) return make_unary(Op::Next, norm(make_unary(Op::Eventually, std::move(l->lhs))));
            if (l->op == Op::WeakNext) return make_true();
            if (l->op == Op::Or && has_open_next(*l))
                return norm(make_binary(Op::Or, make_unary(Op::Eventually, std::move(l->lhs)),
                                        make_unary(Op::Eventually, std::move(l->rhs))));
            return make_unary(Op::Eventually, std::move(l));
        }
        case Op::Always: {
            if (l->op == Op::Next) return make_false_literal(*l);
            if (l->op == Op::WeakNext) return make_unary(Op::WeakNext, norm(make_unary(Op::Always, std::move(l->lhs))));
            if (l->op == Op::And && has_open_next(*l))
                return norm(make_binary(Op::And, make_unary(Op::Always, std::move(l->lhs)),
                                        make_unary(Op::Always, std::move(l->rhs))));
            return make_unary(Op::Always, std::move(l));
        }
        case Op::Until: {
            if (r->op == Op::Or && has_open_next(*r)) {
                FormulaPtr left_copy = clone(*l);
                FormulaPtr u1 = make_binary(Op::Until, std::move(left_copy), std::move(r->lhs));
                FormulaPtr u2 = make_binary(Op::Until, std::move(l), std::move(r->rhs));
                return norm(make_binary(Op::Or, std::move(u1), std::move(u2)));
            }
            if (is_next_like(*l)) {
                FormulaPtr alpha = std::move(l->lhs);
                if (r->op == Op::Next)
                    return make_unary(Op::Next,
                                      norm(make_binary(Op::Until, std::move(alpha), std::move(r->lhs))));
                if (r->op == Op::WeakNext) {
                    FormulaPtr beta = std::move(r->lhs);
                    FormulaPtr alpha_copy1 = clone(*alpha);
                    FormulaPtr alpha_copy2 = clone(*alpha);
                    FormulaPtr chain = make_binary(Op::Until, std::move(alpha_copy1), std::move(beta));
                    FormulaPtr last_leg = make_binary(Op::And, std::move(alpha), make_end());
                    FormulaPtr to_end =
                        make_binary(Op::Until, std::move(alpha_copy2), std::move(last_leg));
                    return make_binary(
                        Op::Or, make_end(),
                        make_unary(Op::Next, norm(make_binary(Op::Or, std::move(chain),
                                                              std::move(to_end)))));
                }
                FormulaPtr alpha_copy = clone(*alpha);
                FormulaPtr witness = make_binary(Op::And, std::move(alpha), clone(*r));
                FormulaPtr guarded =
                    make_binary(Op::Until, std::move(alpha_copy), std::move(witness));
                return make_binary(Op::Or, std::move(r),
                                   make_unary(Op::Next, norm(std::move(guarded))));
            }
            return make_binary(Op::Until, std::move(l), std::move(r));
        }
        case Op::Next:
        case Op::WeakNext:
            return make_unary(f.op, std::move(l));
        default:
            break;
    }
    throw FormulaError("normalize_operands: formula not in NNF");
}

}  // namespace

FormulaPtr normalize_operands(const Formula& f) {
    return normalize_rec(f);
}

// ── evaluation table construction ───────────────────────────────────────

namespace {

enum class Vc : std::uint8_t { T, F, Q };  // value class

Vc value_class(TruthValue v) {
    switch (v) {
        case TruthValue::T: return Vc::T;
        case TruthValue::F: return Vc::F;
        case TruthValue::U: return Vc::Q;
    }
    return Vc::Q;
}

using Dom = std::vector<std::pair<TruthValue, Qualifier>>;

TableCell::Input child_input(int child, TruthValue v, Qualifier q) {
    TableCell::Input in;
    in.kind = TableCell::Input::Kind::ChildTruth;
    in.child = child;
    in.value = v;
    in.qual = q;
    return in;
}

TableCell::Input obs_input(bool present) {
    TableCell::Input in;
    in.kind = present ? TableCell::Input::Kind::ObsPresent : TableCell::Input::Kind::ObsAbsent;
    return in;
}

struct CellBuilder {
    std::vector<TableCell> cells;

    void add(Qualifier mode, std::vector<TableCell::Input> inputs, TableCell::EndCond end,
             TruthValue v, Qualifier q = Qualifier::None) {
        TableCell c;
        c.mode = mode;
        c.inputs = std::move(inputs);
        c.end = end;
        c.out_value = v;
        c.out_qual = q;
        cells.push_back(std::move(c));
    }
};

// head of the binary disjunction table under mode B (Table 1)
std::pair<TruthValue, Qualifier> or_head(Vc l, Vc r) {
    if (l == Vc::T || r == Vc::T) return {TruthValue::T, Qualifier::None};
    if (l == Vc::F && r == Vc::F) return {TruthValue::F, Qualifier::None};
    if (l == Vc::Q && r == Vc::Q) return {TruthValue::U, Qualifier::B};
    if (l == Vc::Q) return {TruthValue::U, Qualifier::L};
    return {TruthValue::U, Qualifier::R};
}

// De Morgan dual of or_head
std::pair<TruthValue, Qualifier> and_head(Vc l, Vc r) {
    if (l == Vc::F || r == Vc::F) return {TruthValue::F, Qualifier::None};
    if (l == Vc::T && r == Vc::T) return {TruthValue::T, Qualifier::None};
    if (l == Vc::Q && r == Vc::Q) return {TruthValue::U, Qualifier::B};
    if (l == Vc::Q) return {TruthValue::U, Qualifier::L};
    return {TruthValue::U, Qualifier::R};
}

TableCell::EndCond cond_for(TruthValue v) {
    return v == TruthValue::U ? TableCell::EndCond::OnlyNotEnd : TableCell::EndCond::Any;
}

}  // namespace

std::vector<std::pair<TruthValue, Qualifier>> truth_domain(Op op) {
    using TV = TruthValue;
    using Q = Qualifier;
    switch (op) {
        case Op::True: return {{TV::T, Q::None}};
        case Op::Atom:
        case Op::NegAtom:
        case Op::End: return {{TV::T, Q::None}, {TV::F, Q::None}};
        case Op::Or:
        case Op::And:
            return {{TV::T, Q::None}, {TV::F, Q::None}, {TV::U, Q::B}, {TV::U, Q::L}, {TV::U, Q::R}};
        case Op::Until:
            return {{TV::T, Q::None}, {TV::F, Q::None}, {TV::U, Q::A}, {TV::U, Q::B},
                    {TV::U, Q::L},    {TV::U, Q::R}};
        case Op::Next:
        case Op::WeakNext:
            return {{TV::T, Q::None}, {TV::F, Q::None}, {TV::U, Q::None}, {TV::U, Q::M}};
        case Op::Eventually: return {{TV::T, Q::None}, {TV::F, Q::None}, {TV::U, Q::None}};
        case Op::Always:
            return {{TV::T, Q::None}, {TV::F, Q::None}, {TV::U, Q::None}, {TV::U, Q::K}};
        case Op::Not: break;
    }
    throw FormulaError("truth_domain: not an NNF operator");
}

std::vector<Qualifier> activation_modes(Op op) {
    using Q = Qualifier;
    switch (op) {
        case Op::True:
        case Op::Atom:
        case Op::NegAtom:
        case Op::End:
        case Op::Eventually:
        case Op::Always: return {Q::None};
        case Op::Or:
        case Op::And: return {Q::B, Q::L, Q::R};
        case Op::Until: return {Q::A, Q::B, Q::L, Q::R};
        case Op::Next:
        case Op::WeakNext: return {Q::None, Q::M};
        case Op::Not: break;
    }
    throw FormulaError("activation_modes: not an NNF operator");
}

std::vector<TableCell> build_tables(Op op, const TableContext& ctx) {
    using TV = TruthValue;
    using Q = Qualifier;
    using EC = TableCell::EndCond;
    CellBuilder b;

    const Dom dl = ctx.left_child ? truth_domain(*ctx.left_child) : Dom{};
    const Dom dr = ctx.right_child ? truth_domain(*ctx.right_child) : Dom{};

    switch (op) {
        case Op::Atom:
            b.add(Q::None, {obs_input(true)}, EC::Any, TV::T);
            b.add(Q::None, {obs_input(false)}, EC::Any, TV::F);
            break;
        case Op::NegAtom:
            b.add(Q::None, {obs_input(false)}, EC::Any, TV::T);
            b.add(Q::None, {obs_input(true)}, EC::Any, TV::F);
            break;
        case Op::True:
            b.add(Q::None, {}, EC::Any, TV::T);
            break;
        case Op::End:
            b.add(Q::None, {}, EC::OnlyEnd, TV::T);
            b.add(Q::None, {}, EC::OnlyNotEnd, TV::F);
            break;

        case Op::Or:
        case Op::And: {
            auto head = op == Op::Or ? or_head : and_head;
            for (auto [lv, lq] : dl)
                for (auto [rv, rq] : dr) {
                    auto [hv, hq] = head(value_class(lv), value_class(rv));
                    b.add(Q::B, {child_input(0, lv, lq), child_input(1, rv, rq)}, cond_for(hv),
                          hv, hq);
                }
            for (auto [lv, lq] : dl) {
                Vc c = value_class(lv);
                auto hv = c == Vc::Q ? TV::U : lv;
                b.add(Q::L, {child_input(0, lv, lq)}, cond_for(hv), hv,
                      c == Vc::Q ? Q::L : Q::None);
            }
            for (auto [rv, rq] : dr) {
                Vc c = value_class(rv);
                auto hv = c == Vc::Q ? TV::U : rv;
                b.add(Q::R, {child_input(1, rv, rq)}, cond_for(hv), hv,
                      c == Vc::Q ? Q::R : Q::None);
            }
            break;
        }

        case Op::Next:
        case Op::WeakNext: {
            // first phase: undecided while cells remain; END resolution is
            // added by the generator only where the fresh obligation is the
            // sole one possible (see initialise)
            b.add(Q::None, {}, EC::OnlyNotEnd, TV::U);
            // mirroring phase
            for (auto [v, q] : dl) {
                Vc c = value_class(v);
                auto hv = c == Vc::Q ? TV::U : v;
                b.add(Q::M, {child_input(0, v, q)}, cond_for(hv), hv,
                      c == Vc::Q ? Q::M : Q::None);
            }
            break;
        }

        case Op::Eventually: {
            Dom d = dl;
            if (std::none_of(d.begin(), d.end(), [](auto p) { return p.first == TV::U; }))
                d.push_back({TV::U, Q::None});
            for (auto [v, q] : d) {
                switch (value_class(v)) {
                    case Vc::T: b.add(Q::None, {child_input(0, v, q)}, EC::Any, TV::T); break;
                    case Vc::F:
                        b.add(Q::None, {child_input(0, v, q)}, EC::OnlyNotEnd, TV::U);
                        b.add(Q::None, {child_input(0, v, q)}, EC::OnlyEnd, TV::F);
                        break;
                    case Vc::Q:
                        b.add(Q::None, {child_input(0, v, q)}, EC::OnlyNotEnd, TV::U);
                        b.add(Q::None, {child_input(0, v, q)}, EC::OnlyEnd, TV::F);
                        break;
                }
            }
            break;
        }

        case Op::Always: {
            Dom d = dl;
            if (std::none_of(d.begin(), d.end(), [](auto p) { return p.first == TV::U; }))
                d.push_back({TV::U, Q::None});
            for (auto [v, q] : d) {
                switch (value_class(v)) {
                    case Vc::F: b.add(Q::None, {child_input(0, v, q)}, EC::Any, TV::F); break;
                    case Vc::T:
                        // undecided even when the child holds: a box cannot
                        // be verified before the trace ends
                        b.add(Q::None, {child_input(0, v, q)}, EC::OnlyNotEnd, TV::U, Q::K);
                        b.add(Q::None, {child_input(0, v, q)}, EC::OnlyEnd, TV::T);
                        break;
                    case Vc::Q:
                        b.add(Q::None, {child_input(0, v, q)}, EC::OnlyNotEnd, TV::U);
                        b.add(Q::None, {child_input(0, v, q)}, EC::OnlyEnd, TV::T);
                        break;
                }
            }
            break;
        }

        case Op::Until: {
            // B tracks the case where the right operand failed in the
            // current cell and the until cannot be trivially satisfied
            // anymore: the left operand's pending value guards a restart.
            // When the right operand is a next operator the node instead
            // uses B for the pending-right phase (see initialise, which
            // post-processes the A/B modes for that shape).
            for (auto [lv, lq] : dl)
                for (auto [rv, rq] : dr) {
                    Vc lc = value_class(lv), rc = value_class(rv);
                    auto li = child_input(0, lv, lq);
                    auto ri = child_input(1, rv, rq);
                    if (rc == Vc::T) {
                        b.add(Q::A, {li, ri}, EC::Any, TV::T);
                        b.add(Q::B, {li, ri}, EC::Any, TV::T);
                        continue;
                    }
                    if (rc == Vc::F) {
                        switch (lc) {
                            case Vc::T:
                                b.add(Q::A, {li, ri}, EC::OnlyNotEnd, TV::U, Q::A);
                                b.add(Q::B, {li, ri}, EC::OnlyNotEnd, TV::U, Q::A);
                                break;
                            case Vc::F:
                                b.add(Q::A, {li, ri}, EC::Any, TV::F);
                                b.add(Q::B, {li, ri}, EC::Any, TV::F);
                                break;
                            case Vc::Q:
                                b.add(Q::A, {li, ri}, EC::OnlyNotEnd, TV::U, Q::B);
                                b.add(Q::B, {li, ri}, EC::OnlyNotEnd, TV::U, Q::B);
                                break;
                        }
                        // the until resolves with its right operand when the
                        // trace ends
                        b.add(Q::A, {li, ri}, EC::OnlyEnd, TV::F);
                        b.add(Q::B, {li, ri}, EC::OnlyEnd, TV::F);
                        continue;
                    }
                    // right operand undecided
                    switch (lc) {
                        case Vc::T:
                            b.add(Q::A, {li, ri}, EC::OnlyNotEnd, TV::U, Q::A);
                            b.add(Q::B, {li, ri}, EC::OnlyNotEnd, TV::U, Q::A);
                            break;
                        case Vc::F:
                            b.add(Q::A, {li, ri}, EC::OnlyNotEnd, TV::U, Q::R);
                            b.add(Q::B, {li, ri}, EC::OnlyNotEnd, TV::U, Q::R);
                            break;
                        case Vc::Q:
                            b.add(Q::A, {li, ri}, EC::OnlyNotEnd, TV::U, Q::A);
                            b.add(Q::B, {li, ri}, EC::OnlyNotEnd, TV::U, Q::B);
                            break;
                    }
                    b.add(Q::A, {li, ri}, EC::OnlyEnd, TV::F);
                    b.add(Q::B, {li, ri}, EC::OnlyEnd, TV::F);
                }
            // pending-operand phases: the until mirrors the child that can
            // still decide it
            for (auto [lv, lq] : dl) {
                Vc c = value_class(lv);
                auto hv = c == Vc::Q ? TV::U : lv;
                b.add(Q::L, {child_input(0, lv, lq)}, cond_for(hv), hv,
                      c == Vc::Q ? Q::L : Q::None);
            }
            for (auto [rv, rq] : dr) {
                Vc c = value_class(rv);
                auto hv = c == Vc::Q ? TV::U : rv;
                b.add(Q::R, {child_input(1, rv, rq)}, cond_for(hv), hv,
                      c == Vc::Q ? Q::R : Q::None);
            }
            break;
        }

        case Op::Not:
            throw FormulaError("build_tables: formula not in NNF");
    }
    return b.cells;
}

// ── rule assembly ───────────────────────────────────────────────────────

namespace {

struct Generator {
    RuleSystem& sys;
    // initial activation set per node (Algorithm: S of each subsystem)
    std::vector<std::vector<AtomId>> init;
    // whether the node sits under a reactivating operator (U, F, G)
    std::vector<bool> under_react;

    explicit Generator(RuleSystem& s) : sys(s) {}

    AtomId intern(const StateAtom& a) { return sys.atoms.intern(a); }

    void add_rule(RuleStage stage, int owner, std::vector<AtomId> body, AtomId head) {
        std::sort(body.begin(), body.end());
        body.erase(std::unique(body.begin(), body.end()), body.end());
        Rule r;
        r.body = std::move(body);
        r.head = head;
        r.stage = stage;
        r.owner = owner;
        auto& rules = stage == RuleStage::Evaluation ? sys.eval_rules : sys.react_rules;
        for (const Rule& existing : rules)
            if (existing.owner == owner && existing.head == r.head && existing.body == r.body)
                return;
        rules.push_back(std::move(r));
    }

    // post-order assembly
    void visit(const Formula& f) {
        if (f.lhs) visit(*f.lhs);
        if (f.rhs) visit(*f.rhs);

        const int node = f.post_index;
        const std::size_t ni = static_cast<std::size_t>(node);

        TableContext ctx;
        ctx.op = f.op;
        if (f.lhs) ctx.left_child = f.lhs->op;
        if (f.rhs) ctx.right_child = f.rhs->op;

        for (const TableCell& cell : build_tables(f.op, ctx)) emit_cell(f, cell);

        if (f.op == Op::Next || f.op == Op::WeakNext) emit_next_end_rules(f);

        emit_reactivations(f);

        // initial activation set
        std::vector<AtomId> s;
        auto add_child = [&](const Formula& c) {
            const auto& cs = init[static_cast<std::size_t>(c.post_index)];
            s.insert(s.end(), cs.begin(), cs.end());
        };
        switch (f.op) {
            case Op::Or:
            case Op::And:
                add_child(f.left());
                add_child(f.right());
                s.push_back(intern(StateAtom::rule_act(node, Qualifier::B)));
                break;
            case Op::Until:
                add_child(f.left());
                add_child(f.right());
                s.push_back(intern(StateAtom::rule_act(node, Qualifier::A)));
                break;
            case Op::Eventually:
            case Op::Always:
                add_child(f.left());
                s.push_back(intern(StateAtom::rule_act(node)));
                break;
            case Op::Next:
            case Op::WeakNext:
                s.push_back(intern(StateAtom::rule_act(node)));
                break;
            default:
                s.push_back(intern(StateAtom::rule_act(node)));
                break;
        }
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        init[ni] = std::move(s);
    }

    void emit_cell(const Formula& f, const TableCell& cell) {
        const int node = f.post_index;
        std::vector<AtomId> body;
        body.push_back(intern(StateAtom::rule_act(node, cell.mode)));
        for (const TableCell::Input& in : cell.inputs) {
            switch (in.kind) {
                case TableCell::Input::Kind::ObsPresent:
                    body.push_back(intern(StateAtom::obs_present(f.atom)));
                    break;
                case TableCell::Input::Kind::ObsAbsent:
                    body.push_back(intern(StateAtom::obs_absent(f.atom)));
                    break;
                case TableCell::Input::Kind::ChildTruth: {
                    const Formula& child = in.child == 0 ? f.left() : f.right();
                    body.push_back(
                        intern(StateAtom::truth(child.post_index, in.value, in.qual)));
                    break;
                }
            }
        }
        if (cell.end == TableCell::EndCond::OnlyEnd)
            body.push_back(intern(StateAtom::end_marker()));
        else if (cell.end == TableCell::EndCond::OnlyNotEnd)
            body.push_back(intern(StateAtom::not_end()));
        add_rule(RuleStage::Evaluation, node, std::move(body),
                 intern(StateAtom::truth(node, cell.out_value, cell.out_qual)));
    }

    // The fresh phase of X/W resolves at END only where that obligation is
    // provably the sole one on the node; under a reactivating operator the
    // pending (mirroring) obligation carries the resolution instead and the
    // parents' END rows treat the fresh value as a constant.
    void emit_next_end_rules(const Formula& f) {
        const int node = f.post_index;
        if (under_react[static_cast<std::size_t>(node)]) return;
        add_rule(RuleStage::Evaluation, node,
                 {intern(StateAtom::rule_act(node)), intern(StateAtom::end_marker())},
                 intern(StateAtom::truth(node, f.op == Op::Next ? TruthValue::F : TruthValue::T)));
    }

    void emit_reactivations(const Formula& f) {
        const int node = f.post_index;
        auto undecided = [&](Qualifier q) {
            return intern(StateAtom::truth(node, TruthValue::U, q));
        };
        auto act = [&](Qualifier q) { return intern(StateAtom::rule_act(node, q)); };

        switch (f.op) {
            case Op::Or:
            case Op::And:
                for (Qualifier q : {Qualifier::B, Qualifier::L, Qualifier::R})
                    add_rule(RuleStage::Reactivation, node, {undecided(q)}, act(q));
                break;
            case Op::Until: {
                const auto& s1 = init[static_cast<std::size_t>(f.left().post_index)];
                const auto& s2 = init[static_cast<std::size_t>(f.right().post_index)];
                for (Qualifier q : {Qualifier::A, Qualifier::B}) {
                    add_rule(RuleStage::Reactivation, node, {undecided(q)}, act(q));
                    for (AtomId a : s1)
                        add_rule(RuleStage::Reactivation, node, {undecided(q)}, a);
                    for (AtomId a : s2)
                        add_rule(RuleStage::Reactivation, node, {undecided(q)}, a);
                }
                // pending-operand phases keep only the undecided child alive;
                // its own reactivation rules sustain it
                add_rule(RuleStage::Reactivation, node, {undecided(Qualifier::L)},
                         act(Qualifier::L));
                add_rule(RuleStage::Reactivation, node, {undecided(Qualifier::R)},
                         act(Qualifier::R));
                break;
            }
            case Op::Eventually:
            case Op::Always: {
                const auto& s1 = init[static_cast<std::size_t>(f.left().post_index)];
                std::vector<Qualifier> variants{Qualifier::None};
                if (f.op == Op::Always) variants.push_back(Qualifier::K);
                for (Qualifier q : variants) {
                    add_rule(RuleStage::Reactivation, node, {undecided(q)}, act(Qualifier::None));
                    for (AtomId a : s1)
                        add_rule(RuleStage::Reactivation, node, {undecided(q)}, a);
                }
                break;
            }
            case Op::Next:
            case Op::WeakNext: {
                const auto& s1 = init[static_cast<std::size_t>(f.left().post_index)];
                add_rule(RuleStage::Reactivation, node, {undecided(Qualifier::None)},
                         act(Qualifier::M));
                for (AtomId a : s1)
                    add_rule(RuleStage::Reactivation, node, {undecided(Qualifier::None)}, a);
                add_rule(RuleStage::Reactivation, node, {undecided(Qualifier::M)},
                         act(Qualifier::M));
                break;
            }
            default:
                break;  // leaves have no reactivation rules
        }
    }

    void emit_verdicts(const Formula& root) {
        const int node = root.post_index;
        add_rule(RuleStage::Evaluation, node,
                 {intern(StateAtom::truth(node, TruthValue::T))}, intern(StateAtom::success()));
        add_rule(RuleStage::Evaluation, node,
                 {intern(StateAtom::truth(node, TruthValue::F))}, intern(StateAtom::failure()));
        bool any_undecided = false;
        for (auto [v, q] : truth_domain(root.op))
            if (v == TruthValue::U) {
                any_undecided = true;
                add_rule(RuleStage::Evaluation, node,
                         {intern(StateAtom::truth(node, TruthValue::U, q))},
                         intern(StateAtom::repeat()));
            }
        if (!any_undecided)
            add_rule(RuleStage::Evaluation, node,
                     {intern(StateAtom::truth(node, TruthValue::U))},
                     intern(StateAtom::repeat()));
    }
};

}  // namespace

RuleSystem initialise(const Formula& f, const CompileOptions& options) {
    RuleSystem sys;
    sys.formula = options.normalize_operands ? normalize_operands(f) : clone(f);
    sys.subformulas = index_post_order(*sys.formula);
    sys.obs_names = observation_names(*sys.formula);
    sys.root = sys.formula->post_index;

    Generator gen(sys);
    gen.init.resize(static_cast<std::size_t>(sys.subformulas.size()));
    gen.under_react.assign(static_cast<std::size_t>(sys.subformulas.size()), false);

    // mark reactivation scopes before generating END handling for X/W
    struct Marker {
        Generator& g;
        void walk(const Formula& n, bool under) {
            if (under) g.under_react[static_cast<std::size_t>(n.post_index)] = true;
            bool child_under =
                under || n.op == Op::Until || n.op == Op::Eventually || n.op == Op::Always;
            if (n.lhs) walk(*n.lhs, child_under);
            if (n.rhs) walk(*n.rhs, child_under);
        }
    };
    Marker{gen}.walk(*sys.formula, false);

    gen.visit(*sys.formula);
    gen.emit_verdicts(*sys.formula);
    sys.initial_state = gen.init[static_cast<std::size_t>(sys.root)];

    // markers the engine relies on, whether or not any rule mentions them
    sys.atoms.intern(StateAtom::end_marker());
    sys.atoms.intern(StateAtom::not_end());
    sys.atoms.intern(StateAtom::success());
    sys.atoms.intern(StateAtom::failure());
    sys.atoms.intern(StateAtom::repeat());

    std::stable_sort(sys.eval_rules.begin(), sys.eval_rules.end(),
                     [](const Rule& a, const Rule& b) { return a.owner < b.owner; });
    return sys;
}

RuleSystem compile_formula(const std::string& text, const CompileOptions& options) {
    FormulaPtr parsed = parse_formula(text);
    FormulaPtr normalized = normalize_nnf(*parsed);
    return initialise(*normalized, options);
}

// ── printing ────────────────────────────────────────────────────────────

std::string print_atom(const StateAtom& atom, const SubformulaTable& table) {
    auto node_text = [&](int node) { return print_formula(table.at(node)); };
    switch (atom.kind) {
        case StateAtom::Kind::ObsPresent: return "obs:" + atom.obs;
        case StateAtom::Kind::ObsAbsent: return "!obs:" + atom.obs;
        case StateAtom::Kind::EndMarker: return "END";
        case StateAtom::Kind::NotEnd: return "!END";
        case StateAtom::Kind::Success: return "SUCCESS";
        case StateAtom::Kind::Failure: return "FAILURE";
        case StateAtom::Kind::Repeat: return "REPEAT";
        case StateAtom::Kind::RuleAct: {
            std::string s = "R[" + node_text(atom.node) + "]";
            if (char c = qualifier_letter(atom.qual)) s += c;
            return s;
        }
        case StateAtom::Kind::Truth: {
            std::string s = "[" + node_text(atom.node) + "]";
            switch (atom.value) {
                case TruthValue::T: s += 'T'; break;
                case TruthValue::F: s += 'F'; break;
                case TruthValue::U: s += '?'; break;
            }
            if (char c = qualifier_letter(atom.qual)) s += c;
            return s;
        }
    }
    return "?";
}

std::string print_rule(const Rule& rule, const RuleSystem& sys) {
    std::string s;
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
        if (i) s += " & ";
        s += print_atom(sys.atoms.at(rule.body[i]), sys.subformulas);
    }
    s += " -> ";
    s += print_atom(sys.atoms.at(rule.head), sys.subformulas);
    return s;
}

std::string dump_rule_system(const RuleSystem& sys) {
    std::ostringstream out;
    out << "# EVALUATION\n";
    for (const Rule& r : sys.eval_rules) out << print_rule(r, sys) << "\n";
    out << "# REACTIVATION\n";
    for (const Rule& r : sys.react_rules) out << print_rule(r, sys) << "\n";
    out << "# INITIAL\n";
    for (std::size_t i = 0; i < sys.initial_state.size(); ++i) {
        if (i) out << " ";
        out << print_atom(sys.atoms.at(sys.initial_state[i]), sys.subformulas);
    }
    out << "\n";
    return out.str();
}

}  // namespace rulemon
