// formula.hpp — FLTL abstract syntax: parser, NNF normalisation, post-order
// indexing and canonical printing.
//
// The grammar (concrete syntax accepted by parse_formula):
//
//   phi ::= "true" | "END" | ident | "!" phi | phi "|" phi | phi "&" phi
//         | phi "U" phi | "X" phi | "W" phi | "F" phi | "G" phi | "(" phi ")"
//
// Precedence, loosest to tightest:  |  <  U  <  &  <  prefix (X W F G !).
// "|" and "&" are left-associative, "U" is right-associative.
//
// A well-formed Formula is in negation normal form: negation appears only
// as NegAtom.  The parser may produce transient Not nodes; normalize_nnf
// removes them.

#ifndef RULEMON_FORMULA_HPP
#define RULEMON_FORMULA_HPP

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace rulemon {

enum class Op : std::uint8_t {
    True,
    Atom,
    NegAtom,
    End,         // the END literal: true exactly in the last cell
    Or,
    And,
    Until,
    Next,        // strong next: false when no next cell exists
    WeakNext,    // weak next: true when no next cell exists
    Eventually,
    Always,
    Not,         // parser-internal only; eliminated by normalize_nnf
};

bool is_unary(Op op);
bool is_binary(Op op);
bool is_leaf(Op op);

struct Formula;
using FormulaPtr = std::unique_ptr<Formula>;

struct Formula {
    Op op;
    std::string atom;        // Atom / NegAtom only
    FormulaPtr lhs;          // unary child or left operand
    FormulaPtr rhs;          // right operand of a binary node
    int post_index = -1;     // set by index_post_order

    const Formula& left() const { return *lhs; }
    const Formula& right() const { return *rhs; }
};

FormulaPtr make_true();
FormulaPtr make_end();
FormulaPtr make_atom(std::string name);
FormulaPtr make_neg_atom(std::string name);
FormulaPtr make_not(FormulaPtr child);
FormulaPtr make_unary(Op op, FormulaPtr child);
FormulaPtr make_binary(Op op, FormulaPtr l, FormulaPtr r);
FormulaPtr clone(const Formula& f);

bool structurally_equal(const Formula& a, const Formula& b);
int node_count(const Formula& f);
int height(const Formula& f);

// Thrown on syntax errors (with 0-based character position) and on
// formulae that have no NNF form within the grammar.
class FormulaError : public std::runtime_error {
public:
    FormulaError(std::string msg, std::size_t pos = npos);
    std::size_t position() const { return pos_; }
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::size_t pos_;
};

// Parses the concrete syntax above.  The result may contain Not nodes;
// callers that require NNF should run normalize_nnf afterwards.
FormulaPtr parse_formula(const std::string& text);

// Pushes negations to the literals and applies cancellations.  Rejects
// !(a U b) (the grammar has no dual of U), !true and !END.
FormulaPtr normalize_nnf(const Formula& f);

// Canonical printer: binary nodes fully parenthesised, prefix operators
// separated by a space.  parse_formula(print_formula(f)) reproduces f.
std::string print_formula(const Formula& f);

// Post-order table: nodes listed children-first, each node's post_index
// set to its position in the list.
struct SubformulaTable {
    std::vector<const Formula*> nodes;

    int size() const { return static_cast<int>(nodes.size()); }
    const Formula& at(int index) const { return *nodes.at(static_cast<std::size_t>(index)); }
};

// Assigns post_index to every node of f (mutates f) and returns the table.
SubformulaTable index_post_order(Formula& f);

// Collects the distinct observation names referenced by Atom/NegAtom nodes.
std::vector<std::string> observation_names(const Formula& f);

}  // namespace rulemon

#endif
