#include "rulemon/formula.hpp"

#include <cctype>
#include <set>

namespace rulemon {

bool is_unary(Op op) {
    switch (op) {
        case Op::Next:
        case Op::WeakNext:
        case Op::Eventually:
        case Op::Always:
        case Op::Not:
            return true;
        default:
            return false;
    }
}

bool is_binary(Op op) {
    return op == Op::Or || op == Op::And || op == Op::Until;
}

bool is_leaf(Op op) {
    return op == Op::True || op == Op::Atom || op == Op::NegAtom || op == Op::End;
}

FormulaPtr make_true() {
    auto f = std::make_unique<Formula>();
    f->op = Op::True;
    return f;
}

FormulaPtr make_end() {
    auto f = std::make_unique<Formula>();
    f->op = Op::End;
    return f;
}

FormulaPtr make_atom(std::string name) {
    auto f = std::make_unique<Formula>();
    f->op = Op::Atom;
    f->atom = std::move(name);
    return f;
}

FormulaPtr make_neg_atom(std::string name) {
    auto f = std::make_unique<Formula>();
    f->op = Op::NegAtom;
    f->atom = std::move(name);
    return f;
}

FormulaPtr make_not(FormulaPtr child) {
    auto f = std::make_unique<Formula>();
    f->op = Op::Not;
    f->lhs = std::move(child);
    return f;
}

FormulaPtr make_unary(Op op, FormulaPtr child) {
    auto f = std::make_unique<Formula>();
    f->op = op;
    f->lhs = std::move(child);
    return f;
}

FormulaPtr make_binary(Op op, FormulaPtr l, FormulaPtr r) {
    auto f = std::make_unique<Formula>();
    f->op = op;
    f->lhs = std::move(l);
    f->rhs = std::move(r);
    return f;
}

FormulaPtr clone(const Formula& f) {
    auto c = std::make_unique<Formula>();
    c->op = f.op;
    c->atom = f.atom;
    if (f.lhs) c->lhs = clone(*f.lhs);
    if (f.rhs) c->rhs = clone(*f.rhs);
    return c;
}

bool structurally_equal(const Formula& a, const Formula& b) {
    if (a.op != b.op || a.atom != b.atom) return false;
    if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs)) return false;
    if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
    if (a.lhs && !structurally_equal(*a.lhs, *b.lhs)) return false;
    if (a.rhs && !structurally_equal(*a.rhs, *b.rhs)) return false;
    return true;
}

int node_count(const Formula& f) {
    int n = 1;
    if (f.lhs) n += node_count(*f.lhs);
    if (f.rhs) n += node_count(*f.rhs);
    return n;
}

int height(const Formula& f) {
    int h = 0;
    if (f.lhs) h = std::max(h, height(*f.lhs));
    if (f.rhs) h = std::max(h, height(*f.rhs));
    return h + 1;
}

FormulaError::FormulaError(std::string msg, std::size_t pos)
    : std::runtime_error(pos == npos ? msg : msg + " (at position " + std::to_string(pos) + ")"),
      pos_(pos) {}

namespace {

// ── lexer ───────────────────────────────────────────────────────────────

enum class Tok : std::uint8_t {
    Ident, True, EndLit, OpX, OpW, OpF, OpG, OpU, Not, And, Or, LParen, RParen, Eof
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
        std::size_t start = i_;
        if (i_ >= text_.size()) {
            current_ = {Tok::Eof, "", start};
            return;
        }
        char c = text_[i_];
        switch (c) {
            case '!': ++i_; current_ = {Tok::Not, "!", start}; return;
            case '&': ++i_; current_ = {Tok::And, "&", start}; return;
            case '|': ++i_; current_ = {Tok::Or, "|", start}; return;
            case '(': ++i_; current_ = {Tok::LParen, "(", start}; return;
            case ')': ++i_; current_ = {Tok::RParen, ")", start}; return;
            default: break;
        }
        if (std::isupper(static_cast<unsigned char>(c))) {
            // uppercase words: operator letters and the END literal
            std::size_t j = i_;
            while (j < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
                ++j;
            std::string word = text_.substr(i_, j - i_);
            i_ = j;
            if (word == "X") { current_ = {Tok::OpX, word, start}; return; }
            if (word == "W") { current_ = {Tok::OpW, word, start}; return; }
            if (word == "F") { current_ = {Tok::OpF, word, start}; return; }
            if (word == "G") { current_ = {Tok::OpG, word, start}; return; }
            if (word == "U") { current_ = {Tok::OpU, word, start}; return; }
            if (word == "END") { current_ = {Tok::EndLit, word, start}; return; }
            throw FormulaError("unknown operator or reserved word '" + word + "'", start);
        }
        if (std::islower(static_cast<unsigned char>(c))) {
            std::size_t j = i_;
            while (j < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
                ++j;
            std::string word = text_.substr(i_, j - i_);
            i_ = j;
            if (word == "true") { current_ = {Tok::True, word, start}; return; }
            current_ = {Tok::Ident, word, start};
            return;
        }
        throw FormulaError(std::string("unexpected character '") + c + "'", start);
    }

    const std::string& text_;
    std::size_t i_ = 0;
    Token current_{Tok::Eof, "", 0};
};

// ── parser ──────────────────────────────────────────────────────────────

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) {}

    FormulaPtr parse() {
        FormulaPtr f = parse_or();
        if (lex_.peek().kind != Tok::Eof)
            throw FormulaError("trailing input after formula", lex_.peek().pos);
        return f;
    }

private:
    FormulaPtr parse_or() {
        FormulaPtr f = parse_until();
        while (lex_.peek().kind == Tok::Or) {
            lex_.take();
            f = make_binary(Op::Or, std::move(f), parse_until());
        }
        return f;
    }

    FormulaPtr parse_until() {
        FormulaPtr f = parse_and();
        if (lex_.peek().kind == Tok::OpU) {
            lex_.take();
            f = make_binary(Op::Until, std::move(f), parse_until());
        }
        return f;
    }

    FormulaPtr parse_and() {
        FormulaPtr f = parse_prefix();
        while (lex_.peek().kind == Tok::And) {
            lex_.take();
            f = make_binary(Op::And, std::move(f), parse_prefix());
        }
        return f;
    }

    FormulaPtr parse_prefix() {
        switch (lex_.peek().kind) {
            case Tok::Not: lex_.take(); return make_not(parse_prefix());
            case Tok::OpX: lex_.take(); return make_unary(Op::Next, parse_prefix());
            case Tok::OpW: lex_.take(); return make_unary(Op::WeakNext, parse_prefix());
            case Tok::OpF: lex_.take(); return make_unary(Op::Eventually, parse_prefix());
            case Tok::OpG: lex_.take(); return make_unary(Op::Always, parse_prefix());
            default: return parse_primary();
        }
    }

    FormulaPtr parse_primary() {
        Token t = lex_.take();
        switch (t.kind) {
            case Tok::True: return make_true();
            case Tok::EndLit: return make_end();
            case Tok::Ident: return make_atom(t.text);
            case Tok::LParen: {
                FormulaPtr f = parse_or();
                if (lex_.peek().kind != Tok::RParen)
                    throw FormulaError("expected ')'", lex_.peek().pos);
                lex_.take();
                return f;
            }
            case Tok::RParen: throw FormulaError("unbalanced ')'", t.pos);
            case Tok::Eof: throw FormulaError("unexpected end of input", t.pos);
            default: throw FormulaError("expected a formula", t.pos);
        }
    }

    Lexer lex_;
};

FormulaPtr nnf(const Formula& f, bool negated) {
    switch (f.op) {
        case Op::True:
            if (negated)
                throw FormulaError("no NNF form in grammar: the grammar has no 'false' literal");
            return make_true();
        case Op::End:
            if (negated)
                throw FormulaError("no NNF form in grammar: END cannot be negated");
            return make_end();
        case Op::Atom:
            return negated ? make_neg_atom(f.atom) : make_atom(f.atom);
        case Op::NegAtom:
            return negated ? make_atom(f.atom) : make_neg_atom(f.atom);
        case Op::Not:
            return nnf(f.left(), !negated);
        case Op::Or:
            return make_binary(negated ? Op::And : Op::Or, nnf(f.left(), negated),
                               nnf(f.right(), negated));
        case Op::And:
            return make_binary(negated ? Op::Or : Op::And, nnf(f.left(), negated),
                               nnf(f.right(), negated));
        case Op::Until:
            if (negated)
                throw FormulaError(
                    "no NNF form in grammar: the grammar has no dual of U (Release)");
            return make_binary(Op::Until, nnf(f.left(), false), nnf(f.right(), false));
        case Op::Next:
            // !X a == W !a on finite traces
            return make_unary(negated ? Op::WeakNext : Op::Next, nnf(f.left(), negated));
        case Op::WeakNext:
            return make_unary(negated ? Op::Next : Op::WeakNext, nnf(f.left(), negated));
        case Op::Eventually:
            return make_unary(negated ? Op::Always : Op::Eventually, nnf(f.left(), negated));
        case Op::Always:
            return make_unary(negated ? Op::Eventually : Op::Always, nnf(f.left(), negated));
    }
    throw FormulaError("corrupt formula node");
}

void print_rec(const Formula& f, std::string& out) {
    switch (f.op) {
        case Op::True: out += "true"; return;
        case Op::End: out += "END"; return;
        case Op::Atom: out += f.atom; return;
        case Op::NegAtom:
            out += '!';
            out += f.atom;
            return;
        case Op::Not:
            out += "!(";
            print_rec(f.left(), out);
            out += ')';
            return;
        case Op::Next:
        case Op::WeakNext:
        case Op::Eventually:
        case Op::Always: {
            out += f.op == Op::Next         ? 'X'
                   : f.op == Op::WeakNext   ? 'W'
                   : f.op == Op::Eventually ? 'F'
                                            : 'G';
            out += ' ';
            print_rec(f.left(), out);
            return;
        }
        case Op::Or:
        case Op::And:
        case Op::Until: {
            out += '(';
            print_rec(f.left(), out);
            out += f.op == Op::Or ? " | " : f.op == Op::And ? " & " : " U ";
            print_rec(f.right(), out);
            out += ')';
            return;
        }
    }
}

void post_order_rec(Formula& f, SubformulaTable& table) {
    if (f.lhs) post_order_rec(*f.lhs, table);
    if (f.rhs) post_order_rec(*f.rhs, table);
    f.post_index = table.size();
    table.nodes.push_back(&f);
}

void collect_names(const Formula& f, std::set<std::string>& names) {
    if (f.op == Op::Atom || f.op == Op::NegAtom) names.insert(f.atom);
    if (f.lhs) collect_names(*f.lhs, names);
    if (f.rhs) collect_names(*f.rhs, names);
}

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
    if (text.empty()) throw FormulaError("empty formula");
    return Parser(text).parse();
}

FormulaPtr normalize_nnf(const Formula& f) {
    return nnf(f, false);
}

std::string print_formula(const Formula& f) {
    std::string out;
    print_rec(f, out);
    return out;
}

SubformulaTable index_post_order(Formula& f) {
    SubformulaTable table;
    post_order_rec(f, table);
    return table;
}

std::vector<std::string> observation_names(const Formula& f) {
    std::set<std::string> names;
    collect_names(f, names);
    return {names.begin(), names.end()};
}

}  // namespace rulemon
