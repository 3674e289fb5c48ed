#include "plf/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <utility>

namespace plf {

namespace {

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

bool is_valid_variable(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s.front()))) return false;
    return std::all_of(s.begin(), s.end(), is_word_char);
}

bool is_valid_value(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), is_word_char);
}

Atom::Atom(std::string var, std::string val) : variable(std::move(var)), value(std::move(val)) {
    if (!is_valid_variable(variable))
        throw std::invalid_argument("invalid atom variable '" + variable + "'");
    if (!is_valid_value(value)) throw std::invalid_argument("invalid atom value '" + value + "'");
}

// ---------------------------------------------------------------------------
// Formula

Formula Formula::make(FormulaKind k, Formula l, std::shared_ptr<const Formula> r) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::make_shared<const Formula>(std::move(l));
    n->rhs = std::move(r);
    return Formula(std::move(n));
}

Formula Formula::atom(Atom a) {
    auto n = std::make_shared<Node>();
    n->kind = FormulaKind::Atom;
    n->atom = std::move(a);
    return Formula(std::move(n));
}

Formula Formula::atom(std::string variable, std::string value) {
    return atom(Atom(std::move(variable), std::move(value)));
}

Formula Formula::negation(Formula f) { return make(FormulaKind::Not, std::move(f), nullptr); }
Formula Formula::diamond(Formula f) { return make(FormulaKind::Diamond, std::move(f), nullptr); }
Formula Formula::box(Formula f) { return make(FormulaKind::Box, std::move(f), nullptr); }

Formula Formula::conjunction(Formula l, Formula r) {
    return make(FormulaKind::And, std::move(l), std::make_shared<const Formula>(std::move(r)));
}
Formula Formula::disjunction(Formula l, Formula r) {
    return make(FormulaKind::Or, std::move(l), std::make_shared<const Formula>(std::move(r)));
}
Formula Formula::implication(Formula l, Formula r) {
    return make(FormulaKind::Implies, std::move(l), std::make_shared<const Formula>(std::move(r)));
}
Formula Formula::equivalence(Formula l, Formula r) {
    return make(FormulaKind::Iff, std::move(l), std::make_shared<const Formula>(std::move(r)));
}

Formula Formula::conjunction_of(const std::vector<Formula>& fs) {
    if (fs.empty()) throw std::invalid_argument("empty conjunction");
    Formula acc = fs.back();
    for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) acc = conjunction(*it, acc);
    return acc;
}

Formula Formula::disjunction_of(const std::vector<Formula>& fs) {
    if (fs.empty()) throw std::invalid_argument("empty disjunction");
    Formula acc = fs.back();
    for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) acc = disjunction(*it, acc);
    return acc;
}

bool Formula::is_unary() const {
    auto k = kind();
    return k == FormulaKind::Not || k == FormulaKind::Diamond || k == FormulaKind::Box;
}

bool Formula::is_binary() const { return !is_atom() && !is_unary(); }

const Atom& Formula::atom() const {
    if (!is_atom()) throw std::logic_error("Formula::atom on a non-atom");
    return node_->atom;
}

const Formula& Formula::child() const {
    if (!is_unary()) throw std::logic_error("Formula::child on a non-unary node");
    return *node_->lhs;
}

const Formula& Formula::left() const {
    if (!is_binary()) throw std::logic_error("Formula::left on a non-binary node");
    return *node_->lhs;
}

const Formula& Formula::right() const {
    if (!is_binary()) throw std::logic_error("Formula::right on a non-binary node");
    return *node_->rhs;
}

bool Formula::is_modality_free() const { return modal_depth() == 0; }

int Formula::modal_depth() const {
    switch (kind()) {
    case FormulaKind::Atom: return 0;
    case FormulaKind::Not: return child().modal_depth();
    case FormulaKind::Diamond:
    case FormulaKind::Box: return 1 + child().modal_depth();
    default: return std::max(left().modal_depth(), right().modal_depth());
    }
}

std::set<Atom> Formula::atoms() const {
    std::set<Atom> out;
    std::function<void(const Formula&)> walk = [&](const Formula& f) {
        if (f.is_atom())
            out.insert(f.atom());
        else if (f.is_unary())
            walk(f.child());
        else {
            walk(f.left());
            walk(f.right());
        }
    };
    walk(*this);
    return out;
}

std::set<std::string> Formula::variables() const {
    std::set<std::string> out;
    for (const auto& a : atoms()) out.insert(a.variable);
    return out;
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    if (a.is_atom()) return a.atom() == b.atom();
    if (a.is_unary()) return a.child() == b.child();
    return a.left() == b.left() && a.right() == b.right();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

std::string join_expected(const std::vector<std::string>& ex) {
    std::string s;
    for (std::size_t i = 0; i < ex.size(); ++i) {
        if (i) s += ", ";
        s += ex[i];
    }
    return s;
}

}  // namespace

SyntaxError::SyntaxError(std::size_t offset, std::vector<std::string> expected, std::string found)
    : std::runtime_error("syntax error at byte " + std::to_string(offset) + ": expected one of {" +
                         join_expected(expected) + "} but found " + found),
      offset_(offset),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

namespace {

enum class Tok { Not, And, Or, Implies, Iff, Diamond, Box, LParen, RParen, Equals, Word, End, Invalid };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string_view text;
};

constexpr int kMaxNesting = 1000;

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) { advance(); }

    Formula parse_all() {
        Formula f = parse_iff();
        if (cur_.kind != Tok::End) fail({"&", "|", "->", "<->", "end of input"});
        return f;
    }

    Atom parse_lone_atom() {
        Atom a = parse_atom_token();
        if (cur_.kind != Tok::End) fail({"end of input"});
        return a;
    }

private:
    [[noreturn]] void fail(std::vector<std::string> expected) const {
        std::string found;
        switch (cur_.kind) {
        case Tok::End: found = "end of input"; break;
        case Tok::Invalid: found = "invalid character '" + std::string(cur_.text) + "'"; break;
        default: found = "'" + std::string(cur_.text) + "'";
        }
        throw SyntaxError(cur_.offset, std::move(expected), std::move(found));
    }

    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        std::size_t start = pos_;
        auto take = [&](Tok k, std::size_t n) {
            cur_ = {k, start, src_.substr(start, n)};
            pos_ += n;
        };
        if (pos_ >= src_.size()) {
            cur_ = {Tok::End, start, {}};
            return;
        }
        std::string_view rest = src_.substr(pos_);
        if (rest.starts_with("<->")) return take(Tok::Iff, 3);
        if (rest.starts_with("->")) return take(Tok::Implies, 2);
        if (rest.starts_with("<>")) return take(Tok::Diamond, 2);
        if (rest.starts_with("[]")) return take(Tok::Box, 2);
        switch (rest.front()) {
        case '~': return take(Tok::Not, 1);
        case '&': return take(Tok::And, 1);
        case '|': return take(Tok::Or, 1);
        case '(': return take(Tok::LParen, 1);
        case ')': return take(Tok::RParen, 1);
        case '=': return take(Tok::Equals, 1);
        default: break;
        }
        if (is_word_char(rest.front())) {
            std::size_t n = 0;
            while (n < rest.size() && is_word_char(rest[n])) ++n;
            return take(Tok::Word, n);
        }
        // Report one whole UTF-8 sequence rather than a lone lead byte.
        std::size_t n = 1;
        while (n < rest.size() && (static_cast<unsigned char>(rest[n]) & 0xC0) == 0x80) ++n;
        take(Tok::Invalid, n);
    }

    // iff := imp ('<->' imp)*          left associative
    Formula parse_iff() {
        Formula acc = parse_implies();
        while (cur_.kind == Tok::Iff) {
            advance();
            acc = Formula::equivalence(std::move(acc), parse_implies());
        }
        return acc;
    }

    // imp := or ('->' or)*             right associative
    Formula parse_implies() {
        std::vector<Formula> parts{parse_or()};
        while (cur_.kind == Tok::Implies) {
            advance();
            parts.push_back(parse_or());
        }
        return fold_right(parts, Formula::implication);
    }

    // or := and ('|' and)*
    Formula parse_or() {
        std::vector<Formula> parts{parse_and()};
        while (cur_.kind == Tok::Or) {
            advance();
            parts.push_back(parse_and());
        }
        return fold_right(parts, Formula::disjunction);
    }

    // and := unary ('&' unary)*
    Formula parse_and() {
        std::vector<Formula> parts{parse_unary()};
        while (cur_.kind == Tok::And) {
            advance();
            parts.push_back(parse_unary());
        }
        return fold_right(parts, Formula::conjunction);
    }

    static Formula fold_right(std::vector<Formula>& parts, Formula (*mk)(Formula, Formula)) {
        Formula acc = std::move(parts.back());
        for (std::size_t i = parts.size() - 1; i-- > 0;) acc = mk(std::move(parts[i]), std::move(acc));
        return acc;
    }

    // unary := ('~' | '<>' | '[]') unary | '(' iff ')' | atom
    Formula parse_unary() {
        if (++depth_ > kMaxNesting) fail({"shallower nesting"});
        Formula out = parse_unary_inner();
        --depth_;
        return out;
    }

    Formula parse_unary_inner() {
        switch (cur_.kind) {
        case Tok::Not: advance(); return Formula::negation(parse_unary());
        case Tok::Diamond: advance(); return Formula::diamond(parse_unary());
        case Tok::Box: advance(); return Formula::box(parse_unary());
        case Tok::LParen: {
            advance();
            Formula inner = parse_iff();
            if (cur_.kind != Tok::RParen) fail({"&", "|", "->", "<->", ")"});
            advance();
            return inner;
        }
        case Tok::Word: return Formula::atom(parse_atom_token());
        default: fail({"~", "<>", "[]", "(", "variable"});
        }
    }

    Atom parse_atom_token() {
        if (cur_.kind != Tok::Word || !is_valid_variable(cur_.text)) fail({"variable"});
        std::string var(cur_.text);
        advance();
        if (cur_.kind != Tok::Equals) return Atom(std::move(var), "true");
        advance();
        if (cur_.kind != Tok::Word) fail({"value"});
        std::string val(cur_.text);
        advance();
        return Atom(std::move(var), std::move(val));
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token cur_{Tok::End, 0, {}};
    int depth_ = 0;
};

int precedence(FormulaKind k) {
    switch (k) {
    case FormulaKind::Iff: return 1;
    case FormulaKind::Implies: return 2;
    case FormulaKind::Or: return 3;
    case FormulaKind::And: return 4;
    case FormulaKind::Not:
    case FormulaKind::Diamond:
    case FormulaKind::Box: return 5;
    case FormulaKind::Atom: return 6;
    }
    return 0;
}

const char* op_text(FormulaKind k) {
    switch (k) {
    case FormulaKind::Not: return "~";
    case FormulaKind::Diamond: return "<>";
    case FormulaKind::Box: return "[]";
    case FormulaKind::And: return " & ";
    case FormulaKind::Or: return " | ";
    case FormulaKind::Implies: return " -> ";
    case FormulaKind::Iff: return " <-> ";
    default: return "";
    }
}

void render_into(const Formula& f, std::string& out) {
    if (f.is_atom()) {
        out += render(f.atom());
        return;
    }
    auto wrapped = [&](const Formula& sub, bool parens) {
        if (parens) out += '(';
        render_into(sub, out);
        if (parens) out += ')';
    };
    int p = precedence(f.kind());
    if (f.is_unary()) {
        out += op_text(f.kind());
        wrapped(f.child(), precedence(f.child().kind()) < p);
        return;
    }
    bool left_assoc = f.kind() == FormulaKind::Iff;
    int pl = precedence(f.left().kind());
    int pr = precedence(f.right().kind());
    wrapped(f.left(), pl < p || (pl == p && !left_assoc));
    out += op_text(f.kind());
    wrapped(f.right(), pr < p || (pr == p && left_assoc));
}

void dump_into(const Formula& f, std::ostringstream& os) {
    static const char* names[] = {"Atom", "Not", "And", "Or", "Implies", "Iff", "Diamond", "Box"};
    os << '(' << names[static_cast<int>(f.kind())];
    if (f.is_atom()) {
        os << ' ' << f.atom().variable << ' ' << f.atom().value;
    } else if (f.is_unary()) {
        os << ' ';
        dump_into(f.child(), os);
    } else {
        os << ' ';
        dump_into(f.left(), os);
        os << ' ';
        dump_into(f.right(), os);
    }
    os << ')';
}

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse_all(); }

Atom parse_atom(std::string_view text) { return Parser(text).parse_lone_atom(); }

std::string render(const Atom& a) {
    if (a.value == "true") return a.variable;
    return a.variable + "=" + a.value;
}

std::string render(const Formula& f) {
    std::string out;
    render_into(f, out);
    return out;
}

std::string dump_ast(const Formula& f) {
    std::ostringstream os;
    dump_into(f, os);
    return os.str();
}

}  // namespace plf
