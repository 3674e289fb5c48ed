#ifndef PLF_FORMULA_HPP
#define PLF_FORMULA_HPP

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace plf {

/// A proposition `variable=value`. Bare `p` in the concrete syntax is `p=true`.
struct Atom {
    std::string variable;
    std::string value;

    Atom() = default;
    Atom(std::string var, std::string val);

    friend bool operator==(const Atom&, const Atom&) = default;
    friend auto operator<=>(const Atom&, const Atom&) = default;
};

bool is_valid_variable(std::string_view s);
bool is_valid_value(std::string_view s);

enum class FormulaKind { Atom, Not, And, Or, Implies, Iff, Diamond, Box };

/// Immutable modal formula. Nodes are shared, so copies are cheap.
class Formula {
public:
    static Formula atom(Atom a);
    static Formula atom(std::string variable, std::string value);
    static Formula negation(Formula f);
    static Formula conjunction(Formula l, Formula r);
    static Formula disjunction(Formula l, Formula r);
    static Formula implication(Formula l, Formula r);
    static Formula equivalence(Formula l, Formula r);
    static Formula diamond(Formula f);
    static Formula box(Formula f);

    /// Right-nested conjunction of a nonempty list.
    static Formula conjunction_of(const std::vector<Formula>& fs);
    /// Right-nested disjunction of a nonempty list.
    static Formula disjunction_of(const std::vector<Formula>& fs);

    FormulaKind kind() const { return node_->kind; }
    bool is_atom() const { return kind() == FormulaKind::Atom; }
    bool is_unary() const;
    bool is_binary() const;

    /// Only valid for atoms.
    const Atom& atom() const;
    /// Operand of a unary node.
    const Formula& child() const;
    const Formula& left() const;
    const Formula& right() const;

    /// True when no Diamond or Box occurs anywhere in the tree.
    bool is_modality_free() const;
    /// Maximum nesting of modal operators.
    int modal_depth() const;
    std::set<std::string> variables() const;
    std::set<Atom> atoms() const;

    friend bool operator==(const Formula& a, const Formula& b);

private:
    struct Node {
        FormulaKind kind;
        Atom atom;
        std::shared_ptr<const Formula> lhs;
        std::shared_ptr<const Formula> rhs;
    };

    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Formula make(FormulaKind k, Formula l, std::shared_ptr<const Formula> r);

    std::shared_ptr<const Node> node_;
};

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(std::size_t offset, std::vector<std::string> expected, std::string found);

    /// Byte offset into the input where parsing failed.
    std::size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }
    const std::string& found() const { return found_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
    std::string found_;
};

/// Parses the ASCII formula language:
///   `~` not, `&` and, `|` or, `->` implies (right assoc), `<->` iff (left assoc),
///   `<>` possibly, `[]` necessarily, atoms `VAR=VAL` or bare `VAR`.
/// Unary operators bind tightest, then `&`, `|`, `->`, `<->`.
/// `&` and `|` group to the right so that `a & b & c` is `a & (b & c)`.
Formula parse_formula(std::string_view text);

/// Parses a single atom such as `A=1` or `Q`.
Atom parse_atom(std::string_view text);

/// Minimal-parenthesis rendering; parse_formula(render(f)) == f.
std::string render(const Formula& f);
std::string render(const Atom& a);

/// S-expression dump of the tree, e.g. `(Diamond (Atom A 1))`.
std::string dump_ast(const Formula& f);

}  // namespace plf

#endif
