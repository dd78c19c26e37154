#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rqbm/error.hpp"

/// Small arithmetic expression language shared by distance formulas,
/// self-maps and theta/phi candidates.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?          right-associative
///   primary := number | var | func '(' args ')' | '(' expr ')'
///
/// Unary minus binds looser than '^', so "-2^2" is -4 and "2^3^2" is 512.
/// Functions: sqrt, abs, exp, ln (one argument), min, max (two), and
/// if(a relop b, then, else) with relop one of < <= > >= == !=.
namespace rqbm::expr {

enum class ErrorKind {
    syntax,
    unknown_variable,
    unknown_function,
    arity,
    division_by_zero,
    domain,
    non_finite,
};

std::string_view to_string(ErrorKind kind);

class ExprError : public Error {
public:
    ExprError(ErrorKind kind, std::size_t offset, std::string detail,
              std::string subexpression = {});

    ErrorKind kind() const { return kind_; }
    /// Byte offset into the source text where the problem was detected.
    std::size_t offset() const { return offset_; }
    /// Printed form of the offending node, for evaluation errors.
    const std::string& subexpression() const { return subexpression_; }

private:
    ErrorKind kind_;
    std::size_t offset_;
    std::string subexpression_;
};

enum class Func { sqrt, abs, exp, ln, min, max };
enum class BinOp { add, sub, mul, div, pow };
enum class RelOp { lt, le, gt, ge, eq, ne };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
    double value;
};
struct Variable {
    std::string name;
    std::size_t slot;
};
struct Negate {
    NodePtr operand;
};
struct Binary {
    BinOp op;
    NodePtr lhs;
    NodePtr rhs;
};
struct Call {
    Func func;
    std::vector<NodePtr> args;
};
struct Conditional {
    RelOp op;
    NodePtr cmp_lhs;
    NodePtr cmp_rhs;
    NodePtr then_branch;
    NodePtr else_branch;
};

struct Node {
    std::variant<Number, Variable, Negate, Binary, Call, Conditional> kind;
    std::size_t offset = 0;
};

/// Name -> value bindings; must cover exactly the expression's variables.
using EvalContext = std::map<std::string, double, std::less<>>;

class Expr {
public:
    /// Parses `source`; every identifier that is not a function must be in
    /// `allowed_vars`. Slot i of the evaluation span binds allowed_vars[i].
    static Expr parse(std::string_view source, std::vector<std::string> allowed_vars);

    double evaluate(std::span<const double> slots) const;
    double evaluate(const EvalContext& ctx) const;

    double operator()(double a) const { return evaluate(std::span<const double>(&a, 1)); }
    double operator()(double a, double b) const {
        const double slots[2] = {a, b};
        return evaluate(std::span<const double>(slots, 2));
    }

    /// Fully parenthesised rendering; parsing it back gives a structurally
    /// identical tree.
    std::string to_string() const;

    const std::string& source() const { return source_; }
    const std::vector<std::string>& variables() const { return vars_; }
    const Node& root() const { return *root_; }

private:
    Expr(std::string source, std::vector<std::string> vars, NodePtr root)
        : source_(std::move(source)), vars_(std::move(vars)), root_(std::move(root)) {}

    std::string source_;
    std::vector<std::string> vars_;
    NodePtr root_;
};

/// Tree equality ignoring source offsets.
bool structurally_equal(const Node& a, const Node& b);
inline bool structurally_equal(const Expr& a, const Expr& b) {
    return structurally_equal(a.root(), b.root());
}

std::string to_string(const Node& node);

} // namespace rqbm::expr
