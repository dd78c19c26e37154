#include "rqbm/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>

#include "rqbm/numfmt.hpp"

namespace rqbm::expr {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::syntax: return "syntax error";
    case ErrorKind::unknown_variable: return "unknown variable";
    case ErrorKind::unknown_function: return "unknown function";
    case ErrorKind::arity: return "arity mismatch";
    case ErrorKind::division_by_zero: return "division by zero";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::non_finite: return "non-finite result";
    }
    return "expression error";
}

namespace {

std::string format_message(ErrorKind kind, std::size_t offset, const std::string& detail,
                           const std::string& sub) {
    std::string msg(to_string(kind));
    msg += " at offset " + std::to_string(offset) + ": " + detail;
    if (!sub.empty()) msg += " in '" + sub + "'";
    return msg;
}

} // namespace

ExprError::ExprError(ErrorKind kind, std::size_t offset, std::string detail,
                     std::string subexpression)
    : Error(format_message(kind, offset, detail, subexpression)),
      kind_(kind),
      offset_(offset),
      subexpression_(std::move(subexpression)) {}

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
    number, ident, lparen, rparen, comma,
    plus, minus, star, slash, caret,
    lt, le, gt, ge, eq, ne,
    end,
};

struct Token {
    Tok type;
    std::size_t offset;
    std::string_view text;
    double number = 0.0;
};

std::string_view describe(const Token& t) {
    return t.type == Tok::end ? std::string_view("end of input") : t.text;
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        if (pos_ >= src_.size()) return {Tok::end, start, {}};
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number(start);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            return {Tok::ident, start, src_.substr(start, pos_ - start)};
        }
        auto two = [&](char second, Tok yes, Tok no) -> Token {
            if (pos_ + 1 < src_.size() && src_[pos_ + 1] == second) {
                pos_ += 2;
                return {yes, start, src_.substr(start, 2)};
            }
            ++pos_;
            return {no, start, src_.substr(start, 1)};
        };
        switch (c) {
        case '(': ++pos_; return {Tok::lparen, start, src_.substr(start, 1)};
        case ')': ++pos_; return {Tok::rparen, start, src_.substr(start, 1)};
        case ',': ++pos_; return {Tok::comma, start, src_.substr(start, 1)};
        case '+': ++pos_; return {Tok::plus, start, src_.substr(start, 1)};
        case '-': ++pos_; return {Tok::minus, start, src_.substr(start, 1)};
        case '*': ++pos_; return {Tok::star, start, src_.substr(start, 1)};
        case '/': ++pos_; return {Tok::slash, start, src_.substr(start, 1)};
        case '^': ++pos_; return {Tok::caret, start, src_.substr(start, 1)};
        case '<': return two('=', Tok::le, Tok::lt);
        case '>': return two('=', Tok::ge, Tok::gt);
        case '=':
            if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
                pos_ += 2;
                return {Tok::eq, start, src_.substr(start, 2)};
            }
            break;
        case '!':
            if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
                pos_ += 2;
                return {Tok::ne, start, src_.substr(start, 2)};
            }
            break;
        default: break;
        }
        throw ExprError(ErrorKind::syntax, start,
                        "unexpected character '" + std::string(1, c) + "'");
    }

private:
    Token lex_number(std::size_t start) {
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t mantissa = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) throw ExprError(ErrorKind::syntax, start, "malformed number");
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            const std::size_t save = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (digits() == 0) throw ExprError(ErrorKind::syntax, save, "malformed exponent");
        }
        const std::string_view text = src_.substr(start, pos_ - start);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value))
            throw ExprError(ErrorKind::syntax, start, "number out of range '" + std::string(text) + "'");
        return {Tok::number, start, text, value};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Parser

std::optional<Func> lookup_func(std::string_view name) {
    if (name == "sqrt") return Func::sqrt;
    if (name == "abs") return Func::abs;
    if (name == "exp") return Func::exp;
    if (name == "ln") return Func::ln;
    if (name == "min") return Func::min;
    if (name == "max") return Func::max;
    return std::nullopt;
}

std::size_t arity(Func f) {
    return (f == Func::min || f == Func::max) ? 2 : 1;
}

std::optional<RelOp> relop_of(Tok t) {
    switch (t) {
    case Tok::lt: return RelOp::lt;
    case Tok::le: return RelOp::le;
    case Tok::gt: return RelOp::gt;
    case Tok::ge: return RelOp::ge;
    case Tok::eq: return RelOp::eq;
    case Tok::ne: return RelOp::ne;
    default: return std::nullopt;
    }
}

NodePtr make(std::size_t offset, auto&& kind) {
    return std::make_shared<const Node>(Node{std::forward<decltype(kind)>(kind), offset});
}

class Parser {
public:
    Parser(std::string_view src, const std::vector<std::string>& vars)
        : lexer_(src), vars_(vars) {
        advance();
    }

    NodePtr parse_all() {
        NodePtr root = parse_expr();
        if (cur_.type != Tok::end)
            throw ExprError(ErrorKind::syntax, cur_.offset,
                            "unexpected '" + std::string(describe(cur_)) + "'");
        return root;
    }

private:
    void advance() { cur_ = lexer_.next(); }

    void expect(Tok type, std::string_view what) {
        if (cur_.type != type)
            throw ExprError(ErrorKind::syntax, cur_.offset,
                            "expected " + std::string(what) + ", found " +
                                std::string(describe(cur_)));
        advance();
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        while (cur_.type == Tok::plus || cur_.type == Tok::minus) {
            const BinOp op = cur_.type == Tok::plus ? BinOp::add : BinOp::sub;
            const std::size_t at = cur_.offset;
            advance();
            lhs = make(at, Binary{op, lhs, parse_term()});
        }
        return lhs;
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        while (cur_.type == Tok::star || cur_.type == Tok::slash) {
            const BinOp op = cur_.type == Tok::star ? BinOp::mul : BinOp::div;
            const std::size_t at = cur_.offset;
            advance();
            lhs = make(at, Binary{op, lhs, parse_unary()});
        }
        return lhs;
    }

    NodePtr parse_unary() {
        if (cur_.type == Tok::minus) {
            const std::size_t at = cur_.offset;
            advance();
            return make(at, Negate{parse_unary()});
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (cur_.type == Tok::caret) {
            const std::size_t at = cur_.offset;
            advance();
            return make(at, Binary{BinOp::pow, base, parse_unary()});
        }
        return base;
    }

    NodePtr parse_primary() {
        const Token tok = cur_;
        switch (tok.type) {
        case Tok::number:
            advance();
            return make(tok.offset, Number{tok.number});
        case Tok::lparen: {
            advance();
            NodePtr inner = parse_expr();
            expect(Tok::rparen, "')'");
            return inner;
        }
        case Tok::ident:
            advance();
            if (cur_.type == Tok::lparen) return parse_call(tok);
            return parse_variable(tok);
        default:
            throw ExprError(ErrorKind::syntax, tok.offset,
                            "expected expression, found " + std::string(describe(tok)));
        }
    }

    NodePtr parse_variable(const Token& tok) {
        if (tok.text == "if" || lookup_func(tok.text))
            throw ExprError(ErrorKind::syntax, tok.offset,
                            "function '" + std::string(tok.text) + "' requires '('");
        auto it = std::find(vars_.begin(), vars_.end(), tok.text);
        if (it == vars_.end()) {
            std::string allowed;
            for (const auto& v : vars_) allowed += (allowed.empty() ? "" : ", ") + v;
            throw ExprError(ErrorKind::unknown_variable, tok.offset,
                            "'" + std::string(tok.text) + "' (allowed: " + allowed + ")");
        }
        return make(tok.offset,
                    Variable{std::string(tok.text), static_cast<std::size_t>(it - vars_.begin())});
    }

    NodePtr parse_call(const Token& name) {
        advance(); // '('
        if (name.text == "if") return parse_conditional(name);
        const auto func = lookup_func(name.text);
        if (!func)
            throw ExprError(ErrorKind::unknown_function, name.offset,
                            "'" + std::string(name.text) + "'");
        std::vector<NodePtr> args;
        if (cur_.type != Tok::rparen) {
            args.push_back(parse_expr());
            while (cur_.type == Tok::comma) {
                advance();
                args.push_back(parse_expr());
            }
        }
        expect(Tok::rparen, "')'");
        if (args.size() != arity(*func))
            throw ExprError(ErrorKind::arity, name.offset,
                            "'" + std::string(name.text) + "' takes " +
                                std::to_string(arity(*func)) + " argument(s), got " +
                                std::to_string(args.size()));
        return make(name.offset, Call{*func, std::move(args)});
    }

    NodePtr parse_conditional(const Token& name) {
        NodePtr cmp_lhs = parse_expr();
        const auto rel = relop_of(cur_.type);
        if (!rel)
            throw ExprError(ErrorKind::syntax, cur_.offset,
                            "expected comparison operator in if(), found " +
                                std::string(describe(cur_)));
        advance();
        NodePtr cmp_rhs = parse_expr();
        std::vector<NodePtr> branches;
        while (cur_.type == Tok::comma) {
            advance();
            branches.push_back(parse_expr());
        }
        expect(Tok::rparen, "')'");
        if (branches.size() != 2)
            throw ExprError(ErrorKind::arity, name.offset,
                            "'if' takes 3 arguments, got " + std::to_string(branches.size() + 1));
        return make(name.offset, Conditional{*rel, cmp_lhs, cmp_rhs, branches[0], branches[1]});
    }

    Lexer lexer_;
    const std::vector<std::string>& vars_;
    Token cur_{Tok::end, 0, {}};
};

// ---------------------------------------------------------------------------
// Evaluation

[[noreturn]] void fail(ErrorKind kind, const Node& node, std::string detail) {
    throw ExprError(kind, node.offset, std::move(detail), to_string(node));
}

double checked(double v, const Node& node) {
    if (!std::isfinite(v)) fail(ErrorKind::non_finite, node, "result is " + shortest_repr(v));
    return v;
}

double eval(const Node& node, std::span<const double> slots) {
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Number>) {
                return n.value;
            } else if constexpr (std::is_same_v<T, Variable>) {
                return slots[n.slot];
            } else if constexpr (std::is_same_v<T, Negate>) {
                return -eval(*n.operand, slots);
            } else if constexpr (std::is_same_v<T, Binary>) {
                const double a = eval(*n.lhs, slots);
                const double b = eval(*n.rhs, slots);
                switch (n.op) {
                case BinOp::add: return checked(a + b, node);
                case BinOp::sub: return checked(a - b, node);
                case BinOp::mul: return checked(a * b, node);
                case BinOp::div:
                    if (b == 0.0) fail(ErrorKind::division_by_zero, node, "divisor is zero");
                    return checked(a / b, node);
                case BinOp::pow: return checked(std::pow(a, b), node);
                }
                return 0.0;
            } else if constexpr (std::is_same_v<T, Call>) {
                const double a = eval(*n.args[0], slots);
                switch (n.func) {
                case Func::sqrt:
                    if (a < 0.0) fail(ErrorKind::domain, node, "sqrt of negative " + shortest_repr(a));
                    return std::sqrt(a);
                case Func::abs: return std::abs(a);
                case Func::exp: return checked(std::exp(a), node);
                case Func::ln:
                    if (a <= 0.0) fail(ErrorKind::domain, node, "ln of non-positive " + shortest_repr(a));
                    return std::log(a);
                case Func::min: return std::min(a, eval(*n.args[1], slots));
                case Func::max: return std::max(a, eval(*n.args[1], slots));
                }
                return 0.0;
            } else {
                const double a = eval(*n.cmp_lhs, slots);
                const double b = eval(*n.cmp_rhs, slots);
                bool take = false;
                switch (n.op) {
                case RelOp::lt: take = a < b; break;
                case RelOp::le: take = a <= b; break;
                case RelOp::gt: take = a > b; break;
                case RelOp::ge: take = a >= b; break;
                case RelOp::eq: take = a == b; break;
                case RelOp::ne: take = a != b; break;
                }
                return eval(take ? *n.then_branch : *n.else_branch, slots);
            }
        },
        node.kind);
}

std::string_view func_name(Func f) {
    switch (f) {
    case Func::sqrt: return "sqrt";
    case Func::abs: return "abs";
    case Func::exp: return "exp";
    case Func::ln: return "ln";
    case Func::min: return "min";
    case Func::max: return "max";
    }
    return "?";
}

std::string_view op_text(BinOp op) {
    switch (op) {
    case BinOp::add: return " + ";
    case BinOp::sub: return " - ";
    case BinOp::mul: return " * ";
    case BinOp::div: return " / ";
    case BinOp::pow: return "^";
    }
    return "?";
}

std::string_view op_text(RelOp op) {
    switch (op) {
    case RelOp::lt: return " < ";
    case RelOp::le: return " <= ";
    case RelOp::gt: return " > ";
    case RelOp::ge: return " >= ";
    case RelOp::eq: return " == ";
    case RelOp::ne: return " != ";
    }
    return "?";
}

} // namespace

std::string to_string(const Node& node) {
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Number>) {
                return shortest_repr(n.value);
            } else if constexpr (std::is_same_v<T, Variable>) {
                return n.name;
            } else if constexpr (std::is_same_v<T, Negate>) {
                return "(-" + to_string(*n.operand) + ")";
            } else if constexpr (std::is_same_v<T, Binary>) {
                return "(" + to_string(*n.lhs) + std::string(op_text(n.op)) + to_string(*n.rhs) + ")";
            } else if constexpr (std::is_same_v<T, Call>) {
                std::string out(func_name(n.func));
                out += '(';
                for (std::size_t i = 0; i < n.args.size(); ++i) {
                    if (i) out += ", ";
                    out += to_string(*n.args[i]);
                }
                return out + ')';
            } else {
                return "if(" + to_string(*n.cmp_lhs) + std::string(op_text(n.op)) +
                       to_string(*n.cmp_rhs) + ", " + to_string(*n.then_branch) + ", " +
                       to_string(*n.else_branch) + ")";
            }
        },
        node.kind);
}

bool structurally_equal(const Node& a, const Node& b) {
    if (a.kind.index() != b.kind.index()) return false;
    return std::visit(
        [&](const auto& na) -> bool {
            using T = std::decay_t<decltype(na)>;
            const auto& nb = std::get<T>(b.kind);
            if constexpr (std::is_same_v<T, Number>) {
                return na.value == nb.value;
            } else if constexpr (std::is_same_v<T, Variable>) {
                return na.name == nb.name && na.slot == nb.slot;
            } else if constexpr (std::is_same_v<T, Negate>) {
                return structurally_equal(*na.operand, *nb.operand);
            } else if constexpr (std::is_same_v<T, Binary>) {
                return na.op == nb.op && structurally_equal(*na.lhs, *nb.lhs) &&
                       structurally_equal(*na.rhs, *nb.rhs);
            } else if constexpr (std::is_same_v<T, Call>) {
                if (na.func != nb.func || na.args.size() != nb.args.size()) return false;
                for (std::size_t i = 0; i < na.args.size(); ++i)
                    if (!structurally_equal(*na.args[i], *nb.args[i])) return false;
                return true;
            } else {
                return na.op == nb.op && structurally_equal(*na.cmp_lhs, *nb.cmp_lhs) &&
                       structurally_equal(*na.cmp_rhs, *nb.cmp_rhs) &&
                       structurally_equal(*na.then_branch, *nb.then_branch) &&
                       structurally_equal(*na.else_branch, *nb.else_branch);
            }
        },
        a.kind);
}

Expr Expr::parse(std::string_view source, std::vector<std::string> allowed_vars) {
    Parser parser(source, allowed_vars);
    NodePtr root = parser.parse_all();
    return Expr(std::string(source), std::move(allowed_vars), std::move(root));
}

double Expr::evaluate(std::span<const double> slots) const {
    if (slots.size() != vars_.size())
        throw PreconditionError("expression '" + source_ + "' expects " +
                                std::to_string(vars_.size()) + " bound variable(s), got " +
                                std::to_string(slots.size()));
    return eval(*root_, slots);
}

double Expr::evaluate(const EvalContext& ctx) const {
    if (ctx.size() != vars_.size())
        throw PreconditionError("context must bind exactly the variables of '" + source_ + "'");
    std::vector<double> slots;
    slots.reserve(vars_.size());
    for (const auto& name : vars_) {
        auto it = ctx.find(name);
        if (it == ctx.end())
            throw PreconditionError("context does not bind variable '" + name + "'");
        slots.push_back(it->second);
    }
    return eval(*root_, slots);
}

std::string Expr::to_string() const {
    return expr::to_string(*root_);
}

} // namespace rqbm::expr
