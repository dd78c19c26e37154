#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "rqbm/expr.hpp"
#include "rqbm/random.hpp"

using rqbm::expr::ErrorKind;
using rqbm::expr::Expr;
using rqbm::expr::ExprError;

namespace {

double eval0(const std::string& s) { return Expr::parse(s, {}).evaluate(std::span<const double>{}); }

ErrorKind parse_error_kind(const std::string& s, std::vector<std::string> vars = {"x"}) {
    try {
        Expr::parse(s, std::move(vars));
    } catch (const ExprError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error for '" << s << "'";
    return ErrorKind::syntax;
}

ErrorKind eval_error_kind(const std::string& s, double x) {
    try {
        Expr::parse(s, {"x"})(x);
    } catch (const ExprError& e) {
        EXPECT_FALSE(e.subexpression().empty());
        return e.kind();
    }
    ADD_FAILURE() << "no error for '" << s << "'";
    return ErrorKind::syntax;
}

/// Random well-formed expression over x and y.
std::string random_expr(rqbm::Rng& rng, int depth) {
    if (depth == 0 || rng.below(4) == 0) {
        switch (rng.below(3)) {
        case 0: return "x";
        case 1: return "y";
        default: return std::to_string(static_cast<int>(rng.below(9)) + 1) + "." + std::to_string(rng.below(10));
        }
    }
    const auto a = random_expr(rng, depth - 1);
    const auto b = random_expr(rng, depth - 1);
    switch (rng.below(9)) {
    case 0: return a + " + " + b;
    case 1: return a + " - " + b;
    case 2: return a + " * " + b;
    case 3: return "(" + a + ") / (" + b + ")";
    case 4: return "(" + a + ")^" + b;
    case 5: return "-" + a;
    case 6: return "abs(" + a + ")";
    case 7: return "max(" + a + ", " + b + ")";
    default: return "if(" + a + " <= " + b + ", " + a + ", " + b + ")";
    }
}

} // namespace

TEST(ExprParse, PrecedenceTable) {
    EXPECT_EQ(eval0("1+2*3"), 7.0);
    EXPECT_EQ(eval0("(1+2)*3"), 9.0);
    EXPECT_EQ(eval0("-2^2"), -4.0);
    EXPECT_EQ(eval0("2^3^2"), 512.0);
    EXPECT_EQ(eval0("2^-1"), 0.5);
    EXPECT_EQ(eval0("10 - 4 - 3"), 3.0);
    EXPECT_EQ(eval0("8 / 4 / 2"), 1.0);
    EXPECT_EQ(eval0("1.5e2"), 150.0);
    EXPECT_EQ(eval0("--3"), 3.0);
}

TEST(ExprParse, PiecewiseDistance) {
    const auto e = Expr::parse("if(x >= y, (x-y)^2, 0.5*(y-x)^2)", {"x", "y"});
    EXPECT_EQ(e(2.0, 1.0), 1.0);
    EXPECT_EQ(e(1.0, 2.0), 0.5);
    for (double v : {1.0, 1.25, 1.7, 2.0}) EXPECT_EQ(e(v, v), 0.0);
}

TEST(ExprParse, IncompleteInputReportsEndOffset) {
    try {
        Expr::parse("x + ", {"x"});
        FAIL();
    } catch (const ExprError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::syntax);
        EXPECT_EQ(e.offset(), 4u);
        EXPECT_NE(std::string(e.what()).find("offset 4"), std::string::npos);
    }
}

TEST(ExprParse, ErrorCategoriesAreDistinct) {
    EXPECT_EQ(parse_error_kind("x + z"), ErrorKind::unknown_variable);
    EXPECT_EQ(parse_error_kind("foo(x)"), ErrorKind::unknown_function);
    EXPECT_EQ(parse_error_kind("sqrt(x, x)"), ErrorKind::arity);
    EXPECT_EQ(parse_error_kind("max(x)"), ErrorKind::arity);
    EXPECT_EQ(parse_error_kind("if(x < 1, 2)"), ErrorKind::arity);
    EXPECT_EQ(parse_error_kind("if(x, 1, 2)"), ErrorKind::syntax);
    EXPECT_EQ(parse_error_kind("(x"), ErrorKind::syntax);
    EXPECT_EQ(parse_error_kind("x $ 2"), ErrorKind::syntax);
    EXPECT_EQ(parse_error_kind("sqrt"), ErrorKind::syntax);
    EXPECT_EQ(parse_error_kind(""), ErrorKind::syntax);
}

TEST(ExprParse, OffsetPointsAtOffendingToken) {
    try {
        Expr::parse("sqrt(x) + q", {"x"});
        FAIL();
    } catch (const ExprError& e) {
        EXPECT_EQ(e.offset(), 10u);
    }
}

TEST(ExprEval, HandArithmetic) {
    const auto sq = Expr::parse("(x - y)^2", {"x", "y"});
    EXPECT_NEAR(sq(0.5, 1.0 / 3.0), 1.0 / 36.0, 1e-16);
    EXPECT_EQ(Expr::parse("sqrt(x)", {"x"})(1.0), 1.0);
    EXPECT_EQ(Expr::parse("exp(sqrt(t))", {"t"})(0.0), 1.0);
    EXPECT_EQ(Expr::parse("min(x, 2) + max(x, 2) + abs(-x)", {"x"})(3.0), 8.0);
    EXPECT_EQ(Expr::parse("ln(exp(x))", {"x"})(2.0), 2.0);
}

TEST(ExprEval, ContextBindings) {
    const auto e = Expr::parse("x - 2*y", {"x", "y"});
    EXPECT_EQ(e.evaluate(rqbm::expr::EvalContext{{"x", 5.0}, {"y", 1.0}}), 3.0);
    EXPECT_THROW(e.evaluate(rqbm::expr::EvalContext{{"x", 5.0}}), rqbm::Error);
}

TEST(ExprEval, ErrorsNameTheSubexpression) {
    EXPECT_EQ(eval_error_kind("1/(x - x)", 1.0), ErrorKind::division_by_zero);
    EXPECT_EQ(eval_error_kind("sqrt(x - 2)", 1.0), ErrorKind::domain);
    EXPECT_EQ(eval_error_kind("ln(x - 1)", 1.0), ErrorKind::domain);
    EXPECT_EQ(eval_error_kind("exp(1000*x)", 1.0), ErrorKind::non_finite);
}

TEST(ExprEval, ConditionalEvaluatesOneBranch) {
    const auto e = Expr::parse("if(x > 0, 1, 1/0)", {"x"});
    EXPECT_EQ(e(1.0), 1.0);
    EXPECT_THROW(e(-1.0), ExprError);
    EXPECT_EQ(Expr::parse("if(x == 1, 5, 6)", {"x"})(1.0), 5.0);
    EXPECT_EQ(Expr::parse("if(x != 1, 5, 6)", {"x"})(1.0), 6.0);
}

TEST(ExprProperty, PrintParseRoundTrip) {
    rqbm::Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        const auto src = random_expr(rng, 4);
        const auto e = Expr::parse(src, {"x", "y"});
        const auto again = Expr::parse(e.to_string(), {"x", "y"});
        ASSERT_TRUE(rqbm::expr::structurally_equal(e, again)) << src << " -> " << e.to_string();
        EXPECT_EQ(again.to_string(), e.to_string());
    }
}

TEST(ExprProperty, EvaluationIsDeterministic) {
    rqbm::Rng rng(5);
    for (int i = 0; i < 300; ++i) {
        const auto e = Expr::parse(random_expr(rng, 4), {"x", "y"});
        const double x = rng.uniform(-3, 3), y = rng.uniform(-3, 3);
        auto once = [&]() -> std::optional<double> {
            try {
                return e(x, y);
            } catch (const ExprError&) {
                return std::nullopt;
            }
        };
        const auto a = once(), b = once();
        ASSERT_EQ(a.has_value(), b.has_value());
        if (a) EXPECT_EQ(std::bit_cast<std::uint64_t>(*a), std::bit_cast<std::uint64_t>(*b));
    }
}
