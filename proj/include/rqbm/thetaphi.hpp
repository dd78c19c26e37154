#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rqbm/expr.hpp"

namespace rqbm {

/// Candidate theta: (0, inf) -> (1, inf), increasing, continuous, with
/// theta(t_n) -> 1 exactly when t_n -> 0.
class ThetaSpec {
public:
    ThetaSpec(std::string name, expr::Expr expression);

    /// "builtin:<name>" or an expression in t.
    static ThetaSpec parse(std::string_view text);

    const std::string& name() const { return name_; }
    const expr::Expr& expression() const { return expr_; }

    /// Throws PreconditionError for t <= 0.
    double operator()(double t) const;

private:
    std::string name_;
    expr::Expr expr_;
};

/// Candidate phi: [1, inf) -> [1, inf), nondecreasing, continuous, with
/// phi^n(t) -> 1 for every t.
class PhiSpec {
public:
    PhiSpec(std::string name, expr::Expr expression);

    static PhiSpec parse(std::string_view text);

    const std::string& name() const { return name_; }
    const expr::Expr& expression() const { return expr_; }

    double operator()(double t) const { return expr_(t); }

private:
    std::string name_;
    expr::Expr expr_;
};

/// Built-ins: theta in {exp-sqrt, sqrt-plus-one, exp}; phi in {midpoint,
/// pow:<r>} where pow:<r> is t^r.
std::optional<ThetaSpec> theta_builtin(std::string_view name);
std::optional<PhiSpec> phi_builtin(std::string_view name);
std::vector<std::string> theta_builtin_names();
std::vector<std::string> phi_builtin_names();
PhiSpec phi_power(double r);

struct FailureWitness {
    std::vector<double> points;
    std::vector<double> values;
    std::string detail;
};

struct PropertyCheck {
    std::string name;
    bool passed = true;
    bool evaluated = true; // false when the grid is too small for the check
    double defect = 0.0;   // largest observed violation magnitude
    std::vector<FailureWitness> witnesses;
    std::string note;
};

struct ValidationReport {
    std::string subject;
    std::string grid;
    std::vector<PropertyCheck> properties;
    double max_defect = 0.0;

    bool passed() const;
    const PropertyCheck* property(std::string_view name) const;
};

/// 10^(k/per_decade)-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t per_decade);
/// 64 points per decade over [1e-8, 1e3].
std::vector<double> default_theta_grid();
/// {1} followed by 1 + g for g in the default theta grid.
std::vector<double> default_phi_grid();

struct ThetaValidationOptions {
    std::size_t vanishing_seq_len = 40;
    double limit_threshold = 1e-3;
    double jump_factor = 10.0;
    std::size_t max_witnesses = 16;
};

struct PhiValidationOptions {
    std::size_t iterate_depth = 200;
    double limit_threshold = 1e-6;
    double fixed_point_tol = 1e-12;
    double jump_factor = 10.0;
    std::size_t max_witnesses = 16;
};

/// Checks range (> 1), strict increase, the vanishing-sequence limit and a
/// sampled continuity proxy. The proxy flags a grid step whose jump exceeds
/// jump_factor times the median neighbouring secant slope times the step;
/// it is a heuristic, not a proof of continuity.
ValidationReport validate_theta(const ThetaSpec& spec, std::span<const double> grid,
                                const ThetaValidationOptions& opt = {});

/// Checks phi(1) = 1, monotonicity, phi(t) < t for t > 1, that iterates
/// decrease to 1 within iterate_depth steps, and the continuity proxy.
ValidationReport validate_phi(const PhiSpec& spec, std::span<const double> grid,
                              const PhiValidationOptions& opt = {});

/// n-fold composition phi(phi(...phi(t))); n = 0 returns t.
double iterate_phi(const PhiSpec& spec, double t, std::size_t n);

} // namespace rqbm
