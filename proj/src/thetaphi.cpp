#include "rqbm/thetaphi.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "rqbm/numfmt.hpp"

namespace rqbm {

namespace {

constexpr std::string_view kBuiltinPrefix = "builtin:";

std::string grid_summary(std::span<const double> grid) {
    if (grid.empty()) return "empty grid";
    return std::to_string(grid.size()) + " points over [" + shortest_repr(grid.front()) + ", " +
           shortest_repr(grid.back()) + "]";
}

void add_witness(PropertyCheck& check, FailureWitness w, double defect, std::size_t cap) {
    check.passed = false;
    check.defect = std::max(check.defect, defect);
    if (check.witnesses.size() < cap) check.witnesses.push_back(std::move(w));
}

/// Sampled continuity proxy over consecutive grid steps.
PropertyCheck continuity_proxy(std::span<const double> grid, std::span<const double> values,
                               double factor, std::size_t cap) {
    PropertyCheck check{"continuity"};
    check.note = "heuristic: jump vs. median neighbouring secant";
    const std::size_t steps = grid.size() < 2 ? 0 : grid.size() - 1;
    if (steps < 2) {
        check.evaluated = false;
        check.note = "grid too small for the continuity proxy";
        return check;
    }
    std::vector<double> secant(steps);
    for (std::size_t i = 0; i < steps; ++i)
        secant[i] = std::abs(values[i + 1] - values[i]) / (grid[i + 1] - grid[i]);

    for (std::size_t i = 0; i < steps; ++i) {
        std::vector<double> near;
        for (std::size_t k = (i >= 2 ? i - 2 : 0); k <= std::min(steps - 1, i + 2); ++k)
            if (k != i) near.push_back(secant[k]);
        std::sort(near.begin(), near.end());
        const std::size_t h = near.size() / 2;
        const double median = near.size() % 2 ? near[h] : 0.5 * (near[h - 1] + near[h]);
        const double width = grid[i + 1] - grid[i];
        const double jump = std::abs(values[i + 1] - values[i]);
        const double floor = 1e-12 * std::max(1.0, std::abs(values[i]));
        const double allowed = factor * median * width;
        if (jump > allowed && jump > floor) {
            add_witness(check,
                        {{grid[i], grid[i + 1]},
                         {values[i], values[i + 1]},
                         "jump " + shortest_repr(jump) + " exceeds " + shortest_repr(allowed)},
                        jump - allowed, cap);
        }
    }
    return check;
}

void require_sorted(std::span<const double> grid, double min_value, std::string_view what) {
    if (grid.empty()) throw PreconditionError(std::string(what) + " grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= min_value) || !std::isfinite(grid[i]))
            throw PreconditionError(std::string(what) + " grid point " + shortest_repr(grid[i]) +
                                    " outside the domain");
        if (i && !(grid[i] > grid[i - 1]))
            throw PreconditionError(std::string(what) + " grid must be strictly ascending");
    }
}

void finish(ValidationReport& rep) {
    for (const auto& p : rep.properties) rep.max_defect = std::max(rep.max_defect, p.defect);
}

} // namespace

// ---------------------------------------------------------------------------
// Specs and registry

ThetaSpec::ThetaSpec(std::string name, expr::Expr expression)
    : name_(std::move(name)), expr_(std::move(expression)) {
    if (expr_.variables() != std::vector<std::string>{"t"})
        throw PreconditionError("theta must be an expression in t");
}

double ThetaSpec::operator()(double t) const {
    if (!(t > 0.0))
        throw PreconditionError("theta is defined on (0, inf); got t = " + shortest_repr(t));
    return expr_(t);
}

ThetaSpec ThetaSpec::parse(std::string_view text) {
    if (text.starts_with(kBuiltinPrefix)) {
        const auto name = text.substr(kBuiltinPrefix.size());
        if (auto spec = theta_builtin(name)) return *spec;
        throw PreconditionError("unknown theta builtin '" + std::string(name) + "'");
    }
    return ThetaSpec(std::string(text), expr::Expr::parse(text, {"t"}));
}

PhiSpec::PhiSpec(std::string name, expr::Expr expression)
    : name_(std::move(name)), expr_(std::move(expression)) {
    if (expr_.variables() != std::vector<std::string>{"t"})
        throw PreconditionError("phi must be an expression in t");
}

PhiSpec PhiSpec::parse(std::string_view text) {
    if (text.starts_with(kBuiltinPrefix)) {
        const auto name = text.substr(kBuiltinPrefix.size());
        if (auto spec = phi_builtin(name)) return *spec;
        throw PreconditionError("unknown phi builtin '" + std::string(name) + "'");
    }
    return PhiSpec(std::string(text), expr::Expr::parse(text, {"t"}));
}

std::optional<ThetaSpec> theta_builtin(std::string_view name) {
    const char* source = nullptr;
    if (name == "exp-sqrt") source = "exp(sqrt(t))";
    else if (name == "sqrt-plus-one") source = "sqrt(t) + 1";
    else if (name == "exp") source = "exp(t)";
    if (!source) return std::nullopt;
    return ThetaSpec("builtin:" + std::string(name), expr::Expr::parse(source, {"t"}));
}

PhiSpec phi_power(double r) {
    if (!(r > 0.0 && r < 1.0))
        throw PreconditionError("pow exponent must lie in (0, 1), got " + shortest_repr(r));
    const std::string text = shortest_repr(r);
    return PhiSpec("builtin:pow:" + text, expr::Expr::parse("t^" + text, {"t"}));
}

std::optional<PhiSpec> phi_builtin(std::string_view name) {
    if (name == "midpoint")
        return PhiSpec("builtin:midpoint", expr::Expr::parse("(t + 1)/2", {"t"}));
    if (name.starts_with("pow:")) {
        const auto arg = name.substr(4);
        double r = 0.0;
        auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), r);
        if (ec != std::errc() || ptr != arg.data() + arg.size()) return std::nullopt;
        if (!(r > 0.0 && r < 1.0)) return std::nullopt;
        return phi_power(r);
    }
    return std::nullopt;
}

std::vector<std::string> theta_builtin_names() { return {"exp-sqrt", "sqrt-plus-one", "exp"}; }
std::vector<std::string> phi_builtin_names() { return {"midpoint", "pow:<r>"}; }

// ---------------------------------------------------------------------------
// Grids

std::vector<double> log_grid(double lo, double hi, std::size_t per_decade) {
    if (!(lo > 0.0 && hi > lo) || per_decade == 0)
        throw PreconditionError("log grid needs 0 < lo < hi and a positive density");
    const double decades = std::log10(hi / lo);
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::round(decades * per_decade)));
    std::vector<double> g(steps + 1);
    const double l0 = std::log10(lo);
    for (std::size_t k = 0; k <= steps; ++k)
        g[k] = std::pow(10.0, l0 + decades * static_cast<double>(k) / static_cast<double>(steps));
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> default_theta_grid() { return log_grid(1e-8, 1e3, 64); }

std::vector<double> default_phi_grid() {
    std::vector<double> g{1.0};
    for (double t : default_theta_grid()) g.push_back(1.0 + t);
    return g;
}

// ---------------------------------------------------------------------------
// Reports

bool ValidationReport::passed() const {
    return std::all_of(properties.begin(), properties.end(),
                       [](const PropertyCheck& p) { return p.passed; });
}

const PropertyCheck* ValidationReport::property(std::string_view name) const {
    for (const auto& p : properties)
        if (p.name == name) return &p;
    return nullptr;
}

ValidationReport validate_theta(const ThetaSpec& spec, std::span<const double> grid,
                                const ThetaValidationOptions& opt) {
    require_sorted(grid, std::nextafter(0.0, 1.0), "theta");
    const std::size_t cap = opt.max_witnesses;
    ValidationReport rep{spec.name(), grid_summary(grid)};

    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = spec(grid[i]);

    PropertyCheck range{"range"};
    range.note = "theta(t) > 1";
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (!(values[i] > 1.0))
            add_witness(range, {{grid[i]}, {values[i]}, "theta(t) <= 1"}, 1.0 - values[i], cap);

    PropertyCheck increasing{"increasing"};
    increasing.note = "strictly increasing along the grid";
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(values[i] > values[i - 1]))
            add_witness(increasing,
                        {{grid[i - 1], grid[i]}, {values[i - 1], values[i]}, "not strictly increasing"},
                        values[i - 1] - values[i], cap);

    PropertyCheck limit{"limit"};
    limit.note = "theta(min/2^n) decreases to within " + shortest_repr(opt.limit_threshold) + " of 1";
    {
        double t = grid.front();
        double prev = values.front();
        for (std::size_t n = 1; n <= opt.vanishing_seq_len; ++n) {
            t *= 0.5;
            const double v = spec(t);
            if (v > prev)
                add_witness(limit, {{t}, {v}, "theta increased along the vanishing sequence"}, v - prev, cap);
            prev = v;
        }
        if (!(prev - 1.0 < opt.limit_threshold))
            add_witness(limit, {{t}, {prev}, "theta(t_last) - 1 not below threshold"},
                        prev - 1.0 - opt.limit_threshold, cap);
    }

    rep.properties = {std::move(range), std::move(increasing), std::move(limit),
                      continuity_proxy(grid, values, opt.jump_factor, cap)};
    finish(rep);
    return rep;
}

double iterate_phi(const PhiSpec& spec, double t, std::size_t n) {
    if (!(t >= 1.0)) throw PreconditionError("phi iterates start at t >= 1, got " + shortest_repr(t));
    for (std::size_t i = 0; i < n; ++i) t = spec(t);
    return t;
}

ValidationReport validate_phi(const PhiSpec& spec, std::span<const double> grid,
                              const PhiValidationOptions& opt) {
    require_sorted(grid, 1.0, "phi");
    const std::size_t cap = opt.max_witnesses;
    ValidationReport rep{spec.name(), grid_summary(grid)};

    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = spec(grid[i]);

    PropertyCheck at_one{"fixes_one"};
    at_one.note = "phi(1) = 1";
    const double one = spec(1.0);
    if (!(std::abs(one - 1.0) <= opt.fixed_point_tol))
        add_witness(at_one, {{1.0}, {one}, "phi(1) != 1"}, std::abs(one - 1.0), cap);

    PropertyCheck nondecreasing{"nondecreasing"};
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (values[i] < values[i - 1])
            add_witness(nondecreasing, {{grid[i - 1], grid[i]}, {values[i - 1], values[i]}, "phi decreased"},
                        values[i - 1] - values[i], cap);

    PropertyCheck below{"below_diagonal"};
    below.note = "phi(t) < t for t > 1";
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid[i] > 1.0 && !(values[i] < grid[i]))
            add_witness(below,
                        {{grid[i]}, {values[i]},
                         "phi(" + shortest_repr(grid[i]) + ") = " + shortest_repr(values[i]) +
                             " is not < " + shortest_repr(grid[i])},
                        values[i] - grid[i], cap);

    PropertyCheck iterates{"iterates_to_one"};
    iterates.note = "phi^n(t) nonincreasing and phi^" + std::to_string(opt.iterate_depth) +
                    "(t) - 1 < " + shortest_repr(opt.limit_threshold);
    for (double t0 : grid) {
        double t = t0;
        for (std::size_t n = 1; n <= opt.iterate_depth; ++n) {
            const double next = spec(t);
            if (!(next >= 1.0))
                throw Error("phi iterate escaped [1, inf): phi^" + std::to_string(n) + "(" +
                            shortest_repr(t0) + ") = " + shortest_repr(next));
            if (next > t)
                add_witness(iterates, {{t0, t}, {next}, "iterate increased at step " + std::to_string(n)},
                            next - t, cap);
            t = next;
        }
        if (!(t - 1.0 < opt.limit_threshold))
            add_witness(iterates, {{t0}, {t}, "iterates did not reach 1"}, t - 1.0 - opt.limit_threshold, cap);
    }

    rep.properties = {std::move(at_one), std::move(nondecreasing), std::move(below),
                      std::move(iterates), continuity_proxy(grid, values, opt.jump_factor, cap)};
    finish(rep);
    return rep;
}

} // namespace rqbm
