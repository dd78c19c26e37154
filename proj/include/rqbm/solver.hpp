#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rqbm/contraction.hpp"
#include "rqbm/spaces.hpp"

namespace rqbm {

enum class Termination { exact_fixed_point, tolerance, max_iter, cycle_detected };
std::string_view to_string(Termination t);

struct SolveOptions {
    std::size_t max_iter = 10000;
    double tol = 1e-10;
};

/// x0, x1 = T x0, ... with the four distance series. fwd_step[n] is
/// eta(x_n, x_{n+1}); fwd_skip[n] is eta(x_n, x_{n+2}); bwd_* swap arguments.
struct PicardTrace {
    std::vector<Element> iterates;
    std::vector<double> fwd_step, bwd_step, fwd_skip, bwd_skip;
    Termination terminated_by = Termination::max_iter;
    std::optional<Element> limit;
    double tol = 0.0;
    std::size_t max_iter = 0;

    bool converged() const { return limit.has_value(); }
    std::size_t steps() const { return fwd_step.size(); }
};

/// Stops on, in order: an exact zero forward step, both step distances and
/// the coordinate change below tol, a revisited label (finite spaces), or
/// max_iter.
PicardTrace picard_iterate(const Space& space, const SelfMap& map, const Element& x0,
                           const SolveOptions& opt = {});

struct SeriesDiagnostic {
    std::string name;
    bool strictly_decreasing = true; // consecutive zeros count as decreasing
    std::optional<std::size_t> first_violation; // n with series[n] >= series[n-1] > 0
    double tail = 0.0;
    bool tail_below_tol = true;
};

struct CauchyReport {
    double tol = 0.0;
    std::array<SeriesDiagnostic, 4> series; // fwd_step, bwd_step, fwd_skip, bwd_skip
    bool passed() const;
};

/// Needs at least three iterates.
CauchyReport cauchy_diagnostics(const PicardTrace& trace, double tol = 1e-9);

struct FixedPointVerdict {
    Element point;
    Element image;
    double fwd_residual = 0.0; // eta(Tz, z)
    double bwd_residual = 0.0; // eta(z, Tz)
    double tol = 0.0;
    bool verified = false;
};

FixedPointVerdict verify_fixed_point(const Space& space, const SelfMap& map, const Element& z,
                                     double tol);

struct StartOutcome {
    Element start;
    Termination terminated_by = Termination::max_iter;
    std::size_t steps = 0;
    std::optional<Element> limit;
};

struct UniquenessReport {
    bool passed = false;
    double merge_tol = 0.0;
    std::vector<StartOutcome> runs; // start order
    std::vector<Element> distinct_limits;
    std::vector<std::size_t> non_converged;
};

/// Passes when at least one run converged and every converged limit lies
/// within merge_tol (both directions) of the first one. merge_tol defaults
/// to 100 * tol.
UniquenessReport uniqueness_scan(const Space& space, const SelfMap& map,
                                 const std::vector<Element>& starts, const SolveOptions& opt = {},
                                 std::optional<double> merge_tol = std::nullopt);

struct SandwichReport {
    Element limit;
    Element y;
    double s = 1.0;
    std::size_t tail_len = 0;
    double tol = 1e-9;

    double d_limit_y = 0.0; // eta(x, y)
    double fwd_min = 0.0, fwd_max = 0.0; // eta(x_n, y) over the tail
    bool fwd_holds = false;
    double d_y_limit = 0.0; // eta(y, x)
    double bwd_min = 0.0, bwd_max = 0.0; // eta(y, x_n) over the tail
    bool bwd_holds = false;

    bool passed() const { return fwd_holds && bwd_holds; }
};

/// eta(x,y)/s <= min eta(x_n,y) and max eta(x_n,y) <= s eta(x,y) over the
/// last tail_len iterates, and the same with arguments swapped.
SandwichReport limit_sandwich_check(const Space& space, const PicardTrace& trace, const Element& y,
                                    double s, std::size_t tail_len, double tol = 1e-9);

} // namespace rqbm
