#include "rqbm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "rqbm/numfmt.hpp"
#include "rqbm/parallel.hpp"

namespace rqbm {

std::string_view to_string(Termination t) {
    switch (t) {
    case Termination::exact_fixed_point: return "exact_fixed_point";
    case Termination::tolerance: return "tolerance";
    case Termination::max_iter: return "max_iter";
    case Termination::cycle_detected: return "cycle_detected";
    }
    return "?";
}

PicardTrace picard_iterate(const Space& space, const SelfMap& map, const Element& x0,
                           const SolveOptions& opt) {
    if (opt.max_iter < 1) throw PreconditionError("max_iter must be at least 1");
    if (!(opt.tol > 0.0)) throw PreconditionError("tol must be positive");

    PicardTrace tr;
    tr.tol = opt.tol;
    tr.max_iter = opt.max_iter;
    tr.iterates.push_back(x0);
    std::unordered_set<std::size_t> seen;
    if (x0.index) seen.insert(*x0.index);

    for (std::size_t n = 0; n < opt.max_iter; ++n) {
        const Element cur = tr.iterates.back();
        const Element next = map.apply(space, cur);
        tr.iterates.push_back(next);
        const double fwd = space.distance(cur, next);
        const double bwd = space.distance(next, cur);
        tr.fwd_step.push_back(fwd);
        tr.bwd_step.push_back(bwd);
        if (n >= 1) {
            const Element& prev = tr.iterates[n - 1];
            tr.fwd_skip.push_back(space.distance(prev, next));
            tr.bwd_skip.push_back(space.distance(next, prev));
        }
        if (fwd == 0.0) {
            tr.terminated_by = Termination::exact_fixed_point;
            tr.limit = next;
            return tr;
        }
        if (std::max(fwd, bwd) < opt.tol && std::abs(next.value - cur.value) < opt.tol) {
            tr.terminated_by = Termination::tolerance;
            tr.limit = next;
            return tr;
        }
        if (next.index && !seen.insert(*next.index).second) {
            tr.terminated_by = Termination::cycle_detected;
            return tr;
        }
    }
    tr.terminated_by = Termination::max_iter;
    return tr;
}

bool CauchyReport::passed() const {
    return std::all_of(series.begin(), series.end(), [](const SeriesDiagnostic& s) {
        return s.strictly_decreasing && s.tail_below_tol;
    });
}

CauchyReport cauchy_diagnostics(const PicardTrace& trace, double tol) {
    if (trace.iterates.size() < 3)
        throw PreconditionError("Cauchy diagnostics need at least 3 iterates, trace has " +
                                std::to_string(trace.iterates.size()));
    CauchyReport rep;
    rep.tol = tol;
    const std::array<std::pair<const char*, const std::vector<double>*>, 4> inputs{{
        {"fwd_step", &trace.fwd_step},
        {"bwd_step", &trace.bwd_step},
        {"fwd_skip", &trace.fwd_skip},
        {"bwd_skip", &trace.bwd_skip},
    }};
    for (std::size_t k = 0; k < 4; ++k) {
        const auto& xs = *inputs[k].second;
        SeriesDiagnostic d{inputs[k].first};
        for (std::size_t n = 1; n < xs.size(); ++n) {
            const bool both_zero = xs[n] == 0.0 && xs[n - 1] == 0.0;
            if (!(xs[n] < xs[n - 1]) && !both_zero) {
                d.strictly_decreasing = false;
                d.first_violation = n;
                break;
            }
        }
        d.tail = xs.empty() ? 0.0 : xs.back();
        d.tail_below_tol = d.tail < tol;
        rep.series[k] = std::move(d);
    }
    return rep;
}

FixedPointVerdict verify_fixed_point(const Space& space, const SelfMap& map, const Element& z,
                                     double tol) {
    FixedPointVerdict v;
    v.point = z;
    v.image = map.apply(space, z);
    v.fwd_residual = space.distance(v.image, z);
    v.bwd_residual = space.distance(z, v.image);
    v.tol = tol;
    v.verified = v.fwd_residual <= tol && v.bwd_residual <= tol;
    return v;
}

UniquenessReport uniqueness_scan(const Space& space, const SelfMap& map,
                                 const std::vector<Element>& starts, const SolveOptions& opt,
                                 std::optional<double> merge_tol) {
    if (starts.empty()) throw PreconditionError("uniqueness scan needs at least one start");
    UniquenessReport rep;
    rep.merge_tol = merge_tol.value_or(100.0 * opt.tol);

    rep.runs = parallel_map(starts.size(), [&](std::size_t i) {
        const PicardTrace tr = picard_iterate(space, map, starts[i], opt);
        return StartOutcome{starts[i], tr.terminated_by, tr.steps(), tr.limit};
    });

    for (std::size_t i = 0; i < rep.runs.size(); ++i) {
        const auto& run = rep.runs[i];
        if (!run.limit) {
            rep.non_converged.push_back(i);
            continue;
        }
        const bool merged = std::any_of(rep.distinct_limits.begin(), rep.distinct_limits.end(),
                                        [&](const Element& rep_limit) {
                                            return space.distance(*run.limit, rep_limit) <= rep.merge_tol &&
                                                   space.distance(rep_limit, *run.limit) <= rep.merge_tol;
                                        });
        if (!merged) rep.distinct_limits.push_back(*run.limit);
    }
    rep.passed = rep.distinct_limits.size() == 1;
    return rep;
}

SandwichReport limit_sandwich_check(const Space& space, const PicardTrace& trace, const Element& y,
                                    double s, std::size_t tail_len, double tol) {
    if (!trace.limit) throw PreconditionError("sandwich check needs a converged trace");
    if (*trace.limit == y) throw PreconditionError("sandwich check needs y different from the limit");
    if (tail_len == 0 || tail_len > trace.iterates.size())
        throw PreconditionError("tail length must lie in [1, " + std::to_string(trace.iterates.size()) + "]");
    if (!(s > 0.0)) throw PreconditionError("coefficient s must be positive, got " + shortest_repr(s));

    SandwichReport rep;
    rep.limit = *trace.limit;
    rep.y = y;
    rep.s = s;
    rep.tail_len = tail_len;
    rep.tol = tol;
    rep.d_limit_y = space.distance(rep.limit, y);
    rep.d_y_limit = space.distance(y, rep.limit);

    const std::size_t first = trace.iterates.size() - tail_len;
    rep.fwd_min = rep.bwd_min = std::numeric_limits<double>::infinity();
    rep.fwd_max = rep.bwd_max = 0.0;
    for (std::size_t n = first; n < trace.iterates.size(); ++n) {
        const double f = space.distance(trace.iterates[n], y);
        const double b = space.distance(y, trace.iterates[n]);
        rep.fwd_min = std::min(rep.fwd_min, f);
        rep.fwd_max = std::max(rep.fwd_max, f);
        rep.bwd_min = std::min(rep.bwd_min, b);
        rep.bwd_max = std::max(rep.bwd_max, b);
    }
    rep.fwd_holds = rep.d_limit_y / s <= rep.fwd_min + tol && rep.fwd_max <= s * rep.d_limit_y + tol;
    rep.bwd_holds = rep.d_y_limit / s <= rep.bwd_min + tol && rep.bwd_max <= s * rep.d_y_limit + tol;
    return rep;
}

} // namespace rqbm
