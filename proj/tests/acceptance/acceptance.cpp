// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracle/oracle.hpp"
#include "rqbm/axioms.hpp"
#include "rqbm/cli.hpp"
#include "rqbm/contraction.hpp"
#include "rqbm/expr.hpp"
#include "rqbm/instances.hpp"
#include "rqbm/io.hpp"
#include "rqbm/numfmt.hpp"
#include "rqbm/solver.hpp"
#include "rqbm/thetaphi.hpp"

using namespace rqbm;

namespace {

constexpr double kAxiomTol = 1e-9;
constexpr double kMinSSlack = 1e-9;
constexpr double kMinSStep = 1e-3;
constexpr double kLimitTol = 1e-8;
constexpr double kSolveTol = 1e-10;
constexpr std::size_t kMaxSolveSteps = 60;
constexpr double kCauchyTailTol = 1e-9;
constexpr double kMergeTol = 1e-8;

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

struct Verdict {
    bool passed = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<Verdict()> body;
};

// ---------------------------------------------------------------------------

Verdict asymmetric_table_example() {
    const auto r = cli({"verify", "--instance", "example-2-3", "--s", "3"});
    if (r.code != 0) return {false, "verify exit " + std::to_string(r.code)};
    const Json v = Json::parse(r.out);
    const auto& rect = v["b_rectangular"];
    // 6 labels of A plus 11 grid points on B, every admissible ordered quadruple.
    const std::size_t expected = 17u * 16u * 15u * 14u;
    if (rect["quadruples_checked"] != expected) return {false, "quadruple count " + rect["quadruples_checked"].dump()};

    const auto c = cli({"classify", "--instance", "example-2-3"});
    if (c.code == 2) return {false, c.err};
    const Json report = Json::parse(c.out);
    bool forward = false;
    for (const auto& w : report["classification"]["asymmetry"])
        if (w["a"] == "1/2" && w["b"] == "1/3")
            forward = w["forward"].get<double>() == 0.05 && w["backward"].get<double>() == 0.04;
    if (!forward) return {false, "asymmetry witness 1/2,1/3 missing or inexact"};
    return {true, std::to_string(expected) + " quadruples, 0 violations; eta(1/2,1/3)=0.05 vs eta(1/3,1/2)=0.04"};
}

Verdict minimal_coefficient() {
    const auto m = cli({"min-s", "--instance", "example-2-3"});
    if (m.code != 0) return {false, "min-s exit " + std::to_string(m.code)};
    const double v = Json::parse(m.out)["minimal_s"]["value"].get<double>();
    const int at = cli({"verify", "--instance", "example-2-3", "--s", shortest_repr(v)}).code;
    const int below = cli({"verify", "--instance", "example-2-3", "--s", shortest_repr(v - kMinSStep)}).code;
    const bool ok = v <= 3.0 + kMinSSlack && at == 0 && below == 1;
    return {ok, "min-s=" + shortest_repr(v) + ", verify at value exit " + std::to_string(at) +
                    ", at value-1e-3 exit " + std::to_string(below)};
}

Verdict piecewise_square() {
    const auto b = build_example_sqrt(SqrtVariant::sqrt);
    ScanOptions o;
    o.grid = 40;
    o.random = 10000;
    o.seed = 0;
    o.tol = kAxiomTol;
    const auto at2 = check_b_rectangular(b.space, 2.0, o);
    const auto at1 = check_b_rectangular(b.space, 1.0, o);
    std::string detail = "s=2: " + std::to_string(at2.violation_count) + " violations";
    if (at2.worst) {
        detail += ", worst ratio " + shortest_repr(at2.worst->ratio) + " at (" + shortest_repr(at2.worst->x.value) +
                  ", " + shortest_repr(at2.worst->u.value) + ", " + shortest_repr(at2.worst->v.value) + ", " +
                  shortest_repr(at2.worst->y.value) + ")";
    }
    detail += "; s=1: " + std::to_string(at1.violation_count) + " violations";
    return {at2.violation_count == 0 && at1.violation_count > 0, detail};
}

Verdict sqrt_fixed_point() {
    std::string detail;
    bool ok = true;
    for (auto variant : {SqrtVariant::sqrt, SqrtVariant::fourth_root}) {
        const auto b = build_example_sqrt(variant);
        const auto map = SelfMap::parse(b.space, *b.map);
        SolveOptions so;
        so.tol = kSolveTol;
        const auto t = picard_iterate(b.space, map, b.space.element_at(2.0), so);
        const bool conv = t.converged() && std::abs(t.limit->value - 1.0) < kLimitTol && t.steps() <= kMaxSolveSteps;
        const auto c = cauchy_diagnostics(t, kCauchyTailTol);
        ok = ok && conv && c.passed();
        detail += *b.map + ": " + std::to_string(t.steps()) + " steps, limit " +
                  (t.limit ? shortest_repr(t.limit->value) : std::string("none")) + ", cauchy " +
                  (c.passed() ? "ok" : "fail") + "; ";
    }
    return {ok, detail};
}

Verdict final_example() {
    const auto b11 = build_example_final(11);
    const auto map11 = SelfMap::parse(b11.space, *b11.map);
    const auto starts = b11.space.carrier(0);
    const auto u = uniqueness_scan(b11.space, map11, starts, {}, kMergeTol);
    const bool unique = u.passed && u.non_converged.empty() && u.distinct_limits.size() == 1 &&
                        u.distinct_limits.front().value == 1.0;

    const auto b = build_example_final(50);
    const auto map = SelfMap::parse(b.space, *b.map);
    ContractionOptions o;
    o.keep_records = true;
    const auto cert = check_theta_phi_contraction(b.space, map, ThetaSpec::parse(*b.theta), PhiSpec::parse(*b.phi),
                                                  3.0, o);

    const auto pts = oracle::points_final(50);
    auto theta = [](double t) { return std::sqrt(t) + 1.0; };
    auto rhs = [&](double d) { return (theta(d) + 1.0) / 2.0; };
    std::size_t agree = 0, oracle_fail = 0, k = 0;
    bool order_ok = cert.records.size() == pts.size() * pts.size();
    for (double x : pts)
        for (double y : pts) {
            if (!order_ok) break;
            const auto& r = cert.records[k++];
            if (r.x.value != x || r.y.value != y) {
                order_ok = false;
                break;
            }
            const auto v = oracle::contraction_pair(oracle::dist_final(x, y),
                                                    oracle::dist_final(oracle::map_final(x), oracle::map_final(y)),
                                                    3.0, kAxiomTol, theta, rhs);
            const auto got = r.outcome == PairOutcome::pass      ? oracle::Verdict::pass
                             : r.outcome == PairOutcome::fail    ? oracle::Verdict::fail
                             : r.outcome == PairOutcome::skipped ? oracle::Verdict::skipped
                                                                 : oracle::Verdict::domain;
            agree += got == v;
            oracle_fail += v == oracle::Verdict::fail;
        }
    const bool all_agree = order_ok && agree == cert.records.size();
    return {unique && all_agree,
            std::to_string(u.runs.size()) + " starts -> " + std::to_string(u.distinct_limits.size()) +
                " limit(s); oracle agreement " + std::to_string(agree) + "/" + std::to_string(cert.records.size()) +
                "; certificate " + (cert.passed ? "pass" : "fail") + " (" + std::to_string(cert.failed) +
                " failing pairs, oracle " + std::to_string(oracle_fail) + ")"};
}

Verdict reduction_identity() {
    const auto theta = ThetaSpec::parse("builtin:exp-sqrt");
    std::size_t checks = 0, mismatches = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto f = random_space(6, seed, RandomProfile::quasi);
        const Space sp = f;
        const auto map = affine_toward_map(f, 6, seed);
        for (double r : {0.3, 0.5, 0.8}) {
            const auto a = check_theta_contraction(sp, map, theta, r, 1.0);
            const auto b = check_theta_phi_contraction(sp, map, theta, phi_power(r), 1.0);
            bool same = a.passed == b.passed && a.worst.has_value() == b.worst.has_value();
            if (same && a.worst)
                same = a.worst->x == b.worst->x && a.worst->y == b.worst->y && a.worst->lhs == b.worst->lhs &&
                       a.worst->rhs == b.worst->rhs;
            ++checks;
            mismatches += !same;
        }
    }
    return {mismatches == 0, std::to_string(checks) + " (space, r) checks, " + std::to_string(mismatches) +
                                 " mismatches"};
}

Verdict falsification() {
    ScanOptions o;
    o.tol = kAxiomTol;
    std::size_t id_hits = 0, quad_hits = 0, total = 0;
    for (auto profile : {RandomProfile::metric, RandomProfile::quasi, RandomProfile::adversarial}) {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto base = random_space(6, seed, profile);
            ++total;
            id_hits += !check_identity_axiom(Space(perturb(base, Perturbation::break_identity, seed)), o).passed;
            quad_hits += !check_b_rectangular(Space(perturb(base, Perturbation::break_quadrilateral, seed)),
                                              profile_s(profile), o)
                               .passed;
        }
    }
    return {id_hits == total && quad_hits == total,
            "break_identity " + std::to_string(id_hits) + "/" + std::to_string(total) + ", break_quadrilateral " +
                std::to_string(quad_hits) + "/" + std::to_string(total) + " over 3 profiles"};
}

Verdict phi_closed_form() {
    const auto phi = PhiSpec::parse("builtin:midpoint");
    bool ok = true;
    std::string detail;
    for (std::size_t n : {1u, 10u, 30u}) {
        const double got = iterate_phi(phi, 2.0, n);
        const double want = 1.0 + std::ldexp(1.0, -static_cast<int>(n));
        const bool close = got == want || std::nextafter(got, want) == want;
        ok = ok && close;
        detail += "n=" + std::to_string(n) + (close ? " ok, " : " off, ");
    }
    const auto rep = validate_phi(PhiSpec::parse("t"), uniform_grid(1.0, 10.0, 10));
    const auto* p = rep.property("below_diagonal");
    const bool rejected = !rep.passed() && p && !p->passed && !p->witnesses.empty();
    if (rejected) detail += "phi(t)=t rejected at t=" + shortest_repr(p->witnesses.front().points.front());
    return {ok && rejected, detail};
}

Verdict parser_vectors() {
    auto eval0 = [](const char* s) { return expr::Expr::parse(s, {}).evaluate(std::span<const double>{}); };
    const auto eta = expr::Expr::parse("if(x >= y, (x-y)^2, 0.5*(y-x)^2)", {"x", "y"});
    bool table = eval0("1+2*3") == 7.0 && eval0("-2^2") == -4.0 && eval0("2^3^2") == 512.0;
    for (double v : {1.0, 1.5, 2.0}) table = table && eta(v, v) == 0.0;

    const auto bad = cli({"validate-theta", "--theta", "sqrt(t"});
    const bool offset = bad.code == 2 && bad.err.find("offset 6") != std::string::npos;
    return {table && offset,
            std::string("table ") + (table ? "exact" : "mismatch") + "; malformed exit " + std::to_string(bad.code) +
                (offset ? " with offset 6" : " without offset")};
}

Verdict determinism() {
    const std::vector<std::vector<std::string>> commands{
        {"verify", "--instance", "example-2-3", "--s", "3"},
        {"classify", "--instance", "example-2-3"},
        {"min-s", "--instance", "example-2-3"},
        {"verify", "--instance", "example-sqrt", "--s", "2"},
        {"solve", "--instance", "example-sqrt", "--start", "2", "--diagnostics"},
        {"solve", "--instance", "example-sqrt-fourth-root", "--start", "2", "--diagnostics"},
        {"solve", "--instance", "example-final", "--start", "1/3", "--uniqueness-starts", "--merge-tol", "1e-8"},
        {"contraction", "--instance", "example-final", "--kind", "theta_phi", "--records"},
        {"falsify", "--profile", "quasi", "--perturb", "break_quadrilateral", "--seeds", "100"},
    };
    std::size_t same = 0;
    for (const auto& args : commands) {
        const auto a = cli(args), b = cli(args);
        same += a.code == b.code && a.out == b.out && !a.out.empty();
    }
    return {same == commands.size(), std::to_string(same) + "/" + std::to_string(commands.size()) +
                                         " commands byte-identical"};
}

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "asymmetric table example", 1.0, asymmetric_table_example},
        {2, "minimal coefficient", 1.0, minimal_coefficient},
        {3, "piecewise-square space at s=2", 10.0, piecewise_square},
        {4, "sqrt fixed point", 5.0, sqrt_fixed_point},
        {5, "final example end-to-end", 5.0, final_example},
        {6, "reduction identity", 30.0, reduction_identity},
        {7, "falsification suite", 30.0, falsification},
        {8, "phi closed form", 1.0, phi_closed_form},
        {9, "parser vectors", 1.0, parser_vectors},
        {10, "determinism", 60.0, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.body();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = v.passed && in_time;
        failed += !pass;
        std::printf("%s %2d %-32s %.3fs (limit %gs)%s  %s\n", pass ? "PASS" : "FAIL", c.id, c.title, secs,
                    c.budget_s, in_time ? "" : " OVER TIME", v.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
