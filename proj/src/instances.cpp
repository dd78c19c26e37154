#include "rqbm/instances.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "rqbm/io.hpp"
#include "rqbm/numfmt.hpp"
#include "rqbm/random.hpp"

namespace rqbm {

namespace {

struct Fraction {
    int num;
    int den;
    std::string label() const { return std::to_string(num) + "/" + std::to_string(den); }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct Row {
    int from; // denominators of 1/n labels
    int to;
    double d;
};

/// A = {1/n}, a labeled grid on B, the continuum B, and the A x A table.
/// Unlisted A x A pairs take the value of their listed reverse.
Json mixed_space_json(const std::vector<int>& dens, const std::vector<Row>& rows, double lo, double hi,
                      std::size_t b_grid, double claimed_s) {
    Json pts = Json::array();
    for (int d : dens) {
        const Fraction f{1, d};
        pts.push_back({{"label", f.label()}, {"value", f.value()}});
    }
    for (double v : uniform_grid(lo, hi, b_grid)) pts.push_back({{"label", shortest_repr(v)}, {"value", v}});

    std::map<std::pair<int, int>, double> table;
    for (const auto& r : rows) table[{r.from, r.to}] = r.d;
    Json ov = Json::array();
    for (int a : dens) {
        for (int b : dens) {
            if (a == b) continue;
            double d = 0.0;
            if (auto it = table.find({a, b}); it != table.end()) d = it->second;
            else if (auto rev = table.find({b, a}); rev != table.end()) d = rev->second;
            else continue;
            ov.push_back({{"from", Fraction{1, a}.label()}, {"to", Fraction{1, b}.label()}, {"d", d}});
        }
    }
    return Json{{"kind", "finite"},
                {"points", std::move(pts)},
                {"default", "(x - y)^2"},
                {"overrides", std::move(ov)},
                {"continuum", Json::array({{{"lo", lo}, {"hi", hi}}})},
                {"claimed_s", claimed_s}};
}

std::pair<double, double> draw_point(Rng& rng) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    return {x, y};
}

} // namespace

InstanceBundle build_example_2_3(std::size_t b_grid) {
    if (b_grid < 2) throw PreconditionError("B grid needs at least 2 points");
    const std::vector<Row> rows{
        {2, 3, 0.05}, {4, 5, 0.05}, {6, 7, 0.05},  {3, 2, 0.04}, {5, 4, 0.04}, {7, 6, 0.04},
        {2, 4, 0.08}, {3, 7, 0.08}, {5, 6, 0.08},  {4, 2, 0.05}, {7, 3, 0.05}, {6, 5, 0.05},
        {2, 6, 0.4},  {3, 4, 0.4},  {5, 7, 0.4},   {2, 5, 0.24}, {3, 6, 0.24}, {4, 7, 0.24},
        {2, 7, 0.15}, {3, 5, 0.15}, {4, 6, 0.15},
    };
    return InstanceBundle{
        "example-2-3",
        "A = {1/2..1/7} with an asymmetric table, B = [1, 2] with (x - y)^2; s = 3",
        space_from_json(mixed_space_json({2, 3, 4, 5, 6, 7}, rows, 1.0, 2.0, b_grid, 3.0)),
        std::nullopt,
        std::nullopt,
        std::nullopt,
        std::nullopt,
        3.0,
        std::nullopt,
        "B is sampled on a " + std::to_string(b_grid) +
            "-point grid; unlisted A x A pairs reuse their reverse entry.",
    };
}

InstanceBundle build_example_sqrt(SqrtVariant variant) {
    const bool fourth = variant == SqrtVariant::fourth_root;
    const Json j{{"kind", "analytic"},
                 {"domain", {{"lo", 1.0}, {"hi", 2.0}}},
                 {"forward", "if(x >= y, (x-y)^2, 0.5*(y-x)^2)"},
                 {"claimed_s", 2.0}};
    return InstanceBundle{
        fourth ? "example-sqrt-fourth-root" : "example-sqrt",
        std::string("piecewise-square space on [1, 2], T(x) = ") + (fourth ? "x^(1/4)" : "sqrt(x)") +
            ", theta = exp(sqrt(t)), r = 1/2, s = 2",
        space_from_json(j),
        fourth ? "x^0.25" : "sqrt(x)",
        "builtin:exp-sqrt",
        std::nullopt,
        0.5,
        2.0,
        1.0,
        "x = T(x) on [1, 2] forces x = 1.",
    };
}

InstanceBundle build_example_final(std::size_t b_grid) {
    if (b_grid < 2) throw PreconditionError("B grid needs at least 2 points");
    const std::vector<Row> rows{
        {3, 4, 0.1},  {4, 5, 0.1},  {4, 3, 0.05}, {5, 4, 0.05}, {3, 5, 0.05},
        {4, 6, 0.05}, {5, 3, 0.1},  {6, 4, 0.1},  {3, 6, 0.5},  {5, 6, 0.5},
    };
    return InstanceBundle{
        "example-final",
        "A = {1/3..1/6} with an asymmetric table, B = [1/2, 3/2] with (x - y)^2; "
        "T = 1 on A, (sqrt(a)+3)/4 on B; theta = sqrt(t)+1, phi = (t+1)/2, s = 3",
        space_from_json(mixed_space_json({3, 4, 5, 6}, rows, 0.5, 1.5, b_grid, 3.0)),
        "if(x < 0.5, 1, (sqrt(x) + 3)/4)",
        "builtin:sqrt-plus-one",
        "builtin:midpoint",
        std::nullopt,
        3.0,
        1.0,
        "B is sampled on a " + std::to_string(b_grid) +
            "-point grid; (1/6, 1/3) and (1/6, 1/5) reuse their reverse entries.",
    };
}

std::vector<std::string> instance_names() {
    return {"example-2-3", "example-sqrt", "example-sqrt-fourth-root", "example-final"};
}

InstanceBundle build_instance(std::string_view name, std::optional<std::size_t> b_grid) {
    if (name == "example-2-3") return build_example_2_3(b_grid.value_or(11));
    if (name == "example-sqrt") return build_example_sqrt(SqrtVariant::sqrt);
    if (name == "example-sqrt-fourth-root") return build_example_sqrt(SqrtVariant::fourth_root);
    if (name == "example-final") return build_example_final(b_grid.value_or(11));
    throw PreconditionError("unknown instance '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Generators

std::optional<RandomProfile> parse_profile(std::string_view name) {
    if (name == "metric") return RandomProfile::metric;
    if (name == "quasi") return RandomProfile::quasi;
    if (name == "adversarial") return RandomProfile::adversarial;
    return std::nullopt;
}

std::string_view to_string(RandomProfile p) {
    switch (p) {
    case RandomProfile::metric: return "metric";
    case RandomProfile::quasi: return "quasi";
    case RandomProfile::adversarial: return "adversarial";
    }
    return "?";
}

double profile_s(RandomProfile p) { return p == RandomProfile::metric ? 1.0 : 4.0; }

std::vector<std::pair<double, double>> random_plane_points(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(draw_point(rng));
    return pts;
}

FiniteSpace random_space(std::size_t n, std::uint64_t seed, RandomProfile profile) {
    if (n < 2) throw PreconditionError("random spaces need at least 2 points");
    Rng rng(seed);
    std::vector<std::pair<double, double>> xy;
    for (std::size_t i = 0; i < n; ++i) xy.push_back(draw_point(rng));

    std::vector<Point> points;
    for (std::size_t i = 0; i < n; ++i) points.push_back({"p" + std::to_string(i), xy[i].first});

    std::vector<DistanceOverride> overrides;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double d = std::hypot(xy[i].first - xy[j].first, xy[i].second - xy[j].second);
            if (profile != RandomProfile::metric) d *= rng.uniform(0.5, 2.0);
            overrides.push_back({points[i].label, points[j].label, d});
        }
    }
    if (profile == RandomProfile::adversarial) {
        auto& o = overrides[rng.below(overrides.size())];
        o.d *= rng.uniform(5.0, 50.0);
    }
    return FiniteSpace(std::move(points), std::nullopt, std::move(overrides), {}, profile_s(profile));
}

SelfMap affine_toward_map(const FiniteSpace& space, std::size_t n, std::uint64_t seed) {
    if (space.size() != n) throw PreconditionError("map and space disagree on the point count");
    const auto xy = random_plane_points(n, seed);
    Rng rng(seed ^ 0x9E3779B97F4A7C15ull);
    const auto [cx, cy] = draw_point(rng);
    const double lambda = rng.uniform(0.2, 0.8);

    std::vector<std::pair<std::string, std::string>> rows;
    for (std::size_t i = 0; i < n; ++i) {
        const double tx = xy[i].first + lambda * (cx - xy[i].first);
        const double ty = xy[i].second + lambda * (cy - xy[i].second);
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            const double d = std::hypot(xy[j].first - tx, xy[j].second - ty);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        rows.emplace_back(space.points()[i].label, space.points()[best].label);
    }
    return SelfMap::table(space, rows);
}

std::optional<Perturbation> parse_perturbation(std::string_view name) {
    if (name == "break_identity") return Perturbation::break_identity;
    if (name == "break_quadrilateral") return Perturbation::break_quadrilateral;
    return std::nullopt;
}

std::string_view to_string(Perturbation p) {
    return p == Perturbation::break_identity ? "break_identity" : "break_quadrilateral";
}

FiniteSpace perturb(const FiniteSpace& space, Perturbation kind, std::uint64_t seed) {
    const std::size_t n = space.size();
    Rng rng(seed);
    if (kind == Perturbation::break_identity) {
        std::vector<std::pair<std::size_t, std::size_t>> positive;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && space.resolve(i, j) > 0.0) positive.emplace_back(i, j);
        if (positive.empty()) throw PreconditionError("break_identity: no positive distance to zero");
        const auto [i, j] = positive[rng.below(positive.size())];
        return space.with_override(i, j, 0.0);
    }

    if (n < 4) throw PreconditionError("break_quadrilateral needs at least 4 points");
    const std::size_t x = rng.below(n);
    std::size_t y = rng.below(n - 1);
    if (y >= x) ++y;
    double detour = std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < n; ++u) {
        if (u == x || u == y) continue;
        for (std::size_t v = 0; v < n; ++v) {
            if (v == x || v == y || v == u) continue;
            detour = std::min(detour, space.resolve(x, u) + space.resolve(u, v) + space.resolve(v, y));
        }
    }
    const double s = space.claimed_s().value_or(1.0);
    return space.with_override(x, y, s * detour * (2.0 + rng.uniform()) + 1e-6);
}

} // namespace rqbm
