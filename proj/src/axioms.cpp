#include "rqbm/axioms.hpp"

#include <cmath>
#include <limits>

#include "rqbm/numfmt.hpp"
#include "rqbm/parallel.hpp"
#include "rqbm/random.hpp"

namespace rqbm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Carrier points with every pairwise distance resolved once.
struct DistanceMatrix {
    std::vector<Element> points;
    std::vector<double> d;
    std::size_t n = 0;

    DistanceMatrix(const Space& space, std::size_t grid) : points(space.carrier(grid)), n(points.size()) {
        d.resize(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i * n + j] = space.distance(points[i], points[j]);
    }

    double operator()(std::size_t i, std::size_t j) const { return d[i * n + j]; }
};

double ratio_of(double lhs, double rhs) {
    if (rhs > 0.0) return lhs / rhs;
    return lhs > 0.0 ? kInf : 0.0;
}

bool violates(double lhs, double rhs, double s, double tol) {
    if (rhs == 0.0) return lhs > tol;
    return lhs > s * rhs + tol;
}

struct RectPartial {
    std::size_t checked = 0;
    std::size_t count = 0;
    std::vector<QuadrupleViolation> violations;
    std::optional<QuadrupleViolation> worst;

    void record(QuadrupleViolation v, std::size_t cap) {
        ++count;
        if (!worst || v.ratio > worst->ratio) worst = v;
        if (violations.size() < cap) violations.push_back(std::move(v));
    }

    void merge(RectPartial&& other, std::size_t cap) {
        checked += other.checked;
        count += other.count;
        if (other.worst && (!worst || other.worst->ratio > worst->ratio)) worst = other.worst;
        for (auto& v : other.violations) {
            if (violations.size() >= cap) break;
            violations.push_back(std::move(v));
        }
    }
};

struct RandomQuad {
    Element x, u, v, y;
};

/// Seeded admissible quadruples over an analytic domain.
std::vector<RandomQuad> random_quadruples(const AnalyticSpace& space, const ScanOptions& opt) {
    Rng rng(opt.seed);
    std::vector<RandomQuad> out;
    out.reserve(opt.random);
    const Interval dom = space.domain();
    while (out.size() < opt.random) {
        const double x = rng.uniform(dom.lo, dom.hi);
        const double u = rng.uniform(dom.lo, dom.hi);
        const double v = rng.uniform(dom.lo, dom.hi);
        const double y = rng.uniform(dom.lo, dom.hi);
        if (x == y || u == v || u == x || u == y || v == x || v == y) continue;
        out.push_back({{std::nullopt, x}, {std::nullopt, u}, {std::nullopt, v}, {std::nullopt, y}});
    }
    return out;
}

/// Visits every admissible grid quadruple with first index x, in (x,u,v,y)
/// lexicographic order.
template <class Fn>
void for_each_grid_quadruple(const DistanceMatrix& m, std::size_t x, Fn&& fn) {
    const std::size_t n = m.n;
    for (std::size_t u = 0; u < n; ++u) {
        if (u == x) continue;
        for (std::size_t v = 0; v < n; ++v) {
            if (v == x || v == u) continue;
            const double head = m(x, u) + m(u, v);
            for (std::size_t y = 0; y < n; ++y) {
                if (y == x || y == u || y == v) continue;
                fn(u, v, y, m(x, y), head + m(v, y));
            }
        }
    }
}

} // namespace

std::string describe_source(const Space& space, const ScanOptions& opt) {
    if (const auto* f = space.finite())
        return "exhaustive over " + std::to_string(f->size()) + " labeled points";
    return "grid " + std::to_string(opt.grid) + " (exhaustive) + " + std::to_string(opt.random) +
           " random (" + std::string(Rng::name) + ", seed " + std::to_string(opt.seed) + ")";
}

IdentityReport check_identity_axiom(const Space& space, const ScanOptions& opt) {
    const auto pts = space.carrier(opt.grid);
    IdentityReport rep;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = 0; j < pts.size(); ++j) {
            const double d = space.distance(pts[i], pts[j]);
            ++rep.pairs_checked;
            const bool same = pts[i] == pts[j];
            if ((same && d != 0.0) || (!same && d == 0.0)) {
                ++rep.violation_count;
                if (rep.violations.size() < opt.max_witnesses) rep.violations.push_back({pts[i], pts[j], d});
            }
        }
    }
    rep.passed = rep.violation_count == 0;
    return rep;
}

RectangularReport check_b_rectangular(const Space& space, double s, const ScanOptions& opt) {
    if (!(s > 0.0) || !std::isfinite(s))
        throw PreconditionError("coefficient s must be a finite positive real, got " + shortest_repr(s));
    const DistanceMatrix m(space, opt.grid);
    const std::size_t cap = opt.max_witnesses;

    auto partials = parallel_map(m.n, [&](std::size_t x) {
        RectPartial p;
        for_each_grid_quadruple(m, x, [&](std::size_t u, std::size_t v, std::size_t y, double lhs, double rhs) {
            ++p.checked;
            if (violates(lhs, rhs, s, opt.tol))
                p.record({m.points[x], m.points[u], m.points[v], m.points[y], lhs, rhs, ratio_of(lhs, rhs)}, cap);
        });
        return p;
    });

    RectPartial total;
    for (auto& p : partials) total.merge(std::move(p), cap);

    if (const auto* a = space.analytic()) {
        for (const auto& q : random_quadruples(*a, opt)) {
            const double lhs = space.distance(q.x, q.y);
            const double rhs = space.distance(q.x, q.u) + space.distance(q.u, q.v) + space.distance(q.v, q.y);
            ++total.checked;
            if (violates(lhs, rhs, s, opt.tol))
                total.record({q.x, q.u, q.v, q.y, lhs, rhs, ratio_of(lhs, rhs)}, cap);
        }
    }

    RectangularReport rep;
    rep.s = s;
    rep.source = describe_source(space, opt);
    rep.quadruples_checked = total.checked;
    rep.vacuous = total.checked == 0;
    rep.violation_count = total.count;
    rep.violations = std::move(total.violations);
    rep.worst = std::move(total.worst);
    rep.passed = rep.violation_count == 0;
    return rep;
}

CoefficientBound minimal_rectangular_coefficient(const Space& space, const ScanOptions& opt) {
    struct Partial {
        bool any = false;
        double best = 0.0;
        std::optional<QuadrupleViolation> witness;

        void offer(QuadrupleViolation q) {
            any = true;
            if (q.lhs == 0.0 && q.rhs_sum == 0.0) return;
            if (!witness || q.ratio > best) {
                best = q.ratio;
                witness = std::move(q);
            }
        }
    };

    const DistanceMatrix m(space, opt.grid);
    auto partials = parallel_map(m.n, [&](std::size_t x) {
        Partial p;
        for_each_grid_quadruple(m, x, [&](std::size_t u, std::size_t v, std::size_t y, double lhs, double rhs) {
            p.offer({m.points[x], m.points[u], m.points[v], m.points[y], lhs, rhs, ratio_of(lhs, rhs)});
        });
        return p;
    });

    Partial total;
    for (auto& p : partials) {
        total.any = total.any || p.any;
        if (p.witness && (!total.witness || p.best > total.best)) {
            total.best = p.best;
            total.witness = std::move(p.witness);
        }
    }
    if (const auto* a = space.analytic()) {
        for (const auto& q : random_quadruples(*a, opt)) {
            const double lhs = space.distance(q.x, q.y);
            const double rhs = space.distance(q.x, q.u) + space.distance(q.u, q.v) + space.distance(q.v, q.y);
            total.offer({q.x, q.u, q.v, q.y, lhs, rhs, ratio_of(lhs, rhs)});
        }
    }

    CoefficientBound out;
    if (!total.any) return out;
    out.witness = total.witness;
    if (total.witness && std::isinf(total.best)) {
        out.kind = CoefficientBound::Kind::infinite;
        out.value = kInf;
    } else {
        out.kind = CoefficientBound::Kind::finite;
        out.value = total.best;
    }
    return out;
}

Classification classify(const Space& space, const ScanOptions& opt, std::optional<double> s) {
    Classification c;
    c.s = s.value_or(space.claimed_s().value_or(1.0));
    c.identity = check_identity_axiom(space, opt);
    c.is_quasi_identity = c.identity.passed;

    const DistanceMatrix m(space, opt.grid);
    for (std::size_t i = 0; i < m.n; ++i) {
        for (std::size_t j = i + 1; j < m.n; ++j) {
            if (std::abs(m(i, j) - m(j, i)) > opt.tol) {
                ++c.asymmetric_pairs;
                if (c.asymmetry.size() < opt.max_witnesses)
                    c.asymmetry.push_back({m.points[i], m.points[j], m(i, j), m(j, i)});
            }
        }
    }
    c.is_symmetric = c.asymmetric_pairs == 0;

    for (std::size_t x = 0; x < m.n; ++x) {
        for (std::size_t y = 0; y < m.n; ++y) {
            if (y == x) continue;
            for (std::size_t z = 0; z < m.n; ++z) {
                if (z == x || z == y) continue;
                const double lhs = m(x, y);
                const double rhs = m(x, z) + m(z, y);
                if (violates(lhs, rhs, 1.0, opt.tol)) {
                    if (c.triangle_violations++ == 0) c.triangle_witness = TriangleWitness{m.points[x], m.points[z], m.points[y], lhs, rhs};
                }
                if (violates(lhs, rhs, c.s, opt.tol)) {
                    if (c.b_triangle_violations++ == 0) c.b_triangle_witness = TriangleWitness{m.points[x], m.points[z], m.points[y], lhs, rhs};
                }
            }
        }
    }

    c.rectangular = check_b_rectangular(space, 1.0, opt);
    c.b_rectangular = check_b_rectangular(space, c.s, opt);
    c.minimal_s = minimal_rectangular_coefficient(space, opt);

    const bool base = c.is_quasi_identity && c.is_symmetric;
    c.is_metric = base && c.triangle_violations == 0;
    c.is_b_metric = base && c.b_triangle_violations == 0;
    c.is_rectangular = base && c.rectangular.passed;
    c.is_rqb = c.is_quasi_identity && c.b_rectangular.passed;
    return c;
}

} // namespace rqbm
