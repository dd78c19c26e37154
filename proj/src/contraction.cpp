#include "rqbm/contraction.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "rqbm/numfmt.hpp"
#include "rqbm/parallel.hpp"
#include "rqbm/random.hpp"

namespace rqbm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

struct Evaluation {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

/// Every ordered pair of the scan set, evaluated in scan order. `eval` is
/// called only when the antecedent eta(Tx,Ty) > 0 holds and eta(x,y) > 0.
template <class Eval>
std::vector<std::pair<PairRecord, double>> scan_pairs(const Space& space, const SelfMap& map,
                                                      const ContractionOptions& opt, double tol,
                                                      const Eval& eval) {
    auto evaluate = [&](const Element& x, const Element& y, const Element& tx, const Element& ty) {
        PairRecord rec{x, y, tx, ty};
        rec.d = space.distance(x, y);
        rec.d_image = space.distance(tx, ty);
        double ratio = 0.0;
        if (!(rec.d_image > 0.0)) {
            rec.outcome = PairOutcome::skipped;
        } else if (rec.d == 0.0) {
            rec.outcome = PairOutcome::domain_violation;
            rec.lhs = rec.rhs = rec.slack = kNaN;
            ratio = kInf;
        } else {
            const Evaluation e = eval(rec.d, rec.d_image);
            rec.lhs = e.lhs;
            rec.rhs = e.rhs;
            rec.slack = e.rhs - e.lhs;
            rec.outcome = rec.slack < -tol ? PairOutcome::fail : PairOutcome::pass;
            ratio = e.ratio;
        }
        return std::pair{rec, ratio};
    };

    const auto pts = space.carrier(opt.scan.grid);
    std::vector<Element> images;
    images.reserve(pts.size());
    for (const auto& p : pts) images.push_back(map.apply(space, p));

    auto rows = parallel_map(pts.size(), [&](std::size_t i) {
        std::vector<std::pair<PairRecord, double>> row;
        row.reserve(pts.size());
        for (std::size_t j = 0; j < pts.size(); ++j) row.push_back(evaluate(pts[i], pts[j], images[i], images[j]));
        return row;
    });

    std::vector<std::pair<PairRecord, double>> out;
    out.reserve(pts.size() * pts.size() + (space.analytic() ? opt.scan.random : 0));
    for (auto& row : rows)
        for (auto& r : row) out.push_back(std::move(r));

    if (const auto* a = space.analytic()) {
        Rng rng(opt.scan.seed);
        const Interval dom = a->domain();
        for (std::size_t k = 0; k < opt.scan.random; ++k) {
            const Element x{std::nullopt, rng.uniform(dom.lo, dom.hi)};
            const Element y{std::nullopt, rng.uniform(dom.lo, dom.hi)};
            out.push_back(evaluate(x, y, map.apply(space, x), map.apply(space, y)));
        }
    }
    return out;
}

std::string pair_source(const Space& space, const ContractionOptions& opt) {
    if (const auto* f = space.finite())
        return "exhaustive over " + std::to_string(f->size()) + " labeled points (" +
               std::to_string(f->size() * f->size()) + " ordered pairs)";
    return "grid " + std::to_string(opt.scan.grid) + "x" + std::to_string(opt.scan.grid) +
           " (exhaustive) + " + std::to_string(opt.scan.random) + " random pairs (" +
           std::string(Rng::name) + ", seed " + std::to_string(opt.scan.seed) + ")";
}

void require_s(double s) {
    if (!(s >= 1.0) || !std::isfinite(s))
        throw PreconditionError("coefficient s must be a finite real >= 1, got " + shortest_repr(s));
}

void require_unit(double v, const char* what) {
    if (!(v > 0.0 && v < 1.0))
        throw PreconditionError(std::string(what) + " must lie in (0, 1), got " + shortest_repr(v));
}

template <class Eval>
ContractionCertificate certify(const Space& space, const SelfMap& map, ContractionKind kind,
                               std::string parameter, std::string theta, double s,
                               const ContractionOptions& opt, const Eval& eval) {
    ContractionCertificate c;
    c.kind = kind;
    c.parameter = std::move(parameter);
    c.theta = std::move(theta);
    c.s = s;
    c.tol = opt.scan.tol;
    c.pair_source = pair_source(space, opt);

    auto scanned = scan_pairs(space, map, opt, opt.scan.tol, eval);
    std::optional<PairRecord> worst_domain;
    for (auto& [rec, ratio] : scanned) {
        ++c.pairs;
        switch (rec.outcome) {
        case PairOutcome::skipped: ++c.skipped; break;
        case PairOutcome::domain_violation:
            ++c.domain_violations;
            if (!worst_domain) worst_domain = rec;
            if (c.failures.size() < opt.scan.max_witnesses) c.failures.push_back(rec);
            break;
        case PairOutcome::fail:
            ++c.failed;
            if (c.failures.size() < opt.scan.max_witnesses) c.failures.push_back(rec);
            [[fallthrough]];
        case PairOutcome::pass:
            if (!c.worst || rec.slack < c.worst->slack) c.worst = rec;
            break;
        }
        if (rec.outcome != PairOutcome::skipped) c.max_ratio = std::max(c.max_ratio, ratio);
        if (opt.keep_records) c.records.push_back(rec);
    }
    if (worst_domain) c.worst = worst_domain;
    c.vacuous = c.skipped == c.pairs;
    c.passed = c.failed == 0 && c.domain_violations == 0;
    return c;
}

} // namespace

// ---------------------------------------------------------------------------
// SelfMap

SelfMap SelfMap::expression(expr::Expr e) {
    for (const auto& v : e.variables())
        if (v != "x") throw PreconditionError("maps are expressions in x only");
    SelfMap m;
    m.text_ = e.source();
    m.expr_ = std::move(e);
    return m;
}

SelfMap SelfMap::table(const FiniteSpace& space,
                       const std::vector<std::pair<std::string, std::string>>& rows) {
    SelfMap m;
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    m.image_.assign(space.size(), unset);
    m.text_ = "table:";
    for (const auto& [from, to] : rows) {
        const auto i = space.find(from);
        const auto j = space.find(to);
        if (!i) throw MapError("map table: unknown label '" + from + "'");
        if (!j) throw MapError("map table: image '" + to + "' of '" + from + "' is not a label");
        if (m.image_[*i] != unset) throw MapError("map table: duplicate row for '" + from + "'");
        m.image_[*i] = *j;
        if (m.text_.size() > 6) m.text_ += ",";
        m.text_ += from + "=" + to;
    }
    for (std::size_t i = 0; i < space.size(); ++i)
        if (m.image_[i] == unset)
            throw MapError("map table: no image for '" + space.points()[i].label + "'");
    return m;
}

SelfMap SelfMap::parse(const Space& space, std::string_view text) {
    if (text.starts_with("table:")) {
        const auto* f = space.finite();
        if (!f) throw MapError("table maps need a finite space");
        std::vector<std::pair<std::string, std::string>> rows;
        std::string_view rest = text.substr(6);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const auto item = rest.substr(0, comma);
            const auto eq = item.find('=');
            if (eq == std::string_view::npos)
                throw MapError("map table: expected 'from=to', got '" + std::string(item) + "'");
            rows.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        return table(*f, rows);
    }
    return expression(expr::Expr::parse(text, {"x"}));
}

Element SelfMap::apply(const Space& space, const Element& e) const {
    if (expr_) return space.element_at((*expr_)(e.value));
    if (!e.index) throw MapError("table maps are defined on labeled points only");
    return space.finite()->element(image_.at(*e.index));
}

std::string_view to_string(ContractionKind kind) {
    switch (kind) {
    case ContractionKind::theta_r: return "theta_r";
    case ContractionKind::theta_phi: return "theta_phi";
    case ContractionKind::linear: return "linear";
    }
    return "?";
}

std::string_view to_string(PairOutcome outcome) {
    switch (outcome) {
    case PairOutcome::pass: return "pass";
    case PairOutcome::fail: return "fail";
    case PairOutcome::skipped: return "skipped";
    case PairOutcome::domain_violation: return "domain_violation";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Checks

ContractionCertificate check_theta_contraction(const Space& space, const SelfMap& map,
                                               const ThetaSpec& theta, double r, double s,
                                               const ContractionOptions& opt) {
    require_s(s);
    require_unit(r, "exponent r");
    return certify(space, map, ContractionKind::theta_r, "r=" + shortest_repr(r), theta.name(), s, opt,
                   [&](double d, double dT) {
                       const double lhs = theta(s * s * dT);
                       const double base = theta(d);
                       const double lb = std::log(base);
                       return Evaluation{lhs, std::pow(base, r), lb > 0.0 ? std::log(lhs) / lb : kInf};
                   });
}

ContractionCertificate check_theta_phi_contraction(const Space& space, const SelfMap& map,
                                                   const ThetaSpec& theta, const PhiSpec& phi,
                                                   double s, const ContractionOptions& opt) {
    require_s(s);
    return certify(space, map, ContractionKind::theta_phi, phi.name(), theta.name(), s, opt,
                   [&](double d, double dT) {
                       const double lhs = theta(s * s * dT);
                       const double rhs = phi(theta(d));
                       return Evaluation{lhs, rhs, lhs / rhs};
                   });
}

ContractionCertificate check_linear_contraction(const Space& space, const SelfMap& map, double k,
                                                double s, const ContractionOptions& opt) {
    require_s(s);
    require_unit(k, "k");
    return certify(space, map, ContractionKind::linear, "k=" + shortest_repr(k), "", s, opt,
                   [&](double d, double dT) {
                       const double lhs = s * s * dT;
                       return Evaluation{lhs, k * d, lhs / d};
                   });
}

ExponentBound best_exponent(const Space& space, const SelfMap& map, const ThetaSpec& theta,
                            double s, const ContractionOptions& opt) {
    require_s(s);
    ExponentBound out;
    out.pair_source = pair_source(space, opt);
    auto scanned = scan_pairs(space, map, opt, kInf, [&](double d, double dT) {
        const double lhs = theta(s * s * dT);
        const double rhs = theta(d);
        const double lb = std::log(rhs);
        return Evaluation{lhs, rhs, lb > 0.0 ? std::log(lhs) / lb : kInf};
    });
    bool domain = false;
    for (auto& [rec, ratio] : scanned) {
        ++out.pairs;
        if (rec.outcome == PairOutcome::skipped) {
            ++out.skipped;
            continue;
        }
        if (domain) continue;
        if (rec.outcome == PairOutcome::domain_violation) {
            domain = true;
            out.value = kInf;
            out.witness = rec;
            continue;
        }
        if (!out.witness || ratio > out.value) {
            out.value = ratio;
            out.witness = rec;
        }
    }
    out.feasible = out.value < 1.0;
    return out;
}

} // namespace rqbm
