#include "rqbm/spaces.hpp"

#include <cmath>

#include "rqbm/numfmt.hpp"

namespace rqbm {

namespace {

void require_distance(double d, const std::string& what) {
    if (!std::isfinite(d) || d < 0.0)
        throw SpaceError("distance " + what + " is " + shortest_repr(d) +
                         " (must be finite and >= 0)");
}

void require_coefficient(const std::optional<double>& s) {
    if (s && !(std::isfinite(*s) && *s >= 1.0))
        throw SpaceError("claimed_s must be a finite real >= 1, got " + shortest_repr(*s));
}

} // namespace

std::vector<double> uniform_grid(double lo, double hi, std::size_t m) {
    if (m == 0) return {};
    if (m == 1) return {lo};
    std::vector<double> g(m);
    const double last = static_cast<double>(m - 1);
    for (std::size_t i = 0; i < m; ++i) {
        const double k = static_cast<double>(i);
        g[i] = (lo * (last - k) + hi * k) / last;
    }
    return g;
}

// ---------------------------------------------------------------------------
// FiniteSpace

FiniteSpace::FiniteSpace(std::vector<Point> points, std::optional<expr::Expr> default_formula,
                         std::vector<DistanceOverride> overrides, std::vector<Interval> continuum,
                         std::optional<double> claimed_s)
    : points_(std::move(points)),
      default_(std::move(default_formula)),
      continuum_(std::move(continuum)),
      claimed_s_(claimed_s) {
    require_coefficient(claimed_s_);
    if (default_ && default_->variables() != std::vector<std::string>{"x", "y"})
        throw SpaceError("default formula must be declared over variables (x, y)");
    for (const auto& iv : continuum_)
        if (!(std::isfinite(iv.lo) && std::isfinite(iv.hi) && iv.lo < iv.hi))
            throw SpaceError("continuum interval needs finite lo < hi");
    if (!continuum_.empty() && !default_)
        throw SpaceError("continuum intervals require a default formula");

    for (std::size_t i = 0; i < points_.size(); ++i) {
        const Point& p = points_[i];
        if (!std::isfinite(p.value))
            throw SpaceError("point '" + p.label + "' has non-finite value");
        if (!by_label_.emplace(p.label, i).second)
            throw SpaceError("duplicate label '" + p.label + "'");
        by_value_.emplace(p.value, i);
    }

    const std::size_t n = points_.size();
    table_.assign(n * n, std::nullopt);
    for (const auto& o : overrides) {
        const std::size_t from = index_of(o.from);
        const std::size_t to = index_of(o.to);
        require_distance(o.d, "override (" + o.from + ", " + o.to + ")");
        if (from == to) {
            if (o.d != 0.0)
                throw SpaceError("override (" + o.from + ", " + o.to + ") must be 0 on the diagonal");
            continue;
        }
        auto& slot = table_[from * n + to];
        if (slot) throw SpaceError("duplicate override (" + o.from + ", " + o.to + ")");
        slot = o.d;
    }

    if (default_) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && !table_[i * n + j]) formula(points_[i].value, points_[j].value);
    }
}

std::vector<DistanceOverride> FiniteSpace::overrides() const {
    std::vector<DistanceOverride> out;
    const std::size_t n = points_.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (const auto& d = table_[i * n + j]) out.push_back({points_[i].label, points_[j].label, *d});
    return out;
}

std::optional<std::size_t> FiniteSpace::find(std::string_view label) const {
    auto it = by_label_.find(std::string(label));
    if (it == by_label_.end()) return std::nullopt;
    return it->second;
}

std::size_t FiniteSpace::index_of(std::string_view label) const {
    if (auto i = find(label)) return *i;
    throw SpaceError("unknown label '" + std::string(label) + "'");
}

double FiniteSpace::formula(double x, double y) const {
    const double d = (*default_)(x, y);
    require_distance(d, "default(" + shortest_repr(x) + ", " + shortest_repr(y) + ")");
    return d;
}

double FiniteSpace::resolve(std::size_t from, std::size_t to) const {
    const std::size_t n = points_.size();
    if (from >= n || to >= n) throw SpaceError("point index out of range");
    if (from == to) return 0.0;
    if (const auto& d = table_[from * n + to]) return *d;
    if (!default_)
        throw SpaceError("no override for (" + points_[from].label + ", " + points_[to].label +
                         ") and no default formula");
    return formula(points_[from].value, points_[to].value);
}

double FiniteSpace::resolve(std::string_view from, std::string_view to) const {
    return resolve(index_of(from), index_of(to));
}

double FiniteSpace::distance(const Element& a, const Element& b) const {
    if (a.index && b.index) return resolve(*a.index, *b.index);
    if (a == b) return 0.0;
    if (!default_) throw SpaceError("unlabeled element requires a default formula");
    return formula(a.value, b.value);
}

Element FiniteSpace::element_at(double value) const {
    if (auto it = by_value_.find(value); it != by_value_.end()) return element(it->second);
    for (const auto& iv : continuum_)
        if (iv.contains(value)) return Element{std::nullopt, value};
    throw MapError("value " + shortest_repr(value) + " is not a point of the space");
}

FiniteSpace FiniteSpace::with_override(std::size_t from, std::size_t to, double d) const {
    FiniteSpace copy = *this;
    const std::size_t n = points_.size();
    if (from >= n || to >= n) throw SpaceError("point index out of range");
    require_distance(d, "override");
    if (from == to) {
        if (d != 0.0) throw SpaceError("diagonal overrides must be 0");
        return copy;
    }
    copy.table_[from * n + to] = d;
    return copy;
}

FiniteSpace FiniteSpace::with_claimed_s(std::optional<double> s) const {
    require_coefficient(s);
    FiniteSpace copy = *this;
    copy.claimed_s_ = s;
    return copy;
}

// ---------------------------------------------------------------------------
// AnalyticSpace

AnalyticSpace::AnalyticSpace(Interval domain, expr::Expr forward, std::optional<double> claimed_s)
    : domain_(domain), forward_(std::move(forward)), claimed_s_(claimed_s) {
    if (!(std::isfinite(domain_.lo) && std::isfinite(domain_.hi) && domain_.lo < domain_.hi))
        throw SpaceError("analytic domain needs finite lo < hi");
    if (forward_.variables() != std::vector<std::string>{"x", "y"})
        throw SpaceError("forward formula must be declared over variables (x, y)");
    require_coefficient(claimed_s_);
}

double AnalyticSpace::distance(double x, double y) const {
    if (!domain_.contains(x) || !domain_.contains(y))
        throw SpaceError("(" + shortest_repr(x) + ", " + shortest_repr(y) + ") outside domain [" +
                         shortest_repr(domain_.lo) + ", " + shortest_repr(domain_.hi) + "]");
    const double d = forward_(x, y);
    require_distance(d, "eta(" + shortest_repr(x) + ", " + shortest_repr(y) + ")");
    return d;
}

Element AnalyticSpace::element_at(double value) const {
    if (!domain_.contains(value))
        throw MapError("value " + shortest_repr(value) + " outside domain [" +
                       shortest_repr(domain_.lo) + ", " + shortest_repr(domain_.hi) + "]");
    return Element{std::nullopt, value};
}

std::vector<double> AnalyticSpace::grid(std::size_t m) const {
    return uniform_grid(domain_.lo, domain_.hi, m);
}

// ---------------------------------------------------------------------------
// Space

std::optional<double> Space::claimed_s() const {
    return std::visit([](const auto& s) { return s.claimed_s(); }, impl_);
}

double Space::distance(const Element& a, const Element& b) const {
    if (const auto* f = finite()) return f->distance(a, b);
    return analytic()->distance(a.value, b.value);
}

Element Space::element_at(double value) const {
    return std::visit([&](const auto& s) { return s.element_at(value); }, impl_);
}

Element Space::parse_element(std::string_view text) const {
    if (const auto* f = finite())
        if (auto i = f->find(text)) return f->element(*i);
    double value = 0.0;
    try {
        value = expr::Expr::parse(text, {}).evaluate(std::span<const double>{});
    } catch (const expr::ExprError&) {
        throw SpaceError("'" + std::string(text) + "' is neither a label nor a number");
    }
    try {
        return element_at(value);
    } catch (const MapError& e) {
        throw SpaceError(e.what());
    }
}

std::string Space::label(const Element& e) const {
    if (const auto* f = finite(); f && e.index) return f->points().at(*e.index).label;
    return shortest_repr(e.value);
}

std::vector<Element> Space::carrier(std::size_t grid) const {
    std::vector<Element> out;
    if (const auto* f = finite()) {
        out.reserve(f->size());
        for (std::size_t i = 0; i < f->size(); ++i) out.push_back(f->element(i));
    } else {
        for (double v : analytic()->grid(grid)) out.push_back(Element{std::nullopt, v});
    }
    return out;
}

} // namespace rqbm
