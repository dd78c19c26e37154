#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "rqbm/expr.hpp"

namespace rqbm {

struct Point {
    std::string label;
    double value = 0.0;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double v) const { return v >= lo && v <= hi; }
};

/// An element of a space. Labeled points of a finite space carry their
/// table index; everything else (analytic coordinates, continuum points of
/// a finite space) is identified by its value alone.
struct Element {
    std::optional<std::size_t> index;
    double value = 0.0;

    friend bool operator==(const Element& a, const Element& b) {
        if (a.index || b.index) return a.index == b.index;
        return a.value == b.value;
    }
};

struct DistanceOverride {
    std::string from;
    std::string to;
    double d = 0.0;
};

/// Labeled points with an asymmetric distance table. An explicit override
/// wins; otherwise the default formula in (x, y) is applied to the point
/// values. Optional continuum intervals admit unlabeled points, resolved by
/// the default formula (the "B = [lo, hi]" half of mixed examples).
class FiniteSpace {
public:
    FiniteSpace(std::vector<Point> points, std::optional<expr::Expr> default_formula,
                std::vector<DistanceOverride> overrides, std::vector<Interval> continuum = {},
                std::optional<double> claimed_s = std::nullopt);

    std::size_t size() const { return points_.size(); }
    const std::vector<Point>& points() const { return points_; }
    const std::optional<expr::Expr>& default_formula() const { return default_; }
    const std::vector<Interval>& continuum() const { return continuum_; }
    std::optional<double> claimed_s() const { return claimed_s_; }

    /// Overrides in row-major (from, to) index order.
    std::vector<DistanceOverride> overrides() const;

    std::optional<std::size_t> find(std::string_view label) const;
    std::size_t index_of(std::string_view label) const;

    /// Override-then-default resolution; the diagonal is always 0.
    double resolve(std::size_t from, std::size_t to) const;
    double resolve(std::string_view from, std::string_view to) const;

    double distance(const Element& a, const Element& b) const;

    Element element(std::size_t index) const { return Element{index, points_.at(index).value}; }
    /// Snaps to the first labeled point with exactly this value, else an
    /// unlabeled continuum point; throws MapError when neither applies.
    Element element_at(double value) const;

    /// Copy with one override replaced or added.
    FiniteSpace with_override(std::size_t from, std::size_t to, double d) const;
    FiniteSpace with_claimed_s(std::optional<double> s) const;

private:
    double formula(double x, double y) const;

    std::vector<Point> points_;
    std::optional<expr::Expr> default_;
    std::vector<std::optional<double>> table_;
    std::vector<Interval> continuum_;
    std::optional<double> claimed_s_;
    std::unordered_map<std::string, std::size_t> by_label_;
    std::map<double, std::size_t> by_value_;
};

/// A closed interval with a closed-form asymmetric distance in (x, y).
class AnalyticSpace {
public:
    AnalyticSpace(Interval domain, expr::Expr forward,
                  std::optional<double> claimed_s = std::nullopt);

    const Interval& domain() const { return domain_; }
    const expr::Expr& forward() const { return forward_; }
    std::optional<double> claimed_s() const { return claimed_s_; }

    double distance(double x, double y) const;
    Element element_at(double value) const;

    /// m uniformly spaced points, endpoints included.
    std::vector<double> grid(std::size_t m) const;

private:
    Interval domain_;
    expr::Expr forward_;
    std::optional<double> claimed_s_;
};

/// m uniformly spaced values over [lo, hi]; computed as
/// (lo*(m-1-i) + hi*i)/(m-1) so integer-friendly endpoints give round labels.
std::vector<double> uniform_grid(double lo, double hi, std::size_t m);

class Space {
public:
    Space(FiniteSpace s) : impl_(std::move(s)) {}
    Space(AnalyticSpace s) : impl_(std::move(s)) {}

    bool is_finite() const { return std::holds_alternative<FiniteSpace>(impl_); }
    const FiniteSpace* finite() const { return std::get_if<FiniteSpace>(&impl_); }
    const AnalyticSpace* analytic() const { return std::get_if<AnalyticSpace>(&impl_); }

    std::optional<double> claimed_s() const;
    double distance(const Element& a, const Element& b) const;
    Element element_at(double value) const;

    /// A label of a finite space, else a constant expression ("1/3", "2").
    Element parse_element(std::string_view text) const;
    std::string label(const Element& e) const;

    /// Points scanned exhaustively: every labeled point of a finite space,
    /// or an m-point grid of an analytic one.
    std::vector<Element> carrier(std::size_t grid) const;

private:
    std::variant<FiniteSpace, AnalyticSpace> impl_;
};

} // namespace rqbm
