#pragma once

// Independent reference arithmetic for the shipped examples. Nothing here
// calls into the library: distances are typed in by hand and every scan is
// a plain nested loop.

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace oracle {

using Dist = std::function<double(double, double)>;

inline std::vector<double> grid(double lo, double hi, std::size_t m) {
    std::vector<double> g(m);
    for (std::size_t i = 0; i < m; ++i)
        g[i] = (lo * static_cast<double>(m - 1 - i) + hi * static_cast<double>(i)) / static_cast<double>(m - 1);
    return g;
}

inline double square_gap(double a, double b) { return (a - b) * (a - b); }

/// Denominator of a 1/n point, 0 for anything else.
inline int denominator(double v, int lo, int hi) {
    for (int n = lo; n <= hi; ++n)
        if (v == 1.0 / n) return n;
    return 0;
}

/// Every ordered pair of {1/2..1/7}, listed rows plus reverses filled by hand.
inline const std::map<std::pair<int, int>, double>& table_2_3() {
    static const std::map<std::pair<int, int>, double> t{
        {{2, 3}, 0.05}, {{3, 2}, 0.04}, {{2, 4}, 0.08}, {{4, 2}, 0.05}, {{2, 5}, 0.24}, {{5, 2}, 0.24},
        {{2, 6}, 0.4},  {{6, 2}, 0.4},  {{2, 7}, 0.15}, {{7, 2}, 0.15}, {{3, 4}, 0.4},  {{4, 3}, 0.4},
        {{3, 5}, 0.15}, {{5, 3}, 0.15}, {{3, 6}, 0.24}, {{6, 3}, 0.24}, {{3, 7}, 0.08}, {{7, 3}, 0.05},
        {{4, 5}, 0.05}, {{5, 4}, 0.04}, {{4, 6}, 0.15}, {{6, 4}, 0.15}, {{4, 7}, 0.24}, {{7, 4}, 0.24},
        {{5, 6}, 0.08}, {{6, 5}, 0.05}, {{5, 7}, 0.4},  {{7, 5}, 0.4},  {{6, 7}, 0.05}, {{7, 6}, 0.04},
    };
    return t;
}

inline double dist_2_3(double a, double b) {
    if (a == b) return 0.0;
    const int da = denominator(a, 2, 7), db = denominator(b, 2, 7);
    if (da && db) return table_2_3().at({da, db});
    return square_gap(a, b);
}

inline std::vector<double> points_2_3(std::size_t b_grid = 11) {
    std::vector<double> p;
    for (int n = 2; n <= 7; ++n) p.push_back(1.0 / n);
    for (double v : grid(1.0, 2.0, b_grid)) p.push_back(v);
    return p;
}

inline const std::map<std::pair<int, int>, double>& table_final() {
    static const std::map<std::pair<int, int>, double> t{
        {{3, 4}, 0.1},  {{4, 3}, 0.05}, {{3, 5}, 0.05}, {{5, 3}, 0.1},  {{3, 6}, 0.5}, {{6, 3}, 0.5},
        {{4, 5}, 0.1},  {{5, 4}, 0.05}, {{4, 6}, 0.05}, {{6, 4}, 0.1},  {{5, 6}, 0.5}, {{6, 5}, 0.5},
    };
    return t;
}

inline double dist_final(double a, double b) {
    if (a == b) return 0.0;
    const int da = denominator(a, 3, 6), db = denominator(b, 3, 6);
    if (da && db) return table_final().at({da, db});
    return square_gap(a, b);
}

inline std::vector<double> points_final(std::size_t b_grid = 11) {
    std::vector<double> p;
    for (int n = 3; n <= 6; ++n) p.push_back(1.0 / n);
    for (double v : grid(0.5, 1.5, b_grid)) p.push_back(v);
    return p;
}

inline double map_final(double a) { return a < 0.5 ? 1.0 : (std::sqrt(a) + 3.0) / 4.0; }

inline double dist_piecewise(double x, double y) {
    return x >= y ? (x - y) * (x - y) : 0.5 * (y - x) * (y - x);
}

struct Quad {
    double x, u, v, y, lhs, rhs;
};

/// sup lhs/rhs over admissible quadruples (x != y, u != v, u, v not in {x, y}).
inline double min_s(const std::vector<double>& pts, const Dist& d, Quad* witness = nullptr) {
    double best = 0.0;
    bool any = false;
    const std::size_t n = pts.size();
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v)
                for (std::size_t y = 0; y < n; ++y) {
                    if (x == y || u == v || u == x || u == y || v == x || v == y) continue;
                    const double lhs = d(pts[x], pts[y]);
                    const double rhs = d(pts[x], pts[u]) + d(pts[u], pts[v]) + d(pts[v], pts[y]);
                    if (lhs == 0.0 && rhs == 0.0) continue;
                    const double r = rhs > 0.0 ? lhs / rhs : INFINITY;
                    if (!any || r > best) {
                        best = r;
                        any = true;
                        if (witness) *witness = {pts[x], pts[u], pts[v], pts[y], lhs, rhs};
                    }
                }
    return best;
}

inline std::size_t rect_violations(const std::vector<double>& pts, const Dist& d, double s, double tol) {
    std::size_t count = 0;
    const std::size_t n = pts.size();
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v)
                for (std::size_t y = 0; y < n; ++y) {
                    if (x == y || u == v || u == x || u == y || v == x || v == y) continue;
                    const double lhs = d(pts[x], pts[y]);
                    const double rhs = d(pts[x], pts[u]) + d(pts[u], pts[v]) + d(pts[v], pts[y]);
                    if (rhs == 0.0 ? lhs > tol : lhs > s * rhs + tol) ++count;
                }
    return count;
}

enum class Verdict { skipped, pass, fail, domain };

/// One contraction pair: theta(s^2 d(Tx,Ty)) against rhs(d(x,y)).
template <class Theta, class Rhs>
Verdict contraction_pair(double dxy, double dimg, double s, double tol, Theta theta, Rhs rhs) {
    if (!(dimg > 0.0)) return Verdict::skipped;
    if (dxy == 0.0) return Verdict::domain;
    return rhs(dxy) - theta(s * s * dimg) < -tol ? Verdict::fail : Verdict::pass;
}

} // namespace oracle
