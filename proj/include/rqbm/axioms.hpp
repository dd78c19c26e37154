#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rqbm/spaces.hpp"

namespace rqbm {

/// Sampling and reporting knobs shared by every axiom scan. Finite spaces
/// are always scanned exhaustively; analytic spaces use an m-point grid
/// (exhaustive over grid tuples) plus `random` seeded tuples.
struct ScanOptions {
    double tol = 1e-9;
    std::size_t grid = 40;
    std::size_t random = 10000;
    std::uint64_t seed = 0;
    std::size_t max_witnesses = 256;
};

std::string describe_source(const Space& space, const ScanOptions& opt);

struct IdentityViolation {
    Element x;
    Element y;
    double d = 0.0; // d(x,y) == 0 with x != y, or d(p,p) != 0 when x == y
};

struct IdentityReport {
    bool passed = true;
    std::size_t pairs_checked = 0;
    std::size_t violation_count = 0;
    std::vector<IdentityViolation> violations;
};

/// Checks rho(x,y) = 0 <=> x = y over all carrier pairs.
IdentityReport check_identity_axiom(const Space& space, const ScanOptions& opt = {});

struct QuadrupleViolation {
    Element x, u, v, y;
    double lhs = 0.0;     // eta(x,y)
    double rhs_sum = 0.0; // eta(x,u) + eta(u,v) + eta(v,y)
    double ratio = 0.0;   // lhs / rhs_sum, +inf when rhs_sum == 0 < lhs
};

struct RectangularReport {
    bool passed = true;
    bool vacuous = false; // no admissible quadruple exists
    double s = 1.0;
    std::string source;
    std::size_t quadruples_checked = 0;
    std::size_t violation_count = 0;
    std::vector<QuadrupleViolation> violations; // first max_witnesses, in scan order
    std::optional<QuadrupleViolation> worst;    // largest ratio among violations
};

/// b-rectangular inequality eta(x,y) <= s[eta(x,u)+eta(u,v)+eta(v,y)] over
/// admissible quadruples: u != v, both distinct from x and y, and x != y.
RectangularReport check_b_rectangular(const Space& space, double s, const ScanOptions& opt = {});

struct CoefficientBound {
    enum class Kind { finite, infinite, undefined };
    Kind kind = Kind::undefined;
    double value = 0.0;
    std::optional<QuadrupleViolation> witness; // argmax quadruple
};

/// Tightest s certifying the b-rectangular inequality on the sampled
/// quadruples.
CoefficientBound minimal_rectangular_coefficient(const Space& space, const ScanOptions& opt = {});

struct AsymmetryWitness {
    Element a, b;
    double forward = 0.0;  // d(a,b)
    double backward = 0.0; // d(b,a)
};

struct TriangleWitness {
    Element x, z, y;
    double lhs = 0.0; // d(x,y)
    double rhs = 0.0; // d(x,z) + d(z,y)
};

struct Classification {
    double s = 1.0; // coefficient the *_with flags were evaluated at
    bool is_quasi_identity = false;
    bool is_symmetric = false;
    bool is_metric = false;
    bool is_b_metric = false;    // symmetric, identity, d(x,y) <= s[d(x,z)+d(z,y)]
    bool is_rectangular = false; // symmetric, identity, quadrilateral at s = 1
    bool is_rqb = false;         // identity, b-rectangular at s
    CoefficientBound minimal_s;

    IdentityReport identity;
    std::size_t asymmetric_pairs = 0;
    std::vector<AsymmetryWitness> asymmetry;
    std::size_t triangle_violations = 0;
    std::optional<TriangleWitness> triangle_witness;
    std::size_t b_triangle_violations = 0;
    std::optional<TriangleWitness> b_triangle_witness;
    RectangularReport rectangular;   // s = 1
    RectangularReport b_rectangular; // s
};

/// Runs every scan; `s` defaults to the space's claimed_s, else 1.
Classification classify(const Space& space, const ScanOptions& opt = {},
                        std::optional<double> s = std::nullopt);

} // namespace rqbm
