#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rqbm/axioms.hpp"
#include "rqbm/expr.hpp"
#include "rqbm/spaces.hpp"
#include "rqbm/thetaphi.hpp"

namespace rqbm {

/// T: X -> X. Either an expression in x applied to element values (images
/// snap to labeled points with that exact value), or a label table over a
/// finite space written "table:a=b,c=d".
class SelfMap {
public:
    static SelfMap expression(expr::Expr e);
    static SelfMap table(const FiniteSpace& space, const std::vector<std::pair<std::string, std::string>>& rows);
    static SelfMap parse(const Space& space, std::string_view text);

    /// Throws MapError when the image leaves the space.
    Element apply(const Space& space, const Element& e) const;

    const std::string& description() const { return text_; }
    bool is_table() const { return !image_.empty(); }

private:
    SelfMap() = default;

    std::string text_;
    std::optional<expr::Expr> expr_;
    std::vector<std::size_t> image_;
};

enum class ContractionKind { theta_r, theta_phi, linear };
std::string_view to_string(ContractionKind kind);

enum class PairOutcome { pass, fail, skipped, domain_violation };
std::string_view to_string(PairOutcome outcome);

struct PairRecord {
    Element x, y, tx, ty;
    double d = 0.0;       // eta(x,y)
    double d_image = 0.0; // eta(Tx,Ty)
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0; // rhs - lhs
    PairOutcome outcome = PairOutcome::skipped;
};

struct ContractionOptions {
    ScanOptions scan{.grid = 50};
    bool keep_records = false; // every evaluated pair, in scan order
};

struct ContractionCertificate {
    ContractionKind kind = ContractionKind::theta_r;
    std::string parameter; // "r=0.5", the phi name, or "k=0.9"
    std::string theta;
    double s = 1.0;
    double tol = 1e-9;
    std::string pair_source;

    bool passed = true;
    bool vacuous = false; // every pair failed the antecedent
    std::size_t pairs = 0;
    std::size_t skipped = 0;
    std::size_t failed = 0;
    std::size_t domain_violations = 0;
    std::optional<PairRecord> worst; // domain violation first, else least slack
    double max_ratio = 0.0;
    std::vector<PairRecord> failures; // first max_witnesses
    std::vector<PairRecord> records;
};

/// theta(s^2 eta(Tx,Ty)) <= theta(eta(x,y))^r whenever eta(Tx,Ty) > 0.
ContractionCertificate check_theta_contraction(const Space& space, const SelfMap& map,
                                               const ThetaSpec& theta, double r, double s,
                                               const ContractionOptions& opt = {});

/// theta(s^2 eta(Tx,Ty)) <= phi(theta(eta(x,y))) whenever eta(Tx,Ty) > 0.
ContractionCertificate check_theta_phi_contraction(const Space& space, const SelfMap& map,
                                                   const ThetaSpec& theta, const PhiSpec& phi,
                                                   double s, const ContractionOptions& opt = {});

/// s^2 eta(Tx,Ty) <= k eta(x,y) whenever eta(Tx,Ty) > 0.
ContractionCertificate check_linear_contraction(const Space& space, const SelfMap& map, double k,
                                                double s, const ContractionOptions& opt = {});

struct ExponentBound {
    bool feasible = true; // value < 1
    double value = 0.0;   // sup ln theta(s^2 eta(Tx,Ty)) / ln theta(eta(x,y)); 0 when no pair qualifies
    std::optional<PairRecord> witness;
    std::size_t pairs = 0;
    std::size_t skipped = 0;
    std::string pair_source;
};

ExponentBound best_exponent(const Space& space, const SelfMap& map, const ThetaSpec& theta,
                            double s, const ContractionOptions& opt = {});

} // namespace rqbm
