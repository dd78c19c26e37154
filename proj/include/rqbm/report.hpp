#pragma once

#include <string>

#include "rqbm/axioms.hpp"
#include "rqbm/contraction.hpp"
#include "rqbm/io.hpp"
#include "rqbm/solver.hpp"
#include "rqbm/thetaphi.hpp"

namespace rqbm {

inline constexpr int kReportSchema = 1;

/// Labeled points as their label, everything else as its coordinate.
Json element_json(const Space& space, const Element& e);

Json to_json(const Space& space, const IdentityReport& r);
Json to_json(const Space& space, const QuadrupleViolation& q);
Json to_json(const Space& space, const RectangularReport& r);
Json to_json(const Space& space, const CoefficientBound& b);
Json to_json(const Space& space, const Classification& c);
Json to_json(const ValidationReport& r);
Json to_json(const Space& space, const PairRecord& p);
Json to_json(const Space& space, const ContractionCertificate& c);
Json to_json(const Space& space, const ExponentBound& b);
Json to_json(const Space& space, const PicardTrace& t);
Json to_json(const CauchyReport& r);
Json to_json(const Space& space, const FixedPointVerdict& v);
Json to_json(const Space& space, const UniquenessReport& r);
Json to_json(const Space& space, const SandwichReport& r);

/// One "path  value" line per scalar leaf, values aligned in one column.
std::string render_text(const Json& report);

} // namespace rqbm
