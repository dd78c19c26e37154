#include "rqbm/report.hpp"

#include <algorithm>
#include <sstream>
#include <utility>
#include <vector>

namespace rqbm {

namespace {

Json numbers(const std::vector<double>& xs) {
    Json a = Json::array();
    for (double x : xs) a.push_back(json_number(x));
    return a;
}

Json optional_element(const Space& space, const std::optional<Element>& e) {
    return e ? element_json(space, *e) : Json(nullptr);
}

std::string_view kind_name(CoefficientBound::Kind k) {
    switch (k) {
    case CoefficientBound::Kind::finite: return "finite";
    case CoefficientBound::Kind::infinite: return "infinite";
    case CoefficientBound::Kind::undefined: return "undefined";
    }
    return "?";
}

Json triangle_json(const Space& space, const std::optional<TriangleWitness>& w) {
    if (!w) return nullptr;
    return {{"x", element_json(space, w->x)},
            {"z", element_json(space, w->z)},
            {"y", element_json(space, w->y)},
            {"lhs", json_number(w->lhs)},
            {"rhs", json_number(w->rhs)}};
}

void flatten(const Json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        if (j.empty()) out.emplace_back(path, "{}");
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
    } else if (j.is_array()) {
        if (j.empty()) out.emplace_back(path, "[]");
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
    } else if (j.is_string()) {
        out.emplace_back(path, j.get<std::string>());
    } else {
        out.emplace_back(path, j.dump());
    }
}

} // namespace

Json element_json(const Space& space, const Element& e) {
    if (e.index) return space.label(e);
    return json_number(e.value);
}

Json to_json(const Space& space, const IdentityReport& r) {
    Json v = Json::array();
    for (const auto& w : r.violations)
        v.push_back({{"x", element_json(space, w.x)}, {"y", element_json(space, w.y)}, {"d", json_number(w.d)}});
    return {{"passed", r.passed},
            {"pairs_checked", r.pairs_checked},
            {"violation_count", r.violation_count},
            {"violations", std::move(v)}};
}

Json to_json(const Space& space, const QuadrupleViolation& q) {
    return {{"x", element_json(space, q.x)}, {"u", element_json(space, q.u)},
            {"v", element_json(space, q.v)}, {"y", element_json(space, q.y)},
            {"lhs", json_number(q.lhs)},     {"rhs_sum", json_number(q.rhs_sum)},
            {"ratio", json_number(q.ratio)}};
}

Json to_json(const Space& space, const RectangularReport& r) {
    Json v = Json::array();
    for (const auto& q : r.violations) v.push_back(to_json(space, q));
    return {{"passed", r.passed},
            {"vacuous", r.vacuous},
            {"s", json_number(r.s)},
            {"source", r.source},
            {"quadruples_checked", r.quadruples_checked},
            {"violation_count", r.violation_count},
            {"worst", r.worst ? to_json(space, *r.worst) : Json(nullptr)},
            {"violations", std::move(v)}};
}

Json to_json(const Space& space, const CoefficientBound& b) {
    return {{"kind", kind_name(b.kind)},
            {"value", b.kind == CoefficientBound::Kind::undefined ? Json(nullptr) : json_number(b.value)},
            {"witness", b.witness ? to_json(space, *b.witness) : Json(nullptr)}};
}

Json to_json(const Space& space, const Classification& c) {
    Json asym = Json::array();
    for (const auto& a : c.asymmetry)
        asym.push_back({{"a", element_json(space, a.a)},
                        {"b", element_json(space, a.b)},
                        {"forward", json_number(a.forward)},
                        {"backward", json_number(a.backward)}});
    return {{"s", json_number(c.s)},
            {"flags",
             {{"is_quasi_identity", c.is_quasi_identity},
              {"is_symmetric", c.is_symmetric},
              {"is_metric", c.is_metric},
              {"is_b_metric_with_s", c.is_b_metric},
              {"is_rectangular", c.is_rectangular},
              {"is_rqb_with_s", c.is_rqb}}},
            {"minimal_s", to_json(space, c.minimal_s)},
            {"identity", to_json(space, c.identity)},
            {"asymmetric_pairs", c.asymmetric_pairs},
            {"asymmetry", std::move(asym)},
            {"triangle_violations", c.triangle_violations},
            {"triangle_witness", triangle_json(space, c.triangle_witness)},
            {"b_triangle_violations", c.b_triangle_violations},
            {"b_triangle_witness", triangle_json(space, c.b_triangle_witness)},
            {"rectangular", to_json(space, c.rectangular)},
            {"b_rectangular", to_json(space, c.b_rectangular)}};
}

Json to_json(const ValidationReport& r) {
    Json props = Json::array();
    for (const auto& p : r.properties) {
        Json ws = Json::array();
        for (const auto& w : p.witnesses)
            ws.push_back({{"points", numbers(w.points)}, {"values", numbers(w.values)}, {"detail", w.detail}});
        props.push_back({{"name", p.name},
                         {"passed", p.passed},
                         {"evaluated", p.evaluated},
                         {"defect", json_number(p.defect)},
                         {"note", p.note},
                         {"witnesses", std::move(ws)}});
    }
    return {{"subject", r.subject},
            {"grid", r.grid},
            {"passed", r.passed()},
            {"max_defect", json_number(r.max_defect)},
            {"properties", std::move(props)}};
}

Json to_json(const Space& space, const PairRecord& p) {
    return {{"x", element_json(space, p.x)},
            {"y", element_json(space, p.y)},
            {"tx", element_json(space, p.tx)},
            {"ty", element_json(space, p.ty)},
            {"d", json_number(p.d)},
            {"d_image", json_number(p.d_image)},
            {"lhs", json_number(p.lhs)},
            {"rhs", json_number(p.rhs)},
            {"slack", json_number(p.slack)},
            {"outcome", to_string(p.outcome)}};
}

Json to_json(const Space& space, const ContractionCertificate& c) {
    Json failures = Json::array();
    for (const auto& p : c.failures) failures.push_back(to_json(space, p));
    Json j{{"kind", to_string(c.kind)},
           {"parameter", c.parameter},
           {"theta", c.theta},
           {"s", json_number(c.s)},
           {"tol", json_number(c.tol)},
           {"pair_source", c.pair_source},
           {"verdict", c.passed ? "pass" : "fail"},
           {"vacuous", c.vacuous},
           {"pairs", c.pairs},
           {"skipped", c.skipped},
           {"failed", c.failed},
           {"domain_violations", c.domain_violations},
           {"worst_pair", c.worst ? to_json(space, *c.worst) : Json(nullptr)},
           {"max_ratio", json_number(c.max_ratio)},
           {"failures", std::move(failures)}};
    if (!c.records.empty()) {
        Json recs = Json::array();
        for (const auto& p : c.records) recs.push_back(to_json(space, p));
        j["records"] = std::move(recs);
    }
    return j;
}

Json to_json(const Space& space, const ExponentBound& b) {
    return {{"feasible", b.feasible},
            {"value", json_number(b.value)},
            {"pairs", b.pairs},
            {"skipped", b.skipped},
            {"pair_source", b.pair_source},
            {"witness", b.witness ? to_json(space, *b.witness) : Json(nullptr)}};
}

Json to_json(const Space& space, const PicardTrace& t) {
    Json its = Json::array();
    for (const auto& e : t.iterates) its.push_back(element_json(space, e));
    return {{"terminated_by", to_string(t.terminated_by)},
            {"converged", t.converged()},
            {"limit", optional_element(space, t.limit)},
            {"steps", t.steps()},
            {"tol", json_number(t.tol)},
            {"max_iter", t.max_iter},
            {"iterates", std::move(its)},
            {"fwd_step", numbers(t.fwd_step)},
            {"bwd_step", numbers(t.bwd_step)},
            {"fwd_skip", numbers(t.fwd_skip)},
            {"bwd_skip", numbers(t.bwd_skip)}};
}

Json to_json(const CauchyReport& r) {
    Json series = Json::array();
    for (const auto& s : r.series)
        series.push_back({{"name", s.name},
                          {"strictly_decreasing", s.strictly_decreasing},
                          {"first_violation", s.first_violation ? Json(*s.first_violation) : Json(nullptr)},
                          {"tail", json_number(s.tail)},
                          {"tail_below_tol", s.tail_below_tol}});
    return {{"passed", r.passed()}, {"tol", json_number(r.tol)}, {"series", std::move(series)}};
}

Json to_json(const Space& space, const FixedPointVerdict& v) {
    return {{"point", element_json(space, v.point)},
            {"image", element_json(space, v.image)},
            {"fwd_residual", json_number(v.fwd_residual)},
            {"bwd_residual", json_number(v.bwd_residual)},
            {"tol", json_number(v.tol)},
            {"verified", v.verified}};
}

Json to_json(const Space& space, const UniquenessReport& r) {
    Json runs = Json::array();
    for (const auto& run : r.runs)
        runs.push_back({{"start", element_json(space, run.start)},
                        {"terminated_by", to_string(run.terminated_by)},
                        {"steps", run.steps},
                        {"limit", optional_element(space, run.limit)}});
    Json limits = Json::array();
    for (const auto& e : r.distinct_limits) limits.push_back(element_json(space, e));
    return {{"passed", r.passed},
            {"merge_tol", json_number(r.merge_tol)},
            {"distinct_limits", std::move(limits)},
            {"non_converged", r.non_converged},
            {"runs", std::move(runs)}};
}

Json to_json(const Space& space, const SandwichReport& r) {
    return {{"passed", r.passed()},
            {"limit", element_json(space, r.limit)},
            {"y", element_json(space, r.y)},
            {"s", json_number(r.s)},
            {"tail_len", r.tail_len},
            {"tol", json_number(r.tol)},
            {"forward",
             {{"d_limit_y", json_number(r.d_limit_y)},
              {"tail_min", json_number(r.fwd_min)},
              {"tail_max", json_number(r.fwd_max)},
              {"holds", r.fwd_holds}}},
            {"backward",
             {{"d_y_limit", json_number(r.d_y_limit)},
              {"tail_min", json_number(r.bwd_min)},
              {"tail_max", json_number(r.bwd_max)},
              {"holds", r.bwd_holds}}}};
}

std::string render_text(const Json& report) {
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(report, "", rows);
    std::size_t width = 0;
    for (const auto& [k, _] : rows) width = std::max(width, k.size());
    std::ostringstream os;
    for (const auto& [k, v] : rows) os << k << std::string(width - k.size() + 2, ' ') << v << '\n';
    return os.str();
}

} // namespace rqbm
