#include "rqbm/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace rqbm {

namespace {

[[noreturn]] void schema_error(std::string_view where, std::string_view what) {
    throw SpaceError("space file " + std::string(where) + ": " + std::string(what));
}

const Json& require(const Json& obj, const char* key, std::string_view where) {
    if (!obj.contains(key)) schema_error(where, std::string("missing \"") + key + "\"");
    return obj.at(key);
}

std::string string_at(const Json& j, std::string_view where) {
    if (!j.is_string()) schema_error(where, "expected a string");
    return j.get<std::string>();
}

std::optional<double> optional_number(const Json& obj, const char* key, std::string_view where) {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    return number_from_json(obj.at(key), std::string(where) + "/" + key);
}

expr::Expr formula_at(const Json& j, std::string_view where) {
    const std::string text = string_at(j, where);
    try {
        return expr::Expr::parse(text, {"x", "y"});
    } catch (const expr::ExprError& e) {
        schema_error(where, e.what());
    }
}

Interval interval_at(const Json& j, const std::string& where) {
    if (!j.is_object()) schema_error(where, "expected {lo, hi}");
    return Interval{number_from_json(require(j, "lo", where), where + "/lo"),
                    number_from_json(require(j, "hi", where), where + "/hi")};
}

} // namespace

Json json_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double number_from_json(const Json& j, std::string_view where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    schema_error(where, "expected a number");
}

Json space_to_json(const Space& space) {
    Json j;
    if (const auto* f = space.finite()) {
        j["kind"] = "finite";
        Json pts = Json::array();
        for (const auto& p : f->points()) pts.push_back({{"label", p.label}, {"value", p.value}});
        j["points"] = std::move(pts);
        j["default"] = f->default_formula() ? Json(f->default_formula()->source()) : Json(nullptr);
        Json ov = Json::array();
        for (const auto& o : f->overrides()) ov.push_back({{"from", o.from}, {"to", o.to}, {"d", o.d}});
        j["overrides"] = std::move(ov);
        if (!f->continuum().empty()) {
            Json cont = Json::array();
            for (const auto& iv : f->continuum()) cont.push_back({{"lo", iv.lo}, {"hi", iv.hi}});
            j["continuum"] = std::move(cont);
        }
    } else {
        const auto* a = space.analytic();
        j["kind"] = "analytic";
        j["domain"] = {{"lo", a->domain().lo}, {"hi", a->domain().hi}};
        j["forward"] = a->forward().source();
    }
    j["claimed_s"] = space.claimed_s() ? Json(*space.claimed_s()) : Json(nullptr);
    return j;
}

Space space_from_json(const Json& j) {
    if (!j.is_object()) schema_error("", "top level must be an object");
    const std::string kind = string_at(require(j, "kind", ""), "/kind");
    const auto claimed_s = optional_number(j, "claimed_s", "");

    if (kind == "finite") {
        const Json& pts = require(j, "points", "");
        if (!pts.is_array()) schema_error("/points", "expected an array");
        std::vector<Point> points;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const std::string where = "/points/" + std::to_string(i);
            if (!pts[i].is_object()) schema_error(where, "expected {label, value}");
            points.push_back({string_at(require(pts[i], "label", where), where + "/label"),
                              number_from_json(require(pts[i], "value", where), where + "/value")});
        }
        std::optional<expr::Expr> def;
        if (j.contains("default") && !j.at("default").is_null()) def = formula_at(j.at("default"), "/default");

        std::vector<DistanceOverride> overrides;
        if (j.contains("overrides")) {
            const Json& ov = j.at("overrides");
            if (!ov.is_array()) schema_error("/overrides", "expected an array");
            for (std::size_t i = 0; i < ov.size(); ++i) {
                const std::string where = "/overrides/" + std::to_string(i);
                if (!ov[i].is_object()) schema_error(where, "expected {from, to, d}");
                overrides.push_back({string_at(require(ov[i], "from", where), where + "/from"),
                                     string_at(require(ov[i], "to", where), where + "/to"),
                                     number_from_json(require(ov[i], "d", where), where + "/d")});
            }
        }
        std::vector<Interval> continuum;
        if (j.contains("continuum")) {
            const Json& c = j.at("continuum");
            if (!c.is_array()) schema_error("/continuum", "expected an array");
            for (std::size_t i = 0; i < c.size(); ++i)
                continuum.push_back(interval_at(c[i], "/continuum/" + std::to_string(i)));
        }
        return FiniteSpace(std::move(points), std::move(def), std::move(overrides), std::move(continuum),
                           claimed_s);
    }
    if (kind == "analytic") {
        const Interval dom = interval_at(require(j, "domain", ""), "/domain");
        return AnalyticSpace(dom, formula_at(require(j, "forward", ""), "/forward"), claimed_s);
    }
    schema_error("/kind", "expected \"finite\" or \"analytic\", got \"" + kind + "\"");
}

Space parse_space(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw SpaceError("space file is not valid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    return space_from_json(j);
}

Space load_space(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpaceError("cannot open space file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_space(buf.str());
}

} // namespace rqbm
