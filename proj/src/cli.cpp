#include "rqbm/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>

#include "CLI11.hpp"

#include "rqbm/instances.hpp"
#include "rqbm/numfmt.hpp"
#include "rqbm/random.hpp"
#include "rqbm/report.hpp"

namespace rqbm::cli {

namespace {

struct Config {
    std::string command;
    std::optional<std::string> space_path;
    std::optional<std::string> instance;
    std::optional<std::size_t> b_grid;

    std::optional<std::size_t> grid;
    std::size_t random = 10000;
    std::uint64_t seed = 0;
    std::optional<double> tol;

    std::optional<double> s;
    std::optional<double> exponent;
    std::optional<double> k;
    std::optional<std::string> map;
    std::optional<std::string> theta;
    std::optional<std::string> phi;
    std::string kind = "theta_r";
    bool records = false;
    bool best_exponent = false;

    std::optional<double> grid_lo;
    std::optional<double> grid_hi;
    std::size_t per_decade = 64;
    std::size_t points = 200;
    std::size_t seq_len = 40;
    std::size_t depth = 200;

    std::optional<std::string> start;
    std::size_t max_iter = 10000;
    bool diagnostics = false;
    bool uniqueness = false;
    std::size_t starts_grid = 21;
    std::optional<double> merge_tol;
    std::optional<std::string> sandwich_y;
    std::size_t tail = 10;

    std::string profile = "metric";
    std::optional<std::string> perturbation;
    std::size_t n_points = 6;
    std::size_t seeds = 100;

    std::optional<std::string> name;
    std::optional<std::string> out;
    std::string format = "json";
};

template <class T>
CLI::Option* optional_option(CLI::App* app, const std::string& flag, std::optional<T>& dest,
                             const std::string& help) {
    return app->add_option_function<T>(flag, [&dest](const T& v) { dest = v; }, help);
}

void add_space_options(CLI::App* sub, Config& c) {
    auto* sp = optional_option(sub, "--space", c.space_path, "space definition file (JSON)");
    auto* in = optional_option(sub, "--instance", c.instance, "built-in instance name");
    sp->excludes(in);
    optional_option(sub, "--b-grid", c.b_grid, "grid size on B for mixed instances");
}

void add_scan_options(CLI::App* sub, Config& c) {
    optional_option(sub, "--grid", c.grid, "grid points per variable for analytic spaces");
    sub->add_option("--random", c.random, "seeded random samples for analytic spaces");
    sub->add_option("--seed", c.seed, "seed for every random draw");
    optional_option(sub, "--tol", c.tol, "absolute tolerance");
}

void add_output_options(CLI::App* sub, Config& c) {
    optional_option(sub, "--out", c.out, "write the report to this file");
    sub->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}));
}

struct Loaded {
    Space space;
    std::optional<InstanceBundle> bundle;
    Json input;
};

Loaded load(const Config& c) {
    if (c.instance) {
        InstanceBundle b = build_instance(*c.instance, c.b_grid);
        Json input{{"instance", *c.instance}};
        if (c.b_grid) input["b_grid"] = *c.b_grid;
        Space sp = b.space;
        return {std::move(sp), std::move(b), std::move(input)};
    }
    if (c.space_path) return {load_space(*c.space_path), std::nullopt, Json{{"space", *c.space_path}}};
    throw PreconditionError("one of --space or --instance is required");
}

ScanOptions scan_options(const Config& c, std::size_t default_grid) {
    ScanOptions o;
    o.grid = c.grid.value_or(default_grid);
    o.random = c.random;
    o.seed = c.seed;
    o.tol = c.tol.value_or(1e-9);
    return o;
}

void add_scan_input(Json& input, const Space& space, const ScanOptions& o) {
    if (!space.is_finite()) {
        input["grid"] = o.grid;
        input["random"] = o.random;
        input["seed"] = o.seed;
        input["rng"] = Rng::name;
    }
    input["tol"] = json_number(o.tol);
}

double coefficient(const Config& c, const Loaded& l) {
    if (c.s) return *c.s;
    if (l.bundle && l.bundle->s) return *l.bundle->s;
    return l.space.claimed_s().value_or(1.0);
}

template <class T>
T from_bundle(const std::optional<T>& flag, const Loaded& l, std::optional<T> InstanceBundle::*field,
              const char* what) {
    if (flag) return *flag;
    if (l.bundle && (*l.bundle).*field) return *((*l.bundle).*field);
    throw PreconditionError(std::string("missing --") + what);
}

struct Outcome {
    Json body;
    bool passed = true;
};

using Handler = std::function<Outcome(const Config&)>;

Outcome cmd_verify(const Config& c) {
    auto l = load(c);
    const auto o = scan_options(c, 40);
    const double s = coefficient(c, l);
    add_scan_input(l.input, l.space, o);
    l.input["s"] = json_number(s);
    const auto id = check_identity_axiom(l.space, o);
    const auto rect = check_b_rectangular(l.space, s, o);
    return {{{"input", l.input}, {"identity", to_json(l.space, id)}, {"b_rectangular", to_json(l.space, rect)}},
            id.passed && rect.passed};
}

Outcome cmd_classify(const Config& c) {
    auto l = load(c);
    const auto o = scan_options(c, 40);
    const double s = coefficient(c, l);
    add_scan_input(l.input, l.space, o);
    l.input["s"] = json_number(s);
    const auto cl = classify(l.space, o, s);
    return {{{"input", l.input}, {"classification", to_json(l.space, cl)}}, cl.is_rqb};
}

Outcome cmd_min_s(const Config& c) {
    auto l = load(c);
    const auto o = scan_options(c, 40);
    add_scan_input(l.input, l.space, o);
    const auto b = minimal_rectangular_coefficient(l.space, o);
    return {{{"input", l.input}, {"minimal_s", to_json(l.space, b)}},
            b.kind != CoefficientBound::Kind::infinite};
}

Outcome cmd_validate_theta(const Config& c) {
    if (!c.theta) throw PreconditionError("missing --theta");
    const auto spec = ThetaSpec::parse(*c.theta);
    const auto grid = (c.grid_lo || c.grid_hi)
                          ? log_grid(c.grid_lo.value_or(1e-8), c.grid_hi.value_or(1e3), c.per_decade)
                          : default_theta_grid();
    ThetaValidationOptions o;
    o.vanishing_seq_len = c.seq_len;
    const auto rep = validate_theta(spec, grid, o);
    Json input{{"theta", *c.theta}, {"vanishing_seq_len", c.seq_len}};
    return {{{"input", input}, {"validation", to_json(rep)}}, rep.passed()};
}

Outcome cmd_validate_phi(const Config& c) {
    if (!c.phi) throw PreconditionError("missing --phi");
    const auto spec = PhiSpec::parse(*c.phi);
    const auto grid = (c.grid_lo || c.grid_hi)
                          ? uniform_grid(c.grid_lo.value_or(1.0), c.grid_hi.value_or(10.0), c.points)
                          : default_phi_grid();
    PhiValidationOptions o;
    o.iterate_depth = c.depth;
    const auto rep = validate_phi(spec, grid, o);
    Json input{{"phi", *c.phi}, {"iterate_depth", c.depth}};
    return {{{"input", input}, {"validation", to_json(rep)}}, rep.passed()};
}

Outcome cmd_contraction(const Config& c) {
    auto l = load(c);
    ContractionOptions o;
    o.scan = scan_options(c, 50);
    o.keep_records = c.records;
    const double s = coefficient(c, l);
    const std::string map_text = from_bundle(c.map, l, &InstanceBundle::map, "map");
    const SelfMap map = SelfMap::parse(l.space, map_text);
    add_scan_input(l.input, l.space, o.scan);
    l.input["kind"] = c.kind;
    l.input["map"] = map_text;
    l.input["s"] = json_number(s);

    Json body{{"input", nullptr}};
    ContractionCertificate cert;
    if (c.kind == "linear") {
        if (!c.k) throw PreconditionError("missing --k");
        l.input["k"] = json_number(*c.k);
        cert = check_linear_contraction(l.space, map, *c.k, s, o);
    } else {
        const std::string theta_text = from_bundle(c.theta, l, &InstanceBundle::theta, "theta");
        const auto theta = ThetaSpec::parse(theta_text);
        l.input["theta"] = theta_text;
        if (c.kind == "theta_r") {
            const double r = from_bundle(c.exponent, l, &InstanceBundle::r, "exponent");
            l.input["exponent"] = json_number(r);
            cert = check_theta_contraction(l.space, map, theta, r, s, o);
        } else {
            const std::string phi_text = from_bundle(c.phi, l, &InstanceBundle::phi, "phi");
            l.input["phi"] = phi_text;
            cert = check_theta_phi_contraction(l.space, map, theta, PhiSpec::parse(phi_text), s, o);
        }
        if (c.best_exponent) body["best_exponent"] = to_json(l.space, best_exponent(l.space, map, theta, s, o));
    }
    body["input"] = l.input;
    body["certificate"] = to_json(l.space, cert);
    return {std::move(body), cert.passed};
}

Outcome cmd_solve(const Config& c) {
    auto l = load(c);
    if (!c.start && !c.uniqueness) throw PreconditionError("solve needs --start or --uniqueness-starts");
    const std::string map_text = from_bundle(c.map, l, &InstanceBundle::map, "map");
    const SelfMap map = SelfMap::parse(l.space, map_text);
    SolveOptions o;
    o.max_iter = c.max_iter;
    o.tol = c.tol.value_or(1e-10);
    l.input["map"] = map_text;
    l.input["tol"] = json_number(o.tol);
    l.input["max_iter"] = o.max_iter;

    Json body{{"input", nullptr}};
    bool passed = true;
    if (c.start) {
        l.input["start"] = *c.start;
        const Element x0 = l.space.parse_element(*c.start);
        const PicardTrace trace = picard_iterate(l.space, map, x0, o);
        body["limit"] = trace.limit ? element_json(l.space, *trace.limit) : Json(nullptr);
        if (trace.limit) {
            const auto v = verify_fixed_point(l.space, map, *trace.limit, 10.0 * o.tol);
            body["fixed_point"] = to_json(l.space, v);
            passed = v.verified;
        } else {
            passed = false;
        }
        if (c.diagnostics) {
            Json diag;
            if (trace.iterates.size() >= 3) diag["cauchy"] = to_json(cauchy_diagnostics(trace));
            else diag["cauchy"] = nullptr;
            if (c.sandwich_y) {
                const double s = coefficient(c, l);
                const std::size_t tail = std::min(c.tail, trace.iterates.size());
                diag["sandwich"] = to_json(
                    l.space, limit_sandwich_check(l.space, trace, l.space.parse_element(*c.sandwich_y), s, tail));
            }
            body["diagnostics"] = std::move(diag);
        }
        body["trace"] = to_json(l.space, trace);
    }
    if (c.uniqueness) {
        const auto starts = l.space.carrier(c.starts_grid);
        const auto rep = uniqueness_scan(l.space, map, starts, o, c.merge_tol);
        l.input["starts"] = starts.size();
        body["uniqueness"] = to_json(l.space, rep);
        passed = passed && rep.passed;
    }
    body["input"] = l.input;
    return {std::move(body), passed};
}

Outcome cmd_falsify(const Config& c) {
    const auto profile = parse_profile(c.profile);
    if (!profile) throw PreconditionError("unknown profile '" + c.profile + "'");
    std::optional<Perturbation> kind;
    if (c.perturbation) {
        kind = parse_perturbation(*c.perturbation);
        if (!kind) throw PreconditionError("unknown perturbation '" + *c.perturbation + "'");
    }
    ScanOptions o = scan_options(c, 40);
    const double s = profile_s(*profile);
    Json input{{"profile", c.profile},
               {"perturb", c.perturbation ? Json(*c.perturbation) : Json(nullptr)},
               {"points", c.n_points},
               {"seeds", c.seeds},
               {"first_seed", c.seed},
               {"s", json_number(s)},
               {"tol", json_number(o.tol)},
               {"rng", Rng::name}};

    struct Run {
        bool identity_failed = false;
        bool rect_failed = false;
    };
    std::vector<Run> runs(c.seeds);
    for (std::size_t i = 0; i < c.seeds; ++i) {
        const std::uint64_t seed = c.seed + i;
        FiniteSpace sp = random_space(c.n_points, seed, *profile);
        if (kind) sp = perturb(sp, *kind, seed);
        const Space space(sp);
        runs[i].identity_failed = !check_identity_axiom(space, o).passed;
        runs[i].rect_failed = !check_b_rectangular(space, s, o).passed;
    }

    Json body{{"input", input}};
    if (kind) {
        Json missed = Json::array();
        std::size_t detected = 0;
        for (std::size_t i = 0; i < runs.size(); ++i) {
            const bool hit = *kind == Perturbation::break_identity ? runs[i].identity_failed : runs[i].rect_failed;
            if (hit) ++detected;
            else missed.push_back(c.seed + i);
        }
        body["detected"] = detected;
        body["missed_seeds"] = std::move(missed);
        return {std::move(body), detected == runs.size()};
    }
    Json failing = Json::array();
    for (std::size_t i = 0; i < runs.size(); ++i)
        if (runs[i].identity_failed || runs[i].rect_failed)
            failing.push_back({{"seed", c.seed + i},
                               {"identity_failed", runs[i].identity_failed},
                               {"b_rectangular_failed", runs[i].rect_failed}});
    const bool clean = failing.empty();
    body["failing_seeds"] = std::move(failing);
    return {std::move(body), clean};
}

Outcome cmd_instances_list(const Config&) {
    Json list = Json::array();
    for (const auto& name : instance_names()) {
        const auto b = build_instance(name);
        list.push_back({{"name", name}, {"description", b.description}, {"note", b.note}});
    }
    return {{{"instances", std::move(list)}}, true};
}

void write_text(const Config& c, const std::string& text, std::ostream& out) {
    if (!c.out) {
        out << text;
        return;
    }
    std::ofstream f(*c.out, std::ios::binary);
    if (!f) throw PreconditionError("cannot write '" + *c.out + "'");
    f << text;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config c;
    CLI::App app{"Verification and fixed-point toolkit for rectangular quasi b-metric spaces", "rqbm"};
    app.require_subcommand(1);

    std::vector<std::pair<CLI::App*, Handler>> handlers;
    auto command = [&](const char* name, const char* help, Handler h) {
        CLI::App* sub = app.add_subcommand(name, help);
        handlers.emplace_back(sub, std::move(h));
        return sub;
    };

    auto* verify = command("verify", "identity axiom and b-rectangular inequality", cmd_verify);
    auto* cls = command("classify", "classify a space in the generalized-metric hierarchy", cmd_classify);
    auto* mins = command("min-s", "tightest b-rectangular coefficient", cmd_min_s);
    for (auto* sub : {verify, cls}) optional_option(sub, "--s", c.s, "coefficient s");
    for (auto* sub : {verify, cls, mins}) {
        add_space_options(sub, c);
        add_scan_options(sub, c);
        add_output_options(sub, c);
    }

    auto* vt = command("validate-theta", "check a theta candidate", cmd_validate_theta);
    optional_option(vt, "--theta", c.theta, "expression in t or builtin:<name>")->required();
    vt->add_option("--seq-len", c.seq_len, "length of the vanishing sequence");
    vt->add_option("--per-decade", c.per_decade, "log-grid density");
    auto* vp = command("validate-phi", "check a phi candidate", cmd_validate_phi);
    optional_option(vp, "--phi", c.phi, "expression in t or builtin:<name>")->required();
    vp->add_option("--depth", c.depth, "iterate depth");
    vp->add_option("--points", c.points, "grid points when --grid-lo/--grid-hi are given");
    for (auto* sub : {vt, vp}) {
        optional_option(sub, "--grid-lo", c.grid_lo, "lowest grid point");
        optional_option(sub, "--grid-hi", c.grid_hi, "highest grid point");
        add_output_options(sub, c);
    }

    auto* con = command("contraction", "check a contraction condition", cmd_contraction);
    add_space_options(con, c);
    add_scan_options(con, c);
    add_output_options(con, c);
    con->add_option("--kind", c.kind, "theta_r, theta_phi or linear")
        ->check(CLI::IsMember({"theta_r", "theta_phi", "linear"}));
    optional_option(con, "--map", c.map, "self-map: expression in x or table:a=b,...");
    optional_option(con, "--theta", c.theta, "theta candidate");
    optional_option(con, "--phi", c.phi, "phi candidate");
    optional_option(con, "--exponent", c.exponent, "exponent r in (0, 1)");
    optional_option(con, "--k", c.k, "linear constant k in (0, 1)");
    optional_option(con, "--s", c.s, "coefficient s");
    con->add_flag("--records", c.records, "include every evaluated pair");
    con->add_flag("--best-exponent", c.best_exponent, "also report the tightest exponent");

    auto* solve = command("solve", "Picard iteration", cmd_solve);
    add_space_options(solve, c);
    add_output_options(solve, c);
    optional_option(solve, "--map", c.map, "self-map");
    optional_option(solve, "--start", c.start, "starting point: label or number");
    optional_option(solve, "--tol", c.tol, "stopping tolerance");
    solve->add_option("--max-iter", c.max_iter, "iteration cap");
    solve->add_flag("--diagnostics", c.diagnostics, "Cauchy and sandwich diagnostics");
    solve->add_flag("--uniqueness-starts", c.uniqueness, "run from every carrier point");
    solve->add_option("--starts-grid", c.starts_grid, "start grid size for analytic spaces");
    optional_option(solve, "--merge-tol", c.merge_tol, "limit merge tolerance");
    optional_option(solve, "--sandwich-y", c.sandwich_y, "comparison point for the sandwich check");
    solve->add_option("--tail", c.tail, "tail length for the sandwich check");
    optional_option(solve, "--s", c.s, "coefficient s for the sandwich check");

    auto* fals = command("falsify", "generate-and-check loop over seeds", cmd_falsify);
    fals->add_option("--profile", c.profile, "metric, quasi or adversarial");
    optional_option(fals, "--perturb", c.perturbation, "break_identity or break_quadrilateral");
    fals->add_option("--points", c.n_points, "points per space");
    fals->add_option("--seeds", c.seeds, "number of seeds");
    fals->add_option("--seed", c.seed, "first seed");
    optional_option(fals, "--tol", c.tol, "absolute tolerance");
    add_output_options(fals, c);

    CLI::App* inst = app.add_subcommand("instances", "built-in instances");
    inst->require_subcommand(1);
    CLI::App* list = inst->add_subcommand("list", "list built-in instances");
    add_output_options(list, c);
    handlers.emplace_back(list, cmd_instances_list);
    CLI::App* exp = inst->add_subcommand("export", "write an instance's space file");
    optional_option(exp, "--name", c.name, "instance name")->required();
    optional_option(exp, "--b-grid", c.b_grid, "grid size on B for mixed instances");
    optional_option(exp, "--out", c.out, "output file");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (exp->parsed()) {
            const auto b = build_instance(*c.name, c.b_grid);
            write_text(c, space_to_json(b.space).dump(2) + "\n", out);
            return kExitPass;
        }
        for (auto& [sub, handler] : handlers) {
            if (!sub->parsed()) continue;
            c.command = sub->get_name();
            Outcome o = handler(c);
            Json report{{"schema", kReportSchema}, {"command", c.command}};
            for (auto it = o.body.begin(); it != o.body.end(); ++it) report[it.key()] = it.value();
            report["passed"] = o.passed;
            write_text(c, c.format == "json" ? report.dump(2) + "\n" : render_text(report), out);
            return o.passed ? kExitPass : kExitFail;
        }
        err << "error: no command\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace rqbm::cli
