#include "dpp/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dpp/io.hpp"
#include "dpp/presets.hpp"

namespace dpp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw InvalidConfig("config field '" + path + "': " + why);
}

double num(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

Vec vec2(const json& j, const std::string& path, int dim) {
    if (!j.is_array() || j.empty() || j.size() > 2) fail(path, "expected [x] or [x, y]");
    Vec v{0.0, 0.0};
    for (std::size_t i = 0; i < j.size(); ++i) v[i] = num(j[i], path);
    if (dim == 1 && j.size() > 1 && v[1] != 0.0) fail(path, "second component in 1D");
    return v;
}

DomainShape parse_domain(const json& j, int dim) {
    const std::string shape = j.value("shape", dim == 1 ? "interval" : "disk");
    if (shape == "interval") {
        if (dim != 1) fail("region.domain", "interval requires dimension 1");
        return DomainShape::interval(num(j.at("a"), "region.domain.a"),
                                     num(j.at("b"), "region.domain.b"));
    }
    if (shape == "rectangle") {
        if (dim != 2) fail("region.domain", "rectangle requires dimension 2");
        return DomainShape::rectangle(vec2(j.at("lo"), "region.domain.lo", dim),
                                      vec2(j.at("hi"), "region.domain.hi", dim));
    }
    if (shape == "disk") {
        if (dim != 2) fail("region.domain", "disk requires dimension 2");
        return DomainShape::disk(vec2(j.at("center"), "region.domain.center", dim),
                                 num(j.at("radius"), "region.domain.radius"));
    }
    fail("region.domain.shape", "unknown shape '" + shape + "'");
}

BoundaryData parse_boundary(const json& j, std::string& name) {
    if (j.contains("tabulated")) {
        name = "tabulated";
        const json& t = j.at("tabulated");
        if (!t.is_array() || t.empty()) fail("boundary.tabulated", "expected a sample list");
        std::vector<std::pair<Vec, double>> samples;
        for (const auto& row : t) {
            if (!row.is_array() || row.size() < 2) fail("boundary.tabulated", "bad sample row");
            Vec p{num(row[0], "boundary.tabulated"), 0.0};
            double v;
            if (row.size() == 2) {
                v = num(row[1], "boundary.tabulated");
            } else {
                p[1] = num(row[1], "boundary.tabulated");
                v = num(row[2], "boundary.tabulated");
            }
            samples.push_back({p, v});
        }
        return {[samples](Vec p) {
            double best = samples[0].second;
            double bd = norm(p - samples[0].first);
            for (const auto& s : samples) {
                const double d = norm(p - s.first);
                if (d < bd) {
                    bd = d;
                    best = s.second;
                }
            }
            return best;
        }};
    }
    name = j.value("preset", "step1d");
    if (name == "step1d") return presets::step_1d();
    if (name == "constant") return presets::constant_data(num(j.at("value"), "boundary.value"));
    if (name == "affine")
        return presets::affine_data(j.value("a0", 0.0), vec2(j.at("a"), "boundary.a", 2));
    if (name == "smooth2d") return presets::smooth_2d();
    if (name == "square_norm") return presets::square_norm();
    fail("boundary.preset", "unknown preset '" + name + "'");
}

RunningCost parse_cost(const json& j, std::string& name) {
    name = j.value("preset", "zero");
    if (name == "zero") return presets::zero_cost();
    if (name == "constant")
        return presets::constant_cost(num(j.at("value"), "running_cost.value"));
    if (name == "linear") return presets::linear_cost(vec2(j.at("a"), "running_cost.a", 2));
    fail("running_cost.preset", "unknown preset '" + name + "'");
}

OperatorVariant parse_variant(const std::string& s) {
    if (s == "pucci_max") return OperatorVariant::PucciMax;
    if (s == "pucci_min") return OperatorVariant::PucciMin;
    if (s == "fixed_direction") return OperatorVariant::FixedDirection;
    if (s == "sup_over_set") return OperatorVariant::SupOverSet;
    if (s == "isaacs") return OperatorVariant::Isaacs;
    if (s == "tug_of_war_noise") return OperatorVariant::TugOfWarNoise;
    fail("operator.variant", "unknown variant '" + s + "'");
}

DirectionSet parse_vector_list(const json& j, const std::string& path, int dim) {
    DirectionSet set;
    if (!j.is_array()) fail(path, "expected a list of vectors");
    for (const auto& v : j) set.vectors.push_back(vec2(v, path, dim));
    return set;
}

OperatorSpec parse_operator(const json& j, int dim, double epsilon) {
    EllipticityParams params;
    params.alpha = j.value("alpha", 0.5);
    params.beta = j.value("beta", 1.0 - params.alpha);
    params.lambda = j.value("lambda", 1.0);
    params.epsilon = epsilon;
    OperatorSpec spec =
        OperatorSpec::make(parse_variant(j.value("variant", "pucci_max")), dim, params);
    if (j.contains("angles") || j.contains("radii")) {
        std::vector<double> radii = j.value("radii", std::vector<double>{0.5, 1.0});
        spec.directions = DirectionSet::ball_discretization(dim, params.lambda,
                                                            j.value("angles", 16), radii);
    }
    if (j.contains("fixed_direction"))
        spec.fixed_direction = vec2(j.at("fixed_direction"), "operator.fixed_direction", dim);
    if (j.contains("subset"))
        spec.subset = parse_vector_list(j.at("subset"), "operator.subset", dim);
    if (j.contains("family")) {
        spec.family.clear();
        for (const auto& member : j.at("family"))
            spec.family.push_back(parse_vector_list(member, "operator.family", dim));
    }
    if (j.contains("order")) {
        const std::string o = j.at("order").get<std::string>();
        if (o == "sup_inf")
            spec.order = IsaacsOrder::SupInf;
        else if (o == "inf_sup")
            spec.order = IsaacsOrder::InfSup;
        else
            fail("operator.order", "expected 'sup_inf' or 'inf_sup'");
    }
    return spec;
}

CheckRequest parse_check(const json& j, int dim, std::size_t pos) {
    const std::string path = "checks[" + std::to_string(pos) + "]";
    CheckRequest c;
    if (!j.contains("type")) fail(path + ".type", "missing");
    c.type = j.at("type").get<std::string>();
    c.p = j.value("p", 1.0);
    c.q = j.value("q", 1.0);
    c.gamma = j.value("gamma", 0.5);
    if (j.contains("center")) c.center = vec2(j.at("center"), path + ".center", dim);
    c.radius = j.value("radius", 0.25);
    c.offset = j.value("offset", 0.0);
    if (j.contains("direction")) c.direction = vec2(j.at("direction"), path + ".direction", dim);
    c.scale_R = j.value("R", 1.0);
    c.slack_c2 = j.value("c2", 0.0);
    if (j.contains("x")) c.x = vec2(j.at("x"), path + ".x", dim);
    if (j.contains("e")) c.e = vec2(j.at("e"), path + ".e", dim);
    c.r0 = j.value("r0", 0.25);
    c.levels = j.value("levels", 5);
    c.exponent = j.value("exponent", 1.5);
    const bool known = c.type == "asym_seminorm" || c.type == "second_diff_seminorm" ||
                       c.type == "sandwich" || c.type == "dyadic_profile" ||
                       c.type == "taylor_remainder";
    if (!known) fail(path + ".type", "unknown check '" + c.type + "'");
    return c;
}

} // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidConfig("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string raw = buf.str();

    json j;
    try {
        j = json::parse(raw);
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("config is not valid JSON: ") + e.what());
    }

    ExperimentConfig cfg;
    cfg.config_hash = hash_hex(fnv1a_hash(raw));
    try {
        cfg.seed = j.value("seed", std::uint64_t{12345});

        const json& reg = j.contains("region") ? j.at("region") : json::object();
        cfg.dimension = reg.value("dimension", 1);
        if (cfg.dimension != 1 && cfg.dimension != 2)
            fail("region.dimension", "must be 1 or 2");
        double epsilon = reg.value("epsilon", 0.2);
        cfg.spacing = reg.value("spacing", epsilon / 8.0);
        cfg.domain = reg.contains("domain")
                         ? parse_domain(reg.at("domain"), cfg.dimension)
                         : (cfg.dimension == 1 ? DomainShape::interval(0.0, 1.0)
                                               : DomainShape::disk({0.0, 0.0}, 1.0));

        cfg.op = parse_operator(j.contains("operator") ? j.at("operator") : json::object(),
                                cfg.dimension, epsilon);

        std::string bname = "step1d", cname = "zero";
        cfg.boundary = j.contains("boundary")
                           ? parse_boundary(j.at("boundary"), bname)
                           : (cfg.dimension == 1 ? presets::step_1d() : presets::smooth_2d());
        if (!j.contains("boundary") && cfg.dimension == 2) bname = "smooth2d";
        cfg.boundary_name = bname;
        cfg.cost = j.contains("running_cost") ? parse_cost(j.at("running_cost"), cname)
                                              : presets::zero_cost();
        cfg.cost_name = cname;

        if (j.contains("solver")) {
            const json& s = j.at("solver");
            cfg.solver.tol = s.value("tol", 1e-10);
            cfg.solver.residual_tol = s.value("residual_tol", -1.0);
            cfg.solver.max_iter = s.value("max_iter", long{200000});
            cfg.solver.damping = s.value("damping", 1.0);
            const std::string m = s.value("method", "auto");
            if (m == "auto")
                cfg.solver.method = SolveMethod::Auto;
            else if (m == "value_iteration")
                cfg.solver.method = SolveMethod::ValueIteration;
            else if (m == "policy_iteration")
                cfg.solver.method = SolveMethod::PolicyIteration;
            else
                fail("solver.method", "unknown method '" + m + "'");
        }

        if (j.contains("checks")) {
            const json& cs = j.at("checks");
            if (!cs.is_array()) fail("checks", "expected a list");
            for (std::size_t i = 0; i < cs.size(); ++i)
                cfg.checks.push_back(parse_check(cs[i], cfg.dimension, i));
        }

        if (j.contains("jumps")) {
            const json& jj = j.at("jumps");
            if (jj.contains("allowance")) {
                cfg.jumps_calibrate = false;
                cfg.jumps_allowance = num(jj.at("allowance"), "jumps.allowance");
            }
        }

        if (j.contains("figure"))
            cfg.figure_epsilon = j.at("figure").value("epsilon", 0.2);

        if (j.contains("sweep")) {
            const json& sw = j.at("sweep");
            if (!sw.contains("epsilons")) fail("sweep.epsilons", "missing");
            for (const auto& e : sw.at("epsilons"))
                cfg.sweep_epsilons.push_back(num(e, "sweep.epsilons"));
            cfg.sweep_family = sw.value("family", "pucci2d");
            if (cfg.sweep_family != "pucci2d" && cfg.sweep_family != "noise1d")
                fail("sweep.family", "unknown family '" + cfg.sweep_family + "'");
            cfg.sweep_divisor = sw.value("divisor", cfg.sweep_family == "noise1d" ? 64L : 4L);
            cfg.sweep_checks.seed = cfg.seed;
            if (sw.contains("checks")) {
                const json& sc = sw.at("checks");
                cfg.sweep_checks.run_asym = sc.value("asym", true);
                cfg.sweep_checks.p = sc.value("p", 1.0);
                cfg.sweep_checks.q = sc.value("q", 1.0);
                cfg.sweep_checks.run_second_diff = sc.value("second_diff", true);
                cfg.sweep_checks.second_diff_gamma = sc.value("second_diff_gamma", 0.5);
                cfg.sweep_checks.run_sandwich = sc.value("sandwich", true);
                cfg.sweep_checks.sandwich_gamma = sc.value("sandwich_gamma", 1.0);
                cfg.sweep_checks.run_taylor = sc.value("taylor", true);
                cfg.sweep_checks.taylor_gamma = sc.value("taylor_gamma", 0.5);
                cfg.sweep_checks.seminorm_radius = sc.value("seminorm_radius", 0.25);
                cfg.sweep_checks.slack_c2 = sc.value("c2", 0.0);
            }
        }

        cfg.out_dir = j.value("output", json::object()).value("dir", "out");
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("config parse error: ") + e.what());
    }
    return cfg;
}

} // namespace dpp
