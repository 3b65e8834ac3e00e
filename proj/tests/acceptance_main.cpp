// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are pinned in code next to each check.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <tuple>
#include <vector>

#include "dpp/jumps.hpp"
#include "dpp/presets.hpp"
#include "dpp/regularity.hpp"
#include "dpp/runner.hpp"

using namespace dpp;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

RegionPtr make_region(int dim, const DomainShape& dom, double h,
                      const EllipticityParams& params) {
    return std::make_shared<const LatticeRegion>(build_region(dim, dom, h, params));
}

ScalarField random_field(RegionPtr reg, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> vals(reg->node_count());
    for (double& v : vals) v = 2.0 * double(rng() >> 11) / 9007199254740992.0 - 1.0;
    return ScalarField(std::move(reg), std::move(vals));
}

std::vector<OperatorSpec> five_admissible_variants(int dim, const EllipticityParams& params) {
    std::vector<OperatorSpec> specs;
    specs.push_back(OperatorSpec::make(OperatorVariant::PucciMax, dim, params));
    specs.push_back(OperatorSpec::make(OperatorVariant::PucciMin, dim, params));
    auto fixed = OperatorSpec::make(OperatorVariant::FixedDirection, dim, params);
    fixed.fixed_direction = dim == 1 ? Vec{0.5 * params.lambda, 0.0}
                                     : Vec{0.6 * params.lambda, 0.3 * params.lambda};
    specs.push_back(fixed);
    auto sup = OperatorSpec::make(OperatorVariant::SupOverSet, dim, params);
    sup.subset.vectors = {Vec{0.0, 0.0}, Vec{params.lambda, 0.0},
                          Vec{-0.5 * params.lambda, 0.0}};
    specs.push_back(sup);
    specs.push_back(OperatorSpec::make(OperatorVariant::Isaacs, dim, params));
    return specs;
}

void criterion_1_figure1() {
    const double eps = 0.2;
    const CosetSolution1D sol =
        solve_coset_1d(CosetVariant::PureTwoPoint, eps, presets::step_1d(), 1.0, 0.0);
    double worst = 0.0;
    for (int i = 0; i < 512; ++i) {
        const double x = (double(i) + 0.5) / 512.0;
        const double want = (std::floor(x / eps) + 1.0) / 6.0;
        worst = std::max(worst, std::abs(sol.value(x) - want));
    }
    double worst_jump = 0.0;
    for (int k = 1; k <= 4; ++k)
        worst_jump = std::max(worst_jump,
                              std::abs(sol.jump_across(double(k) * eps) - 1.0 / 6.0));
    report(1, "staircase closed form at eps=1/5", worst <= 1e-12 && worst_jump <= 1e-12,
           "max sample error " + fmt(worst) + ", max jump error " + fmt(worst_jump) +
               ", tol 1e-12");
}

SolveReport solve_noise_1d(double alpha, double eps, long divisor) {
    const SweepProblem prob = presets::noise_1d_family(alpha, 1.0 - alpha, divisor)(eps);
    return solve_dpp(prob.spec, prob.region, prob.g, prob.f, {});
}

void criterion_2_figure2() {
    const SolveReport rep = solve_noise_1d(0.5, 0.2, 64);
    const double mid = rep.solution->read({0.5, 0.0});
    bool monotone = true;
    double prev = -1e300;
    for (int i = 0; i < 512; ++i) {
        const double v = rep.solution->read({(double(i) + 0.5) / 512.0, 0.0});
        if (v < prev - 1e-12) monotone = false;
        prev = v;
    }
    const bool pass = rep.converged && std::abs(mid - 0.5) <= 1e-6 && monotone;
    report(2, "noise DPP at eps=1/5, alpha=beta=1/2", pass,
           std::string("converged=") + (rep.converged ? "yes" : "no") + ", |u(1/2)-1/2|=" +
               fmt(std::abs(mid - 0.5)) + " tol 1e-6, monotone=" +
               (monotone ? "yes" : "no"));
}

void criterion_3_jump_bound() {
    const double eps = 0.2;
    const double h = eps / 64.0;
    const double allowance = calibrate_jump_allowance(eps, h, presets::step_1d());
    std::size_t total_violations = 0;
    bool all_converged = true;
    for (double alpha : {0.0, 0.25, 0.5, 0.75}) {
        const SolveReport rep = solve_noise_1d(alpha, eps, 64);
        all_converged = all_converged && rep.converged;
        EllipticityParams params{alpha, 1.0 - alpha, 1.0, eps};
        const JumpProfile prof =
            verify_jump_bound(*rep.solution, presets::step_1d(), params, allowance);
        total_violations += prof.violations;
    }
    report(3, "jump proxies under 2||g|| alpha^ceil(dist/eps) for alpha in {0,1/4,1/2,3/4}",
           all_converged && total_violations == 0,
           "violations " + std::to_string(total_violations) + ", allowance " +
               fmt(allowance));
}

void criterion_4_h1() {
    EllipticityParams params{0.5, 0.5, 1.0, 0.2};
    double worst = 0.0;
    std::size_t pairs = 0;
    for (int dim : {1, 2}) {
        const DomainShape dom = dim == 1 ? DomainShape::interval(0.0, 1.0)
                                         : DomainShape::disk({0.0, 0.0}, 0.5);
        auto reg = make_region(dim, dom, dim == 1 ? 0.05 : 0.1, params);
        for (const auto& spec : five_admissible_variants(dim, params)) {
            for (std::uint64_t s = 0; s < 100; ++s) {
                const ScalarField u = random_field(reg, 1000 + s);
                const ScalarField v = random_field(reg, 5000 + s);
                worst = std::max(worst, check_h1_sandwich(spec, u, v).max_violation);
                ++pairs;
            }
        }
    }
    report(4, "uniform ellipticity sandwich on 1000 random field pairs", worst <= 1e-12,
           "max violation " + fmt(worst) + " over " + std::to_string(pairs) +
               " pairs, tol 1e-12");
}

void criterion_5_h2_and_scaling() {
    EllipticityParams params{0.5, 0.5, 1.0, 0.2};
    double worst_h2 = 0.0;
    for (int dim : {1, 2}) {
        const DomainShape dom = dim == 1 ? DomainShape::interval(0.0, 1.0)
                                         : DomainShape::disk({0.0, 0.0}, 0.5);
        auto reg = make_region(dim, dom, dim == 1 ? 0.05 : 0.1, params);
        const std::vector<Index> shifts =
            dim == 1 ? std::vector<Index>{{1, 0}, {2, 0}}
                     : std::vector<Index>{{1, 0}, {0, 1}, {1, 1}};
        for (const auto& spec : five_admissible_variants(dim, params))
            for (const Index& s : shifts)
                worst_h2 = std::max(
                    worst_h2,
                    check_h2_translation(spec, random_field(reg, 31), s).max_violation);
    }

    const OperatorSpec s1 = OperatorSpec::make(OperatorVariant::PucciMax, 1, params);
    const OperatorSpec s2 = OperatorSpec::make(OperatorVariant::PucciMax, 2, params);
    const ScalingReport sq1 = check_scaling_identity(
        s1, [](Vec p) { return dot(p, p); }, 2.0, DomainShape::interval(-1.0, 1.0), 0.025);
    const ScalingReport sc = check_scaling_identity(
        s1, [](Vec p) { return p[0] * p[0] * p[0]; }, 2.0, DomainShape::interval(-1.0, 1.0),
        0.025);
    const ScalingReport sq2 = check_scaling_identity(
        s2, [](Vec p) { return dot(p, p); }, 2.0, DomainShape::disk({0.0, 0.0}, 1.0), 0.05);

    const bool pass = worst_h2 <= 1e-12 &&
                      sq1.max_difference <= 5.0 * sq1.tolerance_budget &&
                      sc.max_difference <= 5.0 * sc.tolerance_budget &&
                      sq2.max_difference <= 5.0 * sq2.tolerance_budget;
    report(5, "translation invariance and scaling identity", pass,
           "H2 max " + fmt(worst_h2) + " tol 1e-12; scaling diffs " +
               fmt(sq1.max_difference) + "/" + fmt(sc.max_difference) + "/" +
               fmt(sq2.max_difference) + " within 5x budget " +
               fmt(5.0 * sq1.tolerance_budget));
}

void criterion_6_calibration() {
    EllipticityParams params{0.5, 0.5, 1.0, 0.2};
    const double h = params.epsilon / 8.0;
    auto r1 = make_region(1, DomainShape::interval(0.0, 1.0), h, params);
    const ScalarField u1 = ScalarField::from_function(r1, [](Vec p) { return p[0] * p[0]; });
    const double v1 = apply_operator(OperatorSpec::make(OperatorVariant::PucciMax, 1, params),
                                     u1, {0.5, 0.0});
    const double want1 = params.alpha + params.beta / 3.0; // n/(n+2) = 1/3

    auto r2 = make_region(2, DomainShape::disk({0.0, 0.0}, 0.5), h, params);
    const ScalarField u2 = ScalarField::from_function(r2, [](Vec p) { return dot(p, p); });
    const double v2 = apply_operator(OperatorSpec::make(OperatorVariant::PucciMax, 2, params),
                                     u2, {0.0, 0.0});
    const double want2 = params.alpha + params.beta / 2.0; // n/(n+2) = 1/2

    const bool pass = std::abs(v1 - want1) <= 0.02 * want1 &&
                      std::abs(v2 - want2) <= 0.02 * want2;
    report(6, "extremal operator calibration on |x|^2 at h=eps/8", pass,
           "1D rel err " + fmt(std::abs(v1 - want1) / want1) + ", 2D rel err " +
               fmt(std::abs(v2 - want2) / want2) + ", tol 2%");
}

struct SweepOutcome {
    std::vector<SweepRow> rows;
    double c2 = 0.0;
};

SweepOutcome run_main_sweep() {
    SweepOutcome out;
    out.c2 = calibrate_sandwich_c2(2);
    SweepChecks checks;
    checks.p = 1.0;
    checks.q = 1.0;
    checks.second_diff_gamma = 0.5;
    checks.sandwich_gamma = 1.0;
    checks.taylor_gamma = 0.5;
    checks.eval_center = {0.0, 0.0};
    checks.seminorm_radius = 0.25; // B_{R/4} of the unit-disk solve
    checks.slack_c2 = out.c2;
    checks.seed = 20240801;
    out.rows = sweep_study(presets::pucci_2d_family(0.5, 0.5, 1.0, 4),
                           {0.1, 0.05, 0.025}, checks, {});
    return out;
}

bool ratio_within(const std::vector<double>& vals, double factor) {
    double lo = 1e300, hi = -1e300;
    for (double v : vals) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi > 0.0 && lo > 0.0 && hi / lo < factor;
}

void criteria_7_to_10(const SweepOutcome& sweep) {
    const auto& rows = sweep.rows;
    bool solved = rows.size() == 3;
    for (const auto& r : rows) solved = solved && !r.solve_failed && r.converged;

    std::vector<double> asym, sd, taylor;
    for (const auto& r : rows) {
        asym.push_back(r.asym_constant);
        sd.push_back(r.second_diff_constant);
        taylor.push_back(r.taylor_constant);
    }

    const bool p7 = solved && ratio_within(asym, 2.0);
    report(7, "asymptotic Lipschitz constant bounded across eps in {1/10,1/20,1/40}", p7,
           solved ? "C*(1,1) = {" + fmt(asym[0]) + ", " + fmt(asym[1]) + ", " + fmt(asym[2]) +
                        "}, spread < 2x"
                  : "solve failed");

    const bool p8 = solved && ratio_within(sd, 2.0);
    report(8, "second-difference constant (gamma=1/2) bounded across the sweep", p8,
           solved ? "C* = {" + fmt(sd[0]) + ", " + fmt(sd[1]) + ", " + fmt(sd[2]) +
                        "}, spread < 2x"
                  : "solve failed");

    bool p9 = solved;
    double worst_gap = -1e300;
    for (const auto& r : rows) {
        worst_gap = std::max(worst_gap, r.sandwich_violation - r.sandwich_slack_value);
        p9 = p9 && r.sandwich_violation <= r.sandwich_slack_value;
    }
    // With a Lipschitz running cost the extremal bounds widen to R Lip(f).
    {
        const RunningCost f = presets::linear_cost({1.0, 0.0});
        SweepProblem prob =
            presets::pucci_2d_family(0.5, 0.5, 1.0, 4, presets::smooth_2d(), f)(0.1);
        SolveOptions opts;
        const SolveReport rep = solve_dpp(prob.spec, prob.region, prob.g, prob.f, opts);
        const QuotientSpec qs{{1.0, 0.0}, prob.spec.params.epsilon, 1.0, 1.0};
        const double slack = sandwich_slack(opts.tol, prob.spec.params.epsilon,
                                            prob.region->spacing(), sweep.c2);
        const SandwichReport sw =
            sandwich_check(*rep.solution, qs, prob.spec.extremal_directions(), f.lipschitz,
                           prob.spec.params, slack);
        p9 = p9 && rep.converged && sw.pass && sw.band == 1.0;
        worst_gap = std::max(worst_gap, sw.max_violation - sw.slack);
    }
    report(9, "quotient sandwich within slack, including the R*Lip(f) band", p9,
           "worst violation-slack gap " + fmt(worst_gap) + " (negative means margin)");

    const bool cauchy_decreasing =
        solved && rows[1].cauchy_grad >= 0.0 && rows[2].cauchy_grad >= 0.0 &&
        rows[2].cauchy_grad < rows[1].cauchy_grad;
    const bool p10 = cauchy_decreasing && ratio_within(taylor, 2.0);
    report(10, "discrete gradients Cauchy and Taylor remainder bounded", p10,
           solved ? "grad Cauchy " + fmt(rows[1].cauchy_grad) + " -> " +
                        fmt(rows[2].cauchy_grad) + " strictly decreasing; taylor C* {" +
                        fmt(taylor[0]) + ", " + fmt(taylor[1]) + ", " + fmt(taylor[2]) + "}"
                  : "solve failed");
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void criterion_11_determinism() {
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "dpp_acceptance_determinism";
    fs::remove_all(base);
    fs::create_directories(base);

    // 1D config drives solve/regularity/jumps/figure; the 2D config re-runs
    // the main sweep family at the same epsilons as criteria 7-10.
    const std::string config_1d = R"({
      "seed": 20240801,
      "region": {"dimension": 1, "epsilon": 0.2, "spacing": 0.003125,
                 "domain": {"shape": "interval", "a": 0.0, "b": 1.0}},
      "operator": {"variant": "fixed_direction", "alpha": 0.5, "beta": 0.5},
      "boundary": {"preset": "step1d"},
      "checks": [
        {"type": "asym_seminorm", "p": 1, "q": 1, "center": [0.5], "radius": 0.25},
        {"type": "sandwich", "gamma": 1.0, "R": 1.0, "c2": 1e-6}
      ],
      "figure": {"epsilon": 0.2}
    })";
    const std::string config_2d = R"({
      "seed": 20240801,
      "region": {"dimension": 2, "epsilon": 0.1,
                 "domain": {"shape": "disk", "center": [0, 0], "radius": 1.0}},
      "operator": {"variant": "pucci_max", "alpha": 0.5, "beta": 0.5, "lambda": 1.0},
      "boundary": {"preset": "smooth2d"},
      "sweep": {"family": "pucci2d", "divisor": 4, "epsilons": [0.1, 0.05, 0.025],
                "checks": {"c2": 1e-6}}
    })";

    auto write_cfg = [&](const char* name, const std::string& body) {
        const fs::path p = base / name;
        std::ofstream os(p, std::ios::binary);
        os << body;
        return p;
    };
    const ExperimentConfig cfg1 = load_config(write_cfg("c1.json", config_1d).string());
    const ExperimentConfig cfg2 = load_config(write_cfg("c2.json", config_2d).string());

    bool pass = true;
    std::string detail;
    std::ostringstream err;
    const std::vector<std::tuple<std::string, const ExperimentConfig*,
                                 std::vector<std::string>>>
        runs = {
            {"figure", &cfg1, {"fig1.csv", "fig2.csv", "fig1.svg", "fig2.svg"}},
            {"solve", &cfg1, {"solution.csv", "solve_report.csv"}},
            {"regularity", &cfg1, {"regularity.csv"}},
            {"jumps", &cfg1, {"jumps.csv"}},
            {"sweep", &cfg2, {"sweep.csv"}},
        };
    for (const auto& [cmd, cfg, files] : runs) {
        const fs::path a = base / (cmd + "_a"), b = base / (cmd + "_b");
        const int ra = run_command(cmd, *cfg, a.string(), err);
        const int rb = run_command(cmd, *cfg, b.string(), err);
        if (ra != 0 || rb != 0) {
            pass = false;
            detail = cmd + " exited " + std::to_string(ra) + "/" + std::to_string(rb);
            break;
        }
        for (const std::string& f : files) {
            const std::string ba = slurp(a / f), bb = slurp(b / f);
            if (ba.empty() || ba != bb) {
                pass = false;
                detail = cmd + "/" + f + " differs between runs";
                break;
            }
        }
        if (!pass) break;
    }
    if (pass)
        detail = "all five subcommands byte-identical, including the criterion-7 sweep";
    report(11, "deterministic outputs", pass, detail);
}

} // namespace

int main() {
    criterion_1_figure1();
    criterion_2_figure2();
    criterion_3_jump_bound();
    criterion_4_h1();
    criterion_5_h2_and_scaling();
    criterion_6_calibration();
    const SweepOutcome sweep = run_main_sweep();
    criteria_7_to_10(sweep);
    criterion_11_determinism();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
