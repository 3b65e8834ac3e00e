#include "dpp/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dpp/io.hpp"
#include "dpp/jumps.hpp"
#include "dpp/presets.hpp"

namespace dpp {

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream os(fs::path(dir) / name, std::ios::binary);
    if (!os) throw Error("cannot open output file '" + name + "' in '" + dir + "'");
    return os;
}

std::string meta_line(const ExperimentConfig& cfg, const std::string& command) {
    std::ostringstream os;
    os << "config=" << cfg.config_hash << " seed=" << cfg.seed << " command=" << command;
    return os.str();
}

std::string tag_name(NodeTag t) { return t == NodeTag::Interior ? "interior" : "exterior"; }

void write_field_csv(std::ostream& out, const ExperimentConfig& cfg, const std::string& cmd,
                     const ScalarField& u) {
    CsvWriter csv(out);
    csv.comment(meta_line(cfg, cmd));
    csv.row({"x", "y", "tag", "value"});
    const LatticeRegion& reg = u.region();
    for (std::size_t id = 0; id < reg.node_count(); ++id) {
        const Vec p = reg.coord(id);
        csv.row({format_double(p[0]), format_double(p[1]), tag_name(reg.node_tag(id)),
                 format_double(u.value(id))});
    }
}

void write_solve_report_csv(std::ostream& out, const ExperimentConfig& cfg,
                            const std::string& cmd, const SolveReport& rep) {
    CsvWriter csv(out);
    csv.comment(meta_line(cfg, cmd));
    csv.row({"iterations", "final_sup_diff", "residual_sup", "converged", "method"});
    csv.row({std::to_string(rep.iterations), format_double(rep.final_sup_diff),
             format_double(rep.residual_sup), rep.converged ? "true" : "false", rep.method});
}

SolveReport run_solve(const ExperimentConfig& cfg) {
    auto region = std::make_shared<const LatticeRegion>(
        build_region(cfg.dimension, cfg.domain, cfg.spacing, cfg.op.params));
    return solve_dpp(cfg.op, region, cfg.boundary, cfg.cost, cfg.solver);
}

int cmd_solve(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& err) {
    SolveReport rep = run_solve(cfg);
    {
        auto os = open_out(out_dir, "solution.csv");
        write_field_csv(os, cfg, "solve", *rep.solution);
    }
    {
        auto os = open_out(out_dir, "solve_report.csv");
        write_solve_report_csv(os, cfg, "solve", rep);
    }
    if (!rep.converged) {
        err << "solve did not converge: final_sup_diff=" << format_double(rep.final_sup_diff)
            << " residual_sup=" << format_double(rep.residual_sup) << "\n";
        return 1;
    }
    return 0;
}

int cmd_regularity(const ExperimentConfig& cfg, const std::string& out_dir,
                   std::ostream& err) {
    SolveReport rep = run_solve(cfg);
    if (!rep.converged) {
        err << "regularity: solve did not converge\n";
        return 1;
    }
    const ScalarField& u = *rep.solution;
    const EllipticityParams& params = cfg.op.params;

    auto os = open_out(out_dir, "regularity.csv");
    CsvWriter csv(os);
    csv.comment(meta_line(cfg, "regularity"));
    csv.row({"check", "p", "q", "gamma", "center_x", "center_y", "radius", "offset", "R",
             "constant", "max_violation", "slack", "band", "pairs", "exhaustive", "seed",
             "witness_x1", "witness_x2", "witness_z1", "witness_z2", "violations", "status"});

    int exit_code = 0;
    SamplingOptions sampling;
    sampling.seed = cfg.seed;
    std::size_t dyadic_count = 0;

    for (const CheckRequest& c : cfg.checks) {
        std::vector<std::string> row(22, "");
        row[0] = c.type;
        std::string status = "ok";
        if (c.type == "asym_seminorm" || c.type == "second_diff_seminorm" ||
            c.type == "taylor_remainder") {
            SeminormReport r;
            if (c.type == "asym_seminorm")
                r = asym_seminorm(u, c.center, c.radius, c.p, c.q, params, sampling);
            else if (c.type == "second_diff_seminorm")
                r = second_diff_seminorm(u, c.center, c.radius, c.gamma, params, sampling);
            else {
                GradientField grad = discrete_gradient(u, params);
                r = taylor_remainder(u, grad, c.center, c.radius, c.gamma, params, sampling);
            }
            row[1] = format_double(r.p);
            row[2] = format_double(r.q);
            row[3] = format_double(c.gamma);
            row[4] = format_double(c.center[0]);
            row[5] = format_double(c.center[1]);
            row[6] = format_double(c.radius);
            row[9] = format_double(r.constant);
            row[13] = std::to_string(r.pairs_evaluated);
            row[14] = r.exhaustive ? "true" : "false";
            row[15] = std::to_string(r.seed);
            row[16] = format_double(r.witness_x[0]);
            row[17] = format_double(r.witness_x[1]);
            row[18] = format_double(r.witness_z[0]);
            row[19] = format_double(r.witness_z[1]);
            row[20] = "0";
        } else if (c.type == "sandwich") {
            QuotientSpec qs{c.direction, c.offset > 0.0 ? c.offset : params.epsilon, c.gamma,
                            c.scale_R};
            const double slack =
                sandwich_slack(cfg.solver.tol, params.epsilon, cfg.spacing, c.slack_c2);
            SandwichReport r = sandwich_check(u, qs, cfg.op.extremal_directions(),
                                              cfg.cost.lipschitz, params, slack);
            row[3] = format_double(c.gamma);
            row[7] = format_double(qs.h);
            row[8] = format_double(qs.R);
            row[10] = format_double(r.max_violation);
            row[11] = format_double(r.slack);
            row[12] = format_double(r.band);
            row[13] = std::to_string(r.nodes_checked);
            row[20] = std::to_string(r.violations);
            if (!r.pass) {
                status = "violation";
                exit_code = 3;
            }
        } else if (c.type == "dyadic_profile") {
            const std::vector<double> prof =
                dyadic_profile(u, c.x, c.e, c.r0, c.levels, c.exponent, params);
            const std::string name =
                "dyadic_profile_" + std::to_string(dyadic_count++) + ".csv";
            auto dos = open_out(out_dir, name);
            CsvWriter dcsv(dos);
            dcsv.comment(meta_line(cfg, "regularity"));
            dcsv.row({"level", "r", "value"});
            double r0 = c.r0;
            for (std::size_t l = 0; l < prof.size(); ++l) {
                dcsv.row({std::to_string(l), format_double(r0), format_double(prof[l])});
                r0 *= 0.5;
            }
            row[9] = format_double(*std::max_element(prof.begin(), prof.end()));
            row[13] = std::to_string(prof.size());
            row[20] = "0";
        }
        row[21] = status;
        csv.row(row);
    }
    return exit_code;
}

int cmd_jumps(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& err) {
    if (cfg.dimension != 1) {
        err << "jumps: 1D configurations only\n";
        return 2;
    }
    SolveReport rep = run_solve(cfg);
    if (!rep.converged) {
        err << "jumps: solve did not converge\n";
        return 1;
    }
    const double allowance =
        cfg.jumps_calibrate
            ? calibrate_jump_allowance(cfg.op.params.epsilon, cfg.spacing, cfg.boundary,
                                       cfg.solver)
            : cfg.jumps_allowance;
    JumpProfile profile = verify_jump_bound(*rep.solution, cfg.boundary, cfg.op.params,
                                            allowance);

    auto os = open_out(out_dir, "jumps.csv");
    CsvWriter csv(os);
    csv.comment(meta_line(cfg, "jumps"));
    csv.comment("allowance=" + format_double(profile.allowance) +
                " g_sup=" + format_double(profile.g_sup_norm) +
                " violations=" + std::to_string(profile.violations));
    csv.row({"x", "jump_proxy", "dist_to_boundary", "predicted_bound", "margin", "violation"});
    for (const auto& e : profile.entries)
        csv.row({format_double(e.x), format_double(e.jump_proxy),
                 format_double(e.dist_to_boundary), format_double(e.predicted_bound),
                 format_double(e.margin), e.violation ? "true" : "false"});

    if (profile.violations > 0) {
        err << "jumps: " << profile.violations << " proxies exceed the predicted bound\n";
        return 3;
    }
    return 0;
}

int cmd_figure(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream&) {
    const FigureCurves curves = reproduce_figures(cfg.figure_epsilon);
    const struct {
        const char* csv;
        const char* svg;
        const std::vector<std::array<double, 2>>* pts;
        bool step;
        const char* title;
    } jobs[2] = {
        {"fig1.csv", "fig1.svg", &curves.staircase, true, "two-point DPP staircase"},
        {"fig2.csv", "fig2.svg", &curves.smoothed, false, "tug-of-war with noise value"},
    };
    for (const auto& job : jobs) {
        {
            auto os = open_out(out_dir, job.csv);
            CsvWriter csv(os);
            csv.comment(meta_line(cfg, "figure") +
                        " epsilon=" + format_double(cfg.figure_epsilon));
            csv.row({"x", "u"});
            for (const auto& p : *job.pts)
                csv.row({format_double(p[0]), format_double(p[1])});
        }
        auto os = open_out(out_dir, job.svg);
        SvgOptions opt;
        opt.step_mode = job.step;
        opt.title = job.title;
        write_svg_curve(os, *job.pts, opt);
    }
    return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& err) {
    if (cfg.sweep_epsilons.empty()) {
        err << "sweep: config has no sweep.epsilons\n";
        return 2;
    }
    SweepFamily family;
    if (cfg.sweep_family == "noise1d")
        family = presets::noise_1d_family(cfg.op.params.alpha, cfg.op.params.beta,
                                          cfg.sweep_divisor);
    else
        family = presets::pucci_2d_family(cfg.op.params.alpha, cfg.op.params.beta,
                                          cfg.op.params.lambda, cfg.sweep_divisor,
                                          cfg.boundary, cfg.cost);

    const std::vector<SweepRow> rows =
        sweep_study(family, cfg.sweep_epsilons, cfg.sweep_checks, cfg.solver);

    auto os = open_out(out_dir, "sweep.csv");
    CsvWriter csv(os);
    csv.comment(meta_line(cfg, "sweep"));
    csv.row({"epsilon", "spacing", "converged", "iterations", "residual_sup", "asym_constant",
             "second_diff_constant", "sandwich_violation", "sandwich_slack", "taylor_constant",
             "cauchy_u", "cauchy_grad", "status"});
    int exit_code = 0;
    for (const SweepRow& r : rows) {
        std::string status = "ok";
        if (r.solve_failed) {
            status = "solve_failed";
            exit_code = std::max(exit_code, 1);
        } else if (!r.converged) {
            status = "not_converged";
            exit_code = std::max(exit_code, 1);
        } else if (r.sandwich_violation > r.sandwich_slack_value &&
                   r.sandwich_slack_value >= 0.0) {
            status = "violation";
            exit_code = 3;
        }
        csv.row({format_double(r.epsilon), format_double(r.spacing),
                 r.converged ? "true" : "false", std::to_string(r.iterations),
                 format_double(r.residual_sup), format_double(r.asym_constant),
                 format_double(r.second_diff_constant), format_double(r.sandwich_violation),
                 format_double(r.sandwich_slack_value), format_double(r.taylor_constant),
                 format_double(r.cauchy_u), format_double(r.cauchy_grad), status});
    }
    if (exit_code == 1) err << "sweep: at least one solve did not converge\n";
    if (exit_code == 3) err << "sweep: sandwich violation above slack\n";
    return exit_code;
}

} // namespace

int run_command(const std::string& command, const ExperimentConfig& cfg,
                const std::string& out_dir, std::ostream& err) {
    if (command == "solve") return cmd_solve(cfg, out_dir, err);
    if (command == "regularity") return cmd_regularity(cfg, out_dir, err);
    if (command == "jumps") return cmd_jumps(cfg, out_dir, err);
    if (command == "figure") return cmd_figure(cfg, out_dir, err);
    if (command == "sweep") return cmd_sweep(cfg, out_dir, err);
    err << "unknown command '" << command << "'\n";
    return 2;
}

} // namespace dpp
