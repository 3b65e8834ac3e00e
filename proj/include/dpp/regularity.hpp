#pragma once

/// Asymptotic regularity instrumentation: difference quotients, seminorm
/// estimators of the form sup |u(x)-u(z)| / (|x-z|^p + eps^q), extremal
/// sandwich checks on quotients, dyadic profiles, discrete gradients, Taylor
/// remainders, and epsilon-sweep convergence studies.
///
/// No regularity constant is assumed anywhere: every check reports measured
/// constants, and all exponents are caller-configured.

#include <cstdint>
#include <functional>
#include <vector>

#include "dpp/lattice.hpp"
#include "dpp/operators.hpp"
#include "dpp/solver.hpp"

namespace dpp {

/// Directional difference quotient u_h^gamma(x) =
/// R^gamma (u(x + e h) - u(x)) / (|h|^gamma + eps^gamma).
struct QuotientSpec {
    Vec e{1.0, 0.0}; // unit direction
    double h = 0.0;  // signed offset, |h| > 0
    double gamma = 1.0;
    double R = 1.0; // scale

    void validate() const;
};

struct SamplingOptions {
    std::size_t exhaustive_limit = 4'000'000; // max pairs enumerated exactly
    std::uint64_t seed = 12345;               // used when sampling randomly
};

struct SeminormReport {
    Vec region_center{0.0, 0.0};
    double region_radius = 0.0;
    double p = 0.0; // distance exponent
    double q = 0.0; // epsilon exponent
    double constant = 0.0;
    Vec witness_x{0.0, 0.0};
    Vec witness_z{0.0, 0.0};
    std::size_t pairs_evaluated = 0;
    bool exhaustive = true;
    std::uint64_t seed = 0; // meaningful only when !exhaustive
};

/// Forward differences (u(x + eps e_i) - u(x)) / eps per axis, defined
/// exactly on nodes whose forward reads resolve.
struct GradientField {
    RegionPtr region;
    std::vector<Vec> values;
    std::vector<char> defined; // per node
};

struct SandwichReport {
    double max_violation = 0.0;
    std::size_t nodes_checked = 0;
    std::size_t violations = 0; // nodes exceeding the slack
    double band = 0.0;  // R * Lip(f), the widened bound for nonzero f
    double slack = 0.0; // documented error budget for this run
    bool pass = false;
};

/// The quotient as a ScalarField on a shrunk region: interior status is kept
/// only where every operator read still resolves, so the result feeds
/// directly back into the operators module.
ScalarField difference_quotient(const ScalarField& field, const QuotientSpec& spec,
                                const EllipticityParams& params);

/// Maximize |u(x)-u(z)| / (|x-z|^p + eps^q) over node pairs in the sub-ball.
/// Exhaustive up to the sampling limit, then seeded uniform sampling.
SeminormReport asym_seminorm(const ScalarField& field, Vec center, double radius, double p,
                             double q, const EllipticityParams& params,
                             const SamplingOptions& sampling = {});

/// Maximize |u(x) - 2u(m) + u(y)| / (|x-y|^{1+gamma} + eps^{1+gamma}) over
/// pairs whose midpoint m is a node.
SeminormReport second_diff_seminorm(const ScalarField& field, Vec center, double radius,
                                    double gamma, const EllipticityParams& params,
                                    const SamplingOptions& sampling = {});

/// Error budget for sandwich checks: c1 * tol / eps^2 + c2 * h, with c1 = 4
/// and c2 calibrated once on the quadratic test.
double sandwich_slack(double solver_tol, double eps, double spacing, double c2);

/// Measures c2 for sandwich_slack: the residual per unit spacing left by the
/// full quotient/extremal pipeline on a quadratic field, whose quotient is
/// affine and should be annihilated exactly.
double calibrate_sandwich_c2(int dimension);

/// Extremal sandwich on the difference quotient: for a field solving
/// L_eps u = f, checks L+ q >= -R Lip(f) and L- q <= R Lip(f) node-wise,
/// against the documented slack.
SandwichReport sandwich_check(const ScalarField& field, const QuotientSpec& spec,
                              const DirectionSet& operator_directions, double lip_f,
                              const EllipticityParams& params, double slack);

/// |w(r) - 2w(r/2)| / ((r/2)^{s} + eps^{s}) for r = r0, r0/2, ... with
/// w(r) = u(x + e r) - u(x) and s = sigma_plus_tau; the telescoped quantity
/// of the dyadic iteration, recorded as a diagnostic profile.
std::vector<double> dyadic_profile(const ScalarField& field, Vec x, Vec e, double r0,
                                   int levels, double sigma_plus_tau,
                                   const EllipticityParams& params);

GradientField discrete_gradient(const ScalarField& field, const EllipticityParams& params);

/// Maximize |u(y) - u(x) - grad(x).(y-x)| / (|x-y|^{1+gamma} + eps) over
/// ordered pairs with the gradient defined at x.
SeminormReport taylor_remainder(const ScalarField& field, const GradientField& grad, Vec center,
                                double radius, double gamma, const EllipticityParams& params,
                                const SamplingOptions& sampling = {});

/// One solvable instance of a problem family at a given epsilon.
struct SweepProblem {
    OperatorSpec spec;
    RegionPtr region;
    BoundaryData g;
    RunningCost f;
};
using SweepFamily = std::function<SweepProblem(double epsilon)>;

struct SweepChecks {
    bool run_asym = true;
    double p = 1.0, q = 1.0;
    bool run_second_diff = true;
    double second_diff_gamma = 0.5;
    bool run_sandwich = true;
    double sandwich_gamma = 1.0; // quotient exponent; offset h = eps along e1
    bool run_taylor = true;
    double taylor_gamma = 0.5;
    Vec eval_center{0.0, 0.0};
    double seminorm_radius = 0.25; // B_{R/4} of a unit solve region
    double slack_c2 = 0.0;
    std::uint64_t seed = 12345;
};

struct SweepRow {
    double epsilon = 0.0;
    double spacing = 0.0;
    bool solve_failed = false;
    bool converged = false;
    long iterations = 0;
    double residual_sup = 0.0;
    double asym_constant = -1.0;
    double second_diff_constant = -1.0;
    double sandwich_violation = -1.0;
    double sandwich_slack_value = -1.0;
    double taylor_constant = -1.0;
    double cauchy_u = -1.0;    // sup |u_eps - u_prev| on common nodes; -1 on first row
    double cauchy_grad = -1.0; // same for discrete gradients
};

/// Solve the family at each epsilon, run the selected checks, and record
/// sup-norm Cauchy differences between consecutive solutions and gradients
/// restricted to common nodes. A failed solve marks its row and the sweep
/// continues.
std::vector<SweepRow> sweep_study(const SweepFamily& family,
                                  const std::vector<double>& epsilons,
                                  const SweepChecks& checks,
                                  const SolveOptions& solver_options = {});

} // namespace dpp
