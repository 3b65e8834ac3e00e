#include "dpp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "dpp/parallel.hpp"

namespace dpp {

namespace {

std::vector<double> boundary_values(const LatticeRegion& reg, const BoundaryData& g) {
    if (!g.fn) throw InvalidConfig("solve_dpp: boundary data has no evaluator");
    std::vector<double> vals(reg.node_count(), 0.0);
    for (std::size_t id = 0; id < reg.node_count(); ++id)
        if (reg.node_tag(id) == NodeTag::Exterior) {
            vals[id] = g.fn(reg.coord(id));
            if (!std::isfinite(vals[id]))
                throw NonFiniteValue("solve_dpp: boundary data is not finite");
        }
    return vals;
}

std::vector<double> cost_values(const LatticeRegion& reg, const RunningCost& f) {
    std::vector<double> vals(reg.node_count(), 0.0);
    if (!f.fn) return vals;
    for (std::size_t id : reg.interior_ids()) {
        vals[id] = f.fn(reg.coord(id));
        if (!std::isfinite(vals[id]))
            throw NonFiniteValue("solve_dpp: running cost is not finite");
    }
    return vals;
}

bool policy_iteration_supported(OperatorVariant v) {
    return v == OperatorVariant::PucciMax || v == OperatorVariant::PucciMin ||
           v == OperatorVariant::FixedDirection || v == OperatorVariant::SupOverSet;
}

/// Greedy policy: per interior node, the index of the extremizing direction.
std::vector<std::int32_t> greedy_policy(const OperatorKernel& kernel, const ScalarField& u) {
    const auto& pats = kernel.primary_patterns();
    const bool maximize = kernel.spec().variant != OperatorVariant::PucciMin;
    const auto& ids = u.region().interior_ids();
    std::vector<std::int32_t> policy(ids.size(), 0);
    parallel_for(ids.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const std::size_t id = ids[i];
            double best = maximize ? -std::numeric_limits<double>::infinity()
                                   : std::numeric_limits<double>::infinity();
            std::int32_t arg = 0;
            for (std::size_t d = 0; d < pats.size(); ++d) {
                const double s = u.read_pattern(id, pats[d].plus) +
                                 u.read_pattern(id, pats[d].minus);
                if (maximize ? s > best : s < best) {
                    best = s;
                    arg = static_cast<std::int32_t>(d);
                }
            }
            policy[i] = arg;
        }
    });
    return policy;
}

/// Solve the linear fixed-policy problem u = T_pi(u): preconditioned
/// BiCGSTAB warm-started from the previous iterate, with a sparse LU
/// fallback when the Krylov solve stalls.
std::vector<double> solve_fixed_policy(const OperatorKernel& kernel, const LatticeRegion& reg,
                                       const std::vector<std::int32_t>& policy,
                                       const std::vector<double>& g_vals,
                                       const std::vector<double>& f_vals,
                                       const std::vector<double>& guess) {
    const auto& ids = reg.interior_ids();
    const double alpha = kernel.spec().params.alpha;
    const double beta = kernel.spec().params.beta;
    const double eps = kernel.spec().params.epsilon;
    const auto& pats = kernel.primary_patterns();
    const auto& stencil = kernel.stencil();

    std::vector<std::int64_t> row_of(reg.node_count(), -1);
    for (std::size_t i = 0; i < ids.size(); ++i) row_of[ids[i]] = static_cast<std::int64_t>(i);

    using Triplet = Eigen::Triplet<double>;
    std::vector<Triplet> trip;
    trip.reserve(ids.size() * (stencil.size() + 9));
    Eigen::VectorXd rhs(ids.size());

    for (std::size_t i = 0; i < ids.size(); ++i) {
        const std::size_t id = ids[i];
        const Index base = reg.node_index(id);
        double b = -eps * eps * f_vals[id];
        trip.emplace_back(int(i), int(i), 1.0);

        auto add_entry = [&](Index offset, double coeff) {
            const Index t = base + offset;
            const auto tid = reg.id_at(t);
            if (!tid) throw OutOfHull("solve_dpp: stencil read outside the region");
            if (row_of[*tid] >= 0)
                trip.emplace_back(int(i), int(row_of[*tid]), -coeff);
            else
                b += coeff * g_vals[*tid];
        };

        if (alpha != 0.0) {
            const auto& dp = pats[static_cast<std::size_t>(policy[i])];
            for (const auto& e : dp.plus.entries) add_entry(e.offset, 0.5 * alpha * e.weight);
            for (const auto& e : dp.minus.entries) add_entry(e.offset, 0.5 * alpha * e.weight);
        }
        if (beta != 0.0)
            for (std::size_t k = 0; k < stencil.size(); ++k)
                add_entry(stencil.index_offsets[k], beta * stencil.weights[k]);
        rhs[static_cast<Eigen::Index>(i)] = b;
    }

    Eigen::SparseMatrix<double> M(static_cast<int>(ids.size()), static_cast<int>(ids.size()));
    M.setFromTriplets(trip.begin(), trip.end());
    M.makeCompressed();

    Eigen::VectorXd x;
    bool solved = false;
    {
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>> krylov; // Jacobi-preconditioned
        krylov.setTolerance(1e-13);
        krylov.setMaxIterations(4000);
        krylov.compute(M);
        if (krylov.info() == Eigen::Success) {
            Eigen::VectorXd x0(ids.size());
            for (std::size_t i = 0; i < ids.size(); ++i)
                x0[static_cast<Eigen::Index>(i)] = guess[ids[i]];
            x = krylov.solveWithGuess(rhs, x0);
            solved = (M * x - rhs).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + rhs.cwiseAbs().maxCoeff());
        }
    }
    if (!solved) {
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.analyzePattern(M);
        lu.factorize(M);
        if (lu.info() != Eigen::Success)
            throw Error("solve_dpp: sparse factorization failed");
        x = lu.solve(rhs);
    }

    std::vector<double> out(g_vals);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const double v = x[static_cast<Eigen::Index>(i)];
        if (!std::isfinite(v)) throw NonFiniteValue("solve_dpp: non-finite linear solution");
        out[ids[i]] = v;
    }
    return out;
}

double sup_diff(const LatticeRegion& reg, const std::vector<double>& a,
                const std::vector<double>& b) {
    const auto& ids = reg.interior_ids();
    return parallel_max(ids.size(),
                        [&](std::size_t i) { return std::abs(a[ids[i]] - b[ids[i]]); });
}

} // namespace

ScalarField apply_dpp_map(const OperatorKernel& kernel, const ScalarField& field,
                          const ScalarField* f) {
    const LatticeRegion& reg = field.region();
    const double eps = kernel.spec().params.epsilon;
    const double alpha = kernel.spec().params.alpha;
    const double beta = kernel.spec().params.beta;
    std::vector<double> out(field.values());
    const auto& ids = reg.interior_ids();
    parallel_for(ids.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const std::size_t id = ids[i];
            double t = beta * kernel.midpoint_average(field, id);
            if (alpha != 0.0) t += alpha * kernel.midpoint_extremum(field, id);
            if (f) t -= eps * eps * f->value(id);
            out[id] = t;
        }
    });
    return ScalarField(field.region_ptr(), std::move(out));
}

SolveReport solve_dpp(const OperatorSpec& spec, RegionPtr region, const BoundaryData& g,
                      const RunningCost& f, const SolveOptions& options) {
    const LatticeRegion& reg = *region;
    spec.validate(reg.dimension());
    if (!(options.damping > 0.0 && options.damping <= 1.0))
        throw InvalidConfig("solve_dpp: damping must lie in (0, 1]");
    const double eps = spec.params.epsilon;
    const double residual_tol = options.effective_residual_tol(eps);

    OperatorKernel kernel(spec, reg);
    const std::vector<double> g_vals = boundary_values(reg, g);
    const std::vector<double> f_vals = cost_values(reg, f);
    auto f_field = std::make_shared<ScalarField>(region, f_vals);

    // Initial guess: mean of g on the strip, inside the comparison bracket.
    double mean = 0.0;
    std::size_t n_ext = 0;
    for (std::size_t id = 0; id < reg.node_count(); ++id)
        if (reg.node_tag(id) == NodeTag::Exterior) {
            mean += g_vals[id];
            ++n_ext;
        }
    if (n_ext > 0) mean /= double(n_ext);

    std::vector<double> current(g_vals);
    for (std::size_t id : reg.interior_ids()) current[id] = mean;

    SolveMethod method = options.method;
    if (method == SolveMethod::Auto)
        method = policy_iteration_supported(spec.variant) ? SolveMethod::PolicyIteration
                                                          : SolveMethod::ValueIteration;
    if (method == SolveMethod::PolicyIteration && !policy_iteration_supported(spec.variant))
        throw InvalidConfig("solve_dpp: policy iteration does not support variant " +
                            variant_name(spec.variant));

    SolveReport report;
    report.method = method == SolveMethod::PolicyIteration ? "policy_iteration"
                                                           : "value_iteration";
    long iterations = 0;

    if (method == SolveMethod::PolicyIteration) {
        constexpr long kMaxOuter = 60;
        std::vector<std::int32_t> last_policy;
        const double ptol = std::max(options.tol * 0.01, 1e-14);
        while (iterations < kMaxOuter) {
            ScalarField u_field(region, current);
            std::vector<std::int32_t> policy = greedy_policy(kernel, u_field);
            if (!last_policy.empty() && policy == last_policy) break;
            std::vector<double> next =
                solve_fixed_policy(kernel, reg, policy, g_vals, f_vals, current);
            const double d = sup_diff(reg, next, current);
            current = std::move(next);
            last_policy = std::move(policy);
            ++iterations;
            if (d <= ptol) break;
        }
    }

    {
        // One map application measures the fixed-point defect sup|T(u) - u|.
        // If it is already within tolerance (constant data, or a finished
        // policy iteration) no sweep runs; otherwise Jacobi sweeps continue
        // until the damped step sup|u_{k+1} - u_k| falls below tol.
        ScalarField u_field(region, current);
        ScalarField mapped = apply_dpp_map(kernel, u_field, f_field.get());
        double d = sup_diff(reg, mapped.values(), current);
        report.final_sup_diff = d;
        const double w = options.damping;
        while (d > options.tol && iterations < options.max_iter) {
            std::vector<double> next(current.size());
            for (std::size_t id = 0; id < next.size(); ++id)
                next[id] = (1.0 - w) * current[id] + w * mapped.value(id);
            for (double v : next)
                if (!std::isfinite(v)) throw NonFiniteValue("solve_dpp: iterate overflowed");
            const double step = sup_diff(reg, next, current);
            current = std::move(next);
            ++iterations;
            report.final_sup_diff = step;
            if (step <= options.tol) break;
            u_field = ScalarField(region, current);
            mapped = apply_dpp_map(kernel, u_field, f_field.get());
            d = sup_diff(reg, mapped.values(), current);
            if (d <= options.tol) {
                report.final_sup_diff = d;
                break;
            }
        }
    }

    report.iterations = iterations;
    report.solution = std::make_shared<ScalarField>(region, current);
    const ScalarField res = residual_field(spec, *report.solution, f_field.get());
    const auto& ids = reg.interior_ids();
    report.residual_sup =
        parallel_max(ids.size(), [&](std::size_t i) { return std::abs(res.value(ids[i])); });
    report.converged =
        report.final_sup_diff <= options.tol && report.residual_sup <= residual_tol;
    return report;
}

CosetVariant coset_variant_from_string(const std::string& name) {
    if (name == "pure_two_point" || name == "pure-two-point") return CosetVariant::PureTwoPoint;
    if (name == "with_noise" || name == "eq52") return CosetVariant::TwoPointWithNoise;
    throw UnsupportedVariant("solve_coset_1d: unsupported variant '" + name + "'");
}

double CosetSolution1D::value(double x) const {
    if (!(x > 0.0 && x < 1.0)) return g_(x);
    if (field_) return field_->read({x, 0.0});
    // Locate the coset r in (0, eps] and the chain index of x.
    const double eps = epsilon_;
    long k = static_cast<long>(std::floor(x / eps));
    double r = x - double(k) * eps;
    if (r < 1e-12 * eps) {
        r = eps;
        k -= 1;
    }
    // Chain size: points r + j*eps inside (0,1).
    const long K = static_cast<long>(std::ceil((1.0 - r) / eps - 1e-9));
    const double g_left = g_(r - eps);
    const double g_right = g_(r + double(K) * eps);
    return g_left + double(k + 1) * (g_right - g_left) / double(K + 1);
}

double CosetSolution1D::jump_across(double x) const {
    const double d = 1e-7 * epsilon_;
    return std::abs(value(x + d) - value(x - d));
}

CosetSolution1D solve_coset_1d(CosetVariant variant, double epsilon, const BoundaryData& g,
                               double alpha, double beta) {
    if (!g.fn) throw InvalidConfig("solve_coset_1d: boundary data has no evaluator");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw InvalidConfig("solve_coset_1d: epsilon must lie in (0, 1)");
    CosetSolution1D sol;
    sol.epsilon_ = epsilon;
    sol.g_ = [fn = g.fn](double x) { return fn({x, 0.0}); };

    if (variant == CosetVariant::PureTwoPoint) {
        sol.approximate_ = false;
        return sol;
    }

    EllipticityParams params{alpha, beta, 1.0, epsilon};
    params.validate();
    OperatorSpec spec = OperatorSpec::make(OperatorVariant::FixedDirection, 1, params);
    auto region = std::make_shared<const LatticeRegion>(
        build_region(1, DomainShape::interval(0.0, 1.0), epsilon / 64.0, params));
    SolveOptions opts;
    SolveReport rep = solve_dpp(spec, region, g, {}, opts);
    sol.approximate_ = true;
    sol.field_ = rep.solution;
    return sol;
}

} // namespace dpp
