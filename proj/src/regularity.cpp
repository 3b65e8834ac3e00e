#include "dpp/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dpp/parallel.hpp"

namespace dpp {

namespace {
constexpr double kGeomTol = 1e-12;

void QuotientSpecCheck(const QuotientSpec& s) {
    if (std::abs(norm(s.e) - 1.0) > 1e-12)
        throw InvalidConfig("QuotientSpec: e must be a unit vector");
    if (!(std::abs(s.h) > 0.0)) throw InvalidConfig("QuotientSpec: offset h must be nonzero");
    if (!(s.gamma > 0.0 && s.gamma <= 1.0))
        throw InvalidConfig("QuotientSpec: gamma must lie in (0, 1]");
    if (!(s.R > 0.0)) throw InvalidConfig("QuotientSpec: scale R must be positive");
}

/// Interior nodes of `field`'s region within the closed sub-ball.
struct BallNodes {
    std::vector<std::size_t> ids;
    std::vector<Vec> coords;
};

BallNodes collect_ball(const ScalarField& field, Vec center, double radius) {
    BallNodes out;
    const LatticeRegion& reg = field.region();
    for (std::size_t id : reg.interior_ids()) {
        const Vec p = reg.coord(id);
        if (norm(p - center) <= radius + kGeomTol) {
            out.ids.push_back(id);
            out.coords.push_back(p);
        }
    }
    return out;
}

struct BestPair {
    double ratio = -std::numeric_limits<double>::infinity();
    std::size_t a = 0;
    std::size_t b = 0;
};

/// Deterministic max over pairs: exhaustive chunked scan when the pair count
/// is within the limit, seeded uniform sampling otherwise.
template <typename RatioFn>
SeminormReport maximize_pairs(const BallNodes& nodes, const RatioFn& ratio_of,
                              const SamplingOptions& sampling) {
    const std::size_t n = nodes.ids.size();
    SeminormReport rep;
    const std::size_t pair_count = n * (n - 1) / 2;
    BestPair best;
    std::size_t evaluated = 0;

    if (pair_count <= sampling.exhaustive_limit) {
        rep.exhaustive = true;
        std::vector<BestPair> partial(n);
        std::vector<std::size_t> counts(n, 0);
        parallel_for(n, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                BestPair local;
                std::size_t cnt = 0;
                for (std::size_t j = i + 1; j < n; ++j) {
                    const auto r = ratio_of(i, j);
                    if (!r.has_value()) continue;
                    ++cnt;
                    if (*r > local.ratio) local = BestPair{*r, i, j};
                }
                partial[i] = local;
                counts[i] = cnt;
            }
        });
        for (std::size_t i = 0; i < n; ++i) {
            evaluated += counts[i];
            if (partial[i].ratio > best.ratio) best = partial[i];
        }
    } else {
        rep.exhaustive = false;
        rep.seed = sampling.seed;
        std::mt19937_64 rng(sampling.seed);
        for (std::size_t k = 0; k < sampling.exhaustive_limit; ++k) {
            const std::size_t i = static_cast<std::size_t>(rng() % n);
            const std::size_t j = static_cast<std::size_t>(rng() % n);
            if (i == j) continue;
            const auto r = ratio_of(std::min(i, j), std::max(i, j));
            if (!r.has_value()) continue;
            ++evaluated;
            if (*r > best.ratio) best = BestPair{*r, std::min(i, j), std::max(i, j)};
        }
    }

    rep.pairs_evaluated = evaluated;
    if (evaluated == 0 || !(best.ratio > -std::numeric_limits<double>::infinity())) {
        rep.constant = 0.0;
        return rep;
    }
    rep.constant = std::max(best.ratio, 0.0);
    rep.witness_x = nodes.coords[best.a];
    rep.witness_z = nodes.coords[best.b];
    return rep;
}

} // namespace

void QuotientSpec::validate() const { QuotientSpecCheck(*this); }

ScalarField difference_quotient(const ScalarField& field, const QuotientSpec& spec,
                                const EllipticityParams& params) {
    spec.validate();
    params.validate();
    const LatticeRegion& reg = field.region();
    const Vec d = spec.h * spec.e;
    const ReadPattern pat = reg.displacement_pattern(d);
    const double denom = std::pow(std::abs(spec.h), spec.gamma) +
                         std::pow(params.epsilon, spec.gamma);
    const double scale = std::pow(spec.R, spec.gamma);

    std::vector<char> valid(reg.node_count(), 0);
    std::vector<double> vals(reg.node_count(), 0.0);
    for (std::size_t id = 0; id < reg.node_count(); ++id) {
        if (!reg.pattern_resolves(reg.node_index(id), pat)) continue;
        valid[id] = 1;
        vals[id] = scale * (field.read_pattern(id, pat) - field.value(id)) / denom;
    }

    const double reach = params.epsilon * std::max(1.0, params.lambda);
    auto sub = std::make_shared<const LatticeRegion>(reg.restricted(valid, reach));
    if (sub->interior_count() == 0)
        throw RegionTooSmall("difference_quotient: no interior node survives the shift");

    std::vector<double> sub_vals(sub->node_count(), 0.0);
    for (std::size_t nid = 0; nid < sub->node_count(); ++nid) {
        const auto oid = reg.id_at(sub->node_index(nid));
        sub_vals[nid] = vals[*oid];
    }
    return ScalarField(sub, std::move(sub_vals));
}

SeminormReport asym_seminorm(const ScalarField& field, Vec center, double radius, double p,
                             double q, const EllipticityParams& params,
                             const SamplingOptions& sampling) {
    params.validate();
    if (!(p > 0.0) || !(q > 0.0))
        throw InvalidConfig("asym_seminorm: exponents must be positive");
    const BallNodes nodes = collect_ball(field, center, radius);
    if (nodes.ids.size() < 2)
        throw RegionTooSmall("asym_seminorm: fewer than two nodes in the sub-region");

    const double eq = std::pow(params.epsilon, q);
    auto ratio = [&](std::size_t i, std::size_t j) -> std::optional<double> {
        const double dist = norm(nodes.coords[i] - nodes.coords[j]);
        const double num =
            std::abs(field.value(nodes.ids[i]) - field.value(nodes.ids[j]));
        return num / (std::pow(dist, p) + eq);
    };
    SeminormReport rep = maximize_pairs(nodes, ratio, sampling);
    rep.region_center = center;
    rep.region_radius = radius;
    rep.p = p;
    rep.q = q;
    return rep;
}

SeminormReport second_diff_seminorm(const ScalarField& field, Vec center, double radius,
                                    double gamma, const EllipticityParams& params,
                                    const SamplingOptions& sampling) {
    params.validate();
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw InvalidConfig("second_diff_seminorm: gamma must lie in (0, 1]");
    const BallNodes nodes = collect_ball(field, center, radius);
    if (nodes.ids.size() < 2)
        throw RegionTooSmall("second_diff_seminorm: fewer than two nodes in the sub-region");

    const LatticeRegion& reg = field.region();
    const double expo = 1.0 + gamma;
    const double eterm = std::pow(params.epsilon, expo);
    auto ratio = [&](std::size_t i, std::size_t j) -> std::optional<double> {
        const Index a = reg.node_index(nodes.ids[i]);
        const Index b = reg.node_index(nodes.ids[j]);
        if (((a[0] + b[0]) & 1) || ((a[1] + b[1]) & 1)) return std::nullopt;
        const auto mid = reg.id_at({(a[0] + b[0]) / 2, (a[1] + b[1]) / 2});
        if (!mid) return std::nullopt;
        const double num = std::abs(field.value(nodes.ids[i]) - 2.0 * field.value(*mid) +
                                    field.value(nodes.ids[j]));
        const double dist = norm(nodes.coords[i] - nodes.coords[j]);
        return num / (std::pow(dist, expo) + eterm);
    };
    SeminormReport rep = maximize_pairs(nodes, ratio, sampling);
    rep.region_center = center;
    rep.region_radius = radius;
    rep.p = expo;
    rep.q = expo;
    return rep;
}

double sandwich_slack(double solver_tol, double eps, double spacing, double c2) {
    return 4.0 * solver_tol / (eps * eps) + c2 * spacing;
}

double calibrate_sandwich_c2(int dimension) {
    EllipticityParams params{0.5, 0.5, 1.0, 0.2};
    const double h = params.epsilon / 8.0;
    const DomainShape dom = dimension == 1 ? DomainShape::interval(-1.0, 1.0)
                                           : DomainShape::disk({0.0, 0.0}, 1.0);
    auto region = std::make_shared<const LatticeRegion>(
        build_region(dimension, dom, h, params));
    const ScalarField u = ScalarField::from_function(
        region, [](Vec x) { return x[0] * x[0] + x[1] * x[1]; });

    // The quotient of a quadratic is affine, so both extremal operators
    // annihilate it; whatever is left is the pipeline's own noise.
    QuotientSpec qs{{1.0, 0.0}, params.epsilon, 1.0, 1.0};
    const ScalarField q = difference_quotient(u, qs, params);
    const DirectionSet dirs = DirectionSet::ball_discretization(dimension, params.lambda);
    OperatorSpec plus = OperatorSpec::make(OperatorVariant::PucciMax, dimension, params);
    OperatorSpec minus = OperatorSpec::make(OperatorVariant::PucciMin, dimension, params);
    plus.directions = minus.directions = dirs;
    OperatorKernel kp(plus, q.region()), km(minus, q.region());
    const auto& ids = q.region().interior_ids();
    double worst = 0.0;
    for (std::size_t id : ids)
        worst = std::max({worst, std::abs(kp.value(q, id)), std::abs(km.value(q, id))});
    return worst / h;
}

SandwichReport sandwich_check(const ScalarField& field, const QuotientSpec& spec,
                              const DirectionSet& operator_directions, double lip_f,
                              const EllipticityParams& params, double slack) {
    const ScalarField q = difference_quotient(field, spec, params);
    OperatorSpec plus;
    plus.variant = OperatorVariant::PucciMax;
    plus.params = params;
    plus.directions = operator_directions;
    OperatorSpec minus = plus;
    minus.variant = OperatorVariant::PucciMin;
    OperatorKernel kp(plus, q.region()), km(minus, q.region());

    // The extremal inequalities compare the equation at x and at x + he, so
    // the check runs only where the shifted point is still an interior node
    // of the solve region.
    const LatticeRegion& solve_reg = field.region();
    const ReadPattern shift = solve_reg.displacement_pattern(spec.h * spec.e);
    if (shift.entries.size() != 1)
        throw InvalidConfig("sandwich_check: the quotient offset must be a lattice shift");
    const Index shift_idx = shift.entries[0].offset;

    std::vector<std::size_t> ids;
    for (std::size_t id : q.region().interior_ids())
        if (solve_reg.tag_at(q.region().node_index(id) + shift_idx) == NodeTag::Interior)
            ids.push_back(id);

    SandwichReport rep;
    rep.band = spec.R * lip_f;
    rep.slack = slack;
    rep.nodes_checked = ids.size();
    std::vector<double> viol(ids.size(), 0.0);
    parallel_for(ids.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const std::size_t id = ids[i];
            const double hi = kp.value(q, id);
            const double lo = km.value(q, id);
            viol[i] = std::max({-hi - rep.band, lo - rep.band, 0.0});
        }
    });
    for (double v : viol) {
        rep.max_violation = std::max(rep.max_violation, v);
        if (v > slack) ++rep.violations;
    }
    rep.pass = rep.max_violation <= slack;
    return rep;
}

std::vector<double> dyadic_profile(const ScalarField& field, Vec x, Vec e, double r0,
                                   int levels, double sigma_plus_tau,
                                   const EllipticityParams& params) {
    params.validate();
    if (levels < 1) throw InvalidConfig("dyadic_profile: levels must be >= 1");
    if (!(r0 > 0.0)) throw InvalidConfig("dyadic_profile: r0 must be positive");
    const double st = sigma_plus_tau;
    const double eterm = std::pow(params.epsilon, st);
    const double ux = field.read(x);
    std::vector<double> profile;
    profile.reserve(static_cast<std::size_t>(levels));
    double r = r0;
    for (int j = 0; j < levels; ++j) {
        const double wr = field.read(x + r * e) - ux;
        const double wr2 = field.read(x + (0.5 * r) * e) - ux;
        profile.push_back(std::abs(wr - 2.0 * wr2) /
                          (std::pow(0.5 * r, st) + eterm));
        r *= 0.5;
    }
    return profile;
}

GradientField discrete_gradient(const ScalarField& field, const EllipticityParams& params) {
    params.validate();
    const LatticeRegion& reg = field.region();
    const int dim = reg.dimension();
    GradientField grad;
    grad.region = field.region_ptr();
    grad.values.assign(reg.node_count(), Vec{0.0, 0.0});
    grad.defined.assign(reg.node_count(), 0);

    std::array<ReadPattern, 2> pats;
    for (int a = 0; a < dim; ++a) {
        Vec step{0.0, 0.0};
        step[static_cast<std::size_t>(a)] = params.epsilon;
        pats[static_cast<std::size_t>(a)] = reg.displacement_pattern(step);
    }
    for (std::size_t id = 0; id < reg.node_count(); ++id) {
        bool ok = true;
        Vec v{0.0, 0.0};
        for (int a = 0; a < dim; ++a) {
            const auto& pat = pats[static_cast<std::size_t>(a)];
            if (!reg.pattern_resolves(reg.node_index(id), pat)) {
                ok = false;
                break;
            }
            v[static_cast<std::size_t>(a)] =
                (field.read_pattern(id, pat) - field.value(id)) / params.epsilon;
        }
        if (ok) {
            grad.values[id] = v;
            grad.defined[id] = 1;
        }
    }
    return grad;
}

SeminormReport taylor_remainder(const ScalarField& field, const GradientField& grad, Vec center,
                                double radius, double gamma, const EllipticityParams& params,
                                const SamplingOptions& sampling) {
    params.validate();
    if (&field.region() != grad.region.get())
        throw InvalidConfig("taylor_remainder: gradient lives on a different region");
    const BallNodes nodes = collect_ball(field, center, radius);
    if (nodes.ids.size() < 2)
        throw RegionTooSmall("taylor_remainder: fewer than two nodes in the sub-region");

    const double expo = 1.0 + gamma;
    auto ratio_ordered = [&](std::size_t i, std::size_t j) -> std::optional<double> {
        // i is the expansion point, j the target.
        if (!grad.defined[nodes.ids[i]]) return std::nullopt;
        const Vec dxy = nodes.coords[j] - nodes.coords[i];
        const double num = std::abs(field.value(nodes.ids[j]) - field.value(nodes.ids[i]) -
                                    dot(grad.values[nodes.ids[i]], dxy));
        return num / (std::pow(norm(dxy), expo) + params.epsilon);
    };
    // Ordered pairs: evaluate both (i,j) and (j,i) through the unordered scan.
    auto ratio = [&](std::size_t i, std::size_t j) -> std::optional<double> {
        const auto a = ratio_ordered(i, j);
        const auto b = ratio_ordered(j, i);
        if (!a && !b) return std::nullopt;
        if (!a) return b;
        if (!b) return a;
        return std::max(*a, *b);
    };
    SeminormReport rep = maximize_pairs(nodes, ratio, sampling);
    rep.region_center = center;
    rep.region_radius = radius;
    rep.p = expo;
    rep.q = 1.0;
    return rep;
}

std::vector<SweepRow> sweep_study(const SweepFamily& family,
                                  const std::vector<double>& epsilons,
                                  const SweepChecks& checks,
                                  const SolveOptions& solver_options) {
    std::vector<SweepRow> rows;
    std::shared_ptr<ScalarField> prev_solution;
    GradientField prev_grad;
    bool have_prev = false;

    for (double eps : epsilons) {
        SweepRow row;
        row.epsilon = eps;
        try {
            SweepProblem prob = family(eps);
            row.spacing = prob.region->spacing();
            SolveReport rep = solve_dpp(prob.spec, prob.region, prob.g, prob.f, solver_options);
            row.converged = rep.converged;
            row.iterations = rep.iterations;
            row.residual_sup = rep.residual_sup;
            const ScalarField& u = *rep.solution;
            const EllipticityParams& params = prob.spec.params;
            SamplingOptions sampling;
            sampling.seed = checks.seed;

            if (checks.run_asym)
                row.asym_constant = asym_seminorm(u, checks.eval_center,
                                                  checks.seminorm_radius, checks.p, checks.q,
                                                  params, sampling)
                                        .constant;
            if (checks.run_second_diff)
                row.second_diff_constant =
                    second_diff_seminorm(u, checks.eval_center, checks.seminorm_radius,
                                         checks.second_diff_gamma, params, sampling)
                        .constant;
            if (checks.run_sandwich) {
                QuotientSpec qs{{1.0, 0.0}, eps, checks.sandwich_gamma, 1.0};
                const double slack = sandwich_slack(solver_options.tol, eps,
                                                    prob.region->spacing(), checks.slack_c2);
                SandwichReport sw = sandwich_check(u, qs, prob.spec.extremal_directions(),
                                                   prob.f.lipschitz, params, slack);
                row.sandwich_violation = sw.max_violation;
                row.sandwich_slack_value = sw.slack;
            }
            GradientField grad = discrete_gradient(u, params);
            if (checks.run_taylor)
                row.taylor_constant =
                    taylor_remainder(u, grad, checks.eval_center, checks.seminorm_radius,
                                     checks.taylor_gamma, params, sampling)
                        .constant;

            if (have_prev) {
                const LatticeRegion& creg = prev_solution->region();
                const LatticeRegion& freg = u.region();
                double du = 0.0, dg = 0.0;
                std::size_t matched = 0;
                for (std::size_t cid : creg.interior_ids()) {
                    const Vec p = creg.coord(cid);
                    const Index fidx = freg.nearest_index(p);
                    if (norm(freg.coord_of(fidx) - p) > 1e-9) continue;
                    const auto fid = freg.id_at(fidx);
                    if (!fid || freg.node_tag(*fid) != NodeTag::Interior) continue;
                    ++matched;
                    du = std::max(du, std::abs(prev_solution->value(cid) - u.value(*fid)));
                    if (prev_grad.defined[cid] && grad.defined[*fid]) {
                        const Vec gv = prev_grad.values[cid] - grad.values[*fid];
                        dg = std::max({dg, std::abs(gv[0]), std::abs(gv[1])});
                    }
                }
                if (matched > 0) {
                    row.cauchy_u = du;
                    row.cauchy_grad = dg;
                }
            }
            prev_solution = rep.solution;
            prev_grad = std::move(grad);
            have_prev = true;
        } catch (const Error&) {
            row.solve_failed = true;
            have_prev = false;
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace dpp
