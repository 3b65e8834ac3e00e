#include "dpp/jumps.hpp"

#include <algorithm>
#include <cmath>

namespace dpp {

namespace {

/// Distance from the segment [a, b] to the interval boundary. Zero when the
/// segment straddles an endpoint.
double segment_boundary_distance(const DomainShape& dom, double a, double b) {
    if (dom.kind != DomainKind::Interval)
        throw InvalidConfig("jump analysis is 1D only");
    for (double end : {dom.lo[0], dom.hi[0]})
        if (a <= end && end <= b) return 0.0;
    return std::min(dom.boundary_distance({a, 0.0}), dom.boundary_distance({b, 0.0}));
}

} // namespace

std::vector<double> jump_proxy_field(const ScalarField& field) {
    const LatticeRegion& reg = field.region();
    if (reg.dimension() != 1)
        throw InvalidConfig("jump_proxy_field: 1D fields only");
    std::vector<double> proxies;
    proxies.reserve(reg.interior_count());
    for (std::size_t id : reg.interior_ids()) {
        const Index idx = reg.node_index(id);
        const auto next = reg.id_at({idx[0] + 1, 0});
        if (!next) throw OutOfHull("jump_proxy_field: interior node lacks a successor");
        proxies.push_back(std::abs(field.value(*next) - field.value(id)));
    }
    return proxies;
}

double exterior_sup_norm(const LatticeRegion& region, const BoundaryData& g) {
    if (!g.fn) throw InvalidConfig("exterior_sup_norm: boundary data has no evaluator");
    double best = 0.0;
    for (std::size_t id = 0; id < region.node_count(); ++id)
        if (region.node_tag(id) == NodeTag::Exterior)
            best = std::max(best, std::abs(g.fn(region.coord(id))));
    return best;
}

double jump_bound_formula(double dist, double g_sup_norm, double alpha, double epsilon) {
    const long k = static_cast<long>(std::ceil(dist / epsilon - 1e-9));
    return 2.0 * g_sup_norm * std::pow(alpha, double(std::max(k, 0L)));
}

double predicted_jump_bound(Vec x, double g_sup_norm, double alpha, double epsilon,
                            const DomainShape& domain) {
    return jump_bound_formula(domain.boundary_distance(x), g_sup_norm, alpha, epsilon);
}

JumpProfile verify_jump_bound(const ScalarField& field, const BoundaryData& g,
                              const EllipticityParams& params, double allowance) {
    const LatticeRegion& reg = field.region();
    if (reg.dimension() != 1)
        throw InvalidConfig("verify_jump_bound: 1D fields only");
    params.validate();

    JumpProfile profile;
    profile.allowance = allowance;
    profile.g_sup_norm = exterior_sup_norm(reg, g);

    const std::vector<double> proxies = jump_proxy_field(field);
    const auto& ids = reg.interior_ids();
    profile.entries.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const double x = reg.coord(ids[i])[0];
        const double xn = x + reg.spacing();
        JumpProfileEntry e;
        e.x = x;
        e.jump_proxy = proxies[i];
        e.dist_to_boundary = segment_boundary_distance(reg.domain(), x, xn);
        e.predicted_bound =
            jump_bound_formula(e.dist_to_boundary, profile.g_sup_norm, params.alpha,
                               params.epsilon);
        e.margin = e.predicted_bound - e.jump_proxy;
        e.violation = e.jump_proxy > e.predicted_bound + allowance;
        if (e.violation) ++profile.violations;
        profile.entries.push_back(e);
    }
    return profile;
}

double calibrate_jump_allowance(double epsilon, double spacing, const BoundaryData& g,
                                const SolveOptions& options) {
    EllipticityParams params{0.0, 1.0, 1.0, epsilon};
    OperatorSpec spec = OperatorSpec::make(OperatorVariant::FixedDirection, 1, params);
    auto region = std::make_shared<const LatticeRegion>(
        build_region(1, DomainShape::interval(0.0, 1.0), spacing, params));
    SolveReport rep = solve_dpp(spec, region, g, {}, options);

    // Max proxy over pairs with both endpoints interior; the straddling pair
    // at the boundary measures the boundary discontinuity, not smoothness.
    const std::vector<double> proxies = jump_proxy_field(*rep.solution);
    const auto& ids = region->interior_ids();
    double best = 0.0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const Index idx = region->node_index(ids[i]);
        if (region->tag_at({idx[0] + 1, 0}) != NodeTag::Interior) continue;
        best = std::max(best, proxies[i]);
    }
    return best;
}

FigureCurves reproduce_figures(double epsilon, std::size_t samples) {
    BoundaryData g{[](Vec p) { return p[0] <= 0.0 ? 0.0 : 1.0; }};
    const CosetSolution1D stair =
        solve_coset_1d(CosetVariant::PureTwoPoint, epsilon, g, 1.0, 0.0);
    const CosetSolution1D smooth =
        solve_coset_1d(CosetVariant::TwoPointWithNoise, epsilon, g, 0.5, 0.5);

    FigureCurves curves;
    curves.staircase.reserve(samples);
    curves.smoothed.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = (double(i) + 0.5) / double(samples);
        curves.staircase.push_back({x, stair.value(x)});
        curves.smoothed.push_back({x, smooth.value(x)});
    }
    return curves;
}

} // namespace dpp
