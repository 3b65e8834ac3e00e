#include "dpp/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dpp/parallel.hpp"

namespace dpp {

namespace {
constexpr double kNormTol = 1e-12;

double snap_tiny(double v, double scale) {
    return std::abs(v) < 1e-15 * scale ? 0.0 : v;
}
} // namespace

DirectionSet DirectionSet::ball_discretization(int dimension, double lambda, int angles,
                                               const std::vector<double>& radii_fractions) {
    DirectionSet set;
    set.vectors.push_back({0.0, 0.0});
    if (dimension == 1) {
        for (double f : radii_fractions) {
            set.vectors.push_back({f * lambda, 0.0});
            set.vectors.push_back({-f * lambda, 0.0});
        }
        return set;
    }
    for (double f : radii_fractions) {
        const double r = f * lambda;
        for (int k = 0; k < angles; ++k) {
            const double th = 2.0 * std::numbers::pi * double(k) / double(angles);
            set.vectors.push_back({snap_tiny(r * std::cos(th), lambda),
                                   snap_tiny(r * std::sin(th), lambda)});
        }
    }
    return set;
}

void DirectionSet::validate_norms(double lambda) const {
    for (const Vec& v : vectors)
        if (norm(v) > lambda + kNormTol)
            throw InvalidConfig("DirectionSet: |nu| exceeds Lambda");
}

void DirectionSet::validate_ball_cover(double lambda) const {
    validate_norms(lambda);
    auto has = [&](Vec w) {
        for (const Vec& v : vectors)
            if (norm(v - w) <= kNormTol * std::max(1.0, lambda)) return true;
        return false;
    };
    if (!has({0.0, 0.0}))
        throw InvalidConfig("DirectionSet: missing the zero vector");
    if (!has({lambda, 0.0}) || !has({-lambda, 0.0}))
        throw InvalidConfig("DirectionSet: missing +-Lambda e_1");
}

std::string variant_name(OperatorVariant v) {
    switch (v) {
    case OperatorVariant::PucciMax: return "pucci_max";
    case OperatorVariant::PucciMin: return "pucci_min";
    case OperatorVariant::FixedDirection: return "fixed_direction";
    case OperatorVariant::SupOverSet: return "sup_over_set";
    case OperatorVariant::Isaacs: return "isaacs";
    case OperatorVariant::TugOfWarNoise: return "tug_of_war_noise";
    }
    return "unknown";
}

OperatorSpec OperatorSpec::make(OperatorVariant variant, int dimension,
                                const EllipticityParams& params) {
    OperatorSpec spec;
    spec.variant = variant;
    spec.params = params;
    spec.directions = DirectionSet::ball_discretization(dimension, params.lambda);
    if (variant == OperatorVariant::FixedDirection)
        spec.fixed_direction = {params.lambda, 0.0};
    if (variant == OperatorVariant::SupOverSet)
        spec.subset = spec.directions;
    if (variant == OperatorVariant::Isaacs) {
        DirectionSet v1, v2, v3;
        if (dimension == 1) {
            v1.vectors = {{0.0, 0.0}};
            v2.vectors = {{params.lambda, 0.0}, {-params.lambda, 0.0}};
            v3.vectors = {{0.5 * params.lambda, 0.0}, {-0.5 * params.lambda, 0.0}};
        } else {
            const double d = params.lambda / std::numbers::sqrt2;
            v1.vectors = {{params.lambda, 0.0}, {-params.lambda, 0.0}};
            v2.vectors = {{0.0, params.lambda}, {0.0, -params.lambda}, {0.0, 0.0}};
            v3.vectors = {{d, d}, {-d, -d}};
        }
        spec.family = {v1, v2, v3};
    }
    return spec;
}

void OperatorSpec::validate(int dimension) const {
    params.validate();
    directions.validate_ball_cover(params.lambda);
    if (dimension == 1)
        for (const Vec& v : directions.vectors)
            if (v[1] != 0.0) throw InvalidConfig("OperatorSpec: 2D direction in a 1D problem");
    switch (variant) {
    case OperatorVariant::FixedDirection:
        if (norm(fixed_direction) > params.lambda + kNormTol)
            throw InvalidConfig("OperatorSpec: fixed direction leaves the control ball");
        break;
    case OperatorVariant::SupOverSet:
        if (subset.vectors.empty()) throw InvalidConfig("OperatorSpec: empty direction subset");
        subset.validate_norms(params.lambda);
        break;
    case OperatorVariant::Isaacs:
        if (family.empty()) throw InvalidConfig("OperatorSpec: empty Isaacs family");
        for (const DirectionSet& v : family) {
            if (v.vectors.empty())
                throw InvalidConfig("OperatorSpec: empty Isaacs member set");
            v.validate_norms(params.lambda);
        }
        break;
    default:
        break;
    }
}

DirectionSet OperatorSpec::extremal_directions() const {
    DirectionSet out = directions;
    if (variant == OperatorVariant::FixedDirection) out.vectors.push_back(fixed_direction);
    if (variant == OperatorVariant::SupOverSet)
        out.vectors.insert(out.vectors.end(), subset.vectors.begin(), subset.vectors.end());
    if (variant == OperatorVariant::Isaacs)
        for (const DirectionSet& v : family)
            out.vectors.insert(out.vectors.end(), v.vectors.begin(), v.vectors.end());
    return out;
}

double second_difference(const ScalarField& field, Vec x, Vec displacement) {
    return field.read(x + displacement) + field.read(x - displacement) - 2.0 * field.read(x);
}

OperatorKernel::OperatorKernel(const OperatorSpec& spec, const LatticeRegion& region)
    : spec_(spec), stencil_(ball_average_stencil(region, spec.params)) {
    spec_.validate(region.dimension());
    const double eps = spec_.params.epsilon;

    for (const Index& k : stencil_.index_offsets) {
        ReadPattern p;
        p.entries.push_back({k, 1.0});
        stencil_patterns_.push_back(std::move(p));
    }

    auto make_pair = [&](Vec nu) {
        DirectionPattern dp;
        dp.plus = region.displacement_pattern(eps * nu);
        dp.minus = region.displacement_pattern(-1.0 * eps * nu);
        return dp;
    };

    switch (spec_.variant) {
    case OperatorVariant::PucciMax:
    case OperatorVariant::PucciMin:
        for (const Vec& nu : spec_.directions.vectors) primary_.push_back(make_pair(nu));
        break;
    case OperatorVariant::FixedDirection:
        primary_.push_back(make_pair(spec_.fixed_direction));
        break;
    case OperatorVariant::SupOverSet:
        for (const Vec& nu : spec_.subset.vectors) primary_.push_back(make_pair(nu));
        break;
    case OperatorVariant::Isaacs:
        for (const DirectionSet& v : spec_.family) {
            std::vector<DirectionPattern> member;
            for (const Vec& nu : v.vectors) member.push_back(make_pair(nu));
            family_.push_back(std::move(member));
        }
        break;
    case OperatorVariant::TugOfWarNoise:
        // sup/inf over nodes within distance eps: the ball stencil's offsets.
        break;
    }
}

double OperatorKernel::midpoint_extremum(const ScalarField& field, std::size_t id) const {
    auto pair_sum = [&](const DirectionPattern& dp) {
        return field.read_pattern(id, dp.plus) + field.read_pattern(id, dp.minus);
    };
    switch (spec_.variant) {
    case OperatorVariant::PucciMax:
    case OperatorVariant::SupOverSet:
    case OperatorVariant::FixedDirection: {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& dp : primary_) best = std::max(best, pair_sum(dp));
        return 0.5 * best;
    }
    case OperatorVariant::PucciMin: {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& dp : primary_) best = std::min(best, pair_sum(dp));
        return 0.5 * best;
    }
    case OperatorVariant::Isaacs: {
        const bool sup_outer = spec_.order == IsaacsOrder::SupInf;
        double outer = sup_outer ? -std::numeric_limits<double>::infinity()
                                 : std::numeric_limits<double>::infinity();
        for (const auto& member : family_) {
            double inner = sup_outer ? std::numeric_limits<double>::infinity()
                                     : -std::numeric_limits<double>::infinity();
            for (const auto& dp : member)
                inner = sup_outer ? std::min(inner, pair_sum(dp)) : std::max(inner, pair_sum(dp));
            outer = sup_outer ? std::max(outer, inner) : std::min(outer, inner);
        }
        return 0.5 * outer;
    }
    case OperatorVariant::TugOfWarNoise: {
        double hi = -std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity();
        for (const auto& pat : stencil_patterns_) {
            const double v = field.read_pattern(id, pat);
            hi = std::max(hi, v);
            lo = std::min(lo, v);
        }
        return 0.5 * (hi + lo);
    }
    }
    return 0.0;
}

double OperatorKernel::midpoint_average(const ScalarField& field, std::size_t id) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < stencil_patterns_.size(); ++k)
        acc += stencil_.weights[k] * field.read_pattern(id, stencil_patterns_[k]);
    return acc;
}

double OperatorKernel::extremum_term(const ScalarField& field, std::size_t id) const {
    return 2.0 * (midpoint_extremum(field, id) - field.value(id));
}

double OperatorKernel::average_term(const ScalarField& field, std::size_t id) const {
    return 2.0 * (midpoint_average(field, id) - field.value(id));
}

double OperatorKernel::value(const ScalarField& field, std::size_t id) const {
    const double eps = spec_.params.epsilon;
    return (spec_.params.alpha * extremum_term(field, id) +
            spec_.params.beta * average_term(field, id)) /
           (2.0 * eps * eps);
}

double apply_operator(const OperatorSpec& spec, const ScalarField& field, Vec x) {
    const LatticeRegion& reg = field.region();
    const auto id = reg.id_at(reg.nearest_index(x));
    if (!id || norm(reg.coord(*id) - x) > 1e-9 * std::max(1.0, reg.spacing()))
        throw OutOfHull("apply_operator: x is not a lattice node");
    if (reg.node_tag(*id) != NodeTag::Interior)
        throw OutOfHull("apply_operator: x is not an interior node");
    OperatorKernel kernel(spec, reg);
    return kernel.value(field, *id);
}

ScalarField residual_field(const OperatorSpec& spec, const ScalarField& field,
                           const ScalarField* f) {
    const LatticeRegion& reg = field.region();
    if (f && &f->region() != &reg)
        throw InvalidConfig("residual_field: f lives on a different region");
    OperatorKernel kernel(spec, reg);
    std::vector<double> out(reg.node_count(), 0.0);
    const auto& ids = reg.interior_ids();
    parallel_for(ids.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const std::size_t id = ids[i];
            out[id] = kernel.value(field, id) - (f ? f->value(id) : 0.0);
        }
    });
    return ScalarField(field.region_ptr(), std::move(out));
}

CheckReport check_h1_sandwich(const OperatorSpec& spec, const ScalarField& u,
                              const ScalarField& v) {
    if (!spec.admissible())
        throw NotAdmissible("H1 sandwich is undefined for tug-of-war with noise");
    const LatticeRegion& reg = u.region();
    if (&v.region() != &reg)
        throw InvalidConfig("check_h1_sandwich: fields live on different regions");

    OperatorSpec plus = spec, minus = spec;
    plus.variant = OperatorVariant::PucciMax;
    minus.variant = OperatorVariant::PucciMin;
    plus.directions = minus.directions = spec.extremal_directions();

    OperatorKernel op(spec, reg), op_plus(plus, reg), op_minus(minus, reg);

    std::vector<double> sum_vals(reg.node_count());
    for (std::size_t id = 0; id < sum_vals.size(); ++id)
        sum_vals[id] = u.value(id) + v.value(id);
    const ScalarField uv(u.region_ptr(), std::move(sum_vals));

    const auto& ids = reg.interior_ids();
    CheckReport rep;
    rep.nodes_checked = ids.size();
    rep.max_violation = parallel_max(ids.size(), [&](std::size_t i) {
        const std::size_t id = ids[i];
        const double diff = op.value(uv, id) - op.value(u, id);
        const double lo = op_minus.value(v, id);
        const double hi = op_plus.value(v, id);
        return std::max({lo - diff, diff - hi, 0.0});
    });
    return rep;
}

CheckReport check_h2_translation(const OperatorSpec& spec, const ScalarField& u, Index shift) {
    const LatticeRegion& reg = u.region();
    std::vector<double> shifted(reg.node_count(), 0.0);
    for (std::size_t id = 0; id < shifted.size(); ++id) {
        const auto tid = reg.id_at(reg.node_index(id) + shift);
        shifted[id] = tid ? u.value(*tid) : 0.0;
    }
    const ScalarField u_shift(u.region_ptr(), std::move(shifted));

    OperatorKernel kernel(spec, reg);
    std::vector<std::size_t> common;
    for (std::size_t id : reg.interior_ids())
        if (reg.tag_at(reg.node_index(id) + shift) == NodeTag::Interior) common.push_back(id);

    CheckReport rep;
    rep.nodes_checked = common.size();
    rep.max_violation = parallel_max(common.size(), [&](std::size_t i) {
        const std::size_t id = common[i];
        const std::size_t tid = *reg.id_at(reg.node_index(id) + shift);
        return std::abs(kernel.value(u_shift, id) - kernel.value(u, tid));
    });
    return rep;
}

ScalingReport check_scaling_identity(const OperatorSpec& spec,
                                     const std::function<double(Vec)>& u_analytic, double R,
                                     const DomainShape& unit_domain, double spacing_unit) {
    if (!(R > 0.0)) throw InvalidConfig("check_scaling_identity: R must be positive");
    const int dim = unit_domain.dimension();

    EllipticityParams p1 = spec.params;
    p1.epsilon = spec.params.epsilon / R;
    auto region1 = std::make_shared<const LatticeRegion>(
        build_region(dim, unit_domain, spacing_unit, p1));

    DomainShape scaled = unit_domain;
    scaled.lo = R * unit_domain.lo;
    scaled.hi = R * unit_domain.hi;
    scaled.center = R * unit_domain.center;
    scaled.radius = R * unit_domain.radius;
    auto region2 = std::make_shared<const LatticeRegion>(
        build_region(dim, scaled, R * spacing_unit, spec.params));

    const ScalarField u_tilde = ScalarField::from_function(
        region1, [&](Vec x) { return u_analytic(R * x); });
    const ScalarField u = ScalarField::from_function(region2, u_analytic);

    OperatorSpec ext = spec;
    ext.variant = OperatorVariant::PucciMax;
    OperatorSpec ext1 = ext;
    ext1.params = p1;
    OperatorKernel k1(ext1, *region1), k2(ext, *region2);

    ScalingReport rep;
    double scale = 0.0;
    for (std::size_t id1 : region1->interior_ids()) {
        const Index idx = region1->node_index(id1);
        const auto id2 = region2->id_at(idx);
        if (!id2 || region2->node_tag(*id2) != NodeTag::Interior) continue;
        const double lhs = k1.value(u_tilde, id1);
        const double rhs = R * R * k2.value(u, *id2);
        rep.max_difference = std::max(rep.max_difference, std::abs(lhs - rhs));
        scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
        ++rep.samples;
    }
    rep.tolerance_budget = 1e-9 * (1.0 + scale);
    return rep;
}

} // namespace dpp
