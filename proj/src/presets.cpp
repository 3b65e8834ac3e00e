#include "dpp/presets.hpp"

namespace dpp {
namespace presets {

BoundaryData step_1d() {
    return {[](Vec p) { return p[0] <= 0.0 ? 0.0 : 1.0; }};
}

BoundaryData constant_data(double c) {
    return {[c](Vec) { return c; }};
}

BoundaryData affine_data(double a0, Vec a) {
    return {[a0, a](Vec p) { return a0 + dot(a, p); }};
}

BoundaryData smooth_2d() {
    return {[](Vec p) {
        return 0.5 * (p[0] * p[0] - p[1] * p[1]) + 0.3 * p[0] * p[1] + 0.1 * p[0];
    }};
}

BoundaryData square_norm() {
    return {[](Vec p) { return dot(p, p); }};
}

RunningCost zero_cost() { return {}; }

RunningCost constant_cost(double c) {
    return {[c](Vec) { return c; }, 0.0};
}

RunningCost linear_cost(Vec a) {
    return {[a](Vec p) { return dot(a, p); }, norm(a)};
}

SweepFamily noise_1d_family(double alpha, double beta, long steps_divisor) {
    return [=](double eps) {
        EllipticityParams params{alpha, beta, 1.0, eps};
        SweepProblem prob;
        prob.spec = OperatorSpec::make(OperatorVariant::FixedDirection, 1, params);
        prob.region = std::make_shared<const LatticeRegion>(build_region(
            1, DomainShape::interval(0.0, 1.0), eps / double(steps_divisor), params));
        prob.g = step_1d();
        prob.f = zero_cost();
        return prob;
    };
}

SweepFamily pucci_2d_family(double alpha, double beta, double lambda, long steps_divisor,
                            BoundaryData g, RunningCost f) {
    return [=](double eps) {
        EllipticityParams params{alpha, beta, lambda, eps};
        SweepProblem prob;
        prob.spec = OperatorSpec::make(OperatorVariant::PucciMax, 2, params);
        prob.region = std::make_shared<const LatticeRegion>(build_region(
            2, DomainShape::disk({0.0, 0.0}, 1.0), eps / double(steps_divisor), params));
        prob.g = g;
        prob.f = f;
        return prob;
    };
}

} // namespace presets
} // namespace dpp
