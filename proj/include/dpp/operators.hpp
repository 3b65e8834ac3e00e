#pragma once

/// The DPP operator zoo: second differences, Pucci-type extremal operators,
/// fixed-direction / subset / Isaacs variants, tug-of-war with noise, and the
/// admissibility checks (uniform ellipticity sandwich, translation
/// invariance) plus the scaling identity. All operations are pure functions
/// of immutable inputs.

#include <functional>
#include <string>
#include <vector>

#include "dpp/lattice.hpp"

namespace dpp {

/// Finite set of control directions nu with |nu| <= Lambda.
///
/// The extremal discretization of the control ball additionally carries the
/// zero vector and +-Lambda e_i on each axis, so suprema attained in the
/// interior (concave case) and at axis-aligned extremes are representable.
struct DirectionSet {
    std::vector<Vec> vectors;

    /// Radii {0, Lambda/2, Lambda}; in 2D, `angles` uniformly spaced angles
    /// per positive radius (default 16, giving 33 vectors).
    static DirectionSet ball_discretization(int dimension, double lambda, int angles = 16,
                                            const std::vector<double>& radii_fractions = {0.5,
                                                                                          1.0});

    void validate_norms(double lambda) const;      // every |nu| <= Lambda
    void validate_ball_cover(double lambda) const; // contains 0 and +-Lambda e_i
};

enum class OperatorVariant {
    PucciMax,      // sup over the discretized control ball
    PucciMin,      // inf over the discretized control ball
    FixedDirection,
    SupOverSet,    // sup over a configured subset V
    Isaacs,        // sup-inf or inf-sup over a family of subsets
    TugOfWarNoise, // sup + inf over the epsilon-ball; not uniformly elliptic
};

enum class IsaacsOrder { SupInf, InfSup };

std::string variant_name(OperatorVariant v);

struct OperatorSpec {
    OperatorVariant variant = OperatorVariant::PucciMax;
    EllipticityParams params;
    DirectionSet directions; // discretization of B_Lambda for extremal ops

    Vec fixed_direction{0.0, 0.0};          // FixedDirection
    DirectionSet subset;                    // SupOverSet
    std::vector<DirectionSet> family;       // Isaacs
    IsaacsOrder order = IsaacsOrder::SupInf;

    static OperatorSpec make(OperatorVariant variant, int dimension,
                             const EllipticityParams& params);

    bool admissible() const { return variant != OperatorVariant::TugOfWarNoise; }
    void validate(int dimension) const;

    /// Directions used by the extremal comparison operators: the ball
    /// discretization joined with every variant-specific vector, so the
    /// finite-set sandwich inequalities hold identically.
    DirectionSet extremal_directions() const;
};

/// delta u(x, d) = u(x+d) + u(x-d) - 2 u(x).
double second_difference(const ScalarField& field, Vec x, Vec displacement);

/// L_eps u(x) = (1 / 2 eps^2) (alpha * S(x) + beta * A(x)) with S the
/// variant's extremum of second differences over control directions and A
/// the stencil-weighted ball average of second differences.
double apply_operator(const OperatorSpec& spec, const ScalarField& field, Vec x);

/// L_eps u - f on interior nodes, zero on exterior nodes.
ScalarField residual_field(const OperatorSpec& spec, const ScalarField& field,
                           const ScalarField* f = nullptr);

struct CheckReport {
    double max_violation = 0.0;
    std::size_t nodes_checked = 0;
};

/// Uniform ellipticity: L- v <= L(u+v) - L(u) <= L+ v at every interior
/// node, with L+- built on the operator's extremal direction set. Exact up
/// to rounding for finite direction sets.
CheckReport check_h1_sandwich(const OperatorSpec& spec, const ScalarField& u,
                              const ScalarField& v);

/// Translation invariance: max over common interior nodes of
/// |L(u_shift)(x) - L(u)(x + shift)| for a lattice-multiple shift.
CheckReport check_h2_translation(const OperatorSpec& spec, const ScalarField& u, Index shift);

struct ScalingReport {
    double max_difference = 0.0;  // |L+_{eps/R} u~(x) - R^2 L+_eps u(Rx)|
    double tolerance_budget = 0.0;
    std::size_t samples = 0;
};

/// Scaling identity for the extremal operator: with u~(x) = u(Rx) and
/// eps~ = eps/R, L+_{eps~} u~(x) = R^2 L+_eps u(Rx). Both sides are
/// evaluated on corresponding lattices built at scale 1 and scale R.
ScalingReport check_scaling_identity(const OperatorSpec& spec,
                                     const std::function<double(Vec)>& u_analytic, double R,
                                     const DomainShape& unit_domain, double spacing_unit);

/// Internals shared with the solver: midpoint-form evaluation machinery.
/// Precomputes read patterns once per (region, spec) pair.
class OperatorKernel {
public:
    OperatorKernel(const OperatorSpec& spec, const LatticeRegion& region);

    /// S(x): the variant's extremum of second differences at node `id`.
    double extremum_term(const ScalarField& field, std::size_t id) const;
    /// A(x): stencil average of second differences at node `id`.
    double average_term(const ScalarField& field, std::size_t id) const;
    /// Full operator value (1/2eps^2)(alpha S + beta A) at node `id`.
    double value(const ScalarField& field, std::size_t id) const;

    /// Midpoint form of the fixed-point map: Sbar = extremum of midpoint
    /// values (u(x+eps nu)+u(x-eps nu))/2, Abar = stencil average of u.
    double midpoint_extremum(const ScalarField& field, std::size_t id) const;
    double midpoint_average(const ScalarField& field, std::size_t id) const;

    const BallStencil& stencil() const { return stencil_; }
    const OperatorSpec& spec() const { return spec_; }

    struct DirectionPattern {
        ReadPattern plus;
        ReadPattern minus;
    };
    const std::vector<DirectionPattern>& primary_patterns() const { return primary_; }
    const std::vector<std::vector<DirectionPattern>>& family_patterns() const {
        return family_;
    }

private:
    OperatorSpec spec_;
    BallStencil stencil_;
    std::vector<ReadPattern> stencil_patterns_;
    std::vector<DirectionPattern> primary_; // variant-dependent direction list
    std::vector<std::vector<DirectionPattern>> family_; // Isaacs
};

} // namespace dpp
