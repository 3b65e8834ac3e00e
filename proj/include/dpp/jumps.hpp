#pragma once

/// Discontinuity analysis for 1D solved fields: adjacent-node jump proxies,
/// the distance-decaying jump bound 2 ||g|| alpha^ceil(dist/eps), and the
/// staircase / smoothed-staircase reference curves.

#include <vector>

#include "dpp/lattice.hpp"
#include "dpp/solver.hpp"

namespace dpp {

struct JumpProfileEntry {
    double x = 0.0;          // left node of the adjacent pair
    double jump_proxy = 0.0; // |u(x_{j+1}) - u(x_j)|
    double dist_to_boundary = 0.0; // min over the pair segment
    double predicted_bound = 0.0;
    double margin = 0.0; // predicted - measured
    bool violation = false;
};

struct JumpProfile {
    std::vector<JumpProfileEntry> entries;
    double allowance = 0.0;
    double g_sup_norm = 0.0;
    std::size_t violations = 0;
};

/// Adjacent-node differences |u(x_{j+1}) - u(x_j)| at each interior node,
/// aligned with region.interior_ids(). Exact on the coset staircase, O(h)
/// on smooth fields.
std::vector<double> jump_proxy_field(const ScalarField& field);

/// Sup of |g| over the region's exterior strip nodes.
double exterior_sup_norm(const LatticeRegion& region, const BoundaryData& g);

/// 2 ||g|| alpha^ceil(dist(x, boundary)/eps), with ceil(k eps / eps) = k at
/// exact multiples (the weaker bound) and ceil(0) = 0 at the boundary.
double jump_bound_formula(double dist, double g_sup_norm, double alpha, double epsilon);
double predicted_jump_bound(Vec x, double g_sup_norm, double alpha, double epsilon,
                            const DomainShape& domain);

/// Jump proxies against the predicted bound, per adjacent node pair. The
/// bound's distance is the minimum over the pair segment, so a pair
/// straddling the boundary is held to the boundary bound 2 ||g||.
/// Violations are data, not errors.
JumpProfile verify_jump_bound(const ScalarField& field, const BoundaryData& g,
                              const EllipticityParams& params, double allowance);

/// Allowance calibration: the pure-average (alpha = 0) solve on the same
/// grid is continuous inside the domain, so its largest interior-pair proxy
/// measures the smooth-slope contribution C_smooth * h.
double calibrate_jump_allowance(double epsilon, double spacing, const BoundaryData& g,
                                const SolveOptions& options = {});

struct FigureCurves {
    std::vector<std::array<double, 2>> staircase; // exact pure two-point solution
    std::vector<std::array<double, 2>> smoothed;  // alpha = beta = 1/2 noise solution
};

/// Sample both reference curves at `samples` midpoints of (0,1): the exact
/// coset staircase and the fine-grid (h = eps/64) noise solution.
FigureCurves reproduce_figures(double epsilon = 0.2, std::size_t samples = 512);

} // namespace dpp
