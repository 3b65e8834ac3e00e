#pragma once

/// Discretized domains with an exterior boundary strip, node-valued scalar
/// fields with an interpolation rule, and quadrature stencils for ball
/// averages. Regions, stencils and fields are immutable after construction;
/// all reads are pure and safe to share across workers.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dpp/errors.hpp"
#include "dpp/vec.hpp"

namespace dpp {

/// The tuple (alpha, beta, Lambda, epsilon) governing every operator.
///
/// alpha + beta must equal 1 up to a unit of rounding. beta == 0 is accepted
/// so the pure two-point principle can be expressed, but such parameters are
/// not uniformly elliptic and the admissibility checks reject them.
struct EllipticityParams {
    double alpha = 0.0;
    double beta = 1.0;
    double lambda = 1.0;  // control-radius multiplier
    double epsilon = 0.1; // step scale

    void validate() const;
    bool uniformly_elliptic() const { return beta > 0.0; }
};

enum class DomainKind { Interval, Rectangle, Disk };

/// Open set Omega: an interval in 1D, a rectangle or disk in 2D.
struct DomainShape {
    DomainKind kind = DomainKind::Interval;
    Vec lo{0.0, 0.0};     // interval / rectangle corner
    Vec hi{1.0, 0.0};
    Vec center{0.0, 0.0}; // disk
    double radius = 1.0;

    static DomainShape interval(double a, double b);
    static DomainShape rectangle(Vec lo, Vec hi);
    static DomainShape disk(Vec center, double radius);

    int dimension() const { return kind == DomainKind::Interval ? 1 : 2; }
    bool contains(Vec p) const;          // open-set membership
    double distance_outside(Vec p) const; // dist(p, closure of Omega); 0 inside
    double boundary_distance(Vec p) const; // dist(p, boundary of Omega)
    Vec bbox_lo() const;
    Vec bbox_hi() const;
    Vec anchor() const; // lattice origin: interval/rect corner, disk center
};

enum class NodeTag : std::uint8_t { Absent = 0, Interior = 1, Exterior = 2 };

class LatticeRegion;
using RegionPtr = std::shared_ptr<const LatticeRegion>;

/// Interpolation pattern for reading a field at a fixed displacement from any
/// node: a list of index offsets with weights. Exact lattice displacements
/// collapse to a single unit-weight entry.
struct ReadPattern {
    struct Entry {
        Index offset;
        double weight;
    };
    std::vector<Entry> entries;
};

/// Uniform lattice covering Omega plus an exterior strip wide enough that
/// every stencil read from an interior node resolves.
class LatticeRegion {
public:
    static LatticeRegion build(int dimension, const DomainShape& domain, double spacing,
                               const EllipticityParams& params);

    int dimension() const { return dim_; }
    double spacing() const { return h_; }
    double epsilon() const { return epsilon_; }
    long steps_per_epsilon() const { return m_; } // epsilon / spacing
    double strip_width() const { return strip_width_; }
    const DomainShape& domain() const { return domain_; }

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t interior_count() const { return interior_ids_.size(); }
    const std::vector<std::size_t>& interior_ids() const { return interior_ids_; }

    Index node_index(std::size_t id) const { return nodes_[id]; }
    NodeTag node_tag(std::size_t id) const { return tags_[raster_of(nodes_[id])]; }
    Vec coord(std::size_t id) const { return coord_of(nodes_[id]); }
    Vec coord_of(Index idx) const;

    bool present(Index idx) const;
    NodeTag tag_at(Index idx) const;
    /// Compact node id for a raster index, if the node exists.
    std::optional<std::size_t> id_at(Index idx) const;

    /// Raster index of the lattice point nearest to p (no presence check).
    Index nearest_index(Vec p) const;

    /// Interpolation pattern for a fixed displacement (relative to any node).
    ReadPattern displacement_pattern(Vec displacement) const;

    /// True when node `idx + entry.offset` is present for every entry.
    bool pattern_resolves(Index base, const ReadPattern& pattern) const;

    /// Derived region on the same raster keeping only nodes with
    /// valid[id] != 0. Nodes keep Interior status only when every read within
    /// `reach` still resolves; remaining valid nodes become Exterior.
    LatticeRegion restricted(const std::vector<char>& valid, double reach) const;

    /// Exhaustive audit: every interior node can read x +- eps*nu for each nu
    /// and x + o for each stencil offset. Returns the first failing
    /// description, or nullopt when everything resolves.
    std::optional<std::string> audit_reach(const std::vector<Vec>& directions,
                                           const std::vector<Vec>& stencil_offsets) const;

    // Raster geometry (used by the read path and the operators module).
    Index raster_lo() const { return lo_; }
    Index raster_hi() const { return hi_; }
    std::size_t raster_of(Index idx) const;
    bool in_raster(Index idx) const;
    std::int64_t compact_at_raster(std::size_t r) const { return compact_[r]; }

private:
    LatticeRegion() = default;
    void rebuild_node_list();

    int dim_ = 1;
    double h_ = 0.0;
    double epsilon_ = 0.0;
    long m_ = 1;
    double strip_width_ = 0.0;
    DomainShape domain_;
    Vec origin_{0.0, 0.0};
    Index lo_{0, 0};
    Index hi_{0, 0};
    std::vector<NodeTag> tags_;        // raster scan, row-major, last axis fastest
    std::vector<std::int64_t> compact_; // raster -> node id, -1 when absent
    std::vector<Index> nodes_;          // node id -> raster index
    std::vector<std::size_t> interior_ids_;
};

enum class InterpolationRule { Nearest, Multilinear };

/// Node-valued function on a region. Off-node reads use the field's
/// interpolation rule: nearest node in 1D, multilinear in 2D. 1D stays
/// nearest because the solutions are genuinely discontinuous and linear
/// interpolation would fabricate continuity across jumps.
class ScalarField {
public:
    ScalarField(RegionPtr region, std::vector<double> values);
    static ScalarField from_function(RegionPtr region, const std::function<double(Vec)>& fn);
    static ScalarField constant(RegionPtr region, double value);

    const LatticeRegion& region() const { return *region_; }
    const RegionPtr& region_ptr() const { return region_; }
    InterpolationRule interpolation() const { return rule_; }

    double value(std::size_t id) const { return values_[id]; }
    const std::vector<double>& values() const { return values_; }

    /// Value at an arbitrary point: exact node value when the point is a
    /// node, interpolated otherwise. Throws OutOfHull outside the covered set.
    double read(Vec p) const;
    bool readable(Vec p) const;

    /// Read at node `id` displaced by a precomputed pattern.
    double read_pattern(std::size_t id, const ReadPattern& pattern) const;
    bool pattern_resolves(std::size_t id, const ReadPattern& pattern) const;

    /// Max of |values| over nodes within the ball (sub-region sup norm).
    double sup_norm(Vec center, double radius) const;
    double sup_norm() const;

private:
    RegionPtr region_;
    std::vector<double> values_;
    InterpolationRule rule_;
};

/// Quadrature stencil for the ball average: composite trapezoid over the
/// 2m+1 nodes of [-eps, eps] in 1D, uniform weights over all lattice offsets
/// with |offset| <= eps in 2D. Weights sum to 1 and are symmetric under
/// negation of the offset.
struct BallStencil {
    std::vector<Index> index_offsets;
    std::vector<Vec> offsets; // physical displacements, |offset| <= eps
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
};

/// Region construction per the domain predicate. The strip width is
/// eps*max(1, Lambda) rounded up to a node multiple.
LatticeRegion build_region(int dimension, const DomainShape& domain, double spacing,
                           const EllipticityParams& params);

BallStencil ball_average_stencil(const LatticeRegion& region, const EllipticityParams& params);

} // namespace dpp
