#include "dpp/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dpp {

namespace {
constexpr double kIndexSnapTol = 1e-9; // index units
constexpr double kGeomTol = 1e-12;

long checked_round(double t) { return std::lround(t); }
} // namespace

void EllipticityParams::validate() const {
    if (!(alpha >= 0.0) || !(beta >= 0.0))
        throw InvalidConfig("EllipticityParams: alpha and beta must be nonnegative");
    if (std::abs(alpha + beta - 1.0) > 2.3e-16)
        throw InvalidConfig("EllipticityParams: alpha + beta must equal 1");
    if (!(lambda > 0.0))
        throw InvalidConfig("EllipticityParams: lambda must be positive");
    if (!(epsilon > 0.0))
        throw InvalidConfig("EllipticityParams: epsilon must be positive");
}

DomainShape DomainShape::interval(double a, double b) {
    DomainShape s;
    s.kind = DomainKind::Interval;
    s.lo = {a, 0.0};
    s.hi = {b, 0.0};
    return s;
}

DomainShape DomainShape::rectangle(Vec lo, Vec hi) {
    DomainShape s;
    s.kind = DomainKind::Rectangle;
    s.lo = lo;
    s.hi = hi;
    return s;
}

DomainShape DomainShape::disk(Vec center, double radius) {
    DomainShape s;
    s.kind = DomainKind::Disk;
    s.center = center;
    s.radius = radius;
    return s;
}

bool DomainShape::contains(Vec p) const {
    switch (kind) {
    case DomainKind::Interval:
        return p[0] > lo[0] && p[0] < hi[0];
    case DomainKind::Rectangle:
        return p[0] > lo[0] && p[0] < hi[0] && p[1] > lo[1] && p[1] < hi[1];
    case DomainKind::Disk:
        return norm(p - center) < radius;
    }
    return false;
}

double DomainShape::distance_outside(Vec p) const {
    switch (kind) {
    case DomainKind::Interval:
        return std::max({lo[0] - p[0], p[0] - hi[0], 0.0});
    case DomainKind::Rectangle: {
        const double dx = std::max({lo[0] - p[0], p[0] - hi[0], 0.0});
        const double dy = std::max({lo[1] - p[1], p[1] - hi[1], 0.0});
        return std::hypot(dx, dy);
    }
    case DomainKind::Disk:
        return std::max(norm(p - center) - radius, 0.0);
    }
    return 0.0;
}

double DomainShape::boundary_distance(Vec p) const {
    switch (kind) {
    case DomainKind::Interval:
        return std::min(std::abs(p[0] - lo[0]), std::abs(p[0] - hi[0]));
    case DomainKind::Rectangle: {
        const double dx = std::min(std::abs(p[0] - lo[0]), std::abs(p[0] - hi[0]));
        const double dy = std::min(std::abs(p[1] - lo[1]), std::abs(p[1] - hi[1]));
        if (contains(p)) return std::min(dx, dy);
        return distance_outside(p);
    }
    case DomainKind::Disk:
        return std::abs(norm(p - center) - radius);
    }
    return 0.0;
}

Vec DomainShape::bbox_lo() const {
    if (kind == DomainKind::Disk) return {center[0] - radius, center[1] - radius};
    return lo;
}

Vec DomainShape::bbox_hi() const {
    if (kind == DomainKind::Disk) return {center[0] + radius, center[1] + radius};
    return hi;
}

Vec DomainShape::anchor() const {
    if (kind == DomainKind::Disk) return center;
    return lo;
}

LatticeRegion LatticeRegion::build(int dimension, const DomainShape& domain, double spacing,
                                   const EllipticityParams& params) {
    params.validate();
    if (dimension != 1 && dimension != 2)
        throw InvalidConfig("LatticeRegion: dimension must be 1 or 2");
    if (domain.dimension() != dimension)
        throw InvalidConfig("LatticeRegion: domain shape does not match dimension");
    if (!(spacing > 0.0))
        throw InvalidConfig("LatticeRegion: spacing must be positive");

    const double ratio = params.epsilon / spacing;
    const long m = checked_round(ratio);
    if (m < 1 || std::abs(ratio - double(m)) > 1e-9 * std::max(1.0, ratio))
        throw NonConformingStep("epsilon is not an integer multiple of the grid spacing");

    LatticeRegion r;
    r.dim_ = dimension;
    r.h_ = spacing;
    r.epsilon_ = params.epsilon;
    r.m_ = m;
    r.domain_ = domain;
    r.origin_ = domain.anchor();

    const double nominal = params.epsilon * std::max(1.0, params.lambda);
    const long strip_steps = static_cast<long>(std::ceil(nominal / spacing - kIndexSnapTol));
    r.strip_width_ = double(strip_steps) * spacing;

    // In 2D the node-inclusion distance carries a cell margin so every
    // bilinear cell touched by a read at the strip edge has its corners.
    const double inclusion = r.strip_width_ + (dimension == 2 ? 2.0 * spacing : 0.0);

    const Vec blo = domain.bbox_lo();
    const Vec bhi = domain.bbox_hi();
    for (int a = 0; a < dimension; ++a) {
        const double tmin = (blo[a] - inclusion - r.origin_[a]) / spacing;
        const double tmax = (bhi[a] + inclusion - r.origin_[a]) / spacing;
        r.lo_[a] = static_cast<long>(std::floor(tmin - kIndexSnapTol));
        r.hi_[a] = static_cast<long>(std::ceil(tmax + kIndexSnapTol));
    }
    if (dimension == 1) {
        r.lo_[1] = 0;
        r.hi_[1] = 0;
    }

    const std::size_t nx = static_cast<std::size_t>(r.hi_[0] - r.lo_[0] + 1);
    const std::size_t ny = static_cast<std::size_t>(r.hi_[1] - r.lo_[1] + 1);
    r.tags_.assign(nx * ny, NodeTag::Absent);

    const double incl_eff = inclusion + kGeomTol * std::max(1.0, inclusion);
    for (long iy = r.lo_[1]; iy <= r.hi_[1]; ++iy) {
        for (long ix = r.lo_[0]; ix <= r.hi_[0]; ++ix) {
            const Index idx{ix, iy};
            const Vec p = r.coord_of(idx);
            NodeTag tag = NodeTag::Absent;
            if (domain.contains(p))
                tag = NodeTag::Interior;
            else if (domain.distance_outside(p) <= incl_eff)
                tag = NodeTag::Exterior;
            r.tags_[r.raster_of(idx)] = tag;
        }
    }
    r.rebuild_node_list();
    if (r.interior_ids_.empty())
        throw EmptyDomain("no interior node: domain too small for the requested spacing");
    return r;
}

void LatticeRegion::rebuild_node_list() {
    nodes_.clear();
    interior_ids_.clear();
    compact_.assign(tags_.size(), -1);
    for (long iy = lo_[1]; iy <= hi_[1]; ++iy) {
        for (long ix = lo_[0]; ix <= hi_[0]; ++ix) {
            const Index idx{ix, iy};
            const std::size_t rr = raster_of(idx);
            if (tags_[rr] == NodeTag::Absent) continue;
            compact_[rr] = static_cast<std::int64_t>(nodes_.size());
            if (tags_[rr] == NodeTag::Interior) interior_ids_.push_back(nodes_.size());
            nodes_.push_back(idx);
        }
    }
}

Vec LatticeRegion::coord_of(Index idx) const {
    return {origin_[0] + double(idx[0]) * h_, origin_[1] + double(idx[1]) * h_};
}

std::size_t LatticeRegion::raster_of(Index idx) const {
    const std::size_t nx = static_cast<std::size_t>(hi_[0] - lo_[0] + 1);
    return static_cast<std::size_t>(idx[0] - lo_[0]) +
           nx * static_cast<std::size_t>(idx[1] - lo_[1]);
}

bool LatticeRegion::in_raster(Index idx) const {
    return idx[0] >= lo_[0] && idx[0] <= hi_[0] && idx[1] >= lo_[1] && idx[1] <= hi_[1];
}

bool LatticeRegion::present(Index idx) const {
    return in_raster(idx) && tags_[raster_of(idx)] != NodeTag::Absent;
}

NodeTag LatticeRegion::tag_at(Index idx) const {
    if (!in_raster(idx)) return NodeTag::Absent;
    return tags_[raster_of(idx)];
}

std::optional<std::size_t> LatticeRegion::id_at(Index idx) const {
    if (!present(idx)) return std::nullopt;
    return static_cast<std::size_t>(compact_[raster_of(idx)]);
}

Index LatticeRegion::nearest_index(Vec p) const {
    Index idx{0, 0};
    for (int a = 0; a < dim_; ++a)
        idx[a] = checked_round((p[a] - origin_[a]) / h_);
    return idx;
}

ReadPattern LatticeRegion::displacement_pattern(Vec displacement) const {
    ReadPattern pat;
    if (dim_ == 1) {
        const double t = displacement[0] / h_;
        pat.entries.push_back({Index{checked_round(t), 0}, 1.0});
        return pat;
    }
    // Per-axis decomposition with snapping to exact lattice hits.
    struct AxisEntry {
        long i;
        double w;
    };
    std::array<std::vector<AxisEntry>, 2> axis;
    for (int a = 0; a < 2; ++a) {
        const double t = displacement[a] / h_;
        const double fl = std::floor(t);
        const double frac = t - fl;
        if (frac <= kIndexSnapTol)
            axis[a].push_back({static_cast<long>(fl), 1.0});
        else if (frac >= 1.0 - kIndexSnapTol)
            axis[a].push_back({static_cast<long>(fl) + 1, 1.0});
        else {
            axis[a].push_back({static_cast<long>(fl), 1.0 - frac});
            axis[a].push_back({static_cast<long>(fl) + 1, frac});
        }
    }
    for (const auto& ex : axis[0])
        for (const auto& ey : axis[1])
            pat.entries.push_back({Index{ex.i, ey.i}, ex.w * ey.w});
    return pat;
}

bool LatticeRegion::pattern_resolves(Index base, const ReadPattern& pattern) const {
    for (const auto& e : pattern.entries)
        if (!present(base + e.offset)) return false;
    return true;
}

LatticeRegion LatticeRegion::restricted(const std::vector<char>& valid, double reach) const {
    LatticeRegion r = *this;
    for (std::size_t id = 0; id < nodes_.size(); ++id)
        if (!valid[id]) r.tags_[raster_of(nodes_[id])] = NodeTag::Absent;

    // Coverage offsets: all lattice points within the read radius (plus the
    // bilinear cell margin in 2D).
    const long cov = static_cast<long>(
        std::ceil(reach / h_ - kIndexSnapTol) + (dim_ == 2 ? 2 : 0));
    std::vector<Index> cover;
    if (dim_ == 1) {
        for (long k = -cov; k <= cov; ++k) cover.push_back({k, 0});
    } else {
        for (long ky = -cov; ky <= cov; ++ky)
            for (long kx = -cov; kx <= cov; ++kx)
                if (double(kx) * kx + double(ky) * ky <= double(cov) * cov + kIndexSnapTol)
                    cover.push_back({kx, ky});
    }

    for (std::size_t id = 0; id < nodes_.size(); ++id) {
        const Index idx = nodes_[id];
        const std::size_t rr = raster_of(idx);
        if (r.tags_[rr] != NodeTag::Interior) continue;
        bool covered = true;
        for (const Index& off : cover) {
            if (!r.present(idx + off)) {
                covered = false;
                break;
            }
        }
        if (!covered) r.tags_[rr] = NodeTag::Exterior;
    }
    r.rebuild_node_list();
    return r;
}

std::optional<std::string> LatticeRegion::audit_reach(
    const std::vector<Vec>& directions, const std::vector<Vec>& stencil_offsets) const {
    std::vector<ReadPattern> pats;
    for (const Vec& nu : directions) {
        pats.push_back(displacement_pattern(epsilon_ * nu));
        pats.push_back(displacement_pattern(-epsilon_ * nu));
    }
    for (const Vec& o : stencil_offsets) pats.push_back(displacement_pattern(o));

    for (std::size_t id : interior_ids_) {
        const Index idx = nodes_[id];
        for (const auto& pat : pats) {
            if (!pattern_resolves(idx, pat)) {
                std::ostringstream os;
                const Vec p = coord_of(idx);
                os << "unresolvable read from interior node (" << p[0] << ", " << p[1] << ")";
                return os.str();
            }
        }
    }
    return std::nullopt;
}

ScalarField::ScalarField(RegionPtr region, std::vector<double> values)
    : region_(std::move(region)), values_(std::move(values)) {
    if (!region_) throw InvalidConfig("ScalarField: null region");
    if (values_.size() != region_->node_count())
        throw InvalidConfig("ScalarField: value count does not match node count");
    for (double v : values_)
        if (!std::isfinite(v)) throw NonFiniteValue("ScalarField: non-finite node value");
    rule_ = region_->dimension() == 1 ? InterpolationRule::Nearest
                                      : InterpolationRule::Multilinear;
}

ScalarField ScalarField::from_function(RegionPtr region, const std::function<double(Vec)>& fn) {
    std::vector<double> vals(region->node_count());
    for (std::size_t id = 0; id < vals.size(); ++id) vals[id] = fn(region->coord(id));
    return ScalarField(std::move(region), std::move(vals));
}

ScalarField ScalarField::constant(RegionPtr region, double value) {
    std::vector<double> vals(region->node_count(), value);
    return ScalarField(std::move(region), std::move(vals));
}

double ScalarField::read(Vec p) const {
    const LatticeRegion& reg = *region_;
    const Vec origin = reg.coord_of({0, 0});
    if (rule_ == InterpolationRule::Nearest) {
        const double t = (p[0] - origin[0]) / reg.spacing();
        if (t < double(reg.raster_lo()[0]) - kIndexSnapTol ||
            t > double(reg.raster_hi()[0]) + kIndexSnapTol)
            throw OutOfHull("1D read outside the covered interval");
        const auto id = reg.id_at(reg.nearest_index(p));
        if (!id) throw OutOfHull("1D read has no node at the nearest lattice point");
        return values_[*id];
    }
    // Pattern offsets relative to index {0,0} are absolute raster indices.
    const ReadPattern pat = reg.displacement_pattern(p - origin);
    double acc = 0.0;
    for (const auto& e : pat.entries) {
        const auto id = reg.id_at(e.offset);
        if (!id) throw OutOfHull("2D read touches a missing cell corner");
        acc += e.weight * values_[*id];
    }
    return acc;
}

bool ScalarField::readable(Vec p) const {
    const LatticeRegion& reg = *region_;
    const Vec origin = reg.coord_of({0, 0});
    if (rule_ == InterpolationRule::Nearest) {
        const double t = (p[0] - origin[0]) / reg.spacing();
        if (t < double(reg.raster_lo()[0]) - kIndexSnapTol ||
            t > double(reg.raster_hi()[0]) + kIndexSnapTol)
            return false;
        return reg.id_at(reg.nearest_index(p)).has_value();
    }
    return reg.pattern_resolves({0, 0}, reg.displacement_pattern(p - origin));
}

double ScalarField::read_pattern(std::size_t id, const ReadPattern& pattern) const {
    const LatticeRegion& reg = *region_;
    const Index base = reg.node_index(id);
    double acc = 0.0;
    for (const auto& e : pattern.entries) {
        const Index idx = base + e.offset;
        if (!reg.in_raster(idx))
            throw OutOfHull("pattern read leaves the raster");
        const std::int64_t cid = reg.compact_at_raster(reg.raster_of(idx));
        if (cid < 0) throw OutOfHull("pattern read touches a missing node");
        acc += e.weight * values_[static_cast<std::size_t>(cid)];
    }
    return acc;
}

bool ScalarField::pattern_resolves(std::size_t id, const ReadPattern& pattern) const {
    return region_->pattern_resolves(region_->node_index(id), pattern);
}

double ScalarField::sup_norm(Vec center, double radius) const {
    double best = 0.0;
    bool any = false;
    for (std::size_t id = 0; id < values_.size(); ++id) {
        const Vec p = region_->coord(id);
        if (norm(p - center) <= radius + kGeomTol) {
            best = std::max(best, std::abs(values_[id]));
            any = true;
        }
    }
    if (!any) throw RegionTooSmall("sup_norm: no node in the requested sub-region");
    return best;
}

double ScalarField::sup_norm() const {
    double best = 0.0;
    for (double v : values_) best = std::max(best, std::abs(v));
    return best;
}

LatticeRegion build_region(int dimension, const DomainShape& domain, double spacing,
                           const EllipticityParams& params) {
    return LatticeRegion::build(dimension, domain, spacing, params);
}

BallStencil ball_average_stencil(const LatticeRegion& region, const EllipticityParams& params) {
    params.validate();
    const long m = region.steps_per_epsilon();
    const double h = region.spacing();
    BallStencil st;
    if (region.dimension() == 1) {
        // Composite trapezoid over the 2m+1 nodes of [-eps, eps].
        for (long k = -m; k <= m; ++k) {
            st.index_offsets.push_back({k, 0});
            st.offsets.push_back({double(k) * h, 0.0});
            st.weights.push_back((std::labs(k) == m ? 0.5 : 1.0) / double(2 * m));
        }
    } else {
        for (long ky = -m; ky <= m; ++ky)
            for (long kx = -m; kx <= m; ++kx)
                if (kx * kx + ky * ky <= m * m) {
                    st.index_offsets.push_back({kx, ky});
                    st.offsets.push_back({double(kx) * h, double(ky) * h});
                    st.weights.push_back(1.0);
                }
    }
    double sum = 0.0;
    for (double w : st.weights) sum += w;
    for (double& w : st.weights) w /= sum;
    return st;
}

} // namespace dpp
