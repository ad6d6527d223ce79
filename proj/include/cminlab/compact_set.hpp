#pragma once

#include <limits>

#include "cminlab/geometry.hpp"

namespace cminlab {

/// Finite sample standing in for a compact subset of a phase space.
/// resolution records the epsilon of the net the points were thinned with.
struct CompactSetSample {
    std::shared_ptr<const PhaseSpace> space;
    std::vector<Vec> points;
    double resolution = 0;
    bool converged = false;  // limit-set estimates: tail nets agreed
    bool escaped = false;    // orbit left the escape radius while sampling
    bool truncated = false;  // integration stopped before the horizon

    bool empty() const { return points.empty(); }
    std::size_t size() const { return points.size(); }
};

/// Exact nearest-point queries against a fixed sample. Uses a uniform grid
/// bucket index on charts whose metric is the ambient Euclidean one, plain
/// scans otherwise; both paths return the same doubles as a full scan.
class NearestIndex {
public:
    explicit NearestIndex(const CompactSetSample& sample);

    /// min_i d(p, points[i]); equals the brute-force minimum bit for bit.
    double distance(const Vec& p) const;

    /// True iff some sample point lies within `thresh` of p. Early-outs on the
    /// first hit, so it is much cheaper than distance() for nearby queries.
    bool within(const Vec& p, double thresh) const;

    /// Bounded query: exact minimum unless it drops below abort_below (the
    /// caller no longer cares) or everything unvisited provably lies at or
    /// beyond stop_beyond. Comparisons against those bounds remain exact.
    double nearest(const Vec& p, double abort_below, double stop_beyond) const;

private:
    const CompactSetSample& sample_;
    bool gridded_ = false;
    double cell_ = 0;
    Vec lo_;
    int dims_ = 0;
    std::vector<long> strides_;
    std::vector<int> ncells_;
    std::vector<std::vector<int>> buckets_;
    long cell_of(const Vec& p) const;
    double scan(const Vec& p, double abort_below) const;
};

/// Symmetric Hausdorff distance max(sup_A dist(a,B), sup_B dist(b,A)).
/// Throws std::invalid_argument on empty input or mismatched spaces.
double hausdorff_distance(const CompactSetSample& a, const CompactSetSample& b);

/// Directed gap min_{a in A} dist(a, B); zero iff the samples share a point.
double set_distance(const CompactSetSample& a, const CompactSetSample& b);

double point_set_distance(const Vec& p, const CompactSetSample& b);

/// Greedy epsilon-net in input order: keep a point iff it lies at distance
/// >= eps/2 from every point already kept. Deterministic.
CompactSetSample epsilon_net(const std::shared_ptr<const PhaseSpace>& space,
                             const std::vector<Vec>& points, double eps);

/// True iff every point of a lies within r of the set `center`.
bool contained_in_ball(const CompactSetSample& a, const CompactSetSample& center, double r);

}  // namespace cminlab
