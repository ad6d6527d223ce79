#include "cminlab/compact_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace cminlab {

namespace {

void check_pair(const CompactSetSample& a, const CompactSetSample& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("hausdorff/set distance: empty sample");
    if (a.space->name != b.space->name || a.space->ambient_dim != b.space->ambient_dim)
        throw std::invalid_argument("hausdorff/set distance: samples live on different spaces");
}

}  // namespace

NearestIndex::NearestIndex(const CompactSetSample& sample) : sample_(sample) {
    const auto& pts = sample.points;
    if (pts.empty()) throw std::invalid_argument("NearestIndex: empty sample");
    if (!sample.space->ambient_euclidean_metric() || pts.size() < 64) return;

    dims_ = sample.space->ambient_dim;
    lo_.assign(dims_, std::numeric_limits<double>::infinity());
    Vec hi(dims_, -std::numeric_limits<double>::infinity());
    for (const auto& p : pts)
        for (int d = 0; d < dims_; ++d) {
            lo_[d] = std::min(lo_[d], p[d]);
            hi[d] = std::max(hi[d], p[d]);
        }
    double extent = 0;
    for (int d = 0; d < dims_; ++d) extent = std::max(extent, hi[d] - lo_[d]);
    // Aim for a handful of points per occupied cell; degenerate extents (all
    // points coincide) keep the plain scan path.
    double target = extent / std::max(4.0, std::pow((double)pts.size(), 1.0 / dims_));
    if (!(target > 0) || !std::isfinite(target)) return;
    cell_ = target;

    ncells_.resize(dims_);
    strides_.resize(dims_);
    long total = 1;
    for (int d = 0; d < dims_; ++d) {
        ncells_[d] = std::max(1, (int)std::floor((hi[d] - lo_[d]) / cell_) + 1);
        strides_[d] = total;
        total *= ncells_[d];
        if (total > 4'000'000) return;  // keep the index bounded; scans stay exact
    }
    buckets_.assign(total, {});
    for (int i = 0; i < (int)pts.size(); ++i) buckets_[cell_of(pts[i])].push_back(i);
    gridded_ = true;
}

long NearestIndex::cell_of(const Vec& p) const {
    long idx = 0;
    for (int d = 0; d < dims_; ++d) {
        int c = (int)std::floor((p[d] - lo_[d]) / cell_);
        c = std::clamp(c, 0, ncells_[d] - 1);
        idx += strides_[d] * c;
    }
    return idx;
}

double NearestIndex::scan(const Vec& p, double abort_below) const {
    double best = std::numeric_limits<double>::infinity();
    const auto* sp = sample_.space.get();
    for (const auto& q : sample_.points) {
        double d = sp->distance(p, q);
        if (d < best) {
            best = d;
            if (best < abort_below) break;
        }
    }
    return best;
}

double NearestIndex::nearest(const Vec& p, double abort_below, double stop_beyond) const {
    if (!gridded_) return scan(p, abort_below);

    // Ring expansion around the query cell. A point whose cell sits at
    // Chebyshev ring k lies at Euclidean distance >= (k-1)*cell_, so the
    // search is complete once best <= (k-1)*cell_. The two bounds cut the
    // search short when the caller only needs a comparison:
    //  - abort_below: the running minimum can no longer matter (max-min loops)
    //  - stop_beyond: every unvisited point is provably beyond the threshold
    std::vector<int> home(dims_);
    for (int d = 0; d < dims_; ++d)
        home[d] = std::clamp((int)std::floor((p[d] - lo_[d]) / cell_), 0, ncells_[d] - 1);
    int max_ring = 0;
    for (int d = 0; d < dims_; ++d)
        max_ring = std::max(max_ring, std::max(home[d], ncells_[d] - 1 - home[d]));

    double best = std::numeric_limits<double>::infinity();
    const auto* sp = sample_.space.get();
    int c[8], from[8], to[8];
    for (int ring = 0; ring <= max_ring; ++ring) {
        double ring_floor = (double)(ring - 1) * cell_;
        if (best <= ring_floor) break;          // search complete
        if (best < abort_below) break;          // result can no longer matter
        if (ring_floor >= stop_beyond) break;   // remainder provably beyond threshold
        for (int d = 0; d < dims_; ++d) {
            from[d] = std::max(0, home[d] - ring);
            to[d] = std::min(ncells_[d] - 1, home[d] + ring);
            c[d] = from[d];
        }
        while (true) {
            bool on_shell = false;
            for (int d = 0; d < dims_ && !on_shell; ++d)
                on_shell = std::abs(c[d] - home[d]) == ring;
            if (on_shell) {
                long idx = 0;
                for (int d = 0; d < dims_; ++d) idx += strides_[d] * c[d];
                for (int i : buckets_[idx]) {
                    double dist = sp->distance(p, sample_.points[i]);
                    if (dist < best) best = dist;
                }
            }
            int d = 0;
            while (d < dims_ && c[d] == to[d]) { c[d] = from[d]; ++d; }
            if (d == dims_) break;
            ++c[d];
        }
    }
    return best;
}

double NearestIndex::distance(const Vec& p) const {
    return nearest(p, -std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::infinity());
}

bool NearestIndex::within(const Vec& p, double thresh) const {
    if (gridded_) {
        // Most queries in orbit monitoring sit on top of the sample; the home
        // cell usually decides immediately.
        const auto* sp = sample_.space.get();
        for (int i : buckets_[cell_of(p)])
            if (sp->distance(p, sample_.points[i]) < thresh) return true;
    }
    return nearest(p, -std::numeric_limits<double>::infinity(), thresh) < thresh;
}

double point_set_distance(const Vec& p, const CompactSetSample& b) {
    if (b.empty()) throw std::invalid_argument("point_set_distance: empty sample");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : b.points) best = std::min(best, b.space->distance(p, q));
    return best;
}

namespace {

// sup over a of dist(a, B). Points whose partial minimum drops below the
// running supremum are abandoned early; they cannot raise it, so the result
// equals the naive double loop bit for bit.
double directed_sup(const CompactSetSample& a, const NearestIndex& bidx) {
    double worst = 0;
    for (const auto& p : a.points) {
        double d = bidx.nearest(p, worst, std::numeric_limits<double>::infinity());
        if (d > worst) worst = d;
    }
    return worst;
}

}  // namespace

double hausdorff_distance(const CompactSetSample& a, const CompactSetSample& b) {
    check_pair(a, b);
    NearestIndex ai(a), bi(b);
    return std::max(directed_sup(a, bi), directed_sup(b, ai));
}

double set_distance(const CompactSetSample& a, const CompactSetSample& b) {
    check_pair(a, b);
    NearestIndex bi(b);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : a.points)
        best = std::min(best, bi.nearest(p, -std::numeric_limits<double>::infinity(), best));
    return best;
}

namespace {

// Incremental spatial hash used while building greedy nets on ambient-
// Euclidean charts: with cell = eps/2, any kept point within eps/2 of a
// candidate sits in one of the 3^d neighbouring cells.
class NetHash {
public:
    NetHash(int dims, double cell) : dims_(dims), cell_(cell) {}

    std::int64_t key(const Vec& p) const {
        std::int64_t h = 1469598103934665603LL;
        for (int d = 0; d < dims_; ++d) {
            auto c = (std::int64_t)std::floor(p[d] / cell_);
            h = (h ^ (c * 2654435761LL + d)) * 1099511628211LL;
        }
        return h;
    }

    bool any_within(const Vec& p, const std::vector<Vec>& pts, const PhaseSpace& sp,
                    double thresh) const {
        std::vector<std::int64_t> cs(dims_);
        for (int d = 0; d < dims_; ++d) cs[d] = (std::int64_t)std::floor(p[d] / cell_);
        Vec probe(dims_);
        std::vector<int> off(dims_, -1);
        while (true) {
            for (int d = 0; d < dims_; ++d) probe[d] = (cs[d] + off[d] + 0.5) * cell_;
            auto it = map_.find(key(probe));
            if (it != map_.end())
                for (int i : it->second)
                    if (sp.distance(p, pts[i]) < thresh) return true;
            int d = 0;
            while (d < dims_ && off[d] == 1) off[d++] = -1;
            if (d == dims_) break;
            ++off[d];
        }
        return false;
    }

    void insert(const Vec& p, int idx) { map_[key(p)].push_back(idx); }

private:
    int dims_;
    double cell_;
    std::unordered_map<std::int64_t, std::vector<int>> map_;
};

}  // namespace

CompactSetSample epsilon_net(const std::shared_ptr<const PhaseSpace>& space,
                             const std::vector<Vec>& points, double eps) {
    if (eps <= 0) throw std::invalid_argument("epsilon_net: eps must be positive");
    CompactSetSample net;
    net.space = space;
    net.resolution = eps;
    const double keep_dist = 0.5 * eps;

    if (space->ambient_euclidean_metric() && points.size() > 256) {
        NetHash hash(space->ambient_dim, keep_dist);
        for (const auto& p : points) {
            if (hash.any_within(p, net.points, *space, keep_dist)) continue;
            hash.insert(p, (int)net.points.size());
            net.points.push_back(p);
        }
        return net;
    }
    for (const auto& p : points) {
        bool keep = true;
        for (const auto& q : net.points)
            if (space->distance(p, q) < keep_dist) { keep = false; break; }
        if (keep) net.points.push_back(p);
    }
    return net;
}

bool contained_in_ball(const CompactSetSample& a, const CompactSetSample& center, double r) {
    check_pair(a, center);
    NearestIndex ci(center);
    for (const auto& p : a.points)
        if (ci.nearest(p, -std::numeric_limits<double>::infinity(), r * 1.0000001) > r)
            return false;
    return true;
}

}  // namespace cminlab
