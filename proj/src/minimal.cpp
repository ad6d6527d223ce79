#include "cminlab/minimal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cminlab {

const char* to_string(Structure s) {
    switch (s) {
    case Structure::Equilibrium: return "equilibrium";
    case Structure::Periodic: return "periodic";
    case Structure::QuasiperiodicTorus: return "quasiperiodic-torus";
    case Structure::Unresolved: return "unresolved";
    }
    return "unresolved";
}

namespace {

double return_distance(const FlowSpec& flow, const PhasePoint& base, double t) {
    AdvanceResult r = advance(flow, base, t);
    if (r.escaped) return std::numeric_limits<double>::infinity();
    return flow.space->distance(r.point.coords, base.coords);
}

// Interval-halving minimisation of the return distance on [lo, hi], run until
// the bracket is below tol. The return distance is V-shaped around a closure
// time, so golden-section halving homes in on it.
double refine_return(const FlowSpec& flow, const PhasePoint& base, double lo, double hi,
                     double tol, double* t_best) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = return_distance(flow, base, x1), f2 = return_distance(flow, base, x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a);
            f1 = return_distance(flow, base, x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a);
            f2 = return_distance(flow, base, x2);
        }
    }
    *t_best = 0.5 * (a + b);
    return std::min(f1, f2);
}

// Pair-correlation dimension of the sample from the counting sums at two
// radii. Reporting heuristic only.
double correlation_dimension(const CompactSetSample& s, double r1, double r2) {
    const auto& pts = s.points;
    std::size_t n = pts.size();
    std::size_t stride = std::max<std::size_t>(1, n / 1200);
    std::vector<const Vec*> sub;
    for (std::size_t i = 0; i < n; i += stride) sub.push_back(&pts[i]);
    long c1 = 0, c2 = 0;
    for (std::size_t i = 0; i < sub.size(); ++i)
        for (std::size_t j = i + 1; j < sub.size(); ++j) {
            double d = s.space->distance(*sub[i], *sub[j]);
            if (d < r1) ++c1;
            if (d < r2) ++c2;
        }
    if (c1 == 0 || c2 <= c1) return 0;
    return std::log((double)c2 / (double)c1) / std::log(r2 / r1);
}

}  // namespace

StructureResult classify_structure(const FlowSpec& flow, const CompactSetSample& sample,
                                   const DetectParams& p) {
    if (sample.empty()) throw std::invalid_argument("classify_structure: empty sample");
    StructureResult out;

    if (sample.size() == 1) {
        const Vec& x = sample.points[0];
        bool fixed;
        if (flow.kind == FlowKind::VectorField) {
            Vec v = flow.field(x);
            double n = 0;
            for (double c : v) n += c * c;
            fixed = std::sqrt(n) < p.equilibrium_eps * (1.0 + point_set_distance(x, sample));
        } else {
            AdvanceResult r = advance(flow, {x, sample.space}, 1.0);
            fixed = !r.escaped && flow.space->distance(r.point.coords, x) < 1e-6;
        }
        if (fixed) {
            out.structure = Structure::Equilibrium;
            return out;
        }
    }

    // Coarse forward scan for a first return of a sample point to itself.
    // Thresholds scale with the sample's extent from the base point so that
    // loops barely larger than the net resolution still register: the orbit
    // must first leave past 2x the return threshold, and both stay below the
    // extent or the "leave" gate could never open.
    PhasePoint base{sample.points[0], sample.space};
    double extent = 0;
    for (const auto& q : sample.points)
        extent = std::max(extent, sample.space->distance(q, base.coords));
    const double near = std::min(2.0 * sample.resolution, 0.3 * extent);
    OrbitSample scan = orbit_sample(flow, base, p.period_horizon, p.period_scan_dt);
    bool left = false;
    double best_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < scan.points.size(); ++i) {
        double d = flow.space->distance(scan.points[i], base.coords);
        if (!left) {
            left = d > 2.0 * near;  // must leave before a return can count
            continue;
        }
        best_min = std::min(best_min, d);
        if (d < near) {
            // Walk to the bottom of this dip before refining: the first grid
            // point under the threshold can lead the true closure time by more
            // than one step when the orbit approaches slowly.
            std::size_t k = i;
            double dk = d;
            while (k + 1 < scan.points.size()) {
                double dn = flow.space->distance(scan.points[k + 1], base.coords);
                if (dn >= dk) break;
                dk = dn;
                ++k;
            }
            double t = scan.times[k];
            double t_best = t;
            double refined = refine_return(flow, base, t - p.period_scan_dt,
                                           t + p.period_scan_dt, 1e-8 * t, &t_best);
            out.refined_return = refined;
            if (refined < p.period_accept_eps) {
                out.structure = Structure::Periodic;
                out.period = t_best;
                return out;
            }
            // Near-return without closure: keep scanning counts as recurrence
            // evidence below, but this is not a periodic orbit.
            break;
        }
    }

    double recur_eps = std::max(4.0 * sample.resolution, 0.05);
    if (best_min < recur_eps) {
        double dim = correlation_dimension(sample, 3.0 * sample.resolution, 6.0 * sample.resolution);
        if (dim >= 1.5 && dim <= 2.5) {
            out.structure = Structure::QuasiperiodicTorus;
            return out;
        }
    }
    out.structure = Structure::Unresolved;
    return out;
}

namespace {

// Zeros of the generator are minimal sets in their own right. They must be
// recognised before integration: at an unstable equilibrium the orbit of the
// seed itself drifts off along the unstable eigendirections (roundoff,
// exponentially amplified) and the limit estimate would report a nearby
// orbit's set instead of the fixed point.
bool is_fixed_point(const FlowSpec& flow, const PhasePoint& seed, double eps) {
    if (flow.kind == FlowKind::VectorField) {
        Vec f = flow.field(seed.coords);
        double n2 = 0;
        for (double c : f) n2 += c * c;
        return std::sqrt(n2) < eps;
    }
    Vec moved = flow.space->project(flow.flow_map(1.0, seed.coords));
    return flow.space->distance(moved, seed.coords) < eps;
}

}  // namespace

DetectOutcome detect_minimal_set(const FlowSpec& flow, const PhasePoint& seed,
                                 const DetectParams& p) {
    DetectOutcome out;
    if (is_fixed_point(flow, seed, p.equilibrium_eps)) {
        MinimalSetRecord rec;
        rec.sample = CompactSetSample{flow.space, {seed.coords}, p.limit.net_eps,
                                      true, false, false};
        rec.structure = Structure::Equilibrium;
        rec.seeds = {seed.coords};
        rec.minimality_score = 1.0;
        out.record = std::move(rec);
        return out;
    }
    CompactSetSample est = omega_limit_estimate(flow, seed, p.limit);
    if (est.escaped || est.empty()) {
        out.escaped = est.escaped;
        return out;
    }

    MinimalSetRecord rec;
    rec.sample = est;
    rec.seeds = {seed.coords};

    StructureResult sr = classify_structure(flow, est, p);
    rec.structure = sr.structure;
    rec.period = sr.period;

    // Minimality probe: orbits started on the sample must re-cover all of it.
    int k = std::max(1, p.probe_count);
    int passed = 0;
    const double cover = 2.0 * est.resolution;
    for (int j = 0; j < k; ++j) {
        std::size_t idx = (k == 1) ? 0 : (std::size_t)std::llround((double)j * (est.size() - 1) / (k - 1));
        PhasePoint probe{est.points[idx], est.space};
        OrbitSample orb = orbit_sample(flow, probe, p.limit.window, p.limit.dt);
        if (orb.escaped || orb.points.empty()) continue;
        CompactSetSample orbset{est.space, orb.points, p.limit.dt, false, false, false};
        NearestIndex oidx(orbset);
        bool covers = true;
        for (const auto& q : est.points)
            if (!oidx.within(q, cover)) { covers = false; break; }
        if (covers) ++passed;
    }
    rec.minimality_score = (double)passed / k;
    out.record = std::move(rec);
    return out;
}

double CMinSpace::mesh() const {
    std::vector<int> all(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) all[i] = (int)i;
    return mesh(all);
}

double CMinSpace::mesh(const std::vector<int>& subset) const {
    if (subset.size() < 2) return 0;
    double worst = 0;
    for (int i : subset) {
        double nn = std::numeric_limits<double>::infinity();
        for (int j : subset)
            if (j != i) nn = std::min(nn, dmatrix[i][j]);
        worst = std::max(worst, nn);
    }
    return worst;
}

CMinSpace harvest_cmin(const FlowSpec& flow, const std::vector<Vec>& seed_grid,
                       const HarvestParams& p, std::vector<HarvestLogEntry>* log) {
    if (p.dedup_eps <= 0) throw std::invalid_argument("harvest_cmin: dedup_eps must be positive");
    CMinSpace space;
    space.dedup_eps = p.dedup_eps;
    space.flow_name = flow.name;

    auto note = [&](HarvestLogEntry e) { if (log) log->push_back(std::move(e)); };

    for (const auto& seed : seed_grid) {
        DetectOutcome det = detect_minimal_set(flow, {seed, flow.space}, p.detect);
        if (!det.record) {
            note({seed, det.escaped ? HarvestLogEntry::Escaped : HarvestLogEntry::Empty, -1, 0});
            continue;
        }
        MinimalSetRecord& rec = *det.record;
        if (rec.minimality_score < p.detect.minimality_threshold) {
            note({seed, HarvestLogEntry::RejectedScore, -1, rec.minimality_score});
            continue;
        }
        int merge_into = -1;
        for (std::size_t i = 0; i < space.records.size(); ++i)
            if (hausdorff_distance(rec.sample, space.records[i].sample) < p.dedup_eps) {
                merge_into = (int)i;
                break;
            }
        if (merge_into >= 0) {
            MinimalSetRecord& kept = space.records[merge_into];
            kept.seeds.push_back(seed);
            if (rec.minimality_score > kept.minimality_score) {
                auto seeds = kept.seeds;
                int id = kept.id;
                kept = rec;
                kept.seeds = std::move(seeds);
                kept.id = id;
            }
            note({seed, HarvestLogEntry::Merged, merge_into, rec.minimality_score});
        } else {
            rec.id = (int)space.records.size();
            note({seed, HarvestLogEntry::Admitted, rec.id, rec.minimality_score});
            space.records.push_back(std::move(rec));
        }
    }

    // Sample replacement during merging can pull two kept records inside
    // dedup_eps of each other; collapse until the disjointness invariant holds.
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t i = 0; i < space.records.size() && !merged; ++i)
            for (std::size_t j = i + 1; j < space.records.size() && !merged; ++j)
                if (hausdorff_distance(space.records[i].sample, space.records[j].sample) <
                    p.dedup_eps) {
                    MinimalSetRecord& a = space.records[i];
                    MinimalSetRecord& b = space.records[j];
                    for (auto& s : b.seeds) a.seeds.push_back(s);
                    if (b.minimality_score > a.minimality_score) {
                        auto seeds = a.seeds;
                        int id = a.id;
                        a = b;
                        a.seeds = std::move(seeds);
                        a.id = id;
                    }
                    space.records.erase(space.records.begin() + j);
                    merged = true;
                }
    }
    for (std::size_t i = 0; i < space.records.size(); ++i) space.records[i].id = (int)i;

    std::size_t n = space.records.size();
    space.dmatrix.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            space.dmatrix[i][j] = space.dmatrix[j][i] =
                hausdorff_distance(space.records[i].sample, space.records[j].sample);
    return space;
}

}  // namespace cminlab
