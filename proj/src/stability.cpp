#include "cminlab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace cminlab {

const char* to_string(StabilityKind k) {
    switch (k) {
    case StabilityKind::StableAtScale: return "stable-at-scale";
    case StabilityKind::UnstableWitnessed: return "unstable-witnessed";
    case StabilityKind::Undetermined: return "undetermined";
    }
    return "undetermined";
}

const char* to_string(HyperKind k) {
    switch (k) {
    case HyperKind::HyperStableAtScale: return "hyper-stable-at-scale";
    case HyperKind::ClHUMember: return "cl_H(U)-member";
    case HyperKind::Undetermined: return "undetermined";
    }
    return "undetermined";
}

namespace {

struct ShellPoint {
    Vec x;
    double dist;  // exact set-distance to the sample at acceptance time
};

// Rejection sampling: perturb a random sample point by a random direction and
// keep the result if its set-distance lands in [lo, hi]. `lo` may be 0 for
// ball sampling. Projection failures (e.g. a perturbation crossing a chart's
// singular locus) just discard the attempt.
std::vector<ShellPoint> sample_shell(const CompactSetSample& sample, const NearestIndex& idx,
                                     double lo, double hi, int count, int max_attempts,
                                     std::mt19937_64& rng) {
    std::vector<ShellPoint> out;
    const auto& sp = *sample.space;
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> mag(lo, hi);
    std::uniform_int_distribution<std::size_t> pick(0, sample.size() - 1);
    const double hi_guard = hi * (1.0 + 1e-9);

    for (int att = 0; att < max_attempts && (int)out.size() < count; ++att) {
        Vec x = sample.points[pick(rng)];
        Vec dir(x.size());
        double n = 0;
        for (auto& c : dir) {
            c = gauss(rng);
            n += c * c;
        }
        n = std::sqrt(n);
        if (n < 1e-12) continue;
        double m = mag(rng);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += dir[i] * (m / n);
        try {
            x = sp.project(x);
        } catch (const std::domain_error&) {
            continue;
        }
        double d = idx.nearest(x, lo, hi_guard);
        if (d < lo || d > hi) continue;  // out of band (d is exact inside it)
        out.push_back({std::move(x), d});
    }
    return out;
}

// Advance along the probe trajectory, checking the set-distance every
// monitor_dt. Closed-form flows evaluate each monitor time directly from the
// start, so long horizons cost nothing in accumulated error.
enum class ProbeOutcome { Confined, Escaped, IntegrationFailed };

struct ProbeResult {
    ProbeOutcome outcome;
    double escape_time = 0;
    double escape_dist = 0;
};

ProbeResult run_probe(const FlowSpec& flow, const NearestIndex& idx, const Vec& start,
                      double horizon, double monitor_dt, double threshold) {
    PhasePoint cur{start, flow.space};
    double t = 0;
    while (t < horizon - 1e-12) {
        double step = std::min(monitor_dt, horizon - t);
        AdvanceResult r = (flow.kind == FlowKind::ClosedForm)
                              ? advance(flow, {start, flow.space}, t + step)
                              : advance(flow, cur, step);
        if (r.escaped) return {ProbeOutcome::IntegrationFailed};
        t += step;
        cur = r.point;
        if (!idx.within(cur.coords, threshold))
            return {ProbeOutcome::Escaped, t, idx.distance(cur.coords)};
    }
    return {ProbeOutcome::Confined};
}

}  // namespace

StabilityVerdict test_stability(const FlowSpec& flow, const MinimalSetRecord& rec,
                                const StabilityParams& p) {
    if (rec.sample.empty()) throw std::invalid_argument("test_stability: empty record sample");
    if (p.radii.empty()) throw std::invalid_argument("test_stability: no radii");
    for (std::size_t i = 0; i < p.radii.size(); ++i) {
        if (p.radii[i] <= 0) throw std::invalid_argument("test_stability: radii must be positive");
        if (i && p.radii[i] >= p.radii[i - 1])
            throw std::invalid_argument("test_stability: radii must be strictly decreasing");
    }
    if (p.kappa <= 1) throw std::invalid_argument("test_stability: kappa must exceed 1");
    if (p.shell_samples < 20)
        throw std::invalid_argument("test_stability: need at least 20 shell samples");

    StabilityVerdict v;
    v.tested_radii = p.radii;
    v.kappa = p.kappa;
    v.horizon = p.horizon;

    NearestIndex idx(rec.sample);
    std::mt19937_64 rng(p.rng_seed);
    const double threshold = p.kappa * p.radii.front();

    bool coarse_escape = false, failures = false, degenerate = false;
    std::optional<EscapeWitness> finest_witness;

    for (std::size_t ri = 0; ri < p.radii.size(); ++ri) {
        double r = p.radii[ri];
        bool finest = (ri + 1 == p.radii.size());
        auto shell =
            sample_shell(rec.sample, idx, r / 2, r, p.shell_samples, p.max_shell_attempts, rng);
        if ((int)shell.size() < p.shell_samples) {
            degenerate = true;
            v.reason = "degenerate shell at radius " + std::to_string(r) + " (" +
                       std::to_string(shell.size()) + "/" + std::to_string(p.shell_samples) +
                       " points found)";
            continue;
        }
        for (const auto& s : shell) {
            ProbeResult pr = run_probe(flow, idx, s.x, p.horizon, p.monitor_dt, threshold);
            if (pr.outcome == ProbeOutcome::IntegrationFailed) {
                failures = true;
            } else if (pr.outcome == ProbeOutcome::Escaped) {
                if (finest && !finest_witness)
                    finest_witness = EscapeWitness{s.x, s.dist, pr.escape_time, pr.escape_dist};
                if (!finest) coarse_escape = true;
            }
        }
    }

    if (finest_witness) {
        v.kind = StabilityKind::UnstableWitnessed;
        v.witness = finest_witness;
    } else if (coarse_escape) {
        v.kind = StabilityKind::Undetermined;
        v.reason = "escape only from coarse shells; finest shell confined";
    } else if (degenerate) {
        v.kind = StabilityKind::Undetermined;  // reason already set
    } else if (failures) {
        v.kind = StabilityKind::Undetermined;
        v.reason = "probe integration failed";
    } else {
        v.kind = StabilityKind::StableAtScale;
    }
    return v;
}

StabilityVerdict test_minus_stability(const FlowSpec& flow, const MinimalSetRecord& rec,
                                      const StabilityParams& p) {
    return test_stability(flow.reversed(), rec, p);
}

AttractorReport test_attractor(const FlowSpec& flow, const MinimalSetRecord& rec,
                               const AttractorParams& p) {
    if (rec.sample.empty()) throw std::invalid_argument("test_attractor: empty record sample");
    if (p.radius <= 0) throw std::invalid_argument("test_attractor: radius must be positive");

    AttractorReport rep;
    rep.radius = p.radius;
    NearestIndex idx(rec.sample);
    std::mt19937_64 rng(p.rng_seed);
    auto ball = sample_shell(rec.sample, idx, 0.0, p.radius, p.basin_samples, p.max_attempts, rng);

    LimitParams lp = p.limit;
    lp.burn_in = p.horizon;
    const double close = 3.0 * rec.sample.resolution;

    for (const auto& b : ball) {
        CompactSetSample est = omega_limit_estimate(flow, {b.x, flow.space}, lp);
        if (est.escaped || est.empty()) {
            rep.failed.push_back(b.x);
            continue;
        }
        bool conv = est.converged && hausdorff_distance(est, rec.sample) <= close;
        (conv ? rep.converging : rep.non_converging).push_back(b.x);
    }

    int decided = (int)(rep.converging.size() + rep.non_converging.size());
    if ((int)ball.size() < p.basin_samples || decided < (p.basin_samples + 1) / 2) {
        rep.result = AttractorReport::Result::Undetermined;
    } else if ((double)rep.converging.size() >= 0.95 * decided) {
        rep.result = AttractorReport::Result::Yes;
    } else {
        rep.result = AttractorReport::Result::No;
    }
    return rep;
}

HyperVerdict classify_hyper_stability(const CMinSpace& space,
                                      const std::vector<StabilityVerdict>& verdicts,
                                      int record_id, double radius) {
    if (verdicts.size() != space.records.size())
        throw std::invalid_argument("classify_hyper_stability: one verdict per record required");
    if (record_id < 0 || record_id >= (int)space.records.size())
        throw std::invalid_argument("classify_hyper_stability: record id out of range");
    if (radius <= 0) throw std::invalid_argument("classify_hyper_stability: radius must be positive");

    HyperVerdict h;
    h.radius = radius;
    bool blocked = false;
    for (std::size_t j = 0; j < space.records.size(); ++j) {
        double d = ((int)j == record_id)
                       ? 0.0
                       : set_distance(space.records[j].sample, space.records[record_id].sample);
        if (d >= radius) continue;
        if (verdicts[j].kind == StabilityKind::UnstableWitnessed)
            h.offending.push_back((int)j);
        else if (verdicts[j].kind == StabilityKind::Undetermined)
            blocked = true;  // unknown neighbour: cannot certify either way
    }
    if (!h.offending.empty())
        h.kind = HyperKind::ClHUMember;
    else if (blocked)
        h.kind = HyperKind::Undetermined;
    else
        h.kind = HyperKind::HyperStableAtScale;
    return h;
}

namespace {

// d(x^t, x) evaluated by continuing the trajectory from a stored orbit point
// just before t; the refinement brackets are one scan step wide, so each
// evaluation costs a couple of integrator steps, not a fresh run from zero.
double return_dist_from(const FlowSpec& flow, const PhasePoint& seed, const PhasePoint& base,
                        double base_t, double t) {
    AdvanceResult r = advance(flow, base, t - base_t);
    if (r.escaped) return std::numeric_limits<double>::infinity();
    return flow.space->distance(r.point.coords, seed.coords);
}

}  // namespace

RecurrenceReport recurrence_fraction(const FlowSpec& flow, const std::vector<Vec>& seeds,
                                     double horizon, double delta, double scan_dt) {
    if (horizon < 1) throw std::invalid_argument("recurrence_fraction: horizon must be >= 1");
    if (delta <= 0 || scan_dt <= 0)
        throw std::invalid_argument("recurrence_fraction: delta and scan_dt must be positive");

    RecurrenceReport rep;
    for (const auto& s : seeds) {
        PhasePoint seed{s, flow.space};
        OrbitSample orb = orbit_sample(flow, seed, horizon, scan_dt);
        if (orb.escaped || orb.truncated) {
            ++rep.failed;
            continue;
        }
        ++rep.counted;

        double best = std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < orb.points.size(); ++i) {
            if (orb.times[i] < 1.0 - 1e-9) continue;
            double d = flow.space->distance(orb.points[i], s);
            if (d < best) {
                best = d;
                best_i = i;
            }
        }
        if (best >= delta && std::isfinite(best)) {
            // Golden-section refinement around the best coarse return; the
            // scan alone cannot see closures tighter than speed * scan_dt.
            std::size_t bi = best_i > 0 ? best_i - 1 : best_i;
            PhasePoint base{orb.points[bi], flow.space};
            double lo = std::max(1.0, orb.times[bi]);
            double hi = std::min(horizon, orb.times[best_i] + scan_dt);
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            double a = lo, b = hi;
            double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
            double f1 = return_dist_from(flow, seed, base, orb.times[bi], x1);
            double f2 = return_dist_from(flow, seed, base, orb.times[bi], x2);
            while (b - a > 1e-9) {
                if (f1 <= f2) {
                    b = x2; x2 = x1; f2 = f1;
                    x1 = b - gr * (b - a);
                    f1 = return_dist_from(flow, seed, base, orb.times[bi], x1);
                } else {
                    a = x1; x1 = x2; f1 = f2;
                    x2 = a + gr * (b - a);
                    f2 = return_dist_from(flow, seed, base, orb.times[bi], x2);
                }
            }
            best = std::min(best, std::min(f1, f2));
        }
        if (best < delta) ++rep.recurrent;
    }
    rep.fraction = rep.counted ? (double)rep.recurrent / rep.counted : 0.0;
    return rep;
}

}  // namespace cminlab
