// Acceptance gate: nine end-to-end criteria, each printing one PASS/FAIL line
// with its wall time. Tolerances and runtime budgets are pinned here, next to
// the checks; the process exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cminlab/gallery.hpp"
#include "cminlab/io.hpp"
#include "cminlab/topology.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace cminlab;

namespace {

using Fails = std::vector<std::string>;

template <class... A>
std::string cat(A&&... a) {
    std::ostringstream os;
    (os << ... << a);
    return os.str();
}

void expect(Fails& fails, bool ok, const std::string& what) {
    if (!ok) fails.push_back(what);
}

const MinimalSetRecord* find_singleton_at(const CMinSpace& space, const Vec& where,
                                          double tol) {
    for (const auto& r : space.records)
        if (r.sample.size() == 1 &&
            r.sample.space->distance(r.sample.points[0], where) < tol)
            return &r;
    return nullptr;
}

double z2_modulus(const MinimalSetRecord& r) {
    const Vec& p = r.sample.points[0];
    return std::hypot(p[2], p[3]);
}

// ---- criterion 1 -----------------------------------------------------------

void criterion_hausdorff_oracle(Fails& fails) {
    std::mt19937_64 rng(20240817);
    std::vector<std::shared_ptr<const PhaseSpace>> charts = {
        PhaseSpace::euclidean(2), PhaseSpace::euclidean(3),
        PhaseSpace::embedded_sphere(2), PhaseSpace::cylinder({1.0, 0.0}),
        PhaseSpace::solid_torus()};
    std::uniform_int_distribution<int> size(1, 500);
    const double extents[] = {2.0, 0.05, 30.0};

    int exact_matches = 0;
    for (int pair = 0; pair < 1000; ++pair) {
        const auto& space = charts[pair % charts.size()];
        double extent = extents[pair % 3];
        auto a = oracle::random_cloud(space, size(rng), rng, extent);
        auto b = oracle::random_cloud(space, size(rng), rng, extent);
        double fast = hausdorff_distance(a, b);
        double slow = oracle::naive_hausdorff(a, b);
        if (fast == slow) ++exact_matches;
        if (hausdorff_distance(b, a) != fast)
            fails.push_back(cat("symmetry broken on pair ", pair));
        if (hausdorff_distance(a, a) != 0.0)
            fails.push_back(cat("identity broken on pair ", pair));
        if (pair % 53 == 0) {  // spot-check the triangle inequality with a third set
            auto c = oracle::random_cloud(space, size(rng), rng, extent);
            double ac = hausdorff_distance(a, c);
            double bc = hausdorff_distance(b, c);
            if (ac > fast + bc + 1e-12)
                fails.push_back(cat("triangle broken on pair ", pair));
        }
    }
    expect(fails, exact_matches == 1000,
           cat("indexed hausdorff deviated from the oracle on ", 1000 - exact_matches,
               " of 1000 pairs"));
}

// ---- criterion 2 -----------------------------------------------------------

void criterion_nested_end_to_end(Fails& fails) {
    auto entry = make_nested_rings();
    auto res = run_pipeline(entry);
    const auto& space = res.space;
    expect(fails, space.records.size() == 5,
           cat("expected 5 records, harvested ", space.records.size()));
    if (space.records.size() != 5) return;

    const auto* origin = find_singleton_at(space, {0.0, 0.0}, 1e-3);
    expect(fails, origin != nullptr, "no singleton record at the origin");

    // ring records against their analytic circles, and pairwise gaps
    std::vector<int> ring_id(5, -1);  // ring_id[n] is the record at radius 1/n
    for (const auto& rec : space.records) {
        if (origin && rec.id == origin->id) continue;
        double r = std::hypot(rec.sample.points[0][0], rec.sample.points[0][1]);
        for (int n = 1; n <= 4; ++n)
            if (std::abs(r - 1.0 / n) < 0.02) ring_id[n] = rec.id;
    }
    for (int n = 1; n <= 4; ++n) {
        if (ring_id[n] < 0) {
            fails.push_back(cat("missing ring record at radius 1/", n));
            continue;
        }
        const auto& rec = space.records[ring_id[n]];
        auto circle = oracle::circle_sample(entry.flow.space, 1.0 / n, 6000);
        double err = oracle::naive_hausdorff(rec.sample, circle);
        expect(fails, err < 2 * rec.sample.resolution,
               cat("ring 1/", n, " misses its circle by ", err));
        expect(fails, res.stability[rec.id].kind == StabilityKind::UnstableWitnessed,
               cat("ring 1/", n, " not witnessed unstable"));
    }
    for (int n = 1; n <= 4; ++n)
        for (int m = n + 1; m <= 4; ++m) {
            if (ring_id[n] < 0 || ring_id[m] < 0) continue;
            double want = 1.0 / n - 1.0 / m;
            double got = space.dmatrix[ring_id[n]][ring_id[m]];
            expect(fails, std::abs(got - want) <= 0.05 * want,
                   cat("gap d(1/", n, ",1/", m, ") = ", got, ", want ", want, " within 5%"));
        }

    if (origin) {
        expect(fails, res.stability[origin->id].kind == StabilityKind::StableAtScale,
               "origin record not stable-at-scale");
        expect(fails, res.diagnostics[origin->id].verdict == LcVerdict::NotLc,
               "origin neighbourhood not flagged not-lc");
        expect(fails, predict_instability(res.diagnostics[origin->id]).fires,
               "prediction did not fire at the origin");
        expect(fails, res.confusion.predicted[origin->id],
               "crossvalidation lost the origin prediction");
    }
    expect(fails, res.confusion.false_positives == 0,
           cat(res.confusion.false_positives, " false positives"));
    expect(fails, res.confusion.true_positives == 1,
           cat("expected exactly 1 informative true positive, got ",
               res.confusion.true_positives));

    // the truncated 5-record family is far below the dense-scan minimum
    try {
        (void)criterion_dense_scan(space, entry.scan_scales);
        fails.push_back("dense scan accepted a 5-record space");
    } catch (const std::invalid_argument&) {
    }
}

// ---- criterion 3 -----------------------------------------------------------

void criterion_pendulum(Fails& fails) {
    auto entry = make_pendulum();
    auto res = run_pipeline(entry);
    const auto& space = res.space;

    const auto* center = find_singleton_at(space, {0.0, 0.0}, 1e-6);
    const auto* saddle = find_singleton_at(space, {-0.5, 0.0}, 1e-6);
    expect(fails, center != nullptr, "no record at the well bottom");
    expect(fails, saddle != nullptr, "no record at the hilltop");
    if (center)
        expect(fails, res.stability[center->id].kind == StabilityKind::StableAtScale,
               "well-bottom equilibrium not stable-at-scale");
    if (saddle) {
        expect(fails, res.stability[saddle->id].kind == StabilityKind::UnstableWitnessed,
               "hilltop equilibrium not witnessed unstable");
        expect(fails, res.stability[saddle->id].witness.has_value(),
               "hilltop verdict carries no witness");
    }

    std::vector<int> hs;
    for (const auto& rec : space.records)
        if (res.hyper[rec.id].kind == HyperKind::HyperStableAtScale) hs.push_back(rec.id);
    expect(fails, !hs.empty(), "no hyper-stable records at all");
    if (!hs.empty()) {
        auto dec = epsilon_components(space, 2.0 * space.mesh(hs), hs);
        expect(fails, dec.count == 3,
               cat("hyper-stable records form ", dec.count, " components, want 3"));
    }

    expect(fails, res.recurrence.fraction >= 0.95,
           cat("recurrence fraction ", res.recurrence.fraction, " < 0.95"));
    for (const auto& rec : space.records)
        expect(fails, res.stability[rec.id].kind == res.minus_stability[rec.id].kind,
               cat("record ", rec.id, ": forward and reversed verdicts disagree"));
}

// ---- criterion 4 -----------------------------------------------------------

void criterion_vlambda(Fails& fails) {
    {  // (a) constant rational rate: rigid rotation, one component
        VLambdaParams p;
        p.kind = VLambdaParams::Kind::ConstRational;
        auto res = run_pipeline(make_vlambda(p));
        for (const auto& rec : res.space.records)
            expect(fails, res.stability[rec.id].kind == StabilityKind::StableAtScale,
                   cat("half: record ", rec.id, " not stable"));
        auto dec = epsilon_components(res.space, 2.0 * res.space.mesh());
        expect(fails, dec.count == 1, cat("half: ", dec.count, " components, want 1"));
    }
    {  // (b) constant irrational rate: tori chain along the level
        VLambdaParams p;
        p.kind = VLambdaParams::Kind::ConstGolden;
        auto res = run_pipeline(make_vlambda(p));
        for (const auto& rec : res.space.records)
            expect(fails, res.stability[rec.id].kind == StabilityKind::StableAtScale,
                   cat("golden: record ", rec.id, " not stable"));
        auto dec = epsilon_components(res.space, 2.0 * res.space.mesh());
        expect(fails, dec.count == 1, cat("golden: ", dec.count, " components, want 1"));
    }
    {  // (c) level-dependent rate: planted resonances, empty hyper-stable set
        VLambdaParams p;
        p.kind = VLambdaParams::Kind::Identity;
        auto res = run_pipeline(make_vlambda(p));
        const auto& space = res.space;

        for (const auto& rec : space.records)
            expect(fails, res.hyper[rec.id].kind != HyperKind::HyperStableAtScale,
                   cat("identity: record ", rec.id, " certified hyper-stable"));

        // records carry their level exactly: |z2| is invariant and the seeds
        // sit at the planted square roots and at the grid values
        const double planted[] = {std::sqrt(1.0 / 3.0), std::sqrt(0.5),
                                  std::sqrt(2.0 / 3.0)};
        for (double mu : planted) {
            const MinimalSetRecord* rec = nullptr;
            for (const auto& r : space.records)
                if (std::abs(z2_modulus(r) - mu) < 1e-3) rec = &r;
            if (!rec) {
                fails.push_back(cat("identity: no record at planted level ", mu));
                continue;
            }
            expect(fails, res.stability[rec->id].kind == StabilityKind::UnstableWitnessed,
                   cat("identity: planted level ", mu, " not witnessed unstable"));
        }
        // non-resonant grid levels (low-order resonances 1/4 and 9/16 excluded)
        for (double mu : {0.55, 0.60, 0.65, 0.70, 0.80, 0.85, 0.90}) {
            const MinimalSetRecord* rec = nullptr;
            for (const auto& r : space.records)
                if (std::abs(z2_modulus(r) - mu) < 1e-3) rec = &r;
            if (!rec) {
                fails.push_back(cat("identity: no record at grid level ", mu));
                continue;
            }
            expect(fails, res.stability[rec->id].kind == StabilityKind::StableAtScale,
                   cat("identity: torus level ", mu, " not stable"));
            expect(fails, res.hyper[rec->id].kind == HyperKind::ClHUMember,
                   cat("identity: torus level ", mu, " not a closure member"));
        }

        // one-sided containment: the planted knot at sqrt(1/2) sits inside
        // the neighbouring torus record while staying far symmetrically
        const MinimalSetRecord* knot = nullptr;
        const MinimalSetRecord* torus = nullptr;
        for (const auto& r : space.records) {
            if (std::abs(z2_modulus(r) - std::sqrt(0.5)) < 1e-3) knot = &r;
            if (std::abs(z2_modulus(r) - 0.70) < 1e-3) torus = &r;
        }
        if (knot && torus) {
            double inside = oracle::naive_directed_sup(knot->sample, torus->sample);
            double sym = oracle::naive_hausdorff(knot->sample, torus->sample);
            expect(fails, inside < 3 * std::max(knot->sample.resolution,
                                                torus->sample.resolution),
                   cat("knot not inside the neighbouring torus: directed gap ", inside));
            expect(fails, sym > 10 * inside,
                   cat("knot/torus distances not one-sided: ", inside, " vs ", sym));
        } else {
            fails.push_back("identity: knot or neighbouring torus record missing");
        }
    }
}

// ---- criterion 5 -----------------------------------------------------------

void criterion_hopf(Fails& fails) {
    auto entry = make_hopf();
    auto res = run_pipeline(entry);
    const auto& space = res.space;

    expect(fails, res.recurrence.counted >= 200,
           cat("only ", res.recurrence.counted, " seeds counted"));
    expect(fails, res.recurrence.fraction == 1.0,
           cat("recurrence fraction ", res.recurrence.fraction, " != 1.0"));

    for (const auto& rec : space.records) {
        expect(fails, rec.structure == Structure::Periodic,
               cat("record ", rec.id, " not periodic"));
        if (rec.period)
            expect(fails, std::abs(*rec.period - 2 * oracle::kPi) <= 1e-6,
                   cat("record ", rec.id, " period off by ",
                       std::abs(*rec.period - 2 * oracle::kPi)));
        else
            fails.push_back(cat("record ", rec.id, " has no period"));
        expect(fails, res.stability[rec.id].kind == StabilityKind::StableAtScale,
               cat("record ", rec.id, " not stable"));
    }

    auto dec = epsilon_components(space, 2.0 * space.mesh());
    expect(fails, dec.count == 1, cat(dec.count, " components at mesh scale, want 1"));

    // every tested ball in S^3 meets a record
    std::mt19937_64 rng(31415);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        Vec c = {g(rng), g(rng), g(rng), g(rng)};
        c = space.records[0].sample.space->project(c);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& rec : space.records)
            best = std::min(best, point_set_distance(c, rec.sample));
        expect(fails, best <= 0.3,
               cat("ball ", trial, ": nearest record at ", best, " > 0.3"));
    }
}

// ---- criterion 6 -----------------------------------------------------------

void criterion_north_south(Fails& fails) {
    auto entry = make_north_south();
    auto space = harvest_cmin(entry.flow, entry.seed_grid, entry.harvest);
    expect(fails, space.records.size() == 2,
           cat(space.records.size(), " records, want the two poles"));
    if (space.records.size() != 2) return;

    const auto* north = find_singleton_at(space, {0.0, 0.0, 1.0}, 1e-6);
    const auto* south = find_singleton_at(space, {0.0, 0.0, -1.0}, 1e-6);
    if (!north || !south) {
        fails.push_back("pole records missing");
        return;
    }

    AttractorParams ap;
    ap.radius = 0.3;
    ap.rng_seed = entry.stability.rng_seed;
    auto sink = test_attractor(entry.flow, *north, ap);
    expect(fails, sink.result == AttractorReport::Result::Yes,
           "north pole not confirmed as attractor");
    int decided = (int)(sink.converging.size() + sink.non_converging.size());
    expect(fails, decided > 0 && (double)sink.converging.size() >= 0.95 * decided,
           cat("basin convergence ", sink.converging.size(), "/", decided, " below 95%"));

    auto source = test_attractor(entry.flow.reversed(), *south, ap);
    expect(fails, source.result == AttractorReport::Result::Yes,
           "south pole not an attractor under reversal");

    auto rec = recurrence_fraction(entry.flow, entry.recurrence.seeds,
                                   entry.recurrence.horizon, entry.recurrence.delta,
                                   entry.recurrence.scan_dt);
    expect(fails, rec.fraction == 0.0 && rec.recurrent == 0,
           cat("off-pole seeds recurrent: fraction ", rec.fraction));

    expect(fails, std::abs(space.dmatrix[0][1] - 2.0) < 1e-9,
           cat("poles at record distance ", space.dmatrix[0][1], ", want 2"));
}

// ---- criterion 7 -----------------------------------------------------------

void criterion_limit_continuity(Fails& fails) {
    {  // omega-limit continuity on the constant-irrational shear
        VLambdaParams p;
        p.kind = VLambdaParams::Kind::ConstGolden;
        auto entry = make_vlambda(p);
        const auto& lp = entry.harvest.detect.limit;
        auto sphere_space = entry.flow.space;

        auto base = omega_limit_estimate(entry.flow, {{1, 0, 0.55, 0}, sphere_space}, lp);
        if (!base.converged) {
            fails.push_back("base omega estimate did not converge");
            return;
        }
        const double close = 3 * base.resolution;
        double previous = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= 5; ++k) {
            double mu = 0.55 + 0.1 * std::pow(2.0, -k);
            auto est = omega_limit_estimate(entry.flow, {{1, 0, mu, 0}, sphere_space}, lp);
            double d = hausdorff_distance(est, base);
            expect(fails, d < close,
                   cat("omega limit at mu=", mu, " off by ", d, " >= ", close));
            expect(fails, d <= previous + 0.01,
                   cat("omega distances not settling at k=", k));
            previous = d;
        }
        // a phase-rotated seed on the same level shares the omega limit
        auto rotated = omega_limit_estimate(
            entry.flow, {{1, 0, 0.55 * std::cos(0.3), 0.55 * std::sin(0.3)}, sphere_space},
            lp);
        expect(fails, hausdorff_distance(rotated, base) < close,
               "phase-rotated seed lost the shared omega limit");
    }
    {  // escaping orbits: the collar of the invariant disk drains backwards
        auto entry = make_nested_rings();
        std::vector<Vec> collar = {{1.02, 0.0}, {1.05, 0.0}, {1.08, 0.0}};
        auto rec = recurrence_fraction(entry.flow, collar, 30.0, 0.005, 0.05);
        expect(fails, rec.counted == 3 && rec.fraction == 0.0,
               cat("collar seeds recurrent: ", rec.recurrent, "/", rec.counted));
        for (const auto& seed : collar) {
            // forward: the disk r < 1.1 is positively invariant
            auto fwd = orbit_sample(entry.flow, {seed, entry.flow.space}, 30.0, 0.05);
            double max_fwd = 0, max_back = 0;
            for (const auto& pt : fwd.points) max_fwd = std::max(max_fwd, std::hypot(pt[0], pt[1]));
            expect(fails, max_fwd <= std::hypot(seed[0], seed[1]) + 1e-6,
                   cat("forward orbit from r=", seed[0], " grew outward"));
            // backward: every non-recurrent collar orbit leaves the disk
            auto back = orbit_sample(entry.flow.reversed(), {seed, entry.flow.space}, 30.0, 0.05);
            for (const auto& pt : back.points) max_back = std::max(max_back, std::hypot(pt[0], pt[1]));
            expect(fails, max_back >= 1.1,
                   cat("backward orbit from r=", seed[0], " stayed inside the disk"));
        }
    }
}

// ---- criterion 8 -----------------------------------------------------------

void criterion_containment_radii(Fails& fails) {
    // minimal sets of a plain rotation: every circle is invariant; the family
    // at radii 1 + 0.4 * 2^-n lies in the closed 0.4 * 2^-n tube of the unit
    // circle. Sampled sets overshoot the true d_H by at most the net covering
    // slack (net_eps/2)^2 / (2 * eps_min) = 4e-5 here, inside the 1e-4 budget.
    FlowSpec rot;
    rot.space = PhaseSpace::euclidean(2);
    rot.kind = FlowKind::VectorField;
    rot.field = [](const Vec& x) { return Vec{-x[1], x[0]}; };
    rot.name = "rotation";

    DetectParams dp;
    dp.limit = {2, 7, 0.001, 0.002};

    auto detect_circle = [&](double radius) {
        auto out = detect_minimal_set(rot, {{radius, 0.0}, rot.space}, dp);
        return out.record;
    };
    auto base = detect_circle(1.0);
    if (!base) {
        fails.push_back("no record on the unit circle");
        return;
    }
    const double slack = 1e-4;
    double previous = -1;
    for (int n = 0; n <= 5; ++n) {
        double eps_n = 0.4 * std::pow(2.0, -n);
        auto rec = detect_circle(1.0 + eps_n);
        if (!rec) {
            fails.push_back(cat("no record at radius ", 1.0 + eps_n));
            continue;
        }
        double d = hausdorff_distance(rec->sample, base->sample);
        expect(fails, d <= eps_n + slack,
               cat("d_H at n=", n, " is ", d, " > containment radius ", eps_n));
        expect(fails, d >= eps_n - slack,
               cat("d_H at n=", n, " is ", d, ", lost the containment radius ", eps_n));
        if (previous > 0)
            expect(fails, d / previous > 0.49 && d / previous < 0.51,
                   cat("halving broken at n=", n, ": ratio ", d / previous));
        previous = d;
    }
}

// ---- criterion 9 -----------------------------------------------------------

void criterion_determinism(Fails& fails) {
    RunConfig cfg;
    cfg.flow = "nested_rings";
    auto artifact_text = [&]() {
        auto res = run_pipeline(make_nested_rings());
        SpaceArtifact a;
        a.space = res.space;
        a.stability = res.stability;
        a.minus_stability = res.minus_stability;
        a.hyper = res.hyper;
        a.diagnostics = res.diagnostics;
        a.confusion = res.confusion;
        a.digest = config_digest(cfg);
        a.generated_at = now_utc_iso8601();
        return artifact_to_json(a);
    };
    auto first = nlohmann::json::parse(artifact_text());
    auto second = nlohmann::json::parse(artifact_text());
    expect(fails, first["generated_at"].is_string(), "missing timestamp header");
    first["generated_at"] = "X";
    second["generated_at"] = "X";
    expect(fails, first.dump(2) == second.dump(2),
           "artifacts differ beyond the timestamp header");
}

struct Criterion {
    int number;
    const char* title;
    double budget_seconds;
    std::function<void(Fails&)> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "hausdorff kernel oracle equivalence", 60, criterion_hausdorff_oracle},
        {2, "nested rings end to end", 180, criterion_nested_end_to_end},
        {3, "pendulum on the cylinder", 180, criterion_pendulum},
        {4, "three shear-flow regimes", 300, criterion_vlambda},
        {5, "hopf fibration", 180, criterion_hopf},
        {6, "north-south gradient flow", 60, criterion_north_south},
        {7, "limit-set continuity and escaping orbits", 120, criterion_limit_continuity},
        {8, "halving containment radii", 60, criterion_containment_radii},
        {9, "artifact determinism", 360, criterion_determinism},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Fails fails;
        try {
            c.run(fails);
        } catch (const std::exception& e) {
            fails.push_back(cat("unexpected exception: ", e.what()));
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_seconds)
            fails.push_back(cat("over the ", c.budget_seconds, "s budget"));
        std::printf("criterion %d (%s): %s (%.1fs)\n", c.number, c.title,
                    fails.empty() ? "PASS" : "FAIL", secs);
        for (const auto& f : fails) std::printf("    - %s\n", f.c_str());
        if (!fails.empty()) ++failed;
    }
    if (failed)
        std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    else
        std::printf("all %zu criteria passed\n", criteria.size());
    return failed ? 1 : 0;
}
