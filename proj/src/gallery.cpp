#include "cminlab/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cminlab {

const char* to_string(Basis b) {
    switch (b) {
    case Basis::Reported: return "reported";
    case Basis::Elementary: return "elementary";
    case Basis::OracleDerived: return "oracle-derived";
    }
    return "reported";
}

namespace {

const double pi = std::acos(-1.0);
const double golden_rate = 0.5 * (std::sqrt(5.0) - 1.0);

double vlambda_rate(const VLambdaParams& p, double s) {
    switch (p.kind) {
    case VLambdaParams::Kind::ConstRational: return p.p / p.q;
    case VLambdaParams::Kind::ConstGolden: return golden_rate;
    case VLambdaParams::Kind::Identity: return s;
    }
    return 0;
}

Vec rotate_pair(const Vec& x, double a, double b) {
    // Rotate (x0,x1) by angle a and (x2,x3) by angle b.
    double ca = std::cos(a), sa = std::sin(a);
    double cb = std::cos(b), sb = std::sin(b);
    return {ca * x[0] - sa * x[1], sa * x[0] + ca * x[1],
            cb * x[2] - sb * x[3], sb * x[2] + cb * x[3]};
}

}  // namespace

GalleryEntry make_pendulum() {
    GalleryEntry e;
    e.name = "pendulum";
    e.flow.space = PhaseSpace::cylinder({1.0, 0.0}, "pendulum-cylinder");
    e.flow.kind = FlowKind::VectorField;
    e.flow.name = "pendulum";
    e.flow.field = [](const Vec& x) { return Vec{x[1], -std::sin(2.0 * pi * x[0])}; };

    // 16 x 33 grid: covers both rest points exactly (x = -1/2 saddle, x = 0
    // bottom) and rotation bands on both sides of the separatrix.
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j <= 32; ++j)
            e.seed_grid.push_back({-0.5 + i / 16.0, -1.2 + 0.075 * j});

    e.harvest.detect.limit = {20, 60, 0.02, 0.05};
    // Below the smallest libration loop's 0.075 amplitude, so the centre
    // equilibrium keeps its own record instead of merging into that loop.
    e.harvest.dedup_eps = 0.06;

    e.stability.radii = {0.05, 0.032, 0.02};
    e.stability.kappa = 3.0;
    e.stability.horizon = 40;
    e.stability.monitor_dt = 0.05;
    e.hyper_radius = 0.15;

    e.scan_scales = {{0.8, {0.4, 0.2}}, {1.2, {0.6, 0.3}}};

    e.recurrence.seeds = e.seed_grid;
    e.recurrence.horizon = 60;
    e.recurrence.delta = 1e-3;
    e.recurrence.scan_dt = 0.02;

    e.expected = {
        {"lower-equilibrium-stable",
         "the rest point at the bottom of the well tests stable-at-scale", Basis::Reported},
        {"saddle-unstable",
         "the hilltop rest point tests unstable-witnessed with a finest-shell witness",
         Basis::Reported},
        {"hyper-stable-components",
         "hyper-stable records split into exactly 3 chain components at twice their mesh",
         Basis::Reported},
        {"recurrent-fraction",
         "at least 95% of grid seeds return within 1e-3 (every orbit is periodic)",
         Basis::OracleDerived},
        {"two-sided-agreement",
         "forward and time-reversed stability verdicts agree in kind on every record",
         Basis::Reported},
    };
    return e;
}

GalleryEntry make_vlambda(const VLambdaParams& params) {
    GalleryEntry e;
    const VLambdaParams pr = params;
    switch (pr.kind) {
    case VLambdaParams::Kind::ConstRational:
        e.name = (pr.p == 1 && pr.q == 2) ? "v_lambda_half" : "v_lambda_rational";
        {
            std::ostringstream os;
            os << "{\"lambda\":\"rational\",\"p\":" << pr.p << ",\"q\":" << pr.q << "}";
            e.flow_params_json = os.str();
        }
        break;
    case VLambdaParams::Kind::ConstGolden:
        e.name = "v_lambda_golden";
        e.flow_params_json = "{\"lambda\":\"golden\"}";
        break;
    case VLambdaParams::Kind::Identity:
        e.name = "v_lambda_identity";
        e.flow_params_json = "{\"lambda\":\"identity\"}";
        break;
    }
    e.flow.space = PhaseSpace::solid_torus();
    e.flow.kind = FlowKind::ClosedForm;
    e.flow.name = e.name;
    // (z1, z2) -> (e^{it} z1, e^{it lambda(|z2|^2)} z2); |z2| is invariant, so
    // evaluating the rate at the start point is exact.
    e.flow.flow_map = [pr](double t, const Vec& x) {
        double s = x[2] * x[2] + x[3] * x[3];
        return rotate_pair(x, t, vlambda_rate(pr, s) * t);
    };

    if (pr.kind == VLambdaParams::Kind::Identity) {
        // Levels 1/3, 1/2, 2/3 of the shear rate are planted deliberately:
        // their orbits close up and every neighbouring level drifts past them.
        for (double mu : {0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90})
            e.seed_grid.push_back({1, 0, mu, 0});
        for (double s : {1.0 / 3.0, 0.5, 2.0 / 3.0})
            e.seed_grid.push_back({1, 0, std::sqrt(s), 0});
        e.harvest.detect.limit = {20, 800, 0.02, 0.05};
    } else if (pr.kind == VLambdaParams::Kind::ConstGolden) {
        for (int k = 0; k <= 9; ++k)
            e.seed_grid.push_back({1, 0, 0.1 * k, 0});
        e.harvest.detect.limit = {20, 800, 0.02, 0.05};
    } else {
        for (double mu : {0.0, 0.15, 0.30, 0.45, 0.60, 0.75, 0.90})
            for (double phase : {0.0, 0.25 * pi, 0.5 * pi, 0.75 * pi})
                e.seed_grid.push_back({1, 0, mu * std::cos(phase), mu * std::sin(phase)});
        e.harvest.detect.limit = {10, 120, 0.02, 0.05};
    }
    e.harvest.dedup_eps = 0.03;

    e.stability.radii = {0.1, 0.05, 0.025};
    e.stability.kappa = 2.0;
    // Long horizon on purpose: near a planted level the shear rate scales with
    // the level offset, and the slowest admissible probes need a few hundred
    // time units to drift a visible angle. Closed-form stepping keeps it cheap.
    e.stability.horizon = 240;
    e.stability.monitor_dt = 0.1;
    e.hyper_radius = 0.1;

    switch (pr.kind) {
    case VLambdaParams::Kind::ConstRational:
        e.scan_scales = {{0.6, {0.3, 0.2}}, {1.0, {0.5, 0.25}}};
        e.expected = {
            {"all-periodic", "every record is a closed orbit", Basis::Elementary},
            {"periods-exact",
             "the core closes after one turn, every knot after two (1e-5 tolerance)",
             Basis::Elementary},
            {"all-stable", "a rigid rotation cannot move probes away from any orbit",
             Basis::Reported},
            {"single-component", "records chain into one component at twice the mesh",
             Basis::Reported},
            {"all-hyper-stable", "no unstable record exists to offend any neighbourhood",
             Basis::Reported},
            {"no-prediction", "the topology scan finds local connectedness everywhere",
             Basis::Reported},
            {"modulus-invariant", "|z1| and |z2| are exactly invariant under the closed form",
             Basis::Elementary},
        };
        break;
    case VLambdaParams::Kind::ConstGolden:
        e.scan_scales = {{0.6, {0.3, 0.15}}};
        e.expected = {
            {"all-stable", "the flow is an isometry, so every record tests stable-at-scale",
             Basis::Reported},
            {"single-component", "core and tori chain along the level into one component",
             Basis::Reported},
            {"all-hyper-stable", "no unstable record exists to offend any neighbourhood",
             Basis::Reported},
            {"core-period", "the core circle closes after one turn (1e-6 tolerance)",
             Basis::Elementary},
            {"lc-everywhere", "the scan reports locally-connected at every record",
             Basis::Reported},
            {"tori-match-oracle",
             "sampled invariant tori sit within 3x resolution of their parametric models",
             Basis::OracleDerived},
            {"estimates-converged", "every record's limit-set estimate converged",
             Basis::Elementary},
        };
        break;
    case VLambdaParams::Kind::Identity:
        e.scan_scales = {{0.2, {0.1, 0.05}}, {0.3, {0.15, 0.075}}};
        e.expected = {
            {"planted-knots-unstable",
             "records at the three planted levels test unstable-witnessed", Basis::Reported},
            {"tori-stable-members",
             "records at non-resonant grid levels test stable-at-scale yet lie in the "
             "closure of the unstable records",
             Basis::Reported},
            {"zero-hyper-stable",
             "no record certifies hyper-stable: an unstable level sits within 0.1 of "
             "every record",
             Basis::Reported},
            {"zero-false-positives",
             "every topology prediction that fires is confirmed by the dynamics",
             Basis::Reported},
            {"knot-inside-closure",
             "a planted knot sits inside the neighbouring torus one-sidedly while "
             "staying far in symmetric distance",
             Basis::Reported},
        };
        break;
    }
    return e;
}

FlowSpec vlambda_integrated(const VLambdaParams& params) {
    const VLambdaParams pr = params;
    FlowSpec f;
    f.space = PhaseSpace::solid_torus();
    f.kind = FlowKind::VectorField;
    f.name = "v_lambda_integrated";
    f.field = [pr](const Vec& x) {
        double s = x[2] * x[2] + x[3] * x[3];
        double w = vlambda_rate(pr, s);
        return Vec{-x[1], x[0], -w * x[3], w * x[2]};
    };
    return f;
}

GalleryEntry make_hopf() {
    GalleryEntry e;
    e.name = "hopf";
    e.flow.space = PhaseSpace::embedded_sphere(3);
    e.flow.kind = FlowKind::ClosedForm;
    e.flow.name = "hopf";
    e.flow.flow_map = [](double t, const Vec& x) { return rotate_pair(x, t, t); };

    // One fiber seed per spiral-lattice point of the base sphere; 220 points
    // keep the covering radius of the fiber family well under 0.3.
    const int n = 220;
    const double golden_angle = pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < n; ++k) {
        double z = 1.0 - (2.0 * k + 1.0) / n;
        double theta = std::acos(std::clamp(z, -1.0, 1.0));
        double phi = golden_angle * k;
        e.seed_grid.push_back({std::cos(0.5 * theta), 0.0,
                               std::sin(0.5 * theta) * std::cos(phi),
                               std::sin(0.5 * theta) * std::sin(phi)});
    }

    e.harvest.detect.limit = {5, 40, 0.02, 0.05};
    e.harvest.dedup_eps = 0.06;

    e.stability.radii = {0.1, 0.05, 0.025};
    e.stability.kappa = 2.0;
    e.stability.horizon = 60;
    e.stability.monitor_dt = 0.1;
    e.hyper_radius = 0.3;

    e.scan_scales = {{0.5, {0.25, 0.17}}, {0.8, {0.4, 0.2}}};

    e.recurrence.seeds = e.seed_grid;
    e.recurrence.horizon = 20.0 * pi;
    e.recurrence.delta = 1e-4;
    e.recurrence.scan_dt = 0.05;

    e.expected = {
        {"all-periodic-2pi", "every fiber record closes after 2*pi within 1e-6",
         Basis::Elementary},
        {"recurrence-complete",
         "every seed (>= 200 of them) returns within 1e-4 over ten turns", Basis::Reported},
        {"all-stable", "the flow is an isometry, so every fiber tests stable-at-scale",
         Basis::Reported},
        {"single-component", "fibers chain into one component at twice the mesh",
         Basis::Reported},
        {"fiber-covering", "20 seeded-random points each lie within 0.3 of some record",
         Basis::OracleDerived},
        {"all-fibers-distinct", "all 220 seeds harvest into 220 separate records",
         Basis::Elementary},
    };
    return e;
}

GalleryEntry make_nested_rings(int resolvable) {
    if (resolvable < 1) throw std::invalid_argument("make_nested_rings: need resolvable >= 1");
    GalleryEntry e;
    e.name = "nested_rings";
    {
        std::ostringstream os;
        os << "{\"resolvable\":" << resolvable << "}";
        e.flow_params_json = os.str();
    }
    e.flow.space = PhaseSpace::euclidean(2);
    e.flow.kind = FlowKind::VectorField;
    e.flow.name = "nested_rings";
    // Radial speed -r^3 sin^2(pi/r), unit angular speed: circles r = 1/n are
    // the periodic rings, everything between them drifts inward.
    e.flow.field = [](const Vec& v) {
        double r2 = v[0] * v[0] + v[1] * v[1];
        double r = std::sqrt(r2);
        double f = (r > 1e-9) ? -r2 * sqr(std::sin(pi / r)) : 0.0;
        return Vec{f * v[0] - v[1], f * v[1] + v[0]};
    };

    // The origin plus two seeds in the basin above each ring up to 1/resolvable.
    e.seed_grid.push_back({0, 0});
    for (int m = 1; m <= resolvable; ++m) {
        double ring = 1.0 / m;
        double gap = (m == 1) ? 0.4 : 1.0 / (m - 1) - ring;
        e.seed_grid.push_back({ring + 0.3 * gap, 0});
        e.seed_grid.push_back({ring + 0.5 * gap, 0});
    }

    // Slow algebraic approach to the rings: a long burn-in keeps the radial
    // bias of the sampled rings inside the 2x-resolution oracle budget.
    e.harvest.detect.limit = {60, 60, 0.001, 0.002};
    e.harvest.dedup_eps = 0.04;

    e.stability.radii = {0.02, 0.0126, 0.008};
    e.stability.kappa = 2.0;  // threshold 0.04, below the narrowest basin gap 0.05
    e.stability.horizon = 60;
    e.stability.monitor_dt = 0.05;
    e.hyper_radius = 0.3;

    e.scan_scales = {{0.28, {0.07, 0.035}}, {0.42, {0.105, 0.0525}}, {0.6, {0.15, 0.075}}};

    e.expected = {
        {"record-count", "harvest resolves the origin plus one record per ring",
         Basis::Elementary},
        {"rings-match-circles",
         "each ring record lies within 2x net resolution of its analytic circle",
         Basis::OracleDerived},
        {"pairwise-gaps", "record distances reproduce |1/n - 1/m| within 5%",
         Basis::OracleDerived},
        {"rings-unstable", "every ring sheds probes into the next basin and is witnessed "
         "unstable", Basis::Reported},
        {"origin-stable", "the origin record tests stable-at-scale", Basis::Reported},
        {"origin-not-lc", "the scan flags the origin's neighbourhood as not locally "
         "connected", Basis::Reported},
        {"prediction-fires", "the instability prediction fires at the origin",
         Basis::Reported},
        {"zero-false-positives", "cross-validation confirms every fired prediction",
         Basis::Reported},
        {"origin-not-attractor",
         "the origin is stable yet not asymptotically stable: nearby orbits settle on "
         "micro-rings instead",
         Basis::Reported},
    };
    return e;
}

GalleryEntry make_north_south() {
    GalleryEntry e;
    e.name = "north_south";
    e.flow.space = PhaseSpace::embedded_sphere(2);
    e.flow.kind = FlowKind::ClosedForm;
    e.flow.name = "north_south";
    // Meridian gradient flow: height obeys dz/dt = 1 - z^2, the horizontal
    // direction is preserved. Closed form via tanh; poles are fixed exactly.
    e.flow.flow_map = [](double t, const Vec& x) {
        double z0 = std::clamp(x[2], -1.0, 1.0);
        if (std::abs(z0) >= 1.0 - 1e-15) return x;
        double c = std::atanh(z0);
        double zt = std::tanh(c + t);
        double scale = std::cosh(c) / std::cosh(c + t);  // = sqrt((1-zt^2)/(1-z0^2))
        return Vec{x[0] * scale, x[1] * scale, zt};
    };

    e.seed_grid.push_back({0, 0, 1});
    e.seed_grid.push_back({0, 0, -1});
    for (double z : {-0.6, 0.0, 0.6}) {
        double rho = std::sqrt(1.0 - z * z);
        for (int k = 0; k < 8; ++k) {
            double a = 2.0 * pi * k / 8;
            e.seed_grid.push_back({rho * std::cos(a), rho * std::sin(a), z});
        }
    }

    e.harvest.detect.limit = {20, 40, 0.02, 0.05};
    e.harvest.dedup_eps = 0.05;

    e.stability.radii = {0.1, 0.063, 0.04};
    e.stability.kappa = 3.0;
    e.stability.horizon = 40;
    e.stability.monitor_dt = 0.05;
    e.hyper_radius = 0.5;

    e.scan_scales = {{0.5, {0.25, 0.125}}};

    for (std::size_t i = 2; i < e.seed_grid.size(); ++i)
        e.recurrence.seeds.push_back(e.seed_grid[i]);
    e.recurrence.horizon = 20;
    e.recurrence.delta = 0.1;
    e.recurrence.scan_dt = 0.05;

    e.expected = {
        {"two-equilibria", "harvest resolves exactly the two poles, both equilibria",
         Basis::Elementary},
        {"north-stable-south-unstable",
         "the sink pole tests stable-at-scale, the source pole unstable-witnessed",
         Basis::Reported},
        {"reversal-flips", "under time reversal the two verdicts swap", Basis::Reported},
        {"north-attractor", "at least 95% of a radius-0.3 basin sample converges to the "
         "sink", Basis::Reported},
        {"south-reversed-attractor", "the source pole attracts under the reversed flow",
         Basis::Reported},
        {"non-recurrent", "no off-pole seed returns: recurrence fraction is exactly 0",
         Basis::Reported},
        {"poles-antipodal", "the two records sit at distance 2 in the record metric",
         Basis::Elementary},
    };
    return e;
}

std::vector<std::string> gallery_names() {
    return {"pendulum", "v_lambda_half", "v_lambda_golden", "v_lambda_identity",
            "hopf",     "nested_rings",  "north_south"};
}

GalleryEntry make_flow(const std::string& name) {
    if (name == "pendulum") return make_pendulum();
    if (name == "v_lambda_half")
        return make_vlambda({VLambdaParams::Kind::ConstRational, 1, 2});
    if (name == "v_lambda_golden") return make_vlambda({VLambdaParams::Kind::ConstGolden});
    if (name == "v_lambda_identity") return make_vlambda({VLambdaParams::Kind::Identity});
    if (name == "hopf") return make_hopf();
    if (name == "nested_rings") return make_nested_rings();
    if (name == "north_south") return make_north_south();
    std::ostringstream os;
    os << "unknown gallery entry '" << name << "'; available:";
    for (const auto& n : gallery_names()) os << " " << n;
    throw std::invalid_argument(os.str());
}

PipelineResult run_pipeline(const GalleryEntry& entry) {
    PipelineResult r;
    r.space = harvest_cmin(entry.flow, entry.seed_grid, entry.harvest);
    r.space.flow_params_json = entry.flow_params_json;

    for (const auto& rec : r.space.records) {
        r.stability.push_back(test_stability(entry.flow, rec, entry.stability));
        r.minus_stability.push_back(test_minus_stability(entry.flow, rec, entry.stability));
    }
    for (std::size_t i = 0; i < r.space.records.size(); ++i)
        r.hyper.push_back(
            classify_hyper_stability(r.space, r.stability, (int)i, entry.hyper_radius));
    if (!entry.scan_scales.empty())
        for (std::size_t i = 0; i < r.space.records.size(); ++i)
            r.diagnostics.push_back(
                local_connectedness_scan(r.space, (int)i, entry.scan_scales));
    r.confusion = crossvalidate(r.space, r.stability, r.diagnostics, entry.hyper_radius);
    if (!entry.recurrence.seeds.empty())
        r.recurrence = recurrence_fraction(entry.flow, entry.recurrence.seeds,
                                           entry.recurrence.horizon, entry.recurrence.delta,
                                           entry.recurrence.scan_dt);
    return r;
}

namespace {

using Checks = std::map<std::string, std::pair<bool, std::string>>;

void put(Checks& c, const std::string& id, bool ok, const std::string& detail) {
    c[id] = {ok, detail};
}

// Record whose sample is Hausdorff-closest to the single point p (within tol),
// for locating equilibrium records; -1 when nothing matches.
int record_matching_point(const PipelineResult& r, const Vec& p, double tol) {
    int best = -1;
    double bd = tol;
    for (const auto& rec : r.space.records) {
        CompactSetSample single{rec.sample.space, {p}, 0.0, true, false, false};
        double d = hausdorff_distance(rec.sample, single);
        if (d < bd) {
            bd = d;
            best = rec.id;
        }
    }
    return best;
}

// Record one of whose originating seeds equals `seed` to machine precision.
int record_with_seed(const PipelineResult& r, const Vec& seed) {
    for (const auto& rec : r.space.records)
        for (const auto& s : rec.seeds) {
            if (s.size() != seed.size()) continue;
            double m = 0;
            for (std::size_t i = 0; i < s.size(); ++i)
                m = std::max(m, std::abs(s[i] - seed[i]));
            if (m < 1e-12) return rec.id;
        }
    return -1;
}

double directed_sup(const CompactSetSample& a, const CompactSetSample& b) {
    NearestIndex bi(b);
    double worst = 0;
    for (const auto& p : a.points)
        worst = std::max(worst, bi.nearest(p, worst, std::numeric_limits<double>::infinity()));
    return worst;
}

CompactSetSample circle_sample(const std::shared_ptr<const PhaseSpace>& space, double radius,
                               double spacing) {
    CompactSetSample s{space, {}, spacing, true, false, false};
    int n = std::max(12, (int)std::ceil(2.0 * pi * radius / spacing));
    for (int k = 0; k < n; ++k) {
        double a = 2.0 * pi * k / n;
        s.points.push_back({radius * std::cos(a), radius * std::sin(a)});
    }
    return s;
}

CompactSetSample torus_level_sample(const std::shared_ptr<const PhaseSpace>& space, double mu,
                                    double spacing) {
    CompactSetSample s{space, {}, spacing, true, false, false};
    int n1 = std::max(12, (int)std::ceil(2.0 * pi / spacing));
    int n2 = std::max(8, (int)std::ceil(2.0 * pi * mu / spacing));
    for (int i = 0; i < n1; ++i) {
        double a = 2.0 * pi * i / n1;
        for (int j = 0; j < n2; ++j) {
            double b = 2.0 * pi * j / n2;
            s.points.push_back({std::cos(a), std::sin(a), mu * std::cos(b), mu * std::sin(b)});
        }
    }
    return s;
}

std::string kinds_summary(const PipelineResult& r) {
    int st = 0, un = 0, ud = 0;
    for (const auto& v : r.stability) {
        if (v.kind == StabilityKind::StableAtScale) ++st;
        if (v.kind == StabilityKind::UnstableWitnessed) ++un;
        if (v.kind == StabilityKind::Undetermined) ++ud;
    }
    std::ostringstream os;
    os << r.space.records.size() << " records: " << st << " stable, " << un << " unstable, "
       << ud << " undetermined";
    return os.str();
}

bool all_stable(const PipelineResult& r) {
    if (r.stability.empty()) return false;
    for (const auto& v : r.stability)
        if (v.kind != StabilityKind::StableAtScale) return false;
    return true;
}

bool all_hyper_stable(const PipelineResult& r) {
    if (r.hyper.empty()) return false;
    for (const auto& h : r.hyper)
        if (h.kind != HyperKind::HyperStableAtScale) return false;
    return true;
}

std::pair<bool, std::string> single_component_check(const PipelineResult& r) {
    std::ostringstream os;
    if (r.space.records.size() < 2) return {false, "fewer than 2 records"};
    double m = r.space.mesh();
    auto dec = epsilon_components(r.space, 2.0 * m);
    os << dec.count << " components at eps = 2 * mesh = " << 2.0 * m;
    return {dec.count == 1, os.str()};
}

void eval_pendulum(const GalleryEntry& e, const PipelineResult& r, Checks& c) {
    int center = record_matching_point(r, {0.0, 0.0}, 0.02);
    int saddle = record_matching_point(r, {-0.5, 0.0}, 0.02);
    {
        std::ostringstream os;
        bool ok = center >= 0 && r.stability[center].kind == StabilityKind::StableAtScale;
        if (center < 0) os << "no record matches the bottom rest point";
        else os << "record " << center << ": " << to_string(r.stability[center].kind);
        put(c, "lower-equilibrium-stable", ok, os.str());
    }
    {
        std::ostringstream os;
        bool ok = saddle >= 0 && r.stability[saddle].kind == StabilityKind::UnstableWitnessed &&
                  r.stability[saddle].witness &&
                  r.stability[saddle].witness->start_dist <=
                      e.stability.radii.back() * (1.0 + 1e-9);
        if (saddle < 0) os << "no record matches the hilltop rest point";
        else {
            os << "record " << saddle << ": " << to_string(r.stability[saddle].kind);
            if (r.stability[saddle].witness)
                os << ", witness from set-distance " << r.stability[saddle].witness->start_dist
                   << " escaped to " << r.stability[saddle].witness->escape_dist;
        }
        put(c, "saddle-unstable", ok, os.str());
    }
    {
        std::vector<int> hs;
        for (std::size_t i = 0; i < r.hyper.size(); ++i)
            if (r.hyper[i].kind == HyperKind::HyperStableAtScale) hs.push_back((int)i);
        std::ostringstream os;
        bool ok = false;
        if (hs.size() < 3) {
            os << "only " << hs.size() << " hyper-stable records";
        } else {
            double m = r.space.mesh(hs);
            auto dec = epsilon_components(r.space, 2.0 * m, hs);
            os << hs.size() << " hyper-stable records, " << dec.count
               << " components at eps = " << 2.0 * m;
            ok = dec.count == 3;
        }
        put(c, "hyper-stable-components", ok, os.str());
    }
    {
        std::ostringstream os;
        os << "fraction " << r.recurrence.fraction << " over " << r.recurrence.counted
           << " seeds";
        put(c, "recurrent-fraction",
            r.recurrence.fraction >= 0.95 && r.recurrence.counted >= 500, os.str());
    }
    {
        bool ok = !r.stability.empty();
        std::ostringstream os;
        for (std::size_t i = 0; i < r.stability.size(); ++i)
            if (r.stability[i].kind != r.minus_stability[i].kind) {
                ok = false;
                os << "record " << i << ": " << to_string(r.stability[i].kind) << " vs "
                   << to_string(r.minus_stability[i].kind) << "; ";
            }
        if (ok) os << "all " << r.stability.size() << " records agree";
        put(c, "two-sided-agreement", ok, os.str());
    }
}

void eval_vlambda_half(const GalleryEntry&, const PipelineResult& r, Checks& c) {
    {
        bool ok = !r.space.records.empty();
        for (const auto& rec : r.space.records)
            if (rec.structure != Structure::Periodic) ok = false;
        put(c, "all-periodic", ok, kinds_summary(r));
    }
    {
        int core = record_with_seed(r, {1, 0, 0, 0});
        bool ok = core >= 0;
        std::ostringstream os;
        for (const auto& rec : r.space.records) {
            if (!rec.period) { ok = false; os << "record " << rec.id << " has no period; "; continue; }
            double want = (rec.id == core) ? 2.0 * pi : 4.0 * pi;
            if (std::abs(*rec.period - want) > 1e-5) {
                ok = false;
                os << "record " << rec.id << " period " << *rec.period << " != " << want << "; ";
            }
        }
        if (ok) os << "core 2*pi, " << r.space.records.size() - 1 << " knots 4*pi";
        put(c, "periods-exact", ok, os.str());
    }
    put(c, "all-stable", all_stable(r), kinds_summary(r));
    {
        auto [ok, detail] = single_component_check(r);
        put(c, "single-component", ok, detail);
    }
    put(c, "all-hyper-stable", all_hyper_stable(r), kinds_summary(r));
    {
        bool ok = !r.confusion.predicted.empty();
        int fired = 0;
        for (bool b : r.confusion.predicted)
            if (b) ++fired;
        std::ostringstream os;
        os << fired << " predictions fired across " << r.confusion.predicted.size()
           << " records";
        put(c, "no-prediction", ok && fired == 0, os.str());
    }
    {
        // Closed-form moduli after a long time, against the start point.
        Vec x{1, 0, 0.6, 0.3};
        AdvanceResult a = advance(make_flow("v_lambda_half").flow, {x, PhaseSpace::solid_torus()},
                                  1000.5);
        double m1 = std::hypot(a.point.coords[0], a.point.coords[1]);
        double m2 = std::hypot(a.point.coords[2], a.point.coords[3]);
        double err = std::max(std::abs(m1 - 1.0), std::abs(m2 - std::hypot(0.6, 0.3)));
        std::ostringstream os;
        os << "max modulus drift " << err << " after t = 1000.5";
        put(c, "modulus-invariant", err <= 1e-12, os.str());
    }
}

void eval_vlambda_golden(const GalleryEntry&, const PipelineResult& r, Checks& c) {
    put(c, "all-stable", all_stable(r), kinds_summary(r));
    {
        auto [ok, detail] = single_component_check(r);
        put(c, "single-component", ok, detail);
    }
    put(c, "all-hyper-stable", all_hyper_stable(r), kinds_summary(r));
    {
        int core = record_with_seed(r, {1, 0, 0, 0});
        bool ok = core >= 0 && r.space.records[core].period &&
                  std::abs(*r.space.records[core].period - 2.0 * pi) <= 1e-6;
        std::ostringstream os;
        if (core < 0) os << "no core record";
        else if (!r.space.records[core].period) os << "core record has no period";
        else os << "core period " << *r.space.records[core].period;
        put(c, "core-period", ok, os.str());
    }
    {
        bool ok = !r.diagnostics.empty();
        std::ostringstream os;
        for (const auto& d : r.diagnostics)
            if (d.verdict != LcVerdict::LcAtAllScales) {
                ok = false;
                os << "record " << d.record_id << ": " << to_string(d.verdict) << "; ";
            }
        if (ok) os << "locally connected at all " << r.diagnostics.size() << " records";
        put(c, "lc-everywhere", ok, os.str());
    }
    {
        bool ok = true;
        std::ostringstream os;
        for (double mu : {0.3, 0.6, 0.9}) {
            int id = record_with_seed(r, {1, 0, mu, 0});
            if (id < 0) { ok = false; os << "no record for level " << mu << "; "; continue; }
            const auto& rec = r.space.records[id];
            double d = hausdorff_distance(rec.sample, torus_level_sample(rec.sample.space, mu, 0.04));
            os << "level " << mu << ": d = " << d << " (3x resolution = "
               << 3.0 * rec.sample.resolution << "); ";
            if (d > 3.0 * rec.sample.resolution) ok = false;
        }
        put(c, "tori-match-oracle", ok, os.str());
    }
    {
        bool ok = !r.space.records.empty();
        for (const auto& rec : r.space.records)
            if (!rec.sample.converged) ok = false;
        put(c, "estimates-converged", ok, kinds_summary(r));
    }
}

void eval_vlambda_identity(const GalleryEntry&, const PipelineResult& r, Checks& c) {
    const double planted[3] = {std::sqrt(1.0 / 3.0), std::sqrt(0.5), std::sqrt(2.0 / 3.0)};
    {
        bool ok = true;
        std::ostringstream os;
        for (double mu : planted) {
            int id = record_with_seed(r, {1, 0, mu, 0});
            if (id < 0) { ok = false; os << "no record at level " << mu << "; "; continue; }
            os << "level " << mu << ": " << to_string(r.stability[id].kind) << "; ";
            if (r.stability[id].kind != StabilityKind::UnstableWitnessed) ok = false;
        }
        put(c, "planted-knots-unstable", ok, os.str());
    }
    {
        bool ok = true;
        std::ostringstream os;
        for (double mu : {0.55, 0.60, 0.65, 0.70, 0.80, 0.85, 0.90}) {
            int id = record_with_seed(r, {1, 0, mu, 0});
            if (id < 0) { ok = false; os << "no record at level " << mu << "; "; continue; }
            bool good = r.stability[id].kind == StabilityKind::StableAtScale &&
                        r.hyper[id].kind == HyperKind::ClHUMember;
            if (!good) {
                ok = false;
                os << "level " << mu << ": " << to_string(r.stability[id].kind) << " / "
                   << to_string(r.hyper[id].kind) << "; ";
            }
        }
        if (ok) os << "7 non-resonant levels all stable-at-scale and members";
        put(c, "tori-stable-members", ok, os.str());
    }
    {
        int hyper = 0;
        for (const auto& h : r.hyper)
            if (h.kind == HyperKind::HyperStableAtScale) ++hyper;
        std::ostringstream os;
        os << hyper << " hyper-stable records of " << r.hyper.size();
        put(c, "zero-hyper-stable", !r.hyper.empty() && hyper == 0, os.str());
    }
    {
        std::ostringstream os;
        os << r.confusion.false_positives << " false positives, " << r.confusion.true_positives
           << " confirmed";
        put(c, "zero-false-positives",
            !r.confusion.predicted.empty() && r.confusion.false_positives == 0, os.str());
    }
    {
        int knot = record_with_seed(r, {1, 0, planted[1], 0});
        int torus = record_with_seed(r, {1, 0, 0.70, 0});
        std::ostringstream os;
        bool ok = false;
        if (knot < 0 || torus < 0) {
            os << "knot or torus record missing";
        } else {
            const auto& ks = r.space.records[knot].sample;
            const auto& ts = r.space.records[torus].sample;
            double one_sided = directed_sup(ks, ts);
            double symmetric = r.space.dmatrix[knot][torus];
            os << "one-sided gap " << one_sided << ", symmetric distance " << symmetric;
            ok = one_sided <= 3.0 * ts.resolution && symmetric > 10.0 * r.space.dedup_eps &&
                 r.stability[knot].kind == StabilityKind::UnstableWitnessed;
        }
        put(c, "knot-inside-closure", ok, os.str());
    }
}

void eval_hopf(const GalleryEntry& e, const PipelineResult& r, Checks& c) {
    {
        bool ok = !r.space.records.empty();
        std::ostringstream os;
        for (const auto& rec : r.space.records) {
            if (rec.structure != Structure::Periodic || !rec.period) { ok = false; break; }
            if (std::abs(*rec.period - 2.0 * pi) > 1e-6) {
                ok = false;
                os << "record " << rec.id << " period " << *rec.period << "; ";
            }
        }
        if (ok) os << "all " << r.space.records.size() << " records close after 2*pi";
        put(c, "all-periodic-2pi", ok, os.str());
    }
    {
        std::ostringstream os;
        os << "fraction " << r.recurrence.fraction << " over " << r.recurrence.counted
           << " seeds at delta = " << e.recurrence.delta;
        put(c, "recurrence-complete",
            r.recurrence.fraction == 1.0 && r.recurrence.counted >= 200, os.str());
    }
    put(c, "all-stable", all_stable(r), kinds_summary(r));
    {
        auto [ok, detail] = single_component_check(r);
        put(c, "single-component", ok, detail);
    }
    {
        std::mt19937_64 rng(20240817);
        std::normal_distribution<double> gauss(0.0, 1.0);
        bool ok = !r.space.records.empty();
        double worst = 0;
        for (int trial = 0; trial < 20; ++trial) {
            Vec p(4);
            double n = 0;
            do {
                for (auto& x : p) x = gauss(rng);
                n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]);
            } while (n < 1e-6);
            for (auto& x : p) x /= n;
            double best = std::numeric_limits<double>::infinity();
            for (const auto& rec : r.space.records)
                best = std::min(best, point_set_distance(p, rec.sample));
            worst = std::max(worst, best);
        }
        std::ostringstream os;
        os << "worst gap over 20 random points: " << worst;
        put(c, "fiber-covering", ok && worst <= 0.3, os.str());
    }
    {
        std::ostringstream os;
        os << r.space.records.size() << " records from " << e.seed_grid.size() << " seeds";
        put(c, "all-fibers-distinct", r.space.records.size() == e.seed_grid.size(), os.str());
    }
}

void eval_nested(const GalleryEntry& e, const PipelineResult& r, Checks& c) {
    int origin = record_matching_point(r, {0, 0}, 0.02);
    std::vector<int> ring(5, -1);  // ring[n] = record id of the circle r = 1/n
    for (int n = 1; n <= 4; ++n) {
        for (const auto& rec : r.space.records) {
            if (rec.id == origin) continue;
            double d = hausdorff_distance(rec.sample,
                                          circle_sample(rec.sample.space, 1.0 / n, 0.0005));
            if (d < 0.02) { ring[n] = rec.id; break; }
        }
    }
    bool rings_found = ring[1] >= 0 && ring[2] >= 0 && ring[3] >= 0 && ring[4] >= 0;
    {
        std::ostringstream os;
        os << r.space.records.size() << " records; origin " << (origin >= 0 ? "found" : "missing")
           << ", rings" << (rings_found ? "" : " not") << " identified";
        put(c, "record-count", r.space.records.size() == 5 && origin >= 0 && rings_found,
            os.str());
    }
    {
        bool ok = rings_found;
        std::ostringstream os;
        double budget = 2.0 * e.harvest.detect.limit.net_eps;
        for (int n = 1; n <= 4 && rings_found; ++n) {
            double d = hausdorff_distance(r.space.records[ring[n]].sample,
                                          circle_sample(r.space.records[ring[n]].sample.space,
                                                        1.0 / n, 0.0005));
            os << "ring " << n << ": d = " << d << "; ";
            if (d >= budget) ok = false;
        }
        os << "budget " << budget;
        put(c, "rings-match-circles", ok, os.str());
    }
    {
        bool ok = rings_found && origin >= 0;
        std::ostringstream os;
        auto level = [&](int id) {  // 1/n for rings, 0 for the origin
            for (int n = 1; n <= 4; ++n)
                if (ring[n] == id) return 1.0 / n;
            return 0.0;
        };
        if (ok) {
            std::vector<int> ids{origin, ring[1], ring[2], ring[3], ring[4]};
            for (std::size_t i = 0; i < ids.size() && ok; ++i)
                for (std::size_t j = i + 1; j < ids.size(); ++j) {
                    double want = std::abs(level(ids[i]) - level(ids[j]));
                    double got = r.space.dmatrix[ids[i]][ids[j]];
                    if (std::abs(got - want) > 0.05 * want) {
                        ok = false;
                        os << "pair (" << ids[i] << "," << ids[j] << "): " << got << " vs "
                           << want << "; ";
                        break;
                    }
                }
        }
        if (ok) os << "all 10 pairwise distances within 5%";
        put(c, "pairwise-gaps", ok, os.str());
    }
    {
        bool ok = rings_found;
        std::ostringstream os;
        for (int n = 1; n <= 4 && rings_found; ++n) {
            os << "ring " << n << ": " << to_string(r.stability[ring[n]].kind) << "; ";
            if (r.stability[ring[n]].kind != StabilityKind::UnstableWitnessed) ok = false;
        }
        put(c, "rings-unstable", ok, os.str());
    }
    {
        std::ostringstream os;
        bool ok = origin >= 0 && r.stability[origin].kind == StabilityKind::StableAtScale;
        if (origin >= 0) os << to_string(r.stability[origin].kind);
        else os << "origin record missing";
        put(c, "origin-stable", ok, os.str());
    }
    {
        std::ostringstream os;
        bool ok = origin >= 0 && (int)r.diagnostics.size() > origin &&
                  r.diagnostics[origin].verdict == LcVerdict::NotLc;
        if (origin >= 0 && (int)r.diagnostics.size() > origin)
            os << to_string(r.diagnostics[origin].verdict);
        else os << "no diagnostic for the origin";
        put(c, "origin-not-lc", ok, os.str());
    }
    {
        std::ostringstream os;
        bool ok = origin >= 0 && origin < (int)r.confusion.predicted.size() &&
                  r.confusion.predicted[origin];
        int fired = 0;
        for (bool b : r.confusion.predicted)
            if (b) ++fired;
        os << fired << " predictions fired";
        put(c, "prediction-fires", ok, os.str());
    }
    {
        std::ostringstream os;
        os << r.confusion.false_positives << " false positives, " << r.confusion.true_positives
           << " confirmed";
        put(c, "zero-false-positives",
            !r.confusion.predicted.empty() && r.confusion.false_positives == 0, os.str());
    }
    {
        std::ostringstream os;
        bool ok = false;
        if (origin >= 0) {
            AttractorParams ap;
            ap.radius = 0.02;
            ap.basin_samples = 20;
            ap.horizon = 60;
            ap.limit = e.harvest.detect.limit;
            AttractorReport rep = test_attractor(e.flow, r.space.records[origin], ap);
            os << (int)rep.converging.size() << "/"
               << (int)(rep.converging.size() + rep.non_converging.size())
               << " basin samples converge";
            ok = rep.result == AttractorReport::Result::No;
        } else {
            os << "origin record missing";
        }
        put(c, "origin-not-attractor", ok, os.str());
    }
}

void eval_north_south(const GalleryEntry& e, const PipelineResult& r, Checks& c) {
    int north = record_matching_point(r, {0, 0, 1}, 0.05);
    int south = record_matching_point(r, {0, 0, -1}, 0.05);
    bool poles = north >= 0 && south >= 0 && north != south;
    {
        bool ok = r.space.records.size() == 2 && poles;
        for (const auto& rec : r.space.records)
            if (rec.structure != Structure::Equilibrium) ok = false;
        std::ostringstream os;
        os << r.space.records.size() << " records";
        put(c, "two-equilibria", ok, os.str());
    }
    {
        bool ok = poles && r.stability[north].kind == StabilityKind::StableAtScale &&
                  r.stability[south].kind == StabilityKind::UnstableWitnessed;
        put(c, "north-stable-south-unstable", ok, poles ? kinds_summary(r) : "poles missing");
    }
    {
        bool ok = poles && r.minus_stability[north].kind == StabilityKind::UnstableWitnessed &&
                  r.minus_stability[south].kind == StabilityKind::StableAtScale;
        put(c, "reversal-flips", ok, "reversed flow swaps the two verdicts");
    }
    AttractorParams ap;
    ap.radius = 0.3;
    ap.basin_samples = 20;
    ap.horizon = 20;
    ap.limit = e.harvest.detect.limit;
    {
        std::ostringstream os;
        bool ok = false;
        if (poles) {
            AttractorReport rep = test_attractor(e.flow, r.space.records[north], ap);
            os << (int)rep.converging.size() << "/" << ap.basin_samples << " converge";
            ok = rep.result == AttractorReport::Result::Yes &&
                 (int)rep.converging.size() >= 19;
        } else {
            os << "poles missing";
        }
        put(c, "north-attractor", ok, os.str());
    }
    {
        std::ostringstream os;
        bool ok = false;
        if (poles) {
            AttractorReport rep = test_attractor(e.flow.reversed(), r.space.records[south], ap);
            os << (int)rep.converging.size() << "/" << ap.basin_samples << " converge";
            ok = rep.result == AttractorReport::Result::Yes;
        } else {
            os << "poles missing";
        }
        put(c, "south-reversed-attractor", ok, os.str());
    }
    {
        std::ostringstream os;
        os << "fraction " << r.recurrence.fraction << " over " << r.recurrence.counted
           << " seeds";
        put(c, "non-recurrent",
            r.recurrence.fraction == 0.0 && r.recurrence.counted == (int)e.recurrence.seeds.size(),
            os.str());
    }
    {
        std::ostringstream os;
        bool ok = false;
        if (poles) {
            double d = r.space.dmatrix[north][south];
            os << "distance " << d;
            ok = std::abs(d - 2.0) <= 1e-6;
        } else {
            os << "poles missing";
        }
        put(c, "poles-antipodal", ok, os.str());
    }
}

}  // namespace

GalleryReport run_expectations(const GalleryEntry& entry, const PipelineResult& result) {
    Checks checks;
    if (entry.name == "pendulum") eval_pendulum(entry, result, checks);
    else if (entry.name == "v_lambda_half") eval_vlambda_half(entry, result, checks);
    else if (entry.name == "v_lambda_golden") eval_vlambda_golden(entry, result, checks);
    else if (entry.name == "v_lambda_identity") eval_vlambda_identity(entry, result, checks);
    else if (entry.name == "hopf") eval_hopf(entry, result, checks);
    else if (entry.name == "nested_rings") eval_nested(entry, result, checks);
    else if (entry.name == "north_south") eval_north_south(entry, result, checks);

    GalleryReport rep;
    rep.entry = entry.name;
    for (const auto& exp : entry.expected) {
        auto it = checks.find(exp.id);
        if (it == checks.end())
            rep.results.push_back({exp, false, "no check implemented for this expectation"});
        else
            rep.results.push_back({exp, it->second.first, it->second.second});
    }
    return rep;
}

GalleryReport run_expectations(const GalleryEntry& entry) {
    return run_expectations(entry, run_pipeline(entry));
}

}  // namespace cminlab
