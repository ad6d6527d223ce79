#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "cminlab/gallery.hpp"
#include "cminlab/minimal.hpp"
#include "oracles.hpp"

using namespace cminlab;

namespace {

FlowSpec planar_field(std::function<Vec(const Vec&)> f, const std::string& name) {
    FlowSpec spec;
    spec.space = PhaseSpace::euclidean(2);
    spec.kind = FlowKind::VectorField;
    spec.field = std::move(f);
    spec.name = name;
    return spec;
}

}  // namespace

TEST_CASE("zeros of the generator come back as equilibrium records") {
    auto pend = make_flow("pendulum").flow;
    DetectParams p;
    // the hilltop rest point is unstable; its orbit would drift off under
    // integration, so only direct recognition can report the fixed point
    for (Vec seed : {Vec{-0.5, 0.0}, Vec{0.0, 0.0}}) {
        auto out = detect_minimal_set(pend, {seed, pend.space}, p);
        REQUIRE(out.record.has_value());
        CHECK(out.record->structure == Structure::Equilibrium);
        CHECK(!out.record->period.has_value());
        REQUIRE(out.record->sample.size() == 1);
        CHECK(pend.space->distance(out.record->sample.points[0], seed) < 1e-9);
        CHECK(out.record->minimality_score == 1.0);
    }

    // closed-form flows hit the same fast path through the time-1 map
    auto ns = make_flow("north_south").flow;
    auto north = detect_minimal_set(ns, {{0.0, 0.0, 1.0}, ns.space}, p);
    REQUIRE(north.record.has_value());
    CHECK(north.record->structure == Structure::Equilibrium);
}

TEST_CASE("a plain rotation yields a periodic record with period 2 pi") {
    auto rot = planar_field([](const Vec& x) { return Vec{-x[1], x[0]}; }, "rotation");
    DetectParams p;
    auto out = detect_minimal_set(rot, {{1.0, 0.0}, rot.space}, p);
    REQUIRE(out.record.has_value());
    const auto& rec = *out.record;
    CHECK(rec.structure == Structure::Periodic);
    REQUIRE(rec.period.has_value());
    CHECK(std::abs(*rec.period - 2 * oracle::kPi) < 1e-6);
    CHECK(rec.minimality_score >= 0.9);

    auto circle = oracle::circle_sample(rot.space, 1.0, 2000);
    CHECK(oracle::naive_hausdorff(rec.sample, circle) < rec.sample.resolution);
}

TEST_CASE("the smallest pendulum libration loop still classifies as periodic") {
    // amplitude 0.075 puts the whole loop inside the default return gate;
    // the gate has to scale with the sample extent for this to resolve
    auto pend = make_flow("pendulum").flow;
    DetectParams p = make_flow("pendulum").harvest.detect;
    auto out = detect_minimal_set(pend, {{0.0, 0.075}, pend.space}, p);
    REQUIRE(out.record.has_value());
    CHECK(out.record->structure == Structure::Periodic);
    REQUIRE(out.record->period.has_value());
    // small oscillations about the well bottom have period near sqrt(2 pi)
    CHECK(*out.record->period == doctest::Approx(std::sqrt(2 * oracle::kPi)).epsilon(0.01));
}

TEST_CASE("an irrational two-frequency orbit classifies as a torus") {
    VLambdaParams vp;
    vp.kind = VLambdaParams::Kind::ConstGolden;
    auto entry = make_vlambda(vp);
    auto out = detect_minimal_set(entry.flow, {{1.0, 0.0, 0.5, 0.0}, entry.flow.space},
                                  entry.harvest.detect);
    REQUIRE(out.record.has_value());
    CHECK(out.record->structure == Structure::QuasiperiodicTorus);
    CHECK(!out.record->period.has_value());
    CHECK(out.record->sample.converged);
}

TEST_CASE("detection reports escape instead of fabricating a record") {
    auto repel = planar_field([](const Vec& x) { return Vec{x[0], x[1]}; }, "repeller");
    DetectParams p;
    p.limit = {0, 15, 0.05, 0.05};
    auto out = detect_minimal_set(repel, {{1.0, 1.0}, repel.space}, p);
    CHECK(out.escaped);
    CHECK(!out.record.has_value());
}

TEST_CASE("harvest merges duplicate limit sets into one record") {
    auto focus = planar_field([](const Vec& x) { return Vec{-x[0], -x[1]}; }, "focus");
    std::vector<Vec> seeds = {{1, 1}, {-1, 1}, {0.5, -0.5}, {-1, -1}, {2, 0}};
    HarvestParams hp;
    std::vector<HarvestLogEntry> log;
    auto space = harvest_cmin(focus, seeds, hp, &log);

    REQUIRE(space.records.size() == 1);
    CHECK(space.records[0].structure == Structure::Equilibrium);
    CHECK(space.dmatrix == std::vector<std::vector<double>>{{0.0}});
    CHECK(space.flow_name == "focus");
    CHECK(space.mesh() == 0.0);

    REQUIRE(log.size() == seeds.size());
    CHECK(log[0].outcome == HarvestLogEntry::Admitted);
    for (std::size_t i = 1; i < log.size(); ++i) {
        CHECK(log[i].outcome == HarvestLogEntry::Merged);
        CHECK(log[i].record_id == 0);
    }
    // every contributing seed is remembered on the record
    CHECK(space.records[0].seeds.size() == seeds.size());
}

TEST_CASE("harvested records are pairwise separated by the merge distance") {
    auto entry = make_nested_rings(2);  // origin plus the two outermost rings
    auto space = harvest_cmin(entry.flow, entry.seed_grid, entry.harvest);
    REQUIRE(space.records.size() == 3);
    CHECK(space.dedup_eps == entry.harvest.dedup_eps);
    for (std::size_t i = 0; i < space.records.size(); ++i) {
        CHECK(space.records[i].id == (int)i);
        for (std::size_t j = i + 1; j < space.records.size(); ++j) {
            CHECK(space.dmatrix[i][j] >= space.dedup_eps);
            CHECK(space.dmatrix[i][j] == space.dmatrix[j][i]);
        }
        CHECK(space.dmatrix[i][i] == 0.0);
    }
    // ring records track their analytic circles
    int rings = 0;
    for (const auto& rec : space.records) {
        if (rec.structure != Structure::Periodic) continue;
        ++rings;
        double radius = std::hypot(rec.sample.points[0][0], rec.sample.points[0][1]);
        double nominal = (std::abs(radius - 1.0) < 0.25) ? 1.0 : 0.5;
        auto circle = oracle::circle_sample(entry.flow.space, nominal, 4000);
        CHECK(oracle::naive_hausdorff(rec.sample, circle) < 2 * rec.sample.resolution);
    }
    CHECK(rings == 2);
}

TEST_CASE("mesh is the largest nearest-neighbour gap") {
    auto line = PhaseSpace::euclidean(1);
    CMinSpace space;
    space.dedup_eps = 0.1;
    double xs[] = {0.0, 1.0, 3.0};
    for (int i = 0; i < 3; ++i) {
        MinimalSetRecord r;
        r.id = i;
        r.sample = {line, {{xs[i]}}, 0.01, true, false, false};
        r.structure = Structure::Equilibrium;
        r.minimality_score = 1.0;
        space.records.push_back(std::move(r));
    }
    space.dmatrix = {{0, 1, 3}, {1, 0, 2}, {3, 2, 0}};
    CHECK(space.mesh() == 2.0);           // record 2 only has a neighbour at 2
    CHECK(space.mesh({0, 2}) == 3.0);     // dropping the middle widens the gap
    CHECK(space.mesh({1}) == 0.0);
}
