#pragma once

#include <string>
#include <vector>

#include "cminlab/topology.hpp"

namespace cminlab {

// Where an expected outcome comes from: a result reported for this standard
// example in the literature, something elementary from the construction
// itself, or a value derived from an independent oracle (and frozen into the
// tests next to that oracle).
enum class Basis { Reported, Elementary, OracleDerived };
const char* to_string(Basis b);

struct Expectation {
    std::string id;  // stable key the runner matches on, e.g. "rings-unstable"
    std::string description;
    Basis basis = Basis::Reported;
};

struct RecurrenceSpec {
    std::vector<Vec> seeds;
    double horizon = 40;
    double delta = 1e-3;
    double scan_dt = 0.05;
};

// A gallery flow with every parameter of its default run frozen: the seed
// grid, harvest/stability/topology scales, and the outcomes the run is
// expected to reproduce. Reproducibility of the expectations from exactly
// these parameters is part of the contract.
struct GalleryEntry {
    std::string name;
    FlowSpec flow;
    std::string flow_params_json = "{}";
    std::vector<Vec> seed_grid;
    HarvestParams harvest;
    StabilityParams stability;
    double hyper_radius = 0.3;
    std::vector<ScalePair> scan_scales;
    RecurrenceSpec recurrence;
    std::vector<Expectation> expected;
};

struct VLambdaParams {
    enum class Kind { ConstRational, ConstGolden, Identity } kind = Kind::ConstRational;
    // Rotation rate of the z2 factor for ConstRational, as p/q.
    double p = 1, q = 2;
};

GalleryEntry make_pendulum();
GalleryEntry make_vlambda(const VLambdaParams& params);
GalleryEntry make_hopf();
GalleryEntry make_nested_rings(int resolvable = 4);
GalleryEntry make_north_south();

// Name-based lookup for the CLI: pendulum, v_lambda_half, v_lambda_golden,
// v_lambda_identity, hopf, nested_rings, north_south. Unknown names raise
// with the list of available entries.
GalleryEntry make_flow(const std::string& name);
std::vector<std::string> gallery_names();

// The v_lambda field realization (as opposed to the closed-form default);
// only used to check that the integrated orbits conserve |z1|, |z2|.
FlowSpec vlambda_integrated(const VLambdaParams& params);

// Everything one default run produces, stage by stage.
struct PipelineResult {
    CMinSpace space;
    std::vector<StabilityVerdict> stability;
    std::vector<StabilityVerdict> minus_stability;
    std::vector<HyperVerdict> hyper;
    std::vector<TopologyDiagnostic> diagnostics;
    ConfusionReport confusion;
    RecurrenceReport recurrence;
};

PipelineResult run_pipeline(const GalleryEntry& entry);

struct ExpectationResult {
    Expectation expectation;
    bool passed = false;
    std::string detail;
};

struct GalleryReport {
    std::string entry;
    std::vector<ExpectationResult> results;
    bool all_passed() const {
        for (const auto& r : results)
            if (!r.passed) return false;
        return !results.empty();
    }
};

// Runs the default pipeline and checks every expectation the entry declares.
// Individual failures are collected in the report, never thrown.
GalleryReport run_expectations(const GalleryEntry& entry);
GalleryReport run_expectations(const GalleryEntry& entry, const PipelineResult& result);

}  // namespace cminlab
