#pragma once

#include <optional>

#include "cminlab/flow.hpp"

namespace cminlab {

enum class Structure { Equilibrium, Periodic, QuasiperiodicTorus, Unresolved };

const char* to_string(Structure s);

struct MinimalSetRecord {
    int id = -1;
    CompactSetSample sample;
    Structure structure = Structure::Unresolved;
    std::optional<double> period;
    double minimality_score = 0;  // fraction of probe orbits that cover the sample
    std::vector<Vec> seeds;       // seeds whose limit estimates produced / merged into this record
};

struct DetectParams {
    LimitParams limit;
    int probe_count = 5;
    double minimality_threshold = 0.9;
    double period_horizon = 120;   // how far the return scan looks
    double period_scan_dt = 0.05;  // coarse return-scan spacing
    double period_accept_eps = 1e-3;  // refined return distance below this counts as closure
    double equilibrium_eps = 1e-8;
};

struct StructureResult {
    Structure structure = Structure::Unresolved;
    std::optional<double> period;
    double refined_return = -1;  // diagnostic: best refined return distance seen
};

/// Tag the geometry of a converged limit-set sample: equilibrium (singleton
/// fixed point), periodic (a sample point returns, refined by interval halving
/// of the return-distance to 1e-8 * period), quasiperiodic-torus (recurrent
/// without closure and pair-correlation dimension near 2), else unresolved.
/// The tag feeds reporting; stability testing never branches on it.
StructureResult classify_structure(const FlowSpec& flow, const CompactSetSample& sample,
                                   const DetectParams& p);

struct DetectOutcome {
    std::optional<MinimalSetRecord> record;
    bool escaped = false;
};

/// Limit-set estimate plus minimality probing: probe points spread over the
/// sample must have forward orbits that re-cover the whole sample within
/// 2 * resolution. Low scores are reported, not errors; harvest filters them.
DetectOutcome detect_minimal_set(const FlowSpec& flow, const PhasePoint& seed,
                                 const DetectParams& p);

/// Finite stand-in for the set of compact minimal subsets of a flow, with the
/// pairwise Hausdorff distances that metrise it.
struct CMinSpace {
    std::vector<MinimalSetRecord> records;
    std::vector<std::vector<double>> dmatrix;  // records.size()^2, symmetric, zero diagonal
    double dedup_eps = 0;
    std::string flow_name;
    std::string flow_params_json = "{}";  // enough to rebuild the flow via the gallery

    /// Largest nearest-neighbour distance among records ("harvest mesh"):
    /// the scale below which the sampling cannot distinguish gaps from holes.
    double mesh() const;
    double mesh(const std::vector<int>& subset) const;
};

struct HarvestParams {
    DetectParams detect;
    double dedup_eps = 0.2;  // records closer than this merge (keep the better score)
};

struct HarvestLogEntry {
    Vec seed;
    enum Outcome { Admitted, Merged, RejectedScore, Escaped, Empty } outcome;
    int record_id = -1;      // admitted/merged target
    double score = 0;
};

/// Sweep the seed grid, detect limit sets, admit records whose minimality
/// score clears the threshold, merge near-duplicates, and assemble the
/// Hausdorff distance matrix. Deterministic in grid order.
CMinSpace harvest_cmin(const FlowSpec& flow, const std::vector<Vec>& seed_grid,
                       const HarvestParams& p, std::vector<HarvestLogEntry>* log = nullptr);

}  // namespace cminlab
