#pragma once

#include <string>
#include <vector>

#include "cminlab/stability.hpp"

namespace cminlab {

// One epsilon with the (decreasing) delta ladder probed inside it.
struct ScalePair {
    double eps = 0;
    std::vector<double> deltas;
};

// Chain components of the harvested space at one scale: label[i] is the
// lowest record id in i's class, or -1 if i is outside the chosen subset.
struct ComponentDecomposition {
    double eps = 0;
    std::vector<int> label;
    int count = 0;
};

ComponentDecomposition epsilon_components(const CMinSpace& space, double eps);
ComponentDecomposition epsilon_components(const CMinSpace& space, double eps,
                                          const std::vector<int>& subset);

enum class LcVerdict { LcAtAllScales, NotLc, Undetermined };
const char* to_string(LcVerdict v);

struct ScaleDiagnostic {
    double eps = 0;
    double delta = 0;
    bool degenerate = false;       // fewer than 3 records in the eps-ball
    bool locally_connected = false;
    int components_in_ball = 0;
    int ball_size = 0;
};

struct TopologyDiagnostic {
    int record_id = -1;
    std::vector<ScaleDiagnostic> scales;
    LcVerdict verdict = LcVerdict::Undetermined;
};

// Finite local-connectedness proxy at a record: inside each eps-ball, the
// record's delta-chain component must cover everything within eps/2.
// A failure only counts when it persists across two successive finer deltas
// at the same eps — one-off breaks at a single delta are sampling noise.
TopologyDiagnostic local_connectedness_scan(const CMinSpace& space, int record_id,
                                            const std::vector<ScalePair>& scales);

struct Prediction {
    int record_id = -1;
    bool fires = false;  // claims unstable minimal sets in every neighbourhood
    std::string note;
};

// One-directional: not-lc predicts cl_H(U) membership; lc and undetermined
// predict nothing (local connectedness is necessary, not sufficient, for
// hyper-stability).
Prediction predict_instability(const TopologyDiagnostic& diag);

struct DenseScanReport {
    bool fires = false;
    double dense_eps = 0;  // density is checked at the smallest scheduled eps
    std::vector<int> not_lc_records;
    std::vector<TopologyDiagnostic> diagnostics;  // one per record
};

// Global criterion: scan every record; if the not-lc records are eps-dense in
// the whole space, every neighbourhood of every record holds unstable
// minimal sets. Requires at least 10 records to mean anything.
DenseScanReport criterion_dense_scan(const CMinSpace& space,
                                     const std::vector<ScalePair>& scales);

struct ConfusionReport {
    double hyper_radius = 0;
    std::vector<bool> predicted;      // per record: topology fired
    std::vector<HyperVerdict> hyper;  // per record: dynamics' answer
    int true_positives = 0;  // predicted, confirmed cl_H(U)-member, and the record
                             // itself is not unstable — the informative case
    int predicted_self_evident = 0;  // predicted at an unstable-witnessed record,
                                     // which confirms itself trivially
    int false_positives = 0;      // predicted but hyper-stable-at-scale
    int predicted_undetermined = 0;
    int silent_members = 0;       // not predicted, yet cl_H(U)-member (allowed)
    int silent_hyper_stable = 0;
    int silent_undetermined = 0;
    std::vector<std::string> artifact_notes;  // false positives with the scales at fault
};

// Prediction vs. direct classification. False positives cannot come from the
// underlying theory (not-lc really does force unstable neighbours in the full
// space); any that appear are resolution artifacts and get annotated with the
// scales that produced them.
ConfusionReport crossvalidate(const CMinSpace& space,
                              const std::vector<StabilityVerdict>& verdicts,
                              const std::vector<TopologyDiagnostic>& diags,
                              double hyper_radius);

}  // namespace cminlab
