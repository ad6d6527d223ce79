#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cminlab/minimal.hpp"

namespace cminlab {

// A finite stability test cannot decide Lyapunov stability (the definition
// quantifies over all neighbourhoods), so verdicts are three-valued and
// always carry the scales at which they were earned.
enum class StabilityKind { StableAtScale, UnstableWitnessed, Undetermined };
const char* to_string(StabilityKind k);

struct EscapeWitness {
    Vec start;            // shell point the escaping trajectory began at
    double start_dist;    // its set-distance to the record sample
    double escape_time;
    double escape_dist;   // distance from the sample when escape was flagged
};

struct StabilityVerdict {
    StabilityKind kind = StabilityKind::Undetermined;
    std::vector<double> tested_radii;
    double kappa = 0;
    double horizon = 0;
    std::optional<EscapeWitness> witness;
    std::string reason;  // filled for undetermined verdicts
};

struct StabilityParams {
    std::vector<double> radii{0.2, 0.1, 0.05, 0.025};  // decreasing
    double kappa = 3.0;       // escape at distance kappa * radii.front()
    double horizon = 40.0;
    int shell_samples = 20;
    double monitor_dt = 0.1;  // distance-check cadence along each probe
    std::uint64_t rng_seed = 20240817;
    int max_shell_attempts = 4000;  // rejection-sampling budget per radius
};

// Probes shells [r/2, r] around the sample for each radius r. A witness is
// only accepted from the finest shell: an orbit that leaves from a coarse
// shell but whose finer shells all confine says nothing against stability
// of the set itself, so that combination comes back undetermined.
StabilityVerdict test_stability(const FlowSpec& flow, const MinimalSetRecord& rec,
                                const StabilityParams& p);

// Same test on the time-reversed flow.
StabilityVerdict test_minus_stability(const FlowSpec& flow, const MinimalSetRecord& rec,
                                      const StabilityParams& p);

struct AttractorParams {
    double radius = 0.1;
    int basin_samples = 20;
    double horizon = 20.0;  // settle time before the limit-set window opens
    LimitParams limit;
    std::uint64_t rng_seed = 20240817;
    int max_attempts = 4000;
};

struct AttractorReport {
    enum class Result { Yes, No, Undetermined } result = Result::Undetermined;
    std::vector<Vec> converging, non_converging, failed;
    double radius = 0;
};

// Asymptotic-stability check: at least 95% of the sampled ball must have
// omega-estimates within 3x resolution of the record. Only meaningful for
// records already stable-at-scale.
AttractorReport test_attractor(const FlowSpec& flow, const MinimalSetRecord& rec,
                               const AttractorParams& p);

enum class HyperKind { HyperStableAtScale, ClHUMember, Undetermined };
const char* to_string(HyperKind k);

struct HyperVerdict {
    HyperKind kind = HyperKind::Undetermined;
    double radius = 0;
    std::vector<int> offending;  // unstable records meeting B(record, radius)
};

// Hyper-stability at finite scale: does any unstable-witnessed record come
// within `radius` (set-distance, the neighbourhood-intersection form) of the
// record? The record's own verdict participates: an unstable record is its
// own offender, and an undetermined one blocks any hyper-stable claim.
HyperVerdict classify_hyper_stability(const CMinSpace& space,
                                      const std::vector<StabilityVerdict>& verdicts,
                                      int record_id, double radius);

struct RecurrenceReport {
    double fraction = 0;  // recurrent / counted
    int recurrent = 0;
    int counted = 0;  // seeds whose integration survived the horizon
    int failed = 0;
};

// Fraction of seeds x with min over t in [1, horizon] of d(x^t, x) < delta.
// A coarse scan locates the best return; golden-section refinement around it
// recovers closures much tighter than the scan step (needed for delta well
// below speed * scan_dt).
RecurrenceReport recurrence_fraction(const FlowSpec& flow, const std::vector<Vec>& seeds,
                                     double horizon, double delta, double scan_dt = 0.05);

}  // namespace cminlab
