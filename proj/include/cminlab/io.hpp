#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "cminlab/gallery.hpp"

namespace cminlab {

// Everything a run needs beyond the gallery defaults. A value of 0 (or an
// empty vector) means "keep the entry's default"; anything else overrides it.
// The config serializes completely, so a run is reproducible from the file
// alone.
struct RunConfig {
    std::string flow = "nested_rings";
    double abs_tol = 0, rel_tol = 0;
    double dedup_eps = 0;
    std::vector<double> radii;
    double kappa = 0;
    double horizon = 0;
    std::uint64_t rng_seed = 20240817;
    std::vector<ScalePair> scales;
    double hyper_radius = 0;
    std::string out_dir = ".";
};

// Merge the config's overrides into a gallery entry's defaults.
void apply_config(GalleryEntry& entry, const RunConfig& cfg);

std::string config_to_json(const RunConfig& cfg);

// Overwrites only the fields present in the text; used both for config files
// and for layering a config file over flag-provided values (the file wins).
void config_merge_json(RunConfig& cfg, const std::string& text);

// FNV-1a hash of the canonical config serialization (out_dir excluded — it
// does not affect results), as 16 hex digits. Stamped into every output so
// artifacts can be traced to their config.
std::string config_digest(const RunConfig& cfg);

// Raised when an input file does not match the expected layout; `pointer`
// locates the offending field ("/records/3/sample/points").
struct SchemaError : std::runtime_error {
    std::string pointer;
    SchemaError(std::string ptr, const std::string& what)
        : std::runtime_error(what + " at " + ptr), pointer(std::move(ptr)) {}
};

// One annotated space file carries the whole pipeline state: harvest output,
// then (after classify) verdicts, then (after diagnose) topology diagnostics,
// then (after crossvalidate) the confusion report. generated_at is the only
// field allowed to differ between identically-configured runs.
struct SpaceArtifact {
    CMinSpace space;
    std::vector<StabilityVerdict> stability;
    std::vector<StabilityVerdict> minus_stability;
    std::vector<HyperVerdict> hyper;
    std::vector<TopologyDiagnostic> diagnostics;
    std::optional<ConfusionReport> confusion;
    std::string digest;        // config digest of the run that produced it
    std::string generated_at;  // ISO-8601 UTC; isolated timestamp header
};

std::string artifact_to_json(const SpaceArtifact& a);
SpaceArtifact artifact_from_json(const std::string& text);  // throws SchemaError

std::string gallery_report_to_json(const GalleryReport& rep, const std::string& digest,
                                   const std::string& generated_at);

std::string confusion_to_text(const ConfusionReport& r);

// Plot-data exports.
std::string orbit_to_csv(const OrbitSample& orbit);
std::string dmatrix_to_csv(const CMinSpace& space);
std::string components_to_csv(const ComponentDecomposition& dec);

std::string now_utc_iso8601();

// Write via a temp file in the same directory plus rename, so readers never
// observe a half-written artifact.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace cminlab
