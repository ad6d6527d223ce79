#include "cminlab/io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cminlab {

using nlohmann::json;

namespace {

// ---- enum <-> string ----

std::string chart_name(ChartKind k) {
    switch (k) {
    case ChartKind::Euclidean: return "euclidean";
    case ChartKind::Cylinder: return "cylinder";
    case ChartKind::EmbeddedSphere: return "embedded-sphere";
    case ChartKind::SolidTorus: return "solid-torus";
    }
    return "euclidean";
}

std::string structure_name(Structure s) { return to_string(s); }

Structure structure_from(const std::string& s, const std::string& ptr) {
    if (s == "equilibrium") return Structure::Equilibrium;
    if (s == "periodic") return Structure::Periodic;
    if (s == "quasiperiodic-torus") return Structure::QuasiperiodicTorus;
    if (s == "unresolved") return Structure::Unresolved;
    throw SchemaError(ptr, "unknown structure '" + s + "'");
}

StabilityKind stability_from(const std::string& s, const std::string& ptr) {
    if (s == "stable-at-scale") return StabilityKind::StableAtScale;
    if (s == "unstable-witnessed") return StabilityKind::UnstableWitnessed;
    if (s == "undetermined") return StabilityKind::Undetermined;
    throw SchemaError(ptr, "unknown stability kind '" + s + "'");
}

HyperKind hyper_from(const std::string& s, const std::string& ptr) {
    if (s == "hyper-stable-at-scale") return HyperKind::HyperStableAtScale;
    if (s == "cl_H(U)-member") return HyperKind::ClHUMember;
    if (s == "undetermined") return HyperKind::Undetermined;
    throw SchemaError(ptr, "unknown hyper-stability kind '" + s + "'");
}

LcVerdict lc_from(const std::string& s, const std::string& ptr) {
    if (s == "lc-at-all-scales") return LcVerdict::LcAtAllScales;
    if (s == "not-lc") return LcVerdict::NotLc;
    if (s == "undetermined") return LcVerdict::Undetermined;
    throw SchemaError(ptr, "unknown local-connectedness verdict '" + s + "'");
}

// ---- guarded field access ----

const json& need(const json& j, const char* key, const std::string& ptr) {
    if (!j.is_object()) throw SchemaError(ptr, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(ptr + "/" + key, "missing field");
    return *it;
}

double need_num(const json& j, const char* key, const std::string& ptr) {
    const json& v = need(j, key, ptr);
    if (!v.is_number()) throw SchemaError(ptr + "/" + key, "expected a number");
    return v.get<double>();
}

int need_int(const json& j, const char* key, const std::string& ptr) {
    const json& v = need(j, key, ptr);
    if (!v.is_number_integer()) throw SchemaError(ptr + "/" + key, "expected an integer");
    return v.get<int>();
}

bool need_bool(const json& j, const char* key, const std::string& ptr) {
    const json& v = need(j, key, ptr);
    if (!v.is_boolean()) throw SchemaError(ptr + "/" + key, "expected a boolean");
    return v.get<bool>();
}

std::string need_str(const json& j, const char* key, const std::string& ptr) {
    const json& v = need(j, key, ptr);
    if (!v.is_string()) throw SchemaError(ptr + "/" + key, "expected a string");
    return v.get<std::string>();
}

const json& need_arr(const json& j, const char* key, const std::string& ptr) {
    const json& v = need(j, key, ptr);
    if (!v.is_array()) throw SchemaError(ptr + "/" + key, "expected an array");
    return v;
}

// ---- phase space ----

json space_to_json(const PhaseSpace& s) {
    json j;
    j["chart"] = chart_name(s.kind);
    j["dim"] = s.dim;
    j["name"] = s.name;
    if (s.kind == ChartKind::Cylinder) j["periods"] = s.periods;
    return j;
}

std::shared_ptr<const PhaseSpace> space_from_json(const json& j, const std::string& ptr) {
    std::string chart = need_str(j, "chart", ptr);
    std::string name = need_str(j, "name", ptr);
    if (chart == "euclidean") return PhaseSpace::euclidean(need_int(j, "dim", ptr), name);
    if (chart == "cylinder") {
        const json& p = need_arr(j, "periods", ptr);
        return PhaseSpace::cylinder(p.get<Vec>(), name);
    }
    if (chart == "embedded-sphere")
        return PhaseSpace::embedded_sphere(need_int(j, "dim", ptr), name);
    if (chart == "solid-torus") return PhaseSpace::solid_torus(name);
    throw SchemaError(ptr + "/chart", "unknown chart '" + chart + "'");
}

// ---- samples and records ----

json sample_to_json(const CompactSetSample& s) {
    json j;
    j["space"] = space_to_json(*s.space);
    j["resolution"] = s.resolution;
    j["converged"] = s.converged;
    j["escaped"] = s.escaped;
    j["truncated"] = s.truncated;
    j["points"] = s.points;
    return j;
}

CompactSetSample sample_from_json(const json& j, const std::string& ptr) {
    CompactSetSample s;
    s.space = space_from_json(need(j, "space", ptr), ptr + "/space");
    s.resolution = need_num(j, "resolution", ptr);
    s.converged = need_bool(j, "converged", ptr);
    s.escaped = need_bool(j, "escaped", ptr);
    s.truncated = need_bool(j, "truncated", ptr);
    const json& pts = need_arr(j, "points", ptr);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!pts[i].is_array())
            throw SchemaError(ptr + "/points/" + std::to_string(i), "expected an array");
        s.points.push_back(pts[i].get<Vec>());
        if ((int)s.points.back().size() != s.space->ambient_dim)
            throw SchemaError(ptr + "/points/" + std::to_string(i),
                              "wrong coordinate count for the chart");
    }
    return s;
}

json record_to_json(const MinimalSetRecord& r) {
    json j;
    j["id"] = r.id;
    j["sample"] = sample_to_json(r.sample);
    j["structure"] = structure_name(r.structure);
    j["period"] = r.period ? json(*r.period) : json(nullptr);
    j["minimality_score"] = r.minimality_score;
    j["seeds"] = r.seeds;
    return j;
}

MinimalSetRecord record_from_json(const json& j, const std::string& ptr) {
    MinimalSetRecord r;
    r.id = need_int(j, "id", ptr);
    r.sample = sample_from_json(need(j, "sample", ptr), ptr + "/sample");
    r.structure = structure_from(need_str(j, "structure", ptr), ptr + "/structure");
    const json& p = need(j, "period", ptr);
    if (!p.is_null()) {
        if (!p.is_number()) throw SchemaError(ptr + "/period", "expected a number or null");
        r.period = p.get<double>();
    }
    r.minimality_score = need_num(j, "minimality_score", ptr);
    const json& seeds = need_arr(j, "seeds", ptr);
    for (const auto& s : seeds) r.seeds.push_back(s.get<Vec>());
    return r;
}

json cmin_to_json(const CMinSpace& s) {
    json j;
    j["dedup_eps"] = s.dedup_eps;
    j["flow_name"] = s.flow_name;
    j["flow_params"] = json::parse(s.flow_params_json, nullptr, false).is_discarded()
                           ? json::object()
                           : json::parse(s.flow_params_json);
    j["records"] = json::array();
    for (const auto& r : s.records) j["records"].push_back(record_to_json(r));
    j["dmatrix"] = s.dmatrix;
    return j;
}

CMinSpace cmin_from_json(const json& j, const std::string& ptr) {
    CMinSpace s;
    s.dedup_eps = need_num(j, "dedup_eps", ptr);
    s.flow_name = need_str(j, "flow_name", ptr);
    s.flow_params_json = need(j, "flow_params", ptr).dump();
    const json& recs = need_arr(j, "records", ptr);
    for (std::size_t i = 0; i < recs.size(); ++i)
        s.records.push_back(record_from_json(recs[i], ptr + "/records/" + std::to_string(i)));
    const json& dm = need_arr(j, "dmatrix", ptr);
    if (dm.size() != s.records.size())
        throw SchemaError(ptr + "/dmatrix", "row count does not match records");
    for (std::size_t i = 0; i < dm.size(); ++i) {
        if (!dm[i].is_array() || dm[i].size() != s.records.size())
            throw SchemaError(ptr + "/dmatrix/" + std::to_string(i),
                              "column count does not match records");
        s.dmatrix.push_back(dm[i].get<std::vector<double>>());
    }
    for (std::size_t i = 0; i < s.records.size(); ++i)
        if (s.records[i].id != (int)i)
            throw SchemaError(ptr + "/records/" + std::to_string(i) + "/id",
                              "record ids must be dense and in order");
    return s;
}

// ---- verdicts, diagnostics, confusion ----

json stability_to_json(const StabilityVerdict& v) {
    json j;
    j["kind"] = to_string(v.kind);
    j["tested_radii"] = v.tested_radii;
    j["kappa"] = v.kappa;
    j["horizon"] = v.horizon;
    if (v.witness) {
        json w;
        w["start"] = v.witness->start;
        w["start_dist"] = v.witness->start_dist;
        w["escape_time"] = v.witness->escape_time;
        w["escape_dist"] = v.witness->escape_dist;
        j["witness"] = w;
    } else {
        j["witness"] = nullptr;
    }
    j["reason"] = v.reason;
    return j;
}

StabilityVerdict stability_from_json(const json& j, const std::string& ptr) {
    StabilityVerdict v;
    v.kind = stability_from(need_str(j, "kind", ptr), ptr + "/kind");
    v.tested_radii = need_arr(j, "tested_radii", ptr).get<std::vector<double>>();
    v.kappa = need_num(j, "kappa", ptr);
    v.horizon = need_num(j, "horizon", ptr);
    const json& w = need(j, "witness", ptr);
    if (!w.is_null()) {
        EscapeWitness ew;
        ew.start = need_arr(w, "start", ptr + "/witness").get<Vec>();
        ew.start_dist = need_num(w, "start_dist", ptr + "/witness");
        ew.escape_time = need_num(w, "escape_time", ptr + "/witness");
        ew.escape_dist = need_num(w, "escape_dist", ptr + "/witness");
        v.witness = ew;
    }
    v.reason = need_str(j, "reason", ptr);
    return v;
}

json hyper_to_json(const HyperVerdict& v) {
    json j;
    j["kind"] = to_string(v.kind);
    j["radius"] = v.radius;
    j["offending"] = v.offending;
    return j;
}

HyperVerdict hyper_from_json(const json& j, const std::string& ptr) {
    HyperVerdict v;
    v.kind = hyper_from(need_str(j, "kind", ptr), ptr + "/kind");
    v.radius = need_num(j, "radius", ptr);
    v.offending = need_arr(j, "offending", ptr).get<std::vector<int>>();
    return v;
}

json diag_to_json(const TopologyDiagnostic& d) {
    json j;
    j["record_id"] = d.record_id;
    j["verdict"] = to_string(d.verdict);
    j["scales"] = json::array();
    for (const auto& s : d.scales) {
        json r;
        r["eps"] = s.eps;
        r["delta"] = s.delta;
        r["degenerate"] = s.degenerate;
        r["locally_connected"] = s.locally_connected;
        r["components_in_ball"] = s.components_in_ball;
        r["ball_size"] = s.ball_size;
        j["scales"].push_back(r);
    }
    return j;
}

TopologyDiagnostic diag_from_json(const json& j, const std::string& ptr) {
    TopologyDiagnostic d;
    d.record_id = need_int(j, "record_id", ptr);
    d.verdict = lc_from(need_str(j, "verdict", ptr), ptr + "/verdict");
    const json& scales = need_arr(j, "scales", ptr);
    for (std::size_t i = 0; i < scales.size(); ++i) {
        std::string sp = ptr + "/scales/" + std::to_string(i);
        ScaleDiagnostic s;
        s.eps = need_num(scales[i], "eps", sp);
        s.delta = need_num(scales[i], "delta", sp);
        s.degenerate = need_bool(scales[i], "degenerate", sp);
        s.locally_connected = need_bool(scales[i], "locally_connected", sp);
        s.components_in_ball = need_int(scales[i], "components_in_ball", sp);
        s.ball_size = need_int(scales[i], "ball_size", sp);
        d.scales.push_back(s);
    }
    return d;
}

json confusion_to_json(const ConfusionReport& r) {
    json j;
    j["hyper_radius"] = r.hyper_radius;
    j["predicted"] = r.predicted;
    j["hyper"] = json::array();
    for (const auto& h : r.hyper) j["hyper"].push_back(hyper_to_json(h));
    j["true_positives"] = r.true_positives;
    j["predicted_self_evident"] = r.predicted_self_evident;
    j["false_positives"] = r.false_positives;
    j["predicted_undetermined"] = r.predicted_undetermined;
    j["silent_members"] = r.silent_members;
    j["silent_hyper_stable"] = r.silent_hyper_stable;
    j["silent_undetermined"] = r.silent_undetermined;
    j["artifact_notes"] = r.artifact_notes;
    return j;
}

ConfusionReport confusion_from_json(const json& j, const std::string& ptr) {
    ConfusionReport r;
    r.hyper_radius = need_num(j, "hyper_radius", ptr);
    r.predicted = need_arr(j, "predicted", ptr).get<std::vector<bool>>();
    const json& hy = need_arr(j, "hyper", ptr);
    for (std::size_t i = 0; i < hy.size(); ++i)
        r.hyper.push_back(hyper_from_json(hy[i], ptr + "/hyper/" + std::to_string(i)));
    r.true_positives = need_int(j, "true_positives", ptr);
    r.predicted_self_evident = need_int(j, "predicted_self_evident", ptr);
    r.false_positives = need_int(j, "false_positives", ptr);
    r.predicted_undetermined = need_int(j, "predicted_undetermined", ptr);
    r.silent_members = need_int(j, "silent_members", ptr);
    r.silent_hyper_stable = need_int(j, "silent_hyper_stable", ptr);
    r.silent_undetermined = need_int(j, "silent_undetermined", ptr);
    r.artifact_notes = need_arr(j, "artifact_notes", ptr).get<std::vector<std::string>>();
    return r;
}

json scales_to_json(const std::vector<ScalePair>& scales) {
    json arr = json::array();
    for (const auto& s : scales) {
        json e;
        e["eps"] = s.eps;
        e["deltas"] = s.deltas;
        arr.push_back(e);
    }
    return arr;
}

std::vector<ScalePair> scales_from_json(const json& arr, const std::string& ptr) {
    std::vector<ScalePair> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        std::string sp = ptr + "/" + std::to_string(i);
        ScalePair p;
        p.eps = need_num(arr[i], "eps", sp);
        p.deltas = need_arr(arr[i], "deltas", sp).get<std::vector<double>>();
        out.push_back(p);
    }
    return out;
}

}  // namespace

// ---- config ----

void apply_config(GalleryEntry& entry, const RunConfig& cfg) {
    if (cfg.abs_tol > 0) entry.flow.integ.abs_tol = cfg.abs_tol;
    if (cfg.rel_tol > 0) entry.flow.integ.rel_tol = cfg.rel_tol;
    if (cfg.dedup_eps > 0) entry.harvest.dedup_eps = cfg.dedup_eps;
    if (!cfg.radii.empty()) entry.stability.radii = cfg.radii;
    if (cfg.kappa > 0) entry.stability.kappa = cfg.kappa;
    if (cfg.horizon > 0) entry.stability.horizon = cfg.horizon;
    entry.stability.rng_seed = cfg.rng_seed;
    if (!cfg.scales.empty()) entry.scan_scales = cfg.scales;
    if (cfg.hyper_radius > 0) entry.hyper_radius = cfg.hyper_radius;
}

std::string config_to_json(const RunConfig& cfg) {
    json j;
    j["flow"] = cfg.flow;
    j["abs_tol"] = cfg.abs_tol;
    j["rel_tol"] = cfg.rel_tol;
    j["dedup_eps"] = cfg.dedup_eps;
    j["radii"] = cfg.radii;
    j["kappa"] = cfg.kappa;
    j["horizon"] = cfg.horizon;
    j["rng_seed"] = cfg.rng_seed;
    j["scales"] = scales_to_json(cfg.scales);
    j["hyper_radius"] = cfg.hyper_radius;
    j["out_dir"] = cfg.out_dir;
    return j.dump(2) + "\n";
}

void config_merge_json(RunConfig& cfg, const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw SchemaError("/", "config is not valid JSON");
    if (!j.is_object()) throw SchemaError("/", "config must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k == "flow") cfg.flow = it->get<std::string>();
        else if (k == "abs_tol") cfg.abs_tol = it->get<double>();
        else if (k == "rel_tol") cfg.rel_tol = it->get<double>();
        else if (k == "dedup_eps") cfg.dedup_eps = it->get<double>();
        else if (k == "radii") cfg.radii = it->get<std::vector<double>>();
        else if (k == "kappa") cfg.kappa = it->get<double>();
        else if (k == "horizon") cfg.horizon = it->get<double>();
        else if (k == "rng_seed") cfg.rng_seed = it->get<std::uint64_t>();
        else if (k == "scales") cfg.scales = scales_from_json(*it, "/scales");
        else if (k == "hyper_radius") cfg.hyper_radius = it->get<double>();
        else if (k == "out_dir") cfg.out_dir = it->get<std::string>();
        else throw SchemaError("/" + k, "unknown config field");
    }
}

std::string config_digest(const RunConfig& cfg) {
    // out_dir steers where files land, not what gets computed; the same run
    // written to two directories must carry the same digest
    RunConfig canonical = cfg;
    canonical.out_dir = ".";
    std::string s = config_to_json(canonical);
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

// ---- artifact ----

std::string artifact_to_json(const SpaceArtifact& a) {
    json j;
    j["schema"] = "cminlab-space-v1";
    j["config_digest"] = a.digest;
    j["generated_at"] = a.generated_at;
    j["space"] = cmin_to_json(a.space);
    j["stability"] = json::array();
    for (const auto& v : a.stability) j["stability"].push_back(stability_to_json(v));
    j["minus_stability"] = json::array();
    for (const auto& v : a.minus_stability) j["minus_stability"].push_back(stability_to_json(v));
    j["hyper"] = json::array();
    for (const auto& v : a.hyper) j["hyper"].push_back(hyper_to_json(v));
    j["diagnostics"] = json::array();
    for (const auto& d : a.diagnostics) j["diagnostics"].push_back(diag_to_json(d));
    j["confusion"] = a.confusion ? confusion_to_json(*a.confusion) : json(nullptr);
    return j.dump(2) + "\n";
}

SpaceArtifact artifact_from_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw SchemaError("/", "file is not valid JSON");
    if (need_str(j, "schema", "") != "cminlab-space-v1")
        throw SchemaError("/schema", "unsupported schema");
    SpaceArtifact a;
    a.digest = need_str(j, "config_digest", "");
    a.generated_at = need_str(j, "generated_at", "");
    a.space = cmin_from_json(need(j, "space", ""), "/space");
    const json& st = need_arr(j, "stability", "");
    for (std::size_t i = 0; i < st.size(); ++i)
        a.stability.push_back(stability_from_json(st[i], "/stability/" + std::to_string(i)));
    const json& mst = need_arr(j, "minus_stability", "");
    for (std::size_t i = 0; i < mst.size(); ++i)
        a.minus_stability.push_back(
            stability_from_json(mst[i], "/minus_stability/" + std::to_string(i)));
    const json& hy = need_arr(j, "hyper", "");
    for (std::size_t i = 0; i < hy.size(); ++i)
        a.hyper.push_back(hyper_from_json(hy[i], "/hyper/" + std::to_string(i)));
    const json& dg = need_arr(j, "diagnostics", "");
    for (std::size_t i = 0; i < dg.size(); ++i)
        a.diagnostics.push_back(diag_from_json(dg[i], "/diagnostics/" + std::to_string(i)));
    const json& cf = need(j, "confusion", "");
    if (!cf.is_null()) a.confusion = confusion_from_json(cf, "/confusion");

    auto check_len = [&](std::size_t got, const char* field) {
        if (got != 0 && got != a.space.records.size())
            throw SchemaError(std::string("/") + field, "length does not match records");
    };
    check_len(a.stability.size(), "stability");
    check_len(a.minus_stability.size(), "minus_stability");
    check_len(a.hyper.size(), "hyper");
    check_len(a.diagnostics.size(), "diagnostics");
    return a;
}

std::string gallery_report_to_json(const GalleryReport& rep, const std::string& digest,
                                   const std::string& generated_at) {
    json j;
    j["schema"] = "cminlab-gallery-report-v1";
    j["config_digest"] = digest;
    j["generated_at"] = generated_at;
    j["entry"] = rep.entry;
    j["all_passed"] = rep.all_passed();
    j["results"] = json::array();
    for (const auto& r : rep.results) {
        json e;
        e["id"] = r.expectation.id;
        e["description"] = r.expectation.description;
        e["basis"] = to_string(r.expectation.basis);
        e["passed"] = r.passed;
        e["detail"] = r.detail;
        j["results"].push_back(e);
    }
    return j.dump(2) + "\n";
}

std::string confusion_to_text(const ConfusionReport& r) {
    std::ostringstream os;
    os << "prediction vs dynamics at hyper radius " << r.hyper_radius << "\n";
    os << "record  predicted  dynamics\n";
    for (std::size_t i = 0; i < r.predicted.size(); ++i) {
        std::string dyn = i < r.hyper.size() ? to_string(r.hyper[i].kind) : "?";
        os << i << "\t" << (r.predicted[i] ? "fires" : "-") << "\t" << dyn << "\n";
    }
    os << "true positives: " << r.true_positives << "\n";
    os << "self-evident (record already unstable): " << r.predicted_self_evident << "\n";
    os << "false positives: " << r.false_positives << "\n";
    os << "predicted but undetermined: " << r.predicted_undetermined << "\n";
    os << "silent members: " << r.silent_members << "\n";
    os << "silent hyper-stable: " << r.silent_hyper_stable << "\n";
    os << "silent undetermined: " << r.silent_undetermined << "\n";
    for (const auto& n : r.artifact_notes) os << "note: " << n << "\n";
    return os.str();
}

// ---- CSV ----

std::string orbit_to_csv(const OrbitSample& orbit) {
    std::ostringstream os;
    os.precision(17);
    int dims = orbit.points.empty() ? 0 : (int)orbit.points[0].size();
    os << "t";
    for (int d = 0; d < dims; ++d) os << ",x" << d;
    os << "\n";
    for (std::size_t i = 0; i < orbit.points.size(); ++i) {
        os << orbit.times[i];
        for (double c : orbit.points[i]) os << "," << c;
        os << "\n";
    }
    return os.str();
}

std::string dmatrix_to_csv(const CMinSpace& space) {
    std::ostringstream os;
    os.precision(17);
    os << "id";
    for (std::size_t j = 0; j < space.records.size(); ++j) os << ",r" << j;
    os << "\n";
    for (std::size_t i = 0; i < space.dmatrix.size(); ++i) {
        os << i;
        for (double d : space.dmatrix[i]) os << "," << d;
        os << "\n";
    }
    return os.str();
}

std::string components_to_csv(const ComponentDecomposition& dec) {
    std::ostringstream os;
    os.precision(17);
    os << "record,component\n";
    for (std::size_t i = 0; i < dec.label.size(); ++i)
        os << i << "," << dec.label[i] << "\n";
    return os.str();
}

// ---- files ----

std::string now_utc_iso8601() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace cminlab
