// Command-line front end for the pipeline: harvest -> classify -> diagnose ->
// crossvalidate, plus the curated gallery runner and CSV exports. Every
// command is driven by a RunConfig assembled from flags and (optionally) a
// JSON config file; the file overrides the flags, and the digest of the final
// config is stamped into every artifact written.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cminlab/io.hpp"

using namespace cminlab;

namespace {

struct FlagState {
    RunConfig cfg;
    std::string scales_spec;  // "eps:d1,d2;eps:d1,d2"
    std::string config_path;
};

std::vector<ScalePair> parse_scales(const std::string& spec) {
    std::vector<ScalePair> out;
    std::istringstream groups(spec);
    std::string group;
    while (std::getline(groups, group, ';')) {
        if (group.empty()) continue;
        auto colon = group.find(':');
        if (colon == std::string::npos)
            throw std::runtime_error("bad --scales entry '" + group + "', want eps:d1,d2");
        ScalePair p;
        p.eps = std::stod(group.substr(0, colon));
        std::istringstream ds(group.substr(colon + 1));
        std::string d;
        while (std::getline(ds, d, ',')) p.deltas.push_back(std::stod(d));
        if (p.deltas.empty())
            throw std::runtime_error("bad --scales entry '" + group + "', no deltas");
        out.push_back(p);
    }
    return out;
}

Vec parse_point(const std::string& csv) {
    Vec x;
    std::istringstream ss(csv);
    std::string c;
    while (std::getline(ss, c, ',')) x.push_back(std::stod(c));
    if (x.empty()) throw std::runtime_error("empty --seed");
    return x;
}

void add_run_options(CLI::App* sub, FlagState& st) {
    sub->add_option("--flow", st.cfg.flow, "gallery flow name");
    sub->add_option("--abs-tol", st.cfg.abs_tol, "integrator absolute tolerance override");
    sub->add_option("--rel-tol", st.cfg.rel_tol, "integrator relative tolerance override");
    sub->add_option("--dedup-eps", st.cfg.dedup_eps, "harvest merge distance override");
    sub->add_option("--radii", st.cfg.radii, "stability shell radii, decreasing")
        ->delimiter(',');
    sub->add_option("--kappa", st.cfg.kappa, "escape threshold multiplier override");
    sub->add_option("--horizon", st.cfg.horizon, "stability probe horizon override");
    sub->add_option("--rng-seed", st.cfg.rng_seed, "shell sampling seed");
    sub->add_option("--scales", st.scales_spec,
                    "scan schedule as eps:d1,d2;eps:d1,d2 (overrides the entry's)");
    sub->add_option("--hyper-radius", st.cfg.hyper_radius,
                    "neighbourhood radius for the hyper-stability test");
    sub->add_option("--out-dir", st.cfg.out_dir, "directory for written artifacts");
    sub->add_option("--config", st.config_path,
                    "JSON config file; fields present in it override the flags");
}

// Flags first, then the config file on top: the file wins for any field it
// mentions, so a run is reproducible from the file alone.
void finalize_config(FlagState& st) {
    if (!st.scales_spec.empty()) st.cfg.scales = parse_scales(st.scales_spec);
    if (!st.config_path.empty()) config_merge_json(st.cfg, read_file(st.config_path));
}

std::string out_path(const RunConfig& cfg, const std::string& stem) {
    return (std::filesystem::path(cfg.out_dir) / stem).string();
}

SpaceArtifact load_artifact(const std::string& path) {
    return artifact_from_json(read_file(path));
}

void stamp(SpaceArtifact& a, RunConfig cfg) {
    cfg.flow = a.space.flow_name;  // digest should name the flow actually run
    a.digest = config_digest(cfg);
    a.generated_at = now_utc_iso8601();
}

int cmd_harvest(const RunConfig& cfg) {
    GalleryEntry entry = make_flow(cfg.flow);
    apply_config(entry, cfg);
    SpaceArtifact a;
    a.space = harvest_cmin(entry.flow, entry.seed_grid, entry.harvest);
    a.space.flow_params_json = entry.flow_params_json;
    stamp(a, cfg);
    std::string path = out_path(cfg, cfg.flow + "_space.json");
    write_file_atomic(path, artifact_to_json(a));
    std::cout << cfg.flow << ": " << a.space.records.size() << " records, mesh "
              << a.space.mesh() << "\n";
    for (const auto& r : a.space.records)
        std::cout << "  record " << r.id << ": " << to_string(r.structure) << ", "
                  << r.sample.size() << " points, score " << r.minimality_score << "\n";
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_classify(const RunConfig& cfg, const std::string& in, std::string out) {
    SpaceArtifact a = load_artifact(in);
    GalleryEntry entry = make_flow(a.space.flow_name);
    apply_config(entry, cfg);
    a.stability.clear();
    a.minus_stability.clear();
    a.hyper.clear();
    for (const auto& rec : a.space.records) {
        a.stability.push_back(test_stability(entry.flow, rec, entry.stability));
        a.minus_stability.push_back(test_minus_stability(entry.flow, rec, entry.stability));
    }
    for (const auto& rec : a.space.records)
        a.hyper.push_back(
            classify_hyper_stability(a.space, a.stability, rec.id, entry.hyper_radius));
    stamp(a, cfg);
    if (out.empty()) out = out_path(cfg, a.space.flow_name + "_classified.json");
    write_file_atomic(out, artifact_to_json(a));
    for (const auto& rec : a.space.records)
        std::cout << "record " << rec.id << ": " << to_string(a.stability[rec.id].kind)
                  << " / reversed " << to_string(a.minus_stability[rec.id].kind) << " / "
                  << to_string(a.hyper[rec.id].kind) << "\n";
    std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_diagnose(const RunConfig& cfg, const std::string& in, std::string out) {
    SpaceArtifact a = load_artifact(in);
    GalleryEntry entry = make_flow(a.space.flow_name);
    apply_config(entry, cfg);
    if (a.space.records.size() < 3)
        std::cerr << "warning: " << a.space.records.size()
                  << " record(s) cannot fill any scan ball; every verdict will be "
                     "undetermined\n";
    a.diagnostics.clear();
    for (const auto& rec : a.space.records)
        a.diagnostics.push_back(
            local_connectedness_scan(a.space, rec.id, entry.scan_scales));
    stamp(a, cfg);
    if (out.empty()) out = out_path(cfg, a.space.flow_name + "_diagnosed.json");
    write_file_atomic(out, artifact_to_json(a));
    for (const auto& d : a.diagnostics)
        std::cout << "record " << d.record_id << ": " << to_string(d.verdict) << "\n";
    std::cout << "wrote " << out << "\n";
    return 0;
}

// Accepts the union of classify and diagnose outputs: either one file that
// went through both, or the two separate files (any order), merged here.
int cmd_crossvalidate(const RunConfig& cfg, const std::vector<std::string>& ins,
                      std::string out) {
    SpaceArtifact a = load_artifact(ins[0]);
    for (std::size_t i = 1; i < ins.size(); ++i) {
        SpaceArtifact b = load_artifact(ins[i]);
        if (b.space.flow_name != a.space.flow_name ||
            b.space.records.size() != a.space.records.size())
            throw std::runtime_error(ins[i] + " describes a different space than " + ins[0]);
        if (a.stability.empty()) a.stability = std::move(b.stability);
        if (a.minus_stability.empty()) a.minus_stability = std::move(b.minus_stability);
        if (a.hyper.empty()) a.hyper = std::move(b.hyper);
        if (a.diagnostics.empty()) a.diagnostics = std::move(b.diagnostics);
    }
    if (a.stability.empty())
        throw std::runtime_error("no stability verdicts: run classify first");
    if (a.diagnostics.empty())
        throw std::runtime_error("no topology diagnostics: run diagnose first");
    GalleryEntry entry = make_flow(a.space.flow_name);
    apply_config(entry, cfg);
    ConfusionReport rep =
        crossvalidate(a.space, a.stability, a.diagnostics, entry.hyper_radius);
    a.confusion = rep;
    if (a.hyper.empty()) a.hyper = rep.hyper;
    stamp(a, cfg);
    if (out.empty()) out = out_path(cfg, a.space.flow_name + "_crossvalidated.json");
    write_file_atomic(out, artifact_to_json(a));
    std::cout << confusion_to_text(rep);
    std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_gallery_run(const RunConfig& cfg, const std::vector<std::string>& names) {
    int passed_entries = 0;
    for (const auto& name : names) {
        GalleryEntry entry = make_flow(name);
        apply_config(entry, cfg);
        GalleryReport rep = run_expectations(entry);
        std::cout << name << ":\n";
        for (const auto& r : rep.results)
            std::cout << "  [" << (r.passed ? "ok" : "FAIL") << "] " << r.expectation.id
                      << (r.detail.empty() ? "" : " — " + r.detail) << "\n";
        RunConfig stamped = cfg;
        stamped.flow = name;
        write_file_atomic(out_path(cfg, name + "_report.json"),
                          gallery_report_to_json(rep, config_digest(stamped),
                                                 now_utc_iso8601()));
        if (rep.all_passed()) ++passed_entries;
    }
    std::cout << "gallery: " << passed_entries << "/" << names.size()
              << " entries passed\n";
    return passed_entries == (int)names.size() ? 0 : 1;
}

int cmd_orbit(const RunConfig& cfg, const std::string& seed_csv, double horizon,
              double dt, const std::string& out) {
    GalleryEntry entry = make_flow(cfg.flow);
    apply_config(entry, cfg);
    Vec seed = entry.flow.space->project(parse_point(seed_csv));
    OrbitSample orbit =
        orbit_sample(entry.flow, PhasePoint{seed, entry.flow.space}, horizon, dt);
    std::string csv = orbit_to_csv(orbit);
    if (out.empty())
        std::cout << csv;
    else {
        write_file_atomic(out, csv);
        std::cout << "wrote " << out << "\n";
    }
    return 0;
}

int cmd_export(const std::string& what, const std::string& in, double eps,
               const std::string& out) {
    SpaceArtifact a = load_artifact(in);
    std::string text;
    if (what == "dmatrix") {
        text = dmatrix_to_csv(a.space);
    } else if (what == "components") {
        double e = eps > 0 ? eps : 2 * a.space.mesh();
        text = components_to_csv(epsilon_components(a.space, e));
    } else {
        throw std::runtime_error("unknown export kind '" + what +
                                 "' (want dmatrix or components)");
    }
    if (out.empty())
        std::cout << text;
    else {
        write_file_atomic(out, text);
        std::cout << "wrote " << out << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"harvests compact minimal sets of a flow, classifies their stability, "
                 "and cross-validates topology-based instability predictions"};
    app.require_subcommand(1);

    FlagState st;

    auto* harvest = app.add_subcommand(
        "harvest", "seed-grid sweep producing the minimal-set space artifact");
    add_run_options(harvest, st);

    std::string in_file, out_file;
    auto* classify = app.add_subcommand(
        "classify", "stability verdicts (both time directions) for a harvested space");
    classify->add_option("--in", in_file, "space artifact to read")->required();
    classify->add_option("--out", out_file, "output path (never overwrites the input)");
    add_run_options(classify, st);

    auto* diagnose = app.add_subcommand(
        "diagnose", "local-connectedness scan over a harvested space");
    diagnose->add_option("--in", in_file, "space artifact to read")->required();
    diagnose->add_option("--out", out_file, "output path (never overwrites the input)");
    add_run_options(diagnose, st);

    std::vector<std::string> in_files;
    auto* crossval = app.add_subcommand(
        "crossvalidate", "confront topology predictions with stability verdicts");
    crossval->add_option("--in", in_files, "classified and diagnosed artifacts (1 or 2)")
        ->required()
        ->expected(1, 2);
    crossval->add_option("--out", out_file, "output path");
    add_run_options(crossval, st);

    auto* gallery = app.add_subcommand("gallery", "curated flows with frozen expectations");
    gallery->require_subcommand(1);
    auto* glist = gallery->add_subcommand("list", "print the available flow names");
    auto* grun = gallery->add_subcommand("run", "run the pipeline and check expectations");
    std::string gname;
    bool gall = false;
    grun->add_option("name", gname, "flow to run");
    grun->add_flag("--all", gall, "run every gallery entry");
    add_run_options(grun, st);

    std::string seed_csv, orbit_out;
    double orbit_horizon = 20, orbit_dt = 0.05;
    auto* orbit = app.add_subcommand("orbit", "sample one orbit to CSV");
    orbit->add_option("--seed", seed_csv, "start point as comma-separated coordinates")
        ->required();
    orbit->add_option("--horizon", orbit_horizon, "integration time");
    orbit->add_option("--dt", orbit_dt, "sample spacing");
    orbit->add_option("--out", orbit_out, "CSV path (default: stdout)");
    orbit->add_option("--flow", st.cfg.flow, "gallery flow name");
    orbit->add_option("--abs-tol", st.cfg.abs_tol, "integrator absolute tolerance override");
    orbit->add_option("--rel-tol", st.cfg.rel_tol, "integrator relative tolerance override");

    std::string export_what, export_in, export_out;
    double export_eps = 0;
    auto* exp = app.add_subcommand("export", "CSV views of a space artifact");
    exp->add_option("what", export_what, "dmatrix or components")->required();
    exp->add_option("--in", export_in, "space artifact to read")->required();
    exp->add_option("--eps", export_eps, "component scale (default: 2x mesh)");
    exp->add_option("--out", export_out, "CSV path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        finalize_config(st);
        if (harvest->parsed()) return cmd_harvest(st.cfg);
        if (classify->parsed()) return cmd_classify(st.cfg, in_file, out_file);
        if (diagnose->parsed()) return cmd_diagnose(st.cfg, in_file, out_file);
        if (crossval->parsed()) return cmd_crossvalidate(st.cfg, in_files, out_file);
        if (gallery->parsed()) {
            if (glist->parsed()) {
                for (const auto& n : gallery_names()) std::cout << n << "\n";
                return 0;
            }
            if (grun->parsed()) {
                if (gall == gname.empty())
                    // exactly one of --all / name, and --all means no name
                    return cmd_gallery_run(st.cfg, gall ? gallery_names()
                                                        : std::vector<std::string>{gname});
                std::cerr << "error: give a flow name or --all (not both)\n";
                return 1;
            }
        }
        if (orbit->parsed())
            return cmd_orbit(st.cfg, seed_csv, orbit_horizon, orbit_dt, orbit_out);
        if (exp->parsed()) return cmd_export(export_what, export_in, export_eps, export_out);
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
