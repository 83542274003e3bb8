// cellclean: command-line front end for the cell-observation cleaning pipeline.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "cellclean/config.hpp"
#include "cellclean/export.hpp"
#include "cellclean/pipeline.hpp"
#include "cellclean/synth.hpp"

namespace fs = std::filesystem;
using namespace cellclean;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kIoFailure = 2, kFormatFailure = 3 };

// Pipeline settings as given on the command line. Only options that were
// actually passed override the config file.
struct SharedFlags {
    std::string config;
    std::size_t min_cluster_size = 0;
    double prune_km = 0.0;
    double window_s = 0.0;
    std::string metric;
    std::string celldb, observations, cellnames, out_dir, tag_source;
    bool keep_insufficient = false;
    unsigned threads = 1;

    std::vector<std::pair<std::string, CLI::Option*>> opts;

    void attach(CLI::App& app) {
        app.add_option("--config", config, "Flat key = value configuration file")->check(CLI::ExistingFile);
        opts = {
            {"min_cluster_size", app.add_option("--min-cluster-size", min_cluster_size, "Smallest LAC that is clustered")},
            {"prune_km", app.add_option("--prune-km", prune_km, "Single-linkage cut distance in km")},
            {"osc_window_s", app.add_option("--window-s", window_s, "Oscillation window in seconds")},
            {"metric", app.add_option("--metric", metric, "degrees | geodesic-meters")},
            {"celldb_path", app.add_option("--celldb", celldb, "OpenCellID-format cell database CSV")},
            {"observations_path", app.add_option("--observations", observations, "Observation log CSV")},
            {"cellnames_path", app.add_option("--cellnames", cellnames, "Semantic tag table CSV")},
            {"out_dir", app.add_option("--out-dir", out_dir, "Output directory")},
            {"keep_insufficient_lacs", app.add_flag("--keep-insufficient-lacs", keep_insufficient,
                                                     "Keep cells of LACs below the minimum size")},
            {"threads", app.add_option("--threads", threads, "Worker threads (0 = all cores)")},
            {"tag_source", app.add_option("--tag-source", tag_source, "cellnames | observations | both")},
        };
    }

    PipelineConfig resolve() const {
        PipelineConfig cfg;
        if (!config.empty()) apply_config_file(config, cfg);
        // Flags go through the same parser as the config file.
        std::ostringstream text;
        for (const auto& [key, opt] : opts) {
            if (opt->count() == 0) continue;
            text << key << " = ";
            if (key == "min_cluster_size") text << min_cluster_size;
            else if (key == "prune_km") text << csv::format_double(prune_km);
            else if (key == "osc_window_s") text << csv::format_double(window_s);
            else if (key == "metric") text << metric;
            else if (key == "celldb_path") text << celldb;
            else if (key == "observations_path") text << observations;
            else if (key == "cellnames_path") text << cellnames;
            else if (key == "out_dir") text << out_dir;
            else if (key == "keep_insufficient_lacs") text << (keep_insufficient ? "true" : "false");
            else if (key == "threads") text << threads;
            else if (key == "tag_source") text << tag_source;
            text << '\n';
        }
        std::istringstream in(text.str());
        apply_config(in, cfg);
        return cfg;
    }
};

std::string write_to_string(auto&& writer) {
    std::ostringstream ss;
    writer(ss);
    return ss.str();
}

void print_clean_report(const CleanReport& r) {
    std::printf("input %zu  kept %zu  outliers %zu  insufficient %zu  retention %s%%\n", r.input_cells, r.kept,
                r.outliers, r.insufficient, r.pct_kept().str().c_str());
    std::printf("lacs clustered %zu  lacs insufficient %zu\n", r.lacs_clustered, r.lacs_insufficient);
    for (const auto& d : r.diagnostics) std::printf("warning: %s\n", d.c_str());
}

void print_diagnostics(std::span<const Diagnostic> diags) {
    for (const auto& d : diags) std::fprintf(stderr, "%s:%zu: %s\n", d.source.c_str(), d.line, d.message.c_str());
}

std::vector<Resolution> load_resolutions(const fs::path& path) {
    std::istringstream in(read_text_file(path));
    return read_resolutions(in, path.filename().string());
}

std::vector<SemanticCluster> load_clusters(const fs::path& path) {
    std::istringstream in(read_text_file(path));
    return read_clusters(in, path.filename().string());
}

std::vector<GeoPoint> load_points(const fs::path& path) {
    std::istringstream in(read_text_file(path));
    return read_points(in, path.filename().string());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cellclean: resolve, impute and clean GSM cell observations"};
    app.require_subcommand(1);

    // One flag set per subcommand; CLI11 binds options to storage.
    std::map<const CLI::App*, SharedFlags> flag_sets;
    auto with_flags = [&](CLI::App* sub) {
        flag_sets[sub].attach(*sub);
        return sub;
    };
    std::string output, input, clusters_path, partitions_path, before_path, after_path, matrix_path, synth_config;
    std::uint64_t trace_seed = 0;

    auto* run = with_flags(app.add_subcommand("run", "Run the whole pipeline and write all artifacts"));

    auto* check = with_flags(app.add_subcommand("ingest-check", "Parse the input files and report row diagnostics"));

    auto* resolve = with_flags(app.add_subcommand("resolve", "Resolve observed cells against the cell database"));
    resolve->add_option("-o,--output", output, "Output CSV (default <out-dir>/resolutions_db.csv)");

    auto* semantic = with_flags(app.add_subcommand("semantic", "Build semantic clusters from tags"));
    semantic->add_option("-o,--output", output, "Output CSV (default <out-dir>/clusters.csv)");

    auto* imp = with_flags(app.add_subcommand("impute", "Fill missing locations from semantic clusters"));
    imp->add_option("resolutions", input, "Resolutions CSV from the resolve stage")->required();
    imp->add_option("--clusters", clusters_path, "Clusters CSV from the semantic stage")->required();
    imp->add_option("-o,--output", output, "Output CSV (default <out-dir>/resolutions.csv)");

    auto* clean = with_flags(app.add_subcommand("clean", "Remove spatial outliers per location area"));
    clean->add_option("resolutions", input, "Resolutions CSV")->required();

    auto* osc = with_flags(app.add_subcommand("oscillation", "Detect cell oscillation pairs"));
    osc->add_option("--clusters", clusters_path, "Clusters CSV")->required();
    osc->add_option("-o,--output", output, "Output CSV (default <out-dir>/oscillations.csv)");

    auto* hd = app.add_subcommand("hausdorff", "Directional and symmetric Hausdorff distances of two point sets");
    hd->add_option("before", before_path, "Point set X")->required();
    hd->add_option("after", after_path, "Point set Y")->required();
    std::string hd_metric = "geodesic-meters";
    hd->add_option("--metric", hd_metric, "degrees | geodesic-meters");
    hd->add_option("--matrix", matrix_path, "Also write the distance matrix as i,j,d CSV");

    auto* sim = app.add_subcommand("simulate", "Generate a synthetic network, trace and cell database");
    sim->add_option("--config", synth_config, "Synthetic generator config")->required()->check(CLI::ExistingFile);
    std::string sim_out = ".";
    sim->add_option("--out-dir", sim_out, "Output directory");
    auto* trace_seed_opt = sim->add_option("--trace-seed", trace_seed, "Trace seed (default: config seed)");

    auto* report = with_flags(app.add_subcommand("report", "Render summary.txt from stage outputs"));
    report->add_option("--resolutions", input, "Imputed resolutions CSV")->required();
    report->add_option("--partitions", partitions_path, "Partitions CSV from the clean stage")->required();
    report->add_option("--clusters", clusters_path, "Clusters CSV")->required();

    CLI11_PARSE(app, argc, argv);

    const CLI::App* sub = app.get_subcommands().front();
    try {
        if (run->parsed()) {
            const auto cfg = flag_sets.at(sub).resolve();
            const auto result = run_pipeline(cfg);
            write_artifacts(result, cfg.out_dir);
            print_diagnostics(result.diagnostics);
            std::fputs(result.summary.c_str(), stdout);
        } else if (check->parsed()) {
            const auto cfg = flag_sets.at(sub).resolve();
            std::vector<Diagnostic> diags;
            auto note = [&](const char* what, const fs::path& path, std::size_t n, const std::vector<Diagnostic>& d) {
                std::printf("%-13s %s: %zu records, %zu diagnostics\n", what, path.string().c_str(), n, d.size());
                diags.insert(diags.end(), d.begin(), d.end());
            };
            if (!cfg.observations_path.empty()) {
                const auto r = load_observations(cfg.observations_path);
                note("observations", cfg.observations_path, r.records.size(), r.diagnostics);
            }
            if (!cfg.cellnames_path.empty()) {
                const auto r = load_cellnames(cfg.cellnames_path);
                note("cellnames", cfg.cellnames_path, r.records.size(), r.diagnostics);
            }
            if (!cfg.celldb_path.empty()) {
                const auto r = load_celldb(cfg.celldb_path);
                note("celldb", cfg.celldb_path, r.records.size(), r.diagnostics);
            }
            print_diagnostics(diags);
        } else if (resolve->parsed()) {
            const auto cfg = flag_sets.at(sub).resolve();
            const auto stage = stage_resolve(cfg.observations_path, cfg.celldb_path, cfg.threads);
            const fs::path out = output.empty() ? cfg.out_dir / "resolutions_db.csv" : fs::path(output);
            write_text_file(out, write_to_string([&](std::ostream& o) { write_resolutions(o, stage.resolved.resolutions); }));
            print_diagnostics(stage.diagnostics);
            const auto& r = stage.resolved.report;
            std::printf("total %zu  db %zu (%s%%)  missing %zu (%s%%)\n", r.total_unique_cells, r.resolved_db,
                        r.pct_db().str().c_str(), r.missing, r.pct_missing().str().c_str());
        } else if (semantic->parsed()) {
            const auto cfg = flag_sets.at(sub).resolve();
            const auto clusters = stage_semantic(cfg);
            const fs::path out = output.empty() ? cfg.out_dir / "clusters.csv" : fs::path(output);
            write_text_file(out, write_to_string([&](std::ostream& o) { write_clusters(o, clusters); }));
            std::printf("%zu semantic locations\n", clusters.size());
        } else if (imp->parsed()) {
            const auto cfg = flag_sets.at(sub).resolve();
            const auto imputed = impute(load_resolutions(input), load_clusters(clusters_path));
            const fs::path out = output.empty() ? cfg.out_dir / "resolutions.csv" : fs::path(output);
            write_text_file(out, write_to_string([&](std::ostream& o) { write_resolutions(o, imputed); }));
            const auto r = make_report(imputed);
            std::printf("db %zu  semantic %zu  missing %zu  total located %zu (%s%%)\n", r.resolved_db,
                        r.resolved_semantic, r.missing, r.resolved(), r.pct_resolved().str().c_str());
        } else if (clean->parsed()) {
            const auto cfg = flag_sets.at(sub).resolve();
            const auto resolutions = load_resolutions(input);
            const auto result = clean_all(located_only(resolutions), cfg.clean_options());
            fs::create_directories(cfg.out_dir);
            write_text_file(cfg.out_dir / "partitions.csv", write_to_string([&](std::ostream& o) {
                                write_partitions(o, result.partitions, resolutions);
                            }));
            write_text_file(cfg.out_dir / "partitions.geojson", to_geojson(result.partitions, resolutions));
            print_clean_report(result.report);
        } else if (osc->parsed()) {
            const auto cfg = flag_sets.at(sub).resolve();
            const auto verdicts = stage_oscillation(cfg.observations_path, load_clusters(clusters_path), cfg.osc_window_s);
            const fs::path out = output.empty() ? cfg.out_dir / "oscillations.csv" : fs::path(output);
            write_text_file(out, write_to_string([&](std::ostream& o) { write_oscillations(o, verdicts); }));
            const auto stationary = std::count_if(verdicts.begin(), verdicts.end(),
                                                  [](const OscillationVerdict& v) { return v.stationary(); });
            std::printf("%zu oscillation pairs, %td stationary\n", verdicts.size(), stationary);
        } else if (hd->parsed()) {
            const auto mode = parse_metric(hd_metric);
            const auto xs = load_points(before_path);
            const auto ys = load_points(after_path);
            const auto d = distance_matrix(xs, ys, mode);
            std::printf("%s %s %s\n", csv::format_double(d.rowwise().minCoeff().maxCoeff()).c_str(),
                        csv::format_double(d.colwise().minCoeff().maxCoeff()).c_str(),
                        csv::format_double(hausdorff(d)).c_str());
            if (!matrix_path.empty())
                write_text_file(matrix_path, write_to_string([&](std::ostream& o) { write_distance_matrix_csv(o, d); }));
        } else if (sim->parsed()) {
            std::ifstream in(synth_config);
            const auto cfg = synth::read_config(in);
            const auto net = synth::gen_network(cfg);
            const auto trace = synth::gen_trace(net, cfg, trace_seed_opt->count() ? trace_seed : cfg.seed);
            const fs::path dir(sim_out);
            fs::create_directories(dir);
            write_text_file(dir / "observations.csv", write_to_string([&](std::ostream& o) { write_observations(o, trace.observations); }));
            write_text_file(dir / "cellnames.csv", write_to_string([&](std::ostream& o) { write_cellnames(o, trace.cellnames); }));
            write_text_file(dir / "celldb.csv", write_to_string([&](std::ostream& o) { write_celldb(o, net.db_rows); }));
            write_text_file(dir / "manifest.csv", write_to_string([&](std::ostream& o) { synth::write_manifest(o, net.manifest); }));
            write_text_file(dir / "segments.csv", write_to_string([&](std::ostream& o) { synth::write_segments(o, trace.segments); }));
            std::printf("%zu cells, %zu db rows, %zu observations, %zu semantic places\n", net.truth.size(),
                        net.db_rows.size(), trace.observations.size(), net.places.size());
        } else if (report->parsed()) {
            const auto cfg = flag_sets.at(sub).resolve();
            const auto resolutions = load_resolutions(input);
            std::istringstream pin(read_text_file(partitions_path));
            const auto rows = read_partitions(pin, fs::path(partitions_path).filename().string());
            const auto partitions = partitions_from_rows(rows);
            const auto text = summary(make_summary_input(resolutions, partitions, load_clusters(clusters_path), cfg));
            fs::create_directories(cfg.out_dir);
            write_text_file(cfg.out_dir / "summary.txt", text);
            std::fputs(text.c_str(), stdout);
        }
    } catch (const IoError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return kIoFailure;
    } catch (const FormatError& e) {
        std::fprintf(stderr, "format error: %s\n", e.what());
        return kFormatFailure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kFailure;
    }
    return kOk;
}
