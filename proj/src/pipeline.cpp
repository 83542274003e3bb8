#include "cellclean/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace cellclean {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    if (path.empty()) throw IoError("input path not configured");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

template <typename Parser>
auto load(const std::filesystem::path& path, Parser parse) {
    auto in = open_input(path);
    return parse(in, path.filename().string());
}

std::vector<CellKey> observed_cells(std::span<const Observation> trace) {
    std::vector<CellKey> keys;
    keys.reserve(trace.size());
    for (const auto& o : trace) keys.push_back(o.cell);
    return keys;
}

std::vector<Observation> time_sorted(std::vector<Observation> trace) {
    std::stable_sort(trace.begin(), trace.end(),
                     [](const Observation& a, const Observation& b) { return a.timestamp < b.timestamp; });
    return trace;
}

std::vector<TagRecord> collect_tags(TagSource source, std::span<const CellName> names,
                                    std::span<const Observation> trace) {
    std::vector<TagRecord> tags;
    if (source != TagSource::observations) tags = tags_from_cellnames(names);
    if (source != TagSource::cellnames) {
        auto more = tags_from_observations(trace);
        tags.insert(tags.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    }
    return tags;
}

std::vector<LocatedCell> as_located(std::span<const Resolution> resolutions) {
    std::vector<LocatedCell> out;
    for (const auto& r : resolutions)
        if (r.point) out.push_back({r.cell, *r.point});
    return out;
}

}  // namespace

ParseResult<Observation> load_observations(const std::filesystem::path& path) {
    return load(path, [](std::istream& in, const std::string& name) { return parse_observations(in, name); });
}

ParseResult<CellName> load_cellnames(const std::filesystem::path& path) {
    return load(path, [](std::istream& in, const std::string& name) { return parse_cellnames(in, name); });
}

ParseResult<CellDbRow> load_celldb(const std::filesystem::path& path) {
    return load(path, [](std::istream& in, const std::string& name) { return parse_celldb(in, name); });
}

std::vector<Resolution> located_only(std::span<const Resolution> resolutions) {
    std::vector<Resolution> out;
    std::copy_if(resolutions.begin(), resolutions.end(), std::back_inserter(out),
                 [](const Resolution& r) { return r.located(); });
    return out;
}

ResolveStage stage_resolve(const std::filesystem::path& observations, const std::filesystem::path& celldb,
                           unsigned threads) {
    auto obs = load_observations(observations);
    auto rows = load_celldb(celldb);
    const auto db = build_index(rows.records);

    ResolveStage stage;
    stage.resolved = resolve_all(db, observed_cells(obs.records), threads);
    stage.diagnostics = std::move(obs.diagnostics);
    stage.diagnostics.insert(stage.diagnostics.end(), rows.diagnostics.begin(), rows.diagnostics.end());
    stage.diagnostics.insert(stage.diagnostics.end(), db.diagnostics().begin(), db.diagnostics().end());
    return stage;
}

std::vector<SemanticCluster> stage_semantic(const PipelineConfig& cfg) {
    std::vector<CellName> names;
    std::vector<Observation> trace;
    if (cfg.tag_source != TagSource::observations && !cfg.cellnames_path.empty())
        names = load_cellnames(cfg.cellnames_path).records;
    if (cfg.tag_source != TagSource::cellnames && !cfg.observations_path.empty())
        trace = load_observations(cfg.observations_path).records;
    return build_semantic_clusters(collect_tags(cfg.tag_source, names, trace));
}

std::vector<OscillationVerdict> stage_oscillation(const std::filesystem::path& observations,
                                                  std::span<const SemanticCluster> clusters, double window_s) {
    return detect_oscillation(time_sorted(load_observations(observations).records), clusters, window_s);
}

SummaryInput make_summary_input(std::span<const Resolution> resolutions, std::span<const LacPartition> partitions,
                                std::span<const SemanticCluster> clusters, const PipelineConfig& cfg) {
    SummaryInput in;
    in.resolution = make_report(resolutions);
    in.clean = make_clean_report(partitions, cfg.keep_insufficient_lacs);
    const auto before = as_located(resolutions);
    const auto after = kept_cells(partitions, cfg.keep_insufficient_lacs);
    in.retention = retention_report(before, after, cfg.metric);
    in.mode = cfg.metric;
    in.prune_dist = distance_in_mode(cfg.prune_km, cfg.metric);
    in.min_cluster_size = cfg.min_cluster_size;
    in.clusters.assign(clusters.begin(), clusters.end());
    return in;
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
    PipelineResult result;

    auto obs = load_observations(cfg.observations_path);
    auto rows = load_celldb(cfg.celldb_path);
    ParseResult<CellName> names;
    if (!cfg.cellnames_path.empty()) names = load_cellnames(cfg.cellnames_path);

    const auto db = build_index(rows.records);
    auto& diag = result.diagnostics;
    for (const auto& list : {obs.diagnostics, names.diagnostics, rows.diagnostics, db.diagnostics()})
        diag.insert(diag.end(), list.begin(), list.end());

    const auto resolved = resolve_all(db, observed_cells(obs.records), cfg.threads);
    result.clusters = build_semantic_clusters(collect_tags(cfg.tag_source, names.records, obs.records));
    result.resolutions = impute(resolved.resolutions, result.clusters);
    result.resolution_report = make_report(result.resolutions);

    const auto located = located_only(result.resolutions);
    result.clean = clean_all(located, cfg.clean_options());
    for (const auto& msg : result.clean.report.diagnostics) diag.push_back({"clean", 0, msg});

    const auto summary_input = make_summary_input(result.resolutions, result.clean.partitions, result.clusters, cfg);
    result.retention = summary_input.retention;
    result.summary = summary(summary_input);
    result.oscillations = detect_oscillation(time_sorted(obs.records), result.clusters, cfg.osc_window_s);
    return result;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_artifacts(const PipelineResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto emit = [&](const char* name, auto&& writer) {
        std::ostringstream ss;
        writer(ss);
        write_text_file(dir / name, ss.str());
    };
    const auto& parts = result.clean.partitions;
    emit("resolutions.csv", [&](std::ostream& o) { write_resolutions(o, result.resolutions); });
    emit("clusters.csv", [&](std::ostream& o) { write_clusters(o, result.clusters); });
    emit("partitions.csv", [&](std::ostream& o) { write_partitions(o, parts, result.resolutions); });
    emit("oscillations.csv", [&](std::ostream& o) { write_oscillations(o, result.oscillations); });
    emit("diagnostics.csv", [&](std::ostream& o) { write_diagnostics(o, result.diagnostics); });
    write_text_file(dir / "partitions.geojson", to_geojson(parts, result.resolutions));
    write_text_file(dir / "summary.txt", result.summary);
}

}  // namespace cellclean
