#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cellclean/config.hpp"
#include "cellclean/export.hpp"
#include "cellclean/ingest.hpp"
#include "cellclean/metrics.hpp"
#include "cellclean/outlier.hpp"
#include "cellclean/resolver.hpp"
#include "cellclean/semantic.hpp"

namespace cellclean {

/// Everything one pipeline run produces, before it is written to disk.
struct PipelineResult {
    std::vector<Resolution> resolutions;  // after imputation
    ResolutionReport resolution_report;
    std::vector<SemanticCluster> clusters;
    CleanResult clean;
    RetentionReport retention;
    std::vector<OscillationVerdict> oscillations;
    std::vector<Diagnostic> diagnostics;
    std::string summary;
};

/// Reads the three inputs named in `cfg` and runs ingest, resolution,
/// semantic clustering, imputation, cleaning, oscillation detection and
/// reporting. Throws IoError / FormatError for unreadable or malformed inputs.
PipelineResult run_pipeline(const PipelineConfig& cfg);

/// Writes resolutions.csv, clusters.csv, partitions.csv, partitions.geojson,
/// oscillations.csv, summary.txt and diagnostics.csv into `dir`.
void write_artifacts(const PipelineResult& result, const std::filesystem::path& dir);

// Single-stage entry points. Each reads its inputs from files and returns
// what the CLI prints or writes; composing them reproduces run_pipeline.

ParseResult<Observation> load_observations(const std::filesystem::path& path);
ParseResult<CellName> load_cellnames(const std::filesystem::path& path);
ParseResult<CellDbRow> load_celldb(const std::filesystem::path& path);

/// Distinct observed cells resolved against the database, plus diagnostics.
struct ResolveStage {
    ResolveAllResult resolved;
    std::vector<Diagnostic> diagnostics;
};
ResolveStage stage_resolve(const std::filesystem::path& observations, const std::filesystem::path& celldb,
                           unsigned threads = 1);

std::vector<SemanticCluster> stage_semantic(const PipelineConfig& cfg);

std::vector<OscillationVerdict> stage_oscillation(const std::filesystem::path& observations,
                                                  std::span<const SemanticCluster> clusters, double window_s);

SummaryInput make_summary_input(std::span<const Resolution> resolutions, std::span<const LacPartition> partitions,
                                std::span<const SemanticCluster> clusters, const PipelineConfig& cfg);

/// Located cells of a resolution list.
std::vector<Resolution> located_only(std::span<const Resolution> resolutions);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace cellclean
