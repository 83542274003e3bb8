#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "cellclean/core_geo.hpp"
#include "cellclean/outlier.hpp"
#include "cellclean/semantic.hpp"

namespace cellclean {

/// Which records feed the semantic clusters.
enum class TagSource { cellnames, observations, both };

std::string_view to_string(TagSource source);
TagSource parse_tag_source(std::string_view text);

struct PipelineConfig {
    std::size_t min_cluster_size = kDefaultMinClusterSize;
    double prune_km = kDefaultPruneKm;
    double osc_window_s = kDefaultOscillationWindowS;
    MetricMode metric = MetricMode::geodesic_meters;
    std::filesystem::path celldb_path;
    std::filesystem::path observations_path;
    std::filesystem::path cellnames_path;
    std::filesystem::path out_dir = ".";
    bool keep_insufficient_lacs = false;
    unsigned threads = 1;
    TagSource tag_source = TagSource::both;

    CleanOptions clean_options() const;
};

/// Applies `key = value` lines on top of `cfg`. Blank lines and `#`
/// comments are ignored; unknown keys and bad values throw FormatError.
/// Relative paths are taken relative to `base_dir`.
void apply_config(std::istream& in, PipelineConfig& cfg, const std::filesystem::path& base_dir = {});
void apply_config_file(const std::filesystem::path& file, PipelineConfig& cfg);

}  // namespace cellclean
