#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cellclean/metrics.hpp"
#include "cellclean/outlier.hpp"
#include "cellclean/resolver.hpp"
#include "cellclean/semantic.hpp"

namespace cellclean {

/// GeoJSON coordinates are rounded to this many decimals.
inline constexpr int kGeoJsonDecimals = 7;

/// FeatureCollection of located cells, sorted by key. Throws
/// std::domain_error for a resolution without coordinates.
std::string to_geojson(std::span<const Resolution> resolutions);

/// FeatureCollection of every partitioned cell with its `cluster` role.
/// `resolutions` supplies the `source` property of each cell.
std::string to_geojson(std::span<const LacPartition> partitions, std::span<const Resolution> resolutions);

// Intermediate stage files. Coordinates use the shortest exact decimal
// form so a stage that re-reads them sees identical doubles.

inline constexpr std::string_view kResolutionsHeader = "mcc,mnc,lac,cell_id,lat,lon,source";
inline constexpr std::string_view kClustersHeader = "label,lac,cell_id,frequency";
inline constexpr std::string_view kPartitionsHeader = "mcc,mnc,lac,cell_id,lat,lon,source,cluster";
inline constexpr std::string_view kOscillationsHeader = "lac_a,cell_id_a,lac_b,cell_id_b,switch_count,stationary,cluster";
inline constexpr std::string_view kDiagnosticsHeader = "file,line,message";
inline constexpr std::string_view kPointsHeader = "lat,lon";

void write_resolutions(std::ostream& out, std::span<const Resolution> resolutions);
std::vector<Resolution> read_resolutions(std::istream& in, std::string_view source = "resolutions.csv");

void write_clusters(std::ostream& out, std::span<const SemanticCluster> clusters);
std::vector<SemanticCluster> read_clusters(std::istream& in, std::string_view source = "clusters.csv");

struct PartitionRow {
    Resolution resolution;
    std::string cluster;  // representative | outlier | insufficient-data
};

void write_partitions(std::ostream& out, std::span<const LacPartition> partitions,
                      std::span<const Resolution> resolutions);
std::vector<PartitionRow> read_partitions(std::istream& in, std::string_view source = "partitions.csv");
/// Rebuilds per-LAC partitions (LAC ascending) from partition rows.
std::vector<LacPartition> partitions_from_rows(std::span<const PartitionRow> rows);

void write_oscillations(std::ostream& out, std::span<const OscillationVerdict> verdicts);
void write_diagnostics(std::ostream& out, std::span<const Diagnostic> diagnostics);

/// Reads a point list: either `lat,lon` rows or a resolutions/partitions
/// file, whose located rows are taken.
std::vector<GeoPoint> read_points(std::istream& in, std::string_view source);

struct SummaryInput {
    ResolutionReport resolution;
    CleanReport clean;
    RetentionReport retention;
    MetricMode mode = MetricMode::geodesic_meters;
    double prune_dist = 0.0;
    std::size_t min_cluster_size = kDefaultMinClusterSize;
    std::vector<SemanticCluster> clusters;
};

/// Fixed-width plain-text report of resolution, cleaning and semantic tables.
std::string summary(const SummaryInput& input);

}  // namespace cellclean
