#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cellclean/core_geo.hpp"
#include "cellclean/metrics.hpp"
#include "cellclean/resolver.hpp"

namespace cellclean {

inline constexpr std::size_t kDefaultMinClusterSize = 10;
inline constexpr double kDefaultPruneKm = 5.0;

/// Symmetric pairwise distances with a zero diagonal.
DistanceMatrix<double> proximity_matrix(std::span<const LocatedCell> points,
                                        MetricMode mode = MetricMode::geodesic_meters);

/// Node ids 0..n-1 are leaves; merge k creates node n+k.
struct Merge {
    std::size_t left = 0;
    std::size_t right = 0;
    double height = 0.0;
    std::size_t size = 0;

    friend bool operator==(const Merge&, const Merge&) = default;
};

/// Single-linkage hierarchy. Leaves are sorted by cell key; merges are in
/// the order they were performed, so heights are non-decreasing.
struct Dendrogram {
    std::vector<LocatedCell> leaves;
    std::vector<Merge> merges;
    MetricMode mode = MetricMode::geodesic_meters;
};

/// Repeatedly joins the two clusters at the smallest single-linkage distance
/// until one cluster remains. Equal distances go to the pair whose leftmost
/// leaves compare smallest. Throws on empty input or duplicate keys.
Dendrogram agglomerate(std::span<const LocatedCell> points, MetricMode mode = MetricMode::geodesic_meters);

/// Flat clusters left after discarding every merge above `cut`, as sorted
/// leaf-index lists ordered by their first leaf.
std::vector<std::vector<std::size_t>> flat_clusters(const Dendrogram& dendrogram, double cut);

enum class LacStatus { clustered, insufficient_data };

std::string_view to_string(LacStatus status);

struct LacPartition {
    std::uint32_t lac = 0;
    std::vector<LocatedCell> representative;
    std::vector<LocatedCell> outliers;
    LacStatus status = LacStatus::clustered;
};

/// Cuts the dendrogram at `prune_dist` and keeps the largest flat cluster
/// (ties: smaller summed intra-cluster distance, then smaller first key).
/// Fewer than `min_cluster_size` leaves gives insufficient_data with every
/// leaf listed under outliers.
LacPartition cut_and_select(const Dendrogram& dendrogram, double prune_dist, std::size_t min_cluster_size);

struct CleanOptions {
    MetricMode mode = MetricMode::geodesic_meters;
    /// In the unit of `mode` (meters or degrees).
    double prune_dist = kDefaultPruneKm * 1000.0;
    std::size_t min_cluster_size = kDefaultMinClusterSize;
    /// Count cells of insufficient-data LACs as kept instead of dropping them.
    bool keep_insufficient = false;
    unsigned threads = 1;
};

/// input_cells = kept + outliers + insufficient. Cells of insufficient-data
/// LACs count as kept (and as passed_through) when keep_insufficient is set.
struct CleanReport {
    std::size_t input_cells = 0;
    std::size_t kept = 0;
    std::size_t outliers = 0;
    std::size_t insufficient = 0;
    std::size_t passed_through = 0;
    std::size_t lacs_clustered = 0;
    std::size_t lacs_insufficient = 0;
    std::vector<std::string> diagnostics;

    Percent pct_kept() const { return Percent::of(kept, input_cells); }
};

struct CleanResult {
    std::vector<LacPartition> partitions;  // LAC ascending
    CleanReport report;
};

/// Groups located cells by LAC and removes spatial outliers per LAC.
/// Throws std::domain_error if any resolution lacks a point.
CleanResult clean_all(std::span<const Resolution> resolutions, const CleanOptions& options = {});

/// Totals and (lac, cell_id) collision diagnostics for a set of partitions.
CleanReport make_clean_report(std::span<const LacPartition> partitions, bool keep_insufficient = false);

/// Cells that survive cleaning, ordered by key.
std::vector<LocatedCell> kept_cells(std::span<const LacPartition> partitions, bool keep_insufficient = false);

}  // namespace cellclean
