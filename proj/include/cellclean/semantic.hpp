#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cellclean/core_geo.hpp"
#include "cellclean/ingest.hpp"
#include "cellclean/resolver.hpp"

namespace cellclean {

/// One appearance of a cell under a semantic label. Each record counts once
/// toward that cell's frequency in the label's cluster.
struct TagRecord {
    CellKey cell;
    std::string label;
};

std::vector<TagRecord> tags_from_cellnames(std::span<const CellName> names);
std::vector<TagRecord> tags_from_observations(std::span<const Observation> trace);

struct ClusterMember {
    CellKey cell;
    std::size_t frequency = 0;

    friend bool operator==(const ClusterMember&, const ClusterMember&) = default;
};

/// Cells seen under one label, sorted by (frequency desc, key asc).
struct SemanticCluster {
    std::string label;
    std::vector<ClusterMember> members;

    /// Number of distinct member cells.
    std::size_t incidence() const { return members.size(); }
    bool contains(const CellKey& cell) const;

    friend bool operator==(const SemanticCluster&, const SemanticCluster&) = default;
};

/// One cluster per distinct label, ordered by label.
std::vector<SemanticCluster> build_semantic_clusters(std::span<const TagRecord> tags);

/// Number of distinct labels each cell appears under.
std::map<CellKey, std::size_t> cell_incidence(std::span<const SemanticCluster> clusters);

/// Fills missing resolutions with the coordinate of a db-resolved cell that
/// shares a semantic cluster. The donor cluster is the eligible one with the
/// highest incidence (ties: label); the donor is its most frequent
/// db-resolved member (ties: key). Output order equals input order.
std::vector<Resolution> impute(std::span<const Resolution> resolutions,
                               std::span<const SemanticCluster> clusters);

inline constexpr double kDefaultOscillationWindowS = 300.0;

struct OscillationVerdict {
    std::pair<CellKey, CellKey> pair;  // first < second
    std::size_t switch_count = 0;      // A->B->A returns inside the window
    std::optional<std::string> co_cluster;

    bool stationary() const { return co_cluster.has_value(); }

    friend bool operator==(const OscillationVerdict&, const OscillationVerdict&) = default;
};

/// Finds A->B->A returns within `window_s` seconds in a time-sorted trace and
/// checks each pair against the semantic clusters. Verdicts are ordered by pair.
std::vector<OscillationVerdict> detect_oscillation(std::span<const Observation> trace,
                                                   std::span<const SemanticCluster> clusters,
                                                   double window_s = kDefaultOscillationWindowS);

}  // namespace cellclean
