#include "cellclean/semantic.hpp"

#include <algorithm>
#include <stdexcept>

namespace cellclean {

std::vector<TagRecord> tags_from_cellnames(std::span<const CellName> names) {
    std::vector<TagRecord> tags;
    tags.reserve(names.size());
    for (const auto& n : names) tags.push_back({n.cell, n.label});
    return tags;
}

std::vector<TagRecord> tags_from_observations(std::span<const Observation> trace) {
    std::vector<TagRecord> tags;
    for (const auto& o : trace)
        if (o.tag) tags.push_back({o.cell, *o.tag});
    return tags;
}

bool SemanticCluster::contains(const CellKey& cell) const {
    return std::any_of(members.begin(), members.end(),
                       [&](const ClusterMember& m) { return m.cell == cell; });
}

std::vector<SemanticCluster> build_semantic_clusters(std::span<const TagRecord> tags) {
    std::map<std::string, std::map<CellKey, std::size_t>> freq;
    for (const auto& t : tags) ++freq[t.label][t.cell];

    std::vector<SemanticCluster> clusters;
    clusters.reserve(freq.size());
    for (auto& [label, counts] : freq) {
        SemanticCluster c{label, {}};
        c.members.reserve(counts.size());
        for (const auto& [cell, n] : counts) c.members.push_back({cell, n});
        // counts is key-ordered, so a stable sort on frequency keeps key order on ties.
        std::stable_sort(c.members.begin(), c.members.end(),
                         [](const ClusterMember& a, const ClusterMember& b) { return a.frequency > b.frequency; });
        clusters.push_back(std::move(c));
    }
    return clusters;
}

std::map<CellKey, std::size_t> cell_incidence(std::span<const SemanticCluster> clusters) {
    std::map<CellKey, std::size_t> out;
    for (const auto& c : clusters)
        for (const auto& m : c.members) ++out[m.cell];
    return out;
}

namespace {

// Orders candidate clusters: higher incidence first, then label.
bool denser(const SemanticCluster& a, const SemanticCluster& b) {
    if (a.incidence() != b.incidence()) return a.incidence() > b.incidence();
    return a.label < b.label;
}

}  // namespace

std::vector<Resolution> impute(std::span<const Resolution> resolutions,
                               std::span<const SemanticCluster> clusters) {
    std::map<CellKey, GeoPoint> located_by_db;
    for (const auto& r : resolutions)
        if (r.source == ResolutionSource::db && r.point) located_by_db.emplace(r.cell, *r.point);

    // Per cluster: the first db-resolved member in member order, if any.
    std::vector<const ClusterMember*> donor(clusters.size(), nullptr);
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        for (const auto& m : clusters[i].members) {
            if (located_by_db.count(m.cell)) {
                donor[i] = &m;
                break;
            }
        }
    }

    std::map<CellKey, std::vector<std::size_t>> clusters_of;
    for (std::size_t i = 0; i < clusters.size(); ++i)
        for (const auto& m : clusters[i].members) clusters_of[m.cell].push_back(i);

    std::vector<Resolution> out(resolutions.begin(), resolutions.end());
    for (auto& r : out) {
        if (r.source != ResolutionSource::missing) continue;
        const auto it = clusters_of.find(r.cell);
        if (it == clusters_of.end()) continue;

        const SemanticCluster* best = nullptr;
        const ClusterMember* best_donor = nullptr;
        for (const auto idx : it->second) {
            if (donor[idx] == nullptr) continue;
            if (best == nullptr || denser(clusters[idx], *best)) {
                best = &clusters[idx];
                best_donor = donor[idx];
            }
        }
        if (best_donor == nullptr) continue;
        r.point = located_by_db.at(best_donor->cell);
        r.source = ResolutionSource::semantic_imputed;
    }
    return out;
}

std::vector<OscillationVerdict> detect_oscillation(std::span<const Observation> trace,
                                                   std::span<const SemanticCluster> clusters,
                                                   double window_s) {
    if (!(window_s > 0.0)) throw std::domain_error("oscillation window must be positive");
    for (std::size_t i = 1; i < trace.size(); ++i)
        if (trace[i].timestamp < trace[i - 1].timestamp)
            throw std::domain_error("trace is not sorted by timestamp (observation " +
                                    std::to_string(i + 1) + ")");

    // Collapse consecutive repeats of a cell into runs.
    struct Run {
        CellKey cell;
        Timestamp first;
        Timestamp last;
    };
    std::vector<Run> runs;
    for (const auto& o : trace) {
        if (!runs.empty() && runs.back().cell == o.cell)
            runs.back().last = o.timestamp;
        else
            runs.push_back({o.cell, o.timestamp, o.timestamp});
    }

    std::map<std::pair<CellKey, CellKey>, std::size_t> switches;
    for (std::size_t i = 0; i + 2 < runs.size(); ++i) {
        if (runs[i].cell != runs[i + 2].cell) continue;
        const auto span = std::chrono::duration<double>(runs[i + 2].first - runs[i].last).count();
        if (span > window_s) continue;
        const auto& a = runs[i].cell;
        const auto& b = runs[i + 1].cell;
        ++switches[a < b ? std::pair{a, b} : std::pair{b, a}];
    }

    std::vector<OscillationVerdict> verdicts;
    verdicts.reserve(switches.size());
    for (const auto& [pair, count] : switches) {
        OscillationVerdict v{pair, count, std::nullopt};
        const SemanticCluster* best = nullptr;
        for (const auto& c : clusters)
            if (c.contains(pair.first) && c.contains(pair.second) && (best == nullptr || denser(c, *best)))
                best = &c;
        if (best != nullptr) v.co_cluster = best->label;
        verdicts.push_back(std::move(v));
    }
    return verdicts;
}

}  // namespace cellclean
