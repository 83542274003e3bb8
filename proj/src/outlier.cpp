#include "cellclean/outlier.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "cellclean/parallel.hpp"

namespace cellclean {

std::string_view to_string(LacStatus status) {
    return status == LacStatus::clustered ? "clustered" : "insufficient-data";
}

DistanceMatrix<double> proximity_matrix(std::span<const LocatedCell> points, MetricMode mode) {
    if (points.empty()) throw std::domain_error("proximity matrix needs at least one point");
    const auto n = static_cast<Eigen::Index>(points.size());
    DistanceMatrix<double> d = DistanceMatrix<double>::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            d(i, j) = d(j, i) = geo_distance(points[static_cast<std::size_t>(i)].point,
                                             points[static_cast<std::size_t>(j)].point, mode);
    return d;
}

Dendrogram agglomerate(std::span<const LocatedCell> points, MetricMode mode) {
    if (points.empty()) throw std::domain_error("cannot cluster an empty point set");

    Dendrogram out;
    out.mode = mode;
    out.leaves.assign(points.begin(), points.end());
    std::sort(out.leaves.begin(), out.leaves.end(),
              [](const LocatedCell& a, const LocatedCell& b) { return a.cell < b.cell; });
    for (std::size_t i = 1; i < out.leaves.size(); ++i)
        if (out.leaves[i].cell == out.leaves[i - 1].cell)
            throw std::domain_error("duplicate cell " + to_string(out.leaves[i].cell) + " in clustering input");

    const std::size_t n = out.leaves.size();
    // Slot i holds the cluster whose leftmost leaf is leaf i, so scanning
    // slot pairs in index order applies the key-based tie break directly.
    DistanceMatrix<double> w = proximity_matrix(out.leaves, mode);
    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), std::size_t{0});
    std::vector<std::size_t> node(active), size(n, 1);

    out.merges.reserve(n - 1);
    for (std::size_t step = 0; step + 1 < n; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t a = 0; a < active.size(); ++a) {
            const auto i = static_cast<Eigen::Index>(active[a]);
            for (std::size_t b = a + 1; b < active.size(); ++b) {
                const auto j = static_cast<Eigen::Index>(active[b]);
                if (w(i, j) < best) {
                    best = w(i, j);
                    bi = a;
                    bj = b;
                }
            }
        }
        const std::size_t si = active[bi], sj = active[bj];
        size[si] += size[sj];
        out.merges.push_back({node[si], node[sj], best, size[si]});
        node[si] = n + step;

        const auto ei = static_cast<Eigen::Index>(si), ej = static_cast<Eigen::Index>(sj);
        w.row(ei) = w.row(ei).cwiseMin(w.row(ej));
        w.col(ei) = w.row(ei).transpose();
        w(ei, ei) = 0.0;
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
    }
    return out;
}

namespace {

struct DisjointSets {
    std::vector<std::size_t> parent;

    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }

    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

std::vector<std::vector<std::size_t>> flat_clusters(const Dendrogram& dendrogram, double cut) {
    const std::size_t n = dendrogram.leaves.size();
    DisjointSets sets(n);
    std::vector<std::size_t> some_leaf(n + dendrogram.merges.size());
    std::iota(some_leaf.begin(), some_leaf.begin() + static_cast<std::ptrdiff_t>(n), std::size_t{0});
    for (std::size_t k = 0; k < dendrogram.merges.size(); ++k) {
        const auto& m = dendrogram.merges[k];
        some_leaf[n + k] = some_leaf[m.left];
        if (m.height <= cut) sets.unite(some_leaf[m.left], some_leaf[m.right]);
    }

    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[sets.find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> out;
    out.reserve(groups.size());
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    return out;
}

LacPartition cut_and_select(const Dendrogram& dendrogram, double prune_dist, std::size_t min_cluster_size) {
    LacPartition part;
    if (!dendrogram.leaves.empty()) part.lac = dendrogram.leaves.front().cell.lac;
    if (dendrogram.leaves.size() < min_cluster_size) {
        part.status = LacStatus::insufficient_data;
        part.outliers = dendrogram.leaves;
        return part;
    }

    const auto clusters = flat_clusters(dendrogram, prune_dist);
    auto intra = [&](const std::vector<std::size_t>& members) {
        double sum = 0.0;
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b)
                sum += geo_distance(dendrogram.leaves[members[a]].point, dendrogram.leaves[members[b]].point,
                                    dendrogram.mode);
        return sum;
    };

    // Clusters are ordered by first leaf, so keeping the earlier one on a
    // full tie selects the smallest member key.
    std::size_t best = 0;
    double best_intra = intra(clusters[0]);
    for (std::size_t c = 1; c < clusters.size(); ++c) {
        if (clusters[c].size() < clusters[best].size()) continue;
        const double d = intra(clusters[c]);
        if (clusters[c].size() > clusters[best].size() || d < best_intra) {
            best = c;
            best_intra = d;
        }
    }

    std::vector<bool> chosen(dendrogram.leaves.size(), false);
    for (const auto i : clusters[best]) chosen[i] = true;
    for (std::size_t i = 0; i < dendrogram.leaves.size(); ++i)
        (chosen[i] ? part.representative : part.outliers).push_back(dendrogram.leaves[i]);
    part.status = LacStatus::clustered;
    return part;
}

CleanResult clean_all(std::span<const Resolution> resolutions, const CleanOptions& options) {
    if (!(options.prune_dist > 0.0)) throw std::domain_error("prune distance must be positive");
    if (options.min_cluster_size == 0) throw std::domain_error("minimum cluster size must be positive");

    std::map<std::uint32_t, std::vector<LocatedCell>> by_lac;
    for (const auto& r : resolutions) {
        if (!r.point) throw std::domain_error("cell " + to_string(r.cell) + " has no location and cannot be cleaned");
        by_lac[r.cell.lac].push_back({r.cell, *r.point});
    }

    CleanResult out;
    std::vector<std::pair<std::uint32_t, std::vector<LocatedCell>>> groups(by_lac.begin(), by_lac.end());
    out.partitions.resize(groups.size());
    parallel_for(groups.size(), options.threads, [&](std::size_t g) {
        const auto& [lac, cells] = groups[g];
        LacPartition part;
        if (cells.size() < options.min_cluster_size) {
            part.lac = lac;
            part.status = LacStatus::insufficient_data;
            part.outliers = cells;
            std::sort(part.outliers.begin(), part.outliers.end(),
                      [](const LocatedCell& a, const LocatedCell& b) { return a.cell < b.cell; });
        } else {
            part = cut_and_select(agglomerate(cells, options.mode), options.prune_dist, options.min_cluster_size);
        }
        out.partitions[g] = std::move(part);
    });

    out.report = make_clean_report(out.partitions, options.keep_insufficient);
    return out;
}

CleanReport make_clean_report(std::span<const LacPartition> partitions, bool keep_insufficient) {
    CleanReport rep;
    for (const auto& p : partitions) {
        const std::size_t cells = p.representative.size() + p.outliers.size();
        rep.input_cells += cells;
        if (p.status == LacStatus::clustered) {
            ++rep.lacs_clustered;
            rep.kept += p.representative.size();
            rep.outliers += p.outliers.size();
        } else {
            ++rep.lacs_insufficient;
            if (keep_insufficient) {
                rep.kept += cells;
                rep.passed_through += cells;
            } else {
                rep.insufficient += cells;
            }
        }

        std::map<CellKey, CellKey> seen;
        for (const auto* group : {&p.representative, &p.outliers}) {
            for (const auto& c : *group) {
                const auto [it, inserted] = seen.emplace(c.cell.short_key(), c.cell);
                if (!inserted)
                    rep.diagnostics.push_back("lac " + std::to_string(p.lac) + ": cells " + to_string(it->second) +
                                              " and " + to_string(c.cell) + " share (lac, cell_id)");
            }
        }
    }
    return rep;
}

std::vector<LocatedCell> kept_cells(std::span<const LacPartition> partitions, bool keep_insufficient) {
    std::vector<LocatedCell> out;
    for (const auto& p : partitions) {
        if (p.status == LacStatus::clustered)
            out.insert(out.end(), p.representative.begin(), p.representative.end());
        else if (keep_insufficient)
            out.insert(out.end(), p.outliers.begin(), p.outliers.end());
    }
    std::sort(out.begin(), out.end(), [](const LocatedCell& a, const LocatedCell& b) { return a.cell < b.cell; });
    return out;
}

}  // namespace cellclean
