#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cellclean/core_geo.hpp"
#include "cellclean/metrics.hpp"
#include "cellclean/outlier.hpp"
#include "cellclean/resolver.hpp"

namespace testing {

// splitmix64; independent of the generator the library uses.
struct Gen {
    std::uint64_t state;
    explicit Gen(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double real(double lo, double hi) { return lo + (hi - lo) * unit(); }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
    std::size_t range(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
    bool coin() { return (next() & 1u) != 0; }

    cellclean::GeoPoint point(double lat_lo = -60, double lat_hi = 60, double lon_lo = -170, double lon_hi = 170) {
        return {real(lat_lo, lat_hi), real(lon_lo, lon_hi)};
    }
    // Points on a coarse grid so that distance ties actually occur.
    cellclean::GeoPoint grid_point(int span) {
        return {static_cast<double>(static_cast<int>(below(static_cast<std::size_t>(span)))),
                static_cast<double>(static_cast<int>(below(static_cast<std::size_t>(span))))};
    }
    std::vector<cellclean::GeoPoint> points(std::size_t n) {
        std::vector<cellclean::GeoPoint> out;
        for (std::size_t i = 0; i < n; ++i) out.push_back(point());
        return out;
    }
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }
};

// Distinct keys within one LAC, unordered.
inline std::vector<cellclean::CellKey> distinct_keys(Gen& g, std::size_t n, std::uint32_t lac = 7) {
    std::set<std::uint32_t> ids;
    while (ids.size() < n) ids.insert(static_cast<std::uint32_t>(1 + g.below(100000)));
    std::vector<cellclean::CellKey> keys;
    for (auto id : ids) keys.emplace_back(lac, id);
    g.shuffle(keys);
    return keys;
}

inline double oracle_dhd(const std::vector<cellclean::GeoPoint>& xs, const std::vector<cellclean::GeoPoint>& ys,
                         cellclean::MetricMode mode) {
    double worst = 0.0;
    for (const auto& x : xs) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& y : ys) best = std::min(best, cellclean::geo_distance(x, y, mode));
        worst = std::max(worst, best);
    }
    return worst;
}

inline double oracle_hausdorff(const std::vector<cellclean::GeoPoint>& xs,
                               const std::vector<cellclean::GeoPoint>& ys, cellclean::MetricMode mode) {
    return std::max(oracle_dhd(xs, ys, mode), oracle_dhd(ys, xs, mode));
}

// Textbook single linkage: each round scans every pair of clusters and every
// pair of their points. Returns merge heights in order.
inline std::vector<double> oracle_single_linkage(const std::vector<cellclean::GeoPoint>& pts,
                                                 cellclean::MetricMode mode) {
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < pts.size(); ++i) clusters.push_back({i});
    std::vector<double> heights;
    while (clusters.size() > 1) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 1;
        for (std::size_t i = 0; i < clusters.size(); ++i)
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                double d = std::numeric_limits<double>::infinity();
                for (auto a : clusters[i])
                    for (auto b : clusters[j]) d = std::min(d, cellclean::geo_distance(pts[a], pts[b], mode));
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        heights.push_back(best);
        clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    }
    return heights;
}

// Connected components of the graph joining points at distance <= cut.
// Components are sorted lists of point indices, ordered by first index.
inline std::vector<std::vector<std::size_t>> oracle_components(const std::vector<cellclean::GeoPoint>& pts,
                                                               double cut, cellclean::MetricMode mode) {
    const std::size_t n = pts.size();
    std::vector<int> comp(n, -1);
    int next = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<std::size_t> stack{s};
        comp[s] = next;
        while (!stack.empty()) {
            auto u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < n; ++v)
                if (comp[v] < 0 && cellclean::geo_distance(pts[u], pts[v], mode) <= cut) {
                    comp[v] = next;
                    stack.push_back(v);
                }
        }
        ++next;
    }
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(next));
    for (std::size_t i = 0; i < n; ++i) out[static_cast<std::size_t>(comp[i])].push_back(i);
    return out;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("cellclean_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

// Conservation checks shared by every suite.
inline bool report_sums(const cellclean::ResolutionReport& r) {
    return r.resolved_db + r.resolved_semantic + r.missing == r.total_unique_cells;
}

inline bool partition_conserves(const cellclean::LacPartition& p, std::span<const cellclean::LocatedCell> input) {
    std::vector<cellclean::CellKey> in, out;
    for (const auto& c : input) in.push_back(c.cell);
    for (const auto& c : p.representative) out.push_back(c.cell);
    for (const auto& c : p.outliers) out.push_back(c.cell);
    std::sort(in.begin(), in.end());
    std::sort(out.begin(), out.end());
    return in == out && std::adjacent_find(out.begin(), out.end()) == out.end();
}

}  // namespace testing
