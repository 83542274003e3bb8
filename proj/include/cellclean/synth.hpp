#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cellclean/core_geo.hpp"
#include "cellclean/ingest.hpp"

namespace cellclean::synth {

/// Generator settings. Rates are turned into counts with round-half-up.
///
/// Cell counts: every generated cell is observed in the trace. A fraction
/// `missing_rate` of them is unknown to the database (either a (0,0) row or
/// no row). A fraction `imputable_rate` of those missing cells belongs to a
/// semantic place that also holds database-known cells; the other missing
/// cells belong to no place. `outlier_rate` of the database-known cells
/// outside places are displaced far away from their location area.
struct SynthConfig {
    std::uint64_t seed = 1;
    std::size_t n_lacs = 5;
    std::size_t cells_per_lac = 50;
    double lac_radius_m = 6000.0;
    std::size_t n_semantic_places = 10;
    std::size_t cells_per_place = 4;
    double outlier_rate = 0.05;
    double outlier_min_km = 20.0;
    double missing_rate = 0.0;
    double imputable_rate = 0.0;

    /// Throws std::domain_error on an inconsistent configuration.
    void validate() const;

    std::size_t total_cells() const { return n_lacs * cells_per_lac; }
    std::size_t missing_count() const;
    std::size_t imputable_count() const;
    std::size_t outlier_count() const;
    /// Cells in the p-th semantic place: cells_per_place, grown when more
    /// missing cells must share it.
    std::size_t place_size(std::size_t p) const;
};

/// Reads `key = value` lines (the SynthConfig field names) on top of defaults.
SynthConfig read_config(std::istream& in);
void write_config(std::ostream& out, const SynthConfig& cfg);

enum class CellKind { clean, outlier, missing };

std::string_view to_string(CellKind kind);

struct ManifestEntry {
    CellKey cell;
    CellKind kind;
};

/// A labelled place: co-located cells of one LAC. The anchor is always
/// database-known.
struct Place {
    std::string label;
    std::uint32_t lac = 0;
    std::vector<CellKey> cells;  // anchor first
};

struct Network {
    std::map<CellKey, GeoPoint> truth;
    std::map<std::uint32_t, GeoPoint> lac_centers;
    std::vector<CellDbRow> db_rows;
    std::vector<ManifestEntry> manifest;  // ordered by key
    std::vector<Place> places;
};

Network gen_network(const SynthConfig& cfg);

enum class SegmentKind { oscillation, movement };

std::string_view to_string(SegmentKind kind);

/// A planted pattern in the trace: repeated A->B->A switching between two
/// cells of one place (oscillation) or a quick hop between two different
/// places (movement).
struct Segment {
    SegmentKind kind;
    CellKey a;
    CellKey b;
};

struct Trace {
    std::vector<Observation> observations;
    std::vector<CellName> cellnames;
    std::vector<Segment> segments;
};

/// Generates a time-ordered trace that observes every cell at least once.
Trace gen_trace(const Network& network, const SynthConfig& cfg, std::uint64_t seed);

void write_manifest(std::ostream& out, const std::vector<ManifestEntry>& manifest);
void write_segments(std::ostream& out, const std::vector<Segment>& segments);

/// Portable sampling on top of std::mt19937_64, whose output sequence is
/// fixed by the standard. The standard distributions are not, so the
/// mappings to doubles and bounded integers live here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n) by rejection sampling.
    std::uint64_t below(std::uint64_t n);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

/// Offsets `origin` by `meters` along `bearing_rad` (0 = north) with the
/// equirectangular approximation used by geo_distance.
GeoPoint offset(const GeoPoint& origin, double meters, double bearing_rad);

}  // namespace cellclean::synth
