#include "cellclean/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

namespace cellclean::synth {

namespace {

std::size_t round_half_up(double x) { return static_cast<std::size_t>(std::floor(x + 0.5)); }

constexpr std::uint32_t kBaseLac = 4000;
constexpr std::uint32_t kBaseCellId = 100;
constexpr std::uint32_t kMcc = 310;
constexpr std::uint32_t kMnc = 26;

const char* const kPlaceNames[] = {"Home",   "Office", "Airport",  "Gym",    "Library", "Cafe",
                                   "School", "Clinic", "Station",  "Market", "Parents", "Lab"};

std::string place_label(std::size_t i) {
    constexpr std::size_t named = std::size(kPlaceNames);
    if (i < named) return kPlaceNames[i];
    char buf[32];
    std::snprintf(buf, sizeof buf, "Place %03zu", i);
    return buf;
}

// Start of every synthetic trace: 2004-09-01T00:00:00Z.
constexpr Timestamp kTraceStart = std::chrono::sys_days(std::chrono::year(2004) / 9 / 1);

}  // namespace

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::domain_error("Rng::below(0)");
    // Largest multiple of n representable in 64 bits; reject above it.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % n;
}

GeoPoint offset(const GeoPoint& origin, double meters, double bearing_rad) {
    constexpr double to_deg = 180.0 / std::numbers::pi;
    const double dlat = meters * std::cos(bearing_rad) / kEarthRadiusM * to_deg;
    const double lat = origin.lat() + dlat;
    const double mean_lat = (origin.lat() + lat) / 2.0 / to_deg;
    const double dlon = meters * std::sin(bearing_rad) / (kEarthRadiusM * std::cos(mean_lat)) * to_deg;
    return GeoPoint(lat, origin.lon() + dlon);
}

std::size_t SynthConfig::missing_count() const { return round_half_up(missing_rate * static_cast<double>(total_cells())); }

std::size_t SynthConfig::imputable_count() const {
    return round_half_up(imputable_rate * static_cast<double>(missing_count()));
}

std::size_t SynthConfig::outlier_count() const {
    return round_half_up(outlier_rate * static_cast<double>(total_cells() - missing_count()));
}

void SynthConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::domain_error(std::string("invalid synth config: ") + what);
    };
    require(n_lacs > 0, "n_lacs must be positive");
    require(cells_per_lac > 0, "cells_per_lac must be positive");
    require(lac_radius_m > 0.0 && lac_radius_m <= kMaxCellRadiusM, "lac_radius_m must be in (0, 35000]");
    require(outlier_rate >= 0.0 && outlier_rate <= 1.0, "outlier_rate must be in [0, 1]");
    require(missing_rate >= 0.0 && missing_rate <= 1.0, "missing_rate must be in [0, 1]");
    require(imputable_rate >= 0.0 && imputable_rate <= 1.0, "imputable_rate must be in [0, 1]");
    require(outlier_min_km > 0.0, "outlier_min_km must be positive");
    require(cells_per_place > 0, "cells_per_place must be positive");
    require(imputable_count() == 0 || n_semantic_places > 0, "imputable cells need at least one semantic place");

    // Place p lands in LAC slot p % n_lacs; each slot must hold its places.
    std::vector<std::size_t> used(n_lacs, 0);
    std::size_t in_places = 0;
    for (std::size_t p = 0; p < n_semantic_places; ++p) {
        const std::size_t size = place_size(p);
        used[p % n_lacs] += size;
        in_places += size;
    }
    require(*std::max_element(used.begin(), used.end()) <= cells_per_lac,
            "not enough cells for semantic places");
    require(missing_count() - imputable_count() + outlier_count() <= total_cells() - in_places,
            "not enough cells outside places for missing and outlier cells");
}

std::size_t SynthConfig::place_size(std::size_t p) const {
    const std::size_t n_imputable = imputable_count();
    const std::size_t missing_here =
        n_imputable / n_semantic_places + (p < n_imputable % n_semantic_places ? 1 : 0);
    return std::max(cells_per_place, missing_here + 1);
}

SynthConfig read_config(std::istream& in) {
    SynthConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (csv::read_line(in, line)) {
        ++line_no;
        auto text = csv::trim(std::string_view(line).substr(0, line.find('#')));
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos)
            throw FormatError("synth config line " + std::to_string(line_no) + ": expected key = value");
        const auto key = csv::trim(text.substr(0, eq));
        const auto value = csv::trim(text.substr(eq + 1));
        auto bad = [&] {
            return FormatError("synth config line " + std::to_string(line_no) + ": bad value for " + std::string(key));
        };
        auto as_size = [&] {
            const auto v = csv::parse_u64(value);
            if (!v) throw bad();
            return static_cast<std::size_t>(*v);
        };
        auto as_double = [&] {
            const auto v = csv::parse_double(value);
            if (!v) throw bad();
            return *v;
        };
        if (key == "seed") {
            const auto v = csv::parse_u64(value);
            if (!v) throw bad();
            cfg.seed = *v;
        } else if (key == "n_lacs") cfg.n_lacs = as_size();
        else if (key == "cells_per_lac") cfg.cells_per_lac = as_size();
        else if (key == "lac_radius_m") cfg.lac_radius_m = as_double();
        else if (key == "n_semantic_places") cfg.n_semantic_places = as_size();
        else if (key == "cells_per_place") cfg.cells_per_place = as_size();
        else if (key == "outlier_rate") cfg.outlier_rate = as_double();
        else if (key == "outlier_min_km") cfg.outlier_min_km = as_double();
        else if (key == "missing_rate") cfg.missing_rate = as_double();
        else if (key == "imputable_rate") cfg.imputable_rate = as_double();
        else
            throw FormatError("synth config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
    cfg.validate();
    return cfg;
}

void write_config(std::ostream& out, const SynthConfig& cfg) {
    out << "seed = " << cfg.seed << '\n'
        << "n_lacs = " << cfg.n_lacs << '\n'
        << "cells_per_lac = " << cfg.cells_per_lac << '\n'
        << "lac_radius_m = " << csv::format_double(cfg.lac_radius_m) << '\n'
        << "n_semantic_places = " << cfg.n_semantic_places << '\n'
        << "cells_per_place = " << cfg.cells_per_place << '\n'
        << "outlier_rate = " << csv::format_double(cfg.outlier_rate) << '\n'
        << "outlier_min_km = " << csv::format_double(cfg.outlier_min_km) << '\n'
        << "missing_rate = " << csv::format_double(cfg.missing_rate) << '\n'
        << "imputable_rate = " << csv::format_double(cfg.imputable_rate) << '\n';
}

std::string_view to_string(CellKind kind) {
    switch (kind) {
        case CellKind::clean: return "clean";
        case CellKind::outlier: return "outlier";
        case CellKind::missing: return "missing";
    }
    return "clean";
}

std::string_view to_string(SegmentKind kind) {
    return kind == SegmentKind::oscillation ? "oscillation" : "movement";
}

Network gen_network(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    Network net;
    constexpr double two_pi = 2.0 * std::numbers::pi;

    // Location areas and their cells, uniform over a disc.
    std::vector<std::uint32_t> lacs;
    std::map<std::uint32_t, std::vector<CellKey>> cells_of;
    for (std::size_t i = 0; i < cfg.n_lacs; ++i) {
        const auto lac = static_cast<std::uint32_t>(kBaseLac + i);
        lacs.push_back(lac);
        const GeoPoint center(rng.uniform(-55.0, 55.0), rng.uniform(-160.0, 160.0));
        net.lac_centers.emplace(lac, center);
        for (std::size_t j = 0; j < cfg.cells_per_lac; ++j) {
            const CellKey key(lac, static_cast<std::uint32_t>(kBaseCellId + j));
            const double r = cfg.lac_radius_m * std::sqrt(rng.uniform());
            net.truth.emplace(key, offset(center, r, rng.uniform(0.0, two_pi)));
            cells_of[lac].push_back(key);
        }
    }
    for (auto& [lac, cells] : cells_of) rng.shuffle(cells);  // pools drawn from the back

    std::map<CellKey, CellKind> kind;
    std::set<CellKey> in_place;
    for (const auto& [key, p] : net.truth) kind.emplace(key, CellKind::clean);

    // Semantic places. Missing members are spread round-robin; the anchor and
    // any fillers stay database-known so every place can donate coordinates.
    const std::size_t n_imputable = cfg.imputable_count();
    const std::size_t n_places = cfg.n_semantic_places;
    std::vector<std::uint32_t> place_lacs(lacs);
    rng.shuffle(place_lacs);
    const double place_radius = std::min(300.0, 0.2 * cfg.lac_radius_m);
    for (std::size_t p = 0; p < n_places; ++p) {
        const std::size_t missing_here = n_imputable / n_places + (p < n_imputable % n_places ? 1 : 0);
        const std::size_t size = cfg.place_size(p);
        const auto lac = place_lacs[p % place_lacs.size()];
        auto& pool = cells_of[lac];

        Place place{place_label(p), lac, {}};
        const GeoPoint center = offset(net.lac_centers.at(lac), (cfg.lac_radius_m - place_radius) * std::sqrt(rng.uniform()),
                                       rng.uniform(0.0, two_pi));
        for (std::size_t m = 0; m < size; ++m) {
            const CellKey key = pool.back();
            pool.pop_back();
            net.truth.at(key) = offset(center, place_radius * std::sqrt(rng.uniform()), rng.uniform(0.0, two_pi));
            if (m >= size - missing_here) kind.at(key) = CellKind::missing;
            in_place.insert(key);
            place.cells.push_back(key);
        }
        net.places.push_back(std::move(place));
    }

    // Remaining cells outside places, in a seed-dependent order.
    std::vector<CellKey> free_cells;
    for (const auto lac : lacs) free_cells.insert(free_cells.end(), cells_of[lac].begin(), cells_of[lac].end());
    rng.shuffle(free_cells);

    const std::size_t n_missing = cfg.missing_count();
    const std::size_t n_outliers = cfg.outlier_count();
    std::size_t next = 0;
    for (std::size_t i = 0; i < n_missing - n_imputable; ++i) kind.at(free_cells[next++]) = CellKind::missing;

    std::map<CellKey, GeoPoint> displaced;
    for (std::size_t i = 0; i < n_outliers; ++i) {
        const CellKey key = free_cells[next++];
        kind.at(key) = CellKind::outlier;
        const double dist = cfg.lac_radius_m + cfg.outlier_min_km * 1000.0 * (1.0 + rng.uniform());
        displaced.emplace(key, offset(net.lac_centers.at(key.lac), dist, rng.uniform(0.0, two_pi)));
    }

    for (const auto& [key, truth] : net.truth) {
        const auto k = kind.at(key);
        net.manifest.push_back({key, k});
        CellDbRow row{CellKey(key.lac, key.cell_id, kMcc, kMnc), truth.lon(), truth.lat(),
                      std::round(rng.uniform(500.0, 3000.0)), 1 + rng.below(50)};
        if (k == CellKind::missing) {
            if (rng.below(2) == 0) continue;  // no row at all
            row.lat = row.lon = 0.0;
        } else if (k == CellKind::outlier) {
            const auto& p = displaced.at(key);
            row.lat = p.lat();
            row.lon = p.lon();
        }
        net.db_rows.push_back(row);
    }
    return net;
}

Trace gen_trace(const Network& network, const SynthConfig& /*cfg*/, std::uint64_t seed) {
    Rng rng(seed);
    Trace trace;
    Timestamp now = kTraceStart;

    auto observe = [&](const CellKey& cell, std::int64_t step_s, std::optional<std::string> tag = std::nullopt) {
        now += std::chrono::seconds(step_s);
        trace.observations.push_back({now, cell, std::move(tag)});
    };

    std::set<CellKey> place_cells;
    for (const auto& p : network.places) place_cells.insert(p.cells.begin(), p.cells.end());
    std::vector<CellKey> travel;
    for (const auto& [key, pt] : network.truth)
        if (!place_cells.count(key)) travel.push_back(key);
    rng.shuffle(travel);

    std::vector<std::size_t> order(network.places.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);

    // Travel chunks sit between place visits; each travel cell is seen once,
    // 3 to 10 minutes apart.
    const std::size_t chunks = order.size() + 1;
    std::size_t travelled = 0;
    auto travel_chunk = [&](std::size_t chunk) {
        const std::size_t end = travel.size() * (chunk + 1) / chunks;
        for (; travelled < end; ++travelled) observe(travel[travelled], 180 + static_cast<std::int64_t>(rng.below(421)));
    };

    const std::size_t n_movements = order.size() >= 2 ? std::max<std::size_t>(1, order.size() / 4) : 0;
    for (std::size_t v = 0; v < order.size(); ++v) {
        travel_chunk(v);
        const auto& place = network.places[order[v]];
        const auto& anchor = place.cells.front();
        auto tagged = [&]() -> std::optional<std::string> {
            return rng.below(2) == 0 ? std::optional<std::string>(place.label) : std::nullopt;
        };

        // Stationary dwell: the handset flips between the anchor and each
        // other cell of the place every 20 to 60 seconds.
        observe(anchor, 300, tagged());
        for (std::size_t m = 1; m < place.cells.size(); ++m) {
            const std::size_t flips = 2 + rng.below(2);
            for (std::size_t f = 0; f < flips; ++f) {
                observe(place.cells[m], 20 + static_cast<std::int64_t>(rng.below(41)), tagged());
                observe(anchor, 20 + static_cast<std::int64_t>(rng.below(41)), tagged());
            }
            trace.segments.push_back({SegmentKind::oscillation, anchor, place.cells[m]});
        }

        // A quick hop to another place and back, after the first few visits.
        if (v >= 1 && v <= n_movements) {
            const auto& other = network.places[order[v - 1]].cells.front();
            observe(anchor, 600);
            observe(other, 60);
            observe(anchor, 60);
            trace.segments.push_back({SegmentKind::movement, anchor, other});
        }
    }
    travel_chunk(order.size());

    for (const auto& place : network.places)
        for (const auto& cell : place.cells) trace.cellnames.push_back({cell, place.label});
    return trace;
}

void write_manifest(std::ostream& out, const std::vector<ManifestEntry>& manifest) {
    out << "cell_lac,cell_id,kind\n";
    for (const auto& e : manifest) out << e.cell.lac << ',' << e.cell.cell_id << ',' << to_string(e.kind) << '\n';
}

void write_segments(std::ostream& out, const std::vector<Segment>& segments) {
    out << "kind,lac_a,cell_id_a,lac_b,cell_id_b\n";
    for (const auto& s : segments)
        out << to_string(s.kind) << ',' << s.a.lac << ',' << s.a.cell_id << ',' << s.b.lac << ',' << s.b.cell_id << '\n';
}

}  // namespace cellclean::synth
