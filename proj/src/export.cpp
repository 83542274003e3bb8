#include "cellclean/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace cellclean {

namespace {

using ordered_json = nlohmann::ordered_json;

double round_coord(double v) {
    const double scale = std::pow(10.0, kGeoJsonDecimals);
    return std::round(v * scale) / scale;
}

ordered_json feature(const CellKey& cell, const GeoPoint& p, ResolutionSource source, const char* cluster) {
    ordered_json props;
    if (cell.mcc) props["mcc"] = *cell.mcc;
    if (cell.mnc) props["mnc"] = *cell.mnc;
    props["lac"] = cell.lac;
    props["cell_id"] = cell.cell_id;
    props["source"] = std::string(to_string(source));
    if (cluster != nullptr) props["cluster"] = cluster;

    ordered_json f;
    f["type"] = "Feature";
    f["geometry"] = {{"type", "Point"}, {"coordinates", {round_coord(p.lon()), round_coord(p.lat())}}};
    f["properties"] = std::move(props);
    return f;
}

std::string collection(ordered_json features) {
    ordered_json fc;
    fc["type"] = "FeatureCollection";
    fc["features"] = std::move(features);
    return fc.dump() + "\n";
}

std::string optional_u32(const std::optional<std::uint32_t>& v) { return v ? std::to_string(*v) : std::string(); }

void write_key_and_point(std::ostream& out, const Resolution& r) {
    out << optional_u32(r.cell.mcc) << ',' << optional_u32(r.cell.mnc) << ',' << r.cell.lac << ',' << r.cell.cell_id
        << ',';
    if (r.point) out << csv::format_double(r.point->lat()) << ',' << csv::format_double(r.point->lon());
    else out << ',';
    out << ',' << to_string(r.source);
}

[[noreturn]] void row_error(std::string_view source, std::size_t line, const std::string& msg) {
    throw FormatError(std::string(source) + ":" + std::to_string(line) + ": " + msg);
}

// Parses the leading `mcc,mnc,lac,cell_id,lat,lon,source` columns.
Resolution parse_resolution_fields(const std::vector<std::string_view>& f, std::string_view source, std::size_t line) {
    std::optional<std::uint32_t> mcc, mnc;
    if (!csv::trim(f[0]).empty() && !(mcc = csv::parse_u32(f[0]))) row_error(source, line, "invalid mcc");
    if (!csv::trim(f[1]).empty() && !(mnc = csv::parse_u32(f[1]))) row_error(source, line, "invalid mnc");
    const auto lac = csv::parse_u32(f[2]);
    const auto cell = csv::parse_u32(f[3]);
    if (!lac || !cell || *lac == 0 || *cell == 0) row_error(source, line, "invalid lac or cell_id");

    Resolution r{CellKey(*lac, *cell, mcc, mnc), std::nullopt, ResolutionSource::missing};
    try {
        r.source = parse_source(csv::trim(f[6]));
    } catch (const std::invalid_argument& e) {
        row_error(source, line, e.what());
    }
    const bool has_coords = !csv::trim(f[4]).empty() || !csv::trim(f[5]).empty();
    if (has_coords) {
        const auto lat = csv::parse_double(f[4]);
        const auto lon = csv::parse_double(f[5]);
        if (!lat || !lon || !GeoPoint::valid(*lat, *lon)) row_error(source, line, "invalid coordinates");
        r.point = GeoPoint(*lat, *lon);
    }
    if (r.point.has_value() != (r.source != ResolutionSource::missing))
        row_error(source, line, "coordinates do not match source '" + std::string(to_string(r.source)) + "'");
    return r;
}

template <typename Fn>
void read_table(std::istream& in, std::string_view header, std::string_view source, std::size_t fields, Fn&& fn) {
    if (!in) throw IoError(std::string(source) + ": stream is not readable");
    csv::expect_header(in, header, source);
    std::string line;
    std::size_t line_no = 1;
    while (csv::read_line(in, line)) {
        ++line_no;
        if (csv::trim(line).empty()) continue;
        const auto f = csv::split(line);
        if (f.size() != fields)
            row_error(source, line_no,
                      "expected " + std::to_string(fields) + " fields, found " + std::to_string(f.size()));
        fn(line_no, f);
    }
}

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string to_geojson(std::span<const Resolution> resolutions) {
    std::vector<const Resolution*> sorted;
    for (const auto& r : resolutions) {
        if (!r.point) throw std::domain_error("cell " + to_string(r.cell) + " has no coordinates to export");
        sorted.push_back(&r);
    }
    std::sort(sorted.begin(), sorted.end(), [](const Resolution* a, const Resolution* b) { return a->cell < b->cell; });
    ordered_json features = ordered_json::array();
    for (const auto* r : sorted) features.push_back(feature(r->cell, *r->point, r->source, nullptr));
    return collection(std::move(features));
}

namespace {

struct RoledCell {
    const LocatedCell* cell;
    const char* role;
};

std::vector<RoledCell> roled_cells(std::span<const LacPartition> partitions) {
    std::vector<RoledCell> cells;
    for (const auto& p : partitions) {
        for (const auto& c : p.representative) cells.push_back({&c, "representative"});
        const char* role = p.status == LacStatus::clustered ? "outlier" : "insufficient-data";
        for (const auto& c : p.outliers) cells.push_back({&c, role});
    }
    std::sort(cells.begin(), cells.end(), [](const RoledCell& a, const RoledCell& b) { return a.cell->cell < b.cell->cell; });
    return cells;
}

std::map<CellKey, ResolutionSource> sources_of(std::span<const Resolution> resolutions) {
    std::map<CellKey, ResolutionSource> out;
    for (const auto& r : resolutions) out.emplace(r.cell, r.source);
    return out;
}

ResolutionSource source_for(const std::map<CellKey, ResolutionSource>& sources, const CellKey& cell) {
    const auto it = sources.find(cell);
    if (it == sources.end()) return ResolutionSource::db;
    if (it->second == ResolutionSource::missing)
        throw std::domain_error("cell " + to_string(cell) + " is partitioned but has no resolved location");
    return it->second;
}

}  // namespace

std::string to_geojson(std::span<const LacPartition> partitions, std::span<const Resolution> resolutions) {
    const auto sources = sources_of(resolutions);
    ordered_json features = ordered_json::array();
    for (const auto& rc : roled_cells(partitions))
        features.push_back(feature(rc.cell->cell, rc.cell->point, source_for(sources, rc.cell->cell), rc.role));
    return collection(std::move(features));
}

void write_resolutions(std::ostream& out, std::span<const Resolution> resolutions) {
    out << kResolutionsHeader << '\n';
    for (const auto& r : resolutions) {
        write_key_and_point(out, r);
        out << '\n';
    }
}

std::vector<Resolution> read_resolutions(std::istream& in, std::string_view source) {
    std::vector<Resolution> out;
    read_table(in, kResolutionsHeader, source, 7, [&](std::size_t line, const std::vector<std::string_view>& f) {
        out.push_back(parse_resolution_fields(f, source, line));
    });
    return out;
}

void write_clusters(std::ostream& out, std::span<const SemanticCluster> clusters) {
    out << kClustersHeader << '\n';
    for (const auto& c : clusters)
        for (const auto& m : c.members)
            out << c.label << ',' << m.cell.lac << ',' << m.cell.cell_id << ',' << m.frequency << '\n';
}

std::vector<SemanticCluster> read_clusters(std::istream& in, std::string_view source) {
    std::vector<SemanticCluster> out;
    read_table(in, kClustersHeader, source, 4, [&](std::size_t line, const std::vector<std::string_view>& f) {
        const auto label = csv::trim(f[0]);
        const auto lac = csv::parse_u32(f[1]);
        const auto cell = csv::parse_u32(f[2]);
        const auto freq = csv::parse_u64(f[3]);
        if (label.empty()) row_error(source, line, "empty label");
        if (!lac || !cell || *lac == 0 || *cell == 0) row_error(source, line, "invalid lac or cell_id");
        if (!freq || *freq == 0) row_error(source, line, "invalid frequency");
        if (out.empty() || out.back().label != label) out.push_back({std::string(label), {}});
        out.back().members.push_back({CellKey(*lac, *cell), static_cast<std::size_t>(*freq)});
    });
    return out;
}

void write_partitions(std::ostream& out, std::span<const LacPartition> partitions,
                      std::span<const Resolution> resolutions) {
    const auto sources = sources_of(resolutions);
    out << kPartitionsHeader << '\n';
    for (const auto& rc : roled_cells(partitions)) {
        const Resolution r{rc.cell->cell, rc.cell->point, source_for(sources, rc.cell->cell)};
        write_key_and_point(out, r);
        out << ',' << rc.role << '\n';
    }
}

std::vector<PartitionRow> read_partitions(std::istream& in, std::string_view source) {
    std::vector<PartitionRow> out;
    read_table(in, kPartitionsHeader, source, 8, [&](std::size_t line, const std::vector<std::string_view>& f) {
        auto r = parse_resolution_fields(f, source, line);
        if (!r.point) row_error(source, line, "partitioned cell without coordinates");
        const auto role = csv::trim(f[7]);
        if (role != "representative" && role != "outlier" && role != "insufficient-data")
            row_error(source, line, "unknown cluster role '" + std::string(role) + "'");
        out.push_back({std::move(r), std::string(role)});
    });
    return out;
}

std::vector<LacPartition> partitions_from_rows(std::span<const PartitionRow> rows) {
    std::map<std::uint32_t, LacPartition> by_lac;
    for (const auto& row : rows) {
        auto& p = by_lac[row.resolution.cell.lac];
        p.lac = row.resolution.cell.lac;
        const LocatedCell cell{row.resolution.cell, *row.resolution.point};
        if (row.cluster == "representative") {
            p.representative.push_back(cell);
        } else {
            if (row.cluster == "insufficient-data") p.status = LacStatus::insufficient_data;
            p.outliers.push_back(cell);
        }
    }
    std::vector<LacPartition> out;
    for (auto& [lac, p] : by_lac) {
        auto by_key = [](const LocatedCell& a, const LocatedCell& b) { return a.cell < b.cell; };
        std::sort(p.representative.begin(), p.representative.end(), by_key);
        std::sort(p.outliers.begin(), p.outliers.end(), by_key);
        out.push_back(std::move(p));
    }
    return out;
}

void write_oscillations(std::ostream& out, std::span<const OscillationVerdict> verdicts) {
    out << kOscillationsHeader << '\n';
    for (const auto& v : verdicts)
        out << v.pair.first.lac << ',' << v.pair.first.cell_id << ',' << v.pair.second.lac << ','
            << v.pair.second.cell_id << ',' << v.switch_count << ',' << (v.stationary() ? "true" : "false") << ','
            << v.co_cluster.value_or("") << '\n';
}

void write_diagnostics(std::ostream& out, std::span<const Diagnostic> diagnostics) {
    out << kDiagnosticsHeader << '\n';
    for (const auto& d : diagnostics) out << d.source << ',' << d.line << ',' << quote(d.message) << '\n';
}

std::vector<GeoPoint> read_points(std::istream& in, std::string_view source) {
    if (!in) throw IoError(std::string(source) + ": stream is not readable");
    std::string header;
    if (!csv::read_line(in, header)) throw FormatError(std::string(source) + ":1: missing header");
    std::stringstream rest;
    rest << header << '\n' << in.rdbuf();

    std::vector<GeoPoint> out;
    const auto h = csv::trim(header);
    if (h == kResolutionsHeader) {
        for (const auto& r : read_resolutions(rest, source))
            if (r.point) out.push_back(*r.point);
    } else if (h == kPartitionsHeader) {
        for (const auto& row : read_partitions(rest, source))
            if (row.cluster == "representative") out.push_back(*row.resolution.point);
    } else if (h == kPointsHeader) {
        read_table(rest, kPointsHeader, source, 2, [&](std::size_t line, const std::vector<std::string_view>& f) {
            const auto lat = csv::parse_double(f[0]);
            const auto lon = csv::parse_double(f[1]);
            if (!lat || !lon || !GeoPoint::valid(*lat, *lon)) row_error(source, line, "invalid coordinates");
            out.emplace_back(*lat, *lon);
        });
    } else {
        throw FormatError(std::string(source) + ":1: unrecognised header '" + std::string(h) + "'");
    }
    return out;
}

namespace {

void line(std::string& out, std::string_view label, std::size_t count, std::optional<Percent> pct = std::nullopt) {
    char buf[160];
    if (pct)
        std::snprintf(buf, sizeof buf, "%-46.*s%10zu%10s\n", static_cast<int>(label.size()), label.data(), count,
                      (pct->str() + "%").c_str());
    else
        std::snprintf(buf, sizeof buf, "%-46.*s%10zu\n", static_cast<int>(label.size()), label.data(), count);
    out += buf;
}

void text_line(std::string& out, std::string_view label, std::string_view value) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-46.*s%20.*s\n", static_cast<int>(label.size()), label.data(),
                  static_cast<int>(value.size()), value.data());
    out += buf;
}

std::string distance_text(const std::optional<double>& d, MetricMode mode) {
    if (!d) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof buf, mode == MetricMode::degrees ? "%.7f deg" : "%.3f m", *d);
    return buf;
}

}  // namespace

std::string summary(const SummaryInput& in) {
    std::string out;
    const auto& res = in.resolution;
    out += "CELL RESOLUTION                                    cells         %\n";
    line(out, "Total number of unique cells", res.total_unique_cells,
         Percent::of(res.total_unique_cells, res.total_unique_cells));
    line(out, "Located through the cell database", res.resolved_db, res.pct_db());
    line(out, "Located through semantic tags", res.resolved_semantic, res.pct_semantic());
    line(out, "Total located", res.resolved(), res.pct_resolved());
    line(out, "Without location", res.missing, res.pct_missing());

    const auto& cl = in.clean;
    const std::string unit = in.mode == MetricMode::degrees ? " deg" : " m";
    out += "\nOUTLIER REMOVAL (min cluster size " + std::to_string(in.min_cluster_size) + ", prune distance " +
           csv::format_double(in.prune_dist) + unit + ")\n";
    line(out, "Located cells considered", cl.input_cells, Percent::of(cl.input_cells, cl.input_cells));
    line(out, "Kept", cl.kept, cl.pct_kept());
    line(out, "Spatial outliers removed", cl.outliers, Percent::of(cl.outliers, cl.input_cells));
    line(out, "In insufficient-data location areas", cl.insufficient, Percent::of(cl.insufficient, cl.input_cells));
    if (cl.passed_through > 0)
        line(out, "Kept from insufficient-data location areas", cl.passed_through,
             Percent::of(cl.passed_through, cl.input_cells));
    line(out, "Kept, relative to all unique cells", cl.kept, Percent::of(cl.kept, res.total_unique_cells));
    line(out, "Location areas clustered", cl.lacs_clustered);
    line(out, "Location areas with insufficient data", cl.lacs_insufficient);

    out += "\nHAUSDORFF DISTANCE (" + std::string(to_string(in.mode)) + ")\n";
    text_line(out, "dhd(located, kept)", distance_text(in.retention.dhd_before_after, in.mode));
    text_line(out, "dhd(kept, located)", distance_text(in.retention.dhd_after_before, in.mode));
    text_line(out, "Hausdorff", distance_text(in.retention.hausdorff, in.mode));

    std::vector<const SemanticCluster*> by_incidence;
    for (const auto& c : in.clusters) by_incidence.push_back(&c);
    std::sort(by_incidence.begin(), by_incidence.end(), [](const SemanticCluster* a, const SemanticCluster* b) {
        if (a->incidence() != b->incidence()) return a->incidence() > b->incidence();
        return a->label < b->label;
    });
    out += "\nSEMANTIC LOCATIONS                                 cells\n";
    for (const auto* c : by_incidence) line(out, c->label, c->incidence());

    std::vector<std::pair<CellKey, std::size_t>> shared;
    for (const auto& [cell, n] : cell_incidence(in.clusters))
        if (n > 1) shared.emplace_back(cell, n);
    std::stable_sort(shared.begin(), shared.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    out += "\nCELLS SHARED BY SEVERAL LOCATIONS              locations\n";
    for (const auto& [cell, n] : shared) line(out, to_string(cell), n);
    return out;
}

}  // namespace cellclean
