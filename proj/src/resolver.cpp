#include "cellclean/resolver.hpp"

#include <algorithm>
#include <set>

#include "cellclean/parallel.hpp"

namespace cellclean {

std::string_view to_string(ResolutionSource source) {
    switch (source) {
        case ResolutionSource::db: return "db";
        case ResolutionSource::semantic_imputed: return "semantic-imputed";
        case ResolutionSource::missing: return "missing";
    }
    return "missing";
}

ResolutionSource parse_source(std::string_view text) {
    if (text == "db") return ResolutionSource::db;
    if (text == "semantic-imputed") return ResolutionSource::semantic_imputed;
    if (text == "missing") return ResolutionSource::missing;
    throw std::invalid_argument("unknown resolution source '" + std::string(text) + "'");
}

Percent Percent::of(std::size_t count, std::size_t total) {
    if (total == 0) return {};
    // floor(1000*count/total + 1/2) in integers.
    const auto num = static_cast<std::int64_t>(count) * 2000 + static_cast<std::int64_t>(total);
    return {num / (2 * static_cast<std::int64_t>(total))};
}

std::string Percent::str() const {
    return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

ResolutionReport make_report(std::span<const Resolution> resolutions) {
    ResolutionReport r;
    r.total_unique_cells = resolutions.size();
    for (const auto& res : resolutions) {
        switch (res.source) {
            case ResolutionSource::db: ++r.resolved_db; break;
            case ResolutionSource::semantic_imputed: ++r.resolved_semantic; break;
            case ResolutionSource::missing: ++r.missing; break;
        }
    }
    return r;
}

namespace {

bool supersedes(const CellDatabase::Entry& incoming, const CellDatabase::Entry& current) {
    return incoming.samples >= current.samples;
}

}  // namespace

CellDatabase build_index(std::span<const CellDbRow> rows) {
    CellDatabase db;
    std::map<CellKey, CellKey> short_origin;  // short key -> full key of the winning row
    std::set<CellKey> keys;

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        CellDatabase::Entry entry;
        if (!row.is_sentinel()) entry.point = GeoPoint(row.lat, row.lon);
        entry.samples = row.samples;
        const std::string where = "row " + std::to_string(i + 1);
        keys.insert(row.cell);

        if (row.cell.has_cgi()) {
            auto [it, inserted] = db.by_cgi_.try_emplace(row.cell, entry);
            if (!inserted) {
                db.diagnostics_.push_back({"celldb-index", i + 1,
                                           where + ": duplicate cell " + to_string(row.cell)});
                if (supersedes(entry, it->second)) it->second = entry;
            }
        }

        const CellKey short_key = row.cell.short_key();
        auto [it, inserted] = db.by_short_.try_emplace(short_key, entry);
        if (inserted) {
            short_origin.emplace(short_key, row.cell);
            continue;
        }
        auto& origin = short_origin.at(short_key);
        if (origin != row.cell) {
            db.diagnostics_.push_back({"celldb-index", i + 1,
                                       where + ": (lac, cell_id) collision between " +
                                           to_string(origin) + " and " + to_string(row.cell)});
        } else if (!row.cell.has_cgi()) {
            db.diagnostics_.push_back({"celldb-index", i + 1,
                                       where + ": duplicate cell " + to_string(row.cell)});
        }
        if (supersedes(entry, it->second)) {
            it->second = entry;
            origin = row.cell;
        }
    }
    db.key_count_ = keys.size();
    return db;
}

const CellDatabase::Entry* CellDatabase::find(const CellKey& key) const {
    const auto& index = key.has_cgi() ? by_cgi_ : by_short_;
    const auto it = index.find(key.has_cgi() ? key : key.short_key());
    return it == index.end() ? nullptr : &it->second;
}

Resolution resolve(const CellDatabase& db, const CellKey& cell) {
    const auto* entry = db.find(cell);
    if (entry == nullptr || !entry->point) return {cell, std::nullopt, ResolutionSource::missing};
    return {cell, entry->point, ResolutionSource::db};
}

ResolveAllResult resolve_all(const CellDatabase& db, std::span<const CellKey> cells, unsigned threads) {
    std::vector<CellKey> keys(cells.begin(), cells.end());
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    ResolveAllResult out;
    out.resolutions.resize(keys.size());
    parallel_for(keys.size(), threads, [&](std::size_t i) { out.resolutions[i] = resolve(db, keys[i]); });
    out.report = make_report(out.resolutions);
    return out;
}

}  // namespace cellclean
