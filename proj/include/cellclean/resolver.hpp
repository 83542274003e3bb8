#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cellclean/core_geo.hpp"
#include "cellclean/ingest.hpp"

namespace cellclean {

enum class ResolutionSource { db, semantic_imputed, missing };

std::string_view to_string(ResolutionSource source);
ResolutionSource parse_source(std::string_view text);

struct Resolution {
    CellKey cell;
    std::optional<GeoPoint> point;
    ResolutionSource source = ResolutionSource::missing;

    bool located() const { return point.has_value(); }

    friend bool operator==(const Resolution&, const Resolution&) = default;
};

/// A percentage held in tenths so reports print exact one-decimal values.
struct Percent {
    std::int64_t tenths = 0;

    /// 100*count/total rounded half-up to one decimal; 0 when total is 0.
    static Percent of(std::size_t count, std::size_t total);
    std::string str() const;

    friend bool operator==(const Percent&, const Percent&) = default;
};

struct ResolutionReport {
    std::size_t total_unique_cells = 0;
    std::size_t resolved_db = 0;
    std::size_t resolved_semantic = 0;
    std::size_t missing = 0;

    std::size_t resolved() const { return resolved_db + resolved_semantic; }
    Percent pct_db() const { return Percent::of(resolved_db, total_unique_cells); }
    Percent pct_semantic() const { return Percent::of(resolved_semantic, total_unique_cells); }
    Percent pct_missing() const { return Percent::of(missing, total_unique_cells); }
    Percent pct_resolved() const { return Percent::of(resolved(), total_unique_cells); }

    friend bool operator==(const ResolutionReport&, const ResolutionReport&) = default;
};

/// Counts resolutions by source.
ResolutionReport make_report(std::span<const Resolution> resolutions);

/// Immutable cell-ID index. Full-CGI queries hit the CGI index; queries
/// without MCC/MNC hit the (lac, cell_id) index. Sentinel rows are stored
/// as known-but-unlocated.
class CellDatabase {
public:
    struct Entry {
        std::optional<GeoPoint> point;
        std::optional<std::uint64_t> samples;
    };

    CellDatabase() = default;

    /// Number of distinct keys (full CGI where present) that were indexed.
    std::size_t size() const { return key_count_; }
    const Entry* find(const CellKey& key) const;
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

    friend CellDatabase build_index(std::span<const CellDbRow> rows);

private:
    std::map<CellKey, Entry> by_cgi_;
    std::map<CellKey, Entry> by_short_;
    std::size_t key_count_ = 0;
    std::vector<Diagnostic> diagnostics_;
};

/// Duplicates keep the row with the most samples; equal counts keep the later row.
CellDatabase build_index(std::span<const CellDbRow> rows);

Resolution resolve(const CellDatabase& db, const CellKey& cell);

struct ResolveAllResult {
    std::vector<Resolution> resolutions;
    ResolutionReport report;
};

/// Resolves each distinct key once, returning resolutions ordered by key.
ResolveAllResult resolve_all(const CellDatabase& db, std::span<const CellKey> cells,
                             unsigned threads = 1);

}  // namespace cellclean
