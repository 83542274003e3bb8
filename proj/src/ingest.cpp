#include "cellclean/ingest.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>

namespace cellclean {

namespace csv {

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

template <typename T>
static std::optional<T> parse_integral(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    T value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

std::optional<std::uint32_t> parse_u32(std::string_view s) { return parse_integral<std::uint32_t>(s); }
std::optional<std::uint64_t> parse_u64(std::string_view s) { return parse_integral<std::uint64_t>(s); }

std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

bool read_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) {
        if (in.bad()) throw IoError("read error");
        return false;
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

void expect_header(std::istream& in, std::string_view expected, std::string_view source) {
    std::string line;
    if (!read_line(in, line))
        throw FormatError(std::string(source) + ":1: missing header, expected '" +
                          std::string(expected) + "'");
    if (trim(line) != expected)
        throw FormatError(std::string(source) + ":1: bad header '" + line + "', expected '" +
                          std::string(expected) + "'");
}

}  // namespace csv

namespace {

// Returns false for a zero-byte stream, which is read as an empty table.
bool open_table(std::istream& in, std::string_view header, std::string_view source) {
    if (!in) throw IoError(std::string(source) + ": stream is not readable");
    if (in.peek() == std::char_traits<char>::eof()) {
        if (in.bad()) throw IoError(std::string(source) + ": read error");
        return false;
    }
    csv::expect_header(in, header, source);
    return true;
}

// Iterates data rows, skipping blank lines, and hands (line_no, fields) to fn.
template <typename Fn>
void for_each_row(std::istream& in, Fn&& fn) {
    std::string line;
    std::size_t line_no = 1;
    while (csv::read_line(in, line)) {
        ++line_no;
        if (csv::trim(line).empty()) continue;
        fn(line_no, csv::split(line));
    }
}

std::optional<CellKey> parse_key(std::string_view lac, std::string_view cell, std::string& err) {
    const auto l = csv::parse_u32(lac);
    const auto c = csv::parse_u32(cell);
    if (!l || *l == 0) {
        err = "invalid lac '" + std::string(lac) + "'";
        return std::nullopt;
    }
    if (!c || *c == 0) {
        err = "invalid cell_id '" + std::string(cell) + "'";
        return std::nullopt;
    }
    return CellKey(*l, *c);
}

std::string field_count_error(std::size_t got, std::size_t want) {
    return "expected " + std::to_string(want) + " fields, found " + std::to_string(got);
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    text = csv::trim(text);
    // YYYY-MM-DDTHH:MM:SSZ
    if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
        text[13] != ':' || text[16] != ':' || text[19] != 'Z')
        return std::nullopt;
    auto num = [&](std::size_t pos, std::size_t len) -> std::optional<unsigned> {
        unsigned v = 0;
        for (std::size_t i = pos; i < pos + len; ++i) {
            if (text[i] < '0' || text[i] > '9') return std::nullopt;
            v = v * 10 + static_cast<unsigned>(text[i] - '0');
        }
        return v;
    };
    const auto y = num(0, 4), mo = num(5, 2), d = num(8, 2);
    const auto h = num(11, 2), mi = num(14, 2), s = num(17, 2);
    if (!y || !mo || !d || !h || !mi || !s) return std::nullopt;
    if (*h > 23 || *mi > 59 || *s > 59) return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year(static_cast<int>(*y)),
                                          std::chrono::month(*mo), std::chrono::day(*d)};
    if (!ymd.ok()) return std::nullopt;
    return std::chrono::sys_days(ymd) + std::chrono::hours(*h) + std::chrono::minutes(*mi) +
           std::chrono::seconds(*s);
}

std::string format_timestamp(Timestamp ts) {
    const auto day = std::chrono::floor<std::chrono::days>(ts);
    const std::chrono::year_month_day ymd(day);
    const std::chrono::hh_mm_ss hms(ts - day);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

ParseResult<Observation> parse_observations(std::istream& in, std::string_view source) {
    ParseResult<Observation> result;
    if (!open_table(in, kObservationsHeader, source)) return result;
    const std::string src(source);
    for_each_row(in, [&](std::size_t line_no, const std::vector<std::string_view>& f) {
        if (f.size() != 4) {
            result.diagnostics.push_back({src, line_no, field_count_error(f.size(), 4)});
            return;
        }
        const auto ts = parse_timestamp(f[0]);
        if (!ts) {
            result.diagnostics.push_back(
                {src, line_no, "invalid timestamp '" + std::string(f[0]) + "'"});
            return;
        }
        std::string err;
        const auto key = parse_key(f[1], f[2], err);
        if (!key) {
            result.diagnostics.push_back({src, line_no, err});
            return;
        }
        Observation obs{*ts, *key, std::nullopt};
        if (const auto tag = csv::trim(f[3]); !tag.empty()) obs.tag = std::string(tag);
        result.records.push_back(std::move(obs));
    });
    return result;
}

ParseResult<CellName> parse_cellnames(std::istream& in, std::string_view source) {
    ParseResult<CellName> result;
    if (!open_table(in, kCellnamesHeader, source)) return result;
    const std::string src(source);
    std::set<std::pair<CellKey, std::string>> seen;
    for_each_row(in, [&](std::size_t line_no, const std::vector<std::string_view>& f) {
        if (f.size() != 3) {
            result.diagnostics.push_back({src, line_no, field_count_error(f.size(), 3)});
            return;
        }
        std::string err;
        const auto key = parse_key(f[0], f[1], err);
        if (!key) {
            result.diagnostics.push_back({src, line_no, err});
            return;
        }
        const auto label = csv::trim(f[2]);
        if (label.empty()) {
            result.diagnostics.push_back({src, line_no, "empty label"});
            return;
        }
        if (!seen.emplace(*key, std::string(label)).second) {
            result.diagnostics.push_back(
                {src, line_no, "duplicate (cell, label) pair " + to_string(*key) + " '" +
                                   std::string(label) + "'"});
            return;
        }
        result.records.push_back({*key, std::string(label)});
    });
    return result;
}

ParseResult<CellDbRow> parse_celldb(std::istream& in, std::string_view source) {
    ParseResult<CellDbRow> result;
    if (!open_table(in, kCellDbHeader, source)) return result;
    const std::string src(source);
    for_each_row(in, [&](std::size_t line_no, const std::vector<std::string_view>& f) {
        auto fail = [&](std::string msg) { result.diagnostics.push_back({src, line_no, std::move(msg)}); };
        if (f.size() != 14) return fail(field_count_error(f.size(), 14));

        std::optional<std::uint32_t> mcc, mnc;
        if (!csv::trim(f[1]).empty() && !(mcc = csv::parse_u32(f[1])))
            return fail("invalid mcc '" + std::string(f[1]) + "'");
        if (!csv::trim(f[2]).empty() && !(mnc = csv::parse_u32(f[2])))
            return fail("invalid net '" + std::string(f[2]) + "'");
        std::string err;
        const auto key = parse_key(f[3], f[4], err);
        if (!key) return fail(err);

        const auto lon = csv::parse_double(f[6]);
        const auto lat = csv::parse_double(f[7]);
        if (!lon || !lat) return fail("unparseable coordinates");
        const bool sentinel = *lat == 0.0 && *lon == 0.0;
        if (!sentinel && !GeoPoint::valid(*lat, *lon))
            return fail("coordinates out of range: lat=" + std::string(csv::trim(f[7])) +
                        " lon=" + std::string(csv::trim(f[6])));

        CellDbRow row{CellKey(key->lac, key->cell_id, mcc, mnc), *lon, *lat, std::nullopt, std::nullopt};
        if (!csv::trim(f[8]).empty()) {
            const auto range = csv::parse_double(f[8]);
            if (!range || *range < 0.0) return fail("invalid range '" + std::string(f[8]) + "'");
            row.range_m = range;
        }
        if (!csv::trim(f[9]).empty()) {
            const auto samples = csv::parse_u64(f[9]);
            if (!samples) return fail("invalid samples '" + std::string(f[9]) + "'");
            row.samples = samples;
        }
        result.records.push_back(row);
    });
    return result;
}

void write_observations(std::ostream& out, std::span<const Observation> rows) {
    out << kObservationsHeader << '\n';
    for (const auto& o : rows)
        out << format_timestamp(o.timestamp) << ',' << o.cell.lac << ',' << o.cell.cell_id << ','
            << o.tag.value_or("") << '\n';
}

void write_cellnames(std::ostream& out, std::span<const CellName> rows) {
    out << kCellnamesHeader << '\n';
    for (const auto& r : rows) out << r.cell.lac << ',' << r.cell.cell_id << ',' << r.label << '\n';
}

void write_celldb(std::ostream& out, std::span<const CellDbRow> rows) {
    out << kCellDbHeader << '\n';
    for (const auto& r : rows) {
        out << "GSM,";
        if (r.cell.mcc) out << *r.cell.mcc;
        out << ',';
        if (r.cell.mnc) out << *r.cell.mnc;
        out << ',' << r.cell.lac << ',' << r.cell.cell_id << ",," << csv::format_double(r.lon) << ','
            << csv::format_double(r.lat) << ',';
        if (r.range_m) out << csv::format_double(*r.range_m);
        out << ',';
        if (r.samples) out << *r.samples;
        out << ",1,0,0,\n";
    }
}

}  // namespace cellclean
