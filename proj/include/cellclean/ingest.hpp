#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cellclean/core_geo.hpp"

namespace cellclean {

using Timestamp = std::chrono::sys_seconds;

/// A malformed or suspicious input row. Line numbers are 1-based and count
/// the header.
struct Diagnostic {
    std::string source;
    std::size_t line = 0;
    std::string message;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Whole-file schema problems (missing or wrong header).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <typename Record>
struct ParseResult {
    std::vector<Record> records;
    std::vector<Diagnostic> diagnostics;
};

struct Observation {
    Timestamp timestamp;
    CellKey cell;
    std::optional<std::string> tag;

    friend bool operator==(const Observation&, const Observation&) = default;
};

struct CellName {
    CellKey cell;
    std::string label;

    friend bool operator==(const CellName&, const CellName&) = default;
};

/// One OpenCellID export row. Coordinates may be the (0,0) "unknown" sentinel.
struct CellDbRow {
    CellKey cell;
    double lon = 0.0;
    double lat = 0.0;
    std::optional<double> range_m;
    std::optional<std::uint64_t> samples;

    bool is_sentinel() const { return lat == 0.0 && lon == 0.0; }

    friend bool operator==(const CellDbRow&, const CellDbRow&) = default;
};

inline constexpr std::string_view kObservationsHeader = "timestamp,lac,cell_id,tag";
inline constexpr std::string_view kCellnamesHeader = "lac,cell_id,label";
inline constexpr std::string_view kCellDbHeader =
    "radio,mcc,net,area,cell,unit,lon,lat,range,samples,changeable,created,updated,"
    "averageSignal";

ParseResult<Observation> parse_observations(std::istream& in, std::string_view source = "observations");
ParseResult<CellName> parse_cellnames(std::istream& in, std::string_view source = "cellnames");
ParseResult<CellDbRow> parse_celldb(std::istream& in, std::string_view source = "celldb");

void write_observations(std::ostream& out, std::span<const Observation> rows);
void write_cellnames(std::ostream& out, std::span<const CellName> rows);
void write_celldb(std::ostream& out, std::span<const CellDbRow> rows);

/// `YYYY-MM-DDTHH:MM:SSZ`; anything else yields nullopt.
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

// Small text helpers shared by the CSV readers in this library.
namespace csv {

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view line, char sep = ',');
std::optional<std::uint32_t> parse_u32(std::string_view s);
std::optional<std::uint64_t> parse_u64(std::string_view s);
std::optional<double> parse_double(std::string_view s);
/// Shortest representation that parses back to the identical double.
std::string format_double(double v);
/// Reads one line, stripping a trailing '\r'. Returns false at end of stream.
bool read_line(std::istream& in, std::string& line);
/// Reads and checks the header line; throws FormatError on mismatch.
void expect_header(std::istream& in, std::string_view expected, std::string_view source);

}  // namespace csv

}  // namespace cellclean
