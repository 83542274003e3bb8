#include "cellclean/core_geo.hpp"

namespace cellclean {

CellKey::CellKey(std::uint32_t lac_, std::uint32_t cell_id_, std::optional<std::uint32_t> mcc_,
                 std::optional<std::uint32_t> mnc_)
    : mcc(mcc_), mnc(mnc_), lac(lac_), cell_id(cell_id_) {
    if (lac == 0 || cell_id == 0)
        throw std::domain_error("cell key requires lac > 0 and cell_id > 0");
}

std::string to_string(const CellKey& key) {
    std::string out;
    if (key.mcc) out += std::to_string(*key.mcc) + ".";
    if (key.mnc) out += std::to_string(*key.mnc) + ".";
    out += std::to_string(key.lac) + "." + std::to_string(key.cell_id);
    return out;
}

std::string_view to_string(MetricMode mode) {
    return mode == MetricMode::degrees ? "degrees" : "geodesic-meters";
}

MetricMode parse_metric(std::string_view text) {
    if (text == "degrees") return MetricMode::degrees;
    if (text == "geodesic-meters" || text == "geodesic" || text == "meters")
        return MetricMode::geodesic_meters;
    throw std::invalid_argument("unknown metric '" + std::string(text) +
                                "' (expected degrees or geodesic-meters)");
}

double distance_in_mode(double km, MetricMode mode) {
    const double meters = km * 1000.0;
    return mode == MetricMode::degrees ? meters / kMetersPerDegree : meters;
}

}  // namespace cellclean
