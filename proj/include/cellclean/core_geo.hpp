#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cellclean {

/// Mean Earth radius used by the equirectangular metric.
inline constexpr double kEarthRadiusM = 6'371'000.0;

/// Largest GSM cell radius; bounds the spatial extent of one location area.
inline constexpr double kMaxCellRadiusM = 35'000.0;

/// Identity of a GSM cell. MCC/MNC are optional because many traces only
/// carry (LAC, Cell ID); ordering puts absent fields before present ones.
struct CellKey {
    std::optional<std::uint32_t> mcc;
    std::optional<std::uint32_t> mnc;
    std::uint32_t lac = 0;
    std::uint32_t cell_id = 0;

    CellKey() = default;
    CellKey(std::uint32_t lac_, std::uint32_t cell_id_,
            std::optional<std::uint32_t> mcc_ = std::nullopt,
            std::optional<std::uint32_t> mnc_ = std::nullopt);

    bool has_cgi() const { return mcc.has_value() && mnc.has_value(); }
    /// The same cell keyed on (lac, cell_id) only.
    CellKey short_key() const { return CellKey(lac, cell_id); }

    friend auto operator<=>(const CellKey&, const CellKey&) = default;
    friend bool operator==(const CellKey&, const CellKey&) = default;
};

std::string to_string(const CellKey& key);

/// WGS84 position. Always a real location: callers model "no location" with
/// std::optional<GeoPoint>, never with (0,0).
template <typename Scalar>
class BasicGeoPoint {
public:
    using scalar_type = Scalar;

    BasicGeoPoint(Scalar lat, Scalar lon) : lat_(lat), lon_(lon) {
        if (!valid(lat, lon))
            throw std::domain_error("coordinate out of range: lat=" + std::to_string(lat) +
                                    " lon=" + std::to_string(lon));
    }

    static bool valid(Scalar lat, Scalar lon) {
        return std::isfinite(lat) && std::isfinite(lon) && lat >= Scalar(-90) &&
               lat <= Scalar(90) && lon >= Scalar(-180) && lon <= Scalar(180);
    }

    Scalar lat() const { return lat_; }
    Scalar lon() const { return lon_; }

    friend bool operator==(const BasicGeoPoint&, const BasicGeoPoint&) = default;

private:
    Scalar lat_;
    Scalar lon_;
};

using GeoPoint = BasicGeoPoint<double>;

enum class MetricMode { degrees, geodesic_meters };

std::string_view to_string(MetricMode mode);
MetricMode parse_metric(std::string_view text);

/// Plane distance in degrees, or equirectangular meters at the pair's mean
/// latitude. Both are symmetric and zero only for identical coordinates.
template <typename Scalar>
Scalar geo_distance(const BasicGeoPoint<Scalar>& a, const BasicGeoPoint<Scalar>& b,
                    MetricMode mode = MetricMode::geodesic_meters) {
    const Scalar dlat = b.lat() - a.lat();
    const Scalar dlon = b.lon() - a.lon();
    if (mode == MetricMode::degrees)
        return std::sqrt(dlat * dlat + dlon * dlon);

    constexpr Scalar to_rad = std::numbers::pi_v<Scalar> / Scalar(180);
    const Scalar mean_lat = (a.lat() + b.lat()) / Scalar(2) * to_rad;
    const Scalar dphi = dlat * to_rad;
    const Scalar dlambda = std::cos(mean_lat) * dlon * to_rad;
    return Scalar(kEarthRadiusM) * std::sqrt(dphi * dphi + dlambda * dlambda);
}

/// Meters covered by one degree of arc on the mean sphere.
inline constexpr double kMetersPerDegree = kEarthRadiusM * std::numbers::pi / 180.0;

/// Converts a distance in kilometres into the unit used by `mode`.
double distance_in_mode(double km, MetricMode mode);

}  // namespace cellclean
