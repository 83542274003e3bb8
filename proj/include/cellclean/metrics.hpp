#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "cellclean/core_geo.hpp"
#include "cellclean/resolver.hpp"

namespace cellclean {

template <typename Scalar>
using DistanceMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// D(i, j) = geo_distance(x_i, y_j). Rows follow X, columns follow Y.
template <typename Scalar>
DistanceMatrix<Scalar> distance_matrix(std::span<const BasicGeoPoint<Scalar>> xs,
                                       std::span<const BasicGeoPoint<Scalar>> ys,
                                       MetricMode mode = MetricMode::geodesic_meters) {
    if (xs.empty() || ys.empty()) throw std::domain_error("distance matrix needs non-empty point sets");
    DistanceMatrix<Scalar> d(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()));
    for (Eigen::Index i = 0; i < d.rows(); ++i)
        for (Eigen::Index j = 0; j < d.cols(); ++j)
            d(i, j) = geo_distance(xs[static_cast<std::size_t>(i)], ys[static_cast<std::size_t>(j)], mode);
    return d;
}

template <typename Scalar>
DistanceMatrix<Scalar> distance_matrix(const std::vector<BasicGeoPoint<Scalar>>& xs,
                                       const std::vector<BasicGeoPoint<Scalar>>& ys,
                                       MetricMode mode = MetricMode::geodesic_meters) {
    return distance_matrix(std::span<const BasicGeoPoint<Scalar>>(xs),
                           std::span<const BasicGeoPoint<Scalar>>(ys), mode);
}

/// max over rows of the row minimum: how far the worst point of X is from Y.
template <typename Derived>
typename Derived::Scalar directional_hausdorff(const Eigen::MatrixBase<Derived>& d) {
    return d.rowwise().minCoeff().maxCoeff();
}

/// max of both directions; the reverse direction reads column minima.
template <typename Derived>
typename Derived::Scalar hausdorff(const Eigen::MatrixBase<Derived>& d) {
    return std::max(d.rowwise().minCoeff().maxCoeff(), d.colwise().minCoeff().maxCoeff());
}

template <typename Scalar>
Scalar directional_hausdorff(std::span<const BasicGeoPoint<Scalar>> xs,
                             std::span<const BasicGeoPoint<Scalar>> ys,
                             MetricMode mode = MetricMode::geodesic_meters) {
    return directional_hausdorff(distance_matrix(xs, ys, mode));
}

template <typename Scalar>
Scalar hausdorff(std::span<const BasicGeoPoint<Scalar>> xs, std::span<const BasicGeoPoint<Scalar>> ys,
                 MetricMode mode = MetricMode::geodesic_meters) {
    return hausdorff(distance_matrix(xs, ys, mode));
}

template <typename Scalar>
Scalar directional_hausdorff(const std::vector<BasicGeoPoint<Scalar>>& xs,
                             const std::vector<BasicGeoPoint<Scalar>>& ys,
                             MetricMode mode = MetricMode::geodesic_meters) {
    return directional_hausdorff(distance_matrix(xs, ys, mode));
}

template <typename Scalar>
Scalar hausdorff(const std::vector<BasicGeoPoint<Scalar>>& xs, const std::vector<BasicGeoPoint<Scalar>>& ys,
                 MetricMode mode = MetricMode::geodesic_meters) {
    return hausdorff(distance_matrix(xs, ys, mode));
}

/// Row-major `i,j,d` export of a distance matrix (0-based indices).
void write_distance_matrix_csv(std::ostream& out, const DistanceMatrix<double>& d);

struct LocatedCell {
    CellKey cell;
    GeoPoint point;

    friend bool operator==(const LocatedCell&, const LocatedCell&) = default;
};

std::vector<GeoPoint> points_of(std::span<const LocatedCell> cells);

struct RetentionReport {
    std::size_t before = 0;
    std::size_t after = 0;
    Percent pct_kept;
    /// Distances are absent when either set is empty.
    std::optional<double> dhd_before_after;
    std::optional<double> dhd_after_before;
    std::optional<double> hausdorff;
};

/// Compares the located cells before cleaning with the kept subset.
/// Throws std::domain_error when `after` holds a cell absent from `before`.
RetentionReport retention_report(std::span<const LocatedCell> before, std::span<const LocatedCell> after,
                                 MetricMode mode = MetricMode::geodesic_meters);

}  // namespace cellclean
