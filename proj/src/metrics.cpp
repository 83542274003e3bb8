#include "cellclean/metrics.hpp"

#include <ostream>
#include <set>

#include "cellclean/ingest.hpp"

namespace cellclean {

void write_distance_matrix_csv(std::ostream& out, const DistanceMatrix<double>& d) {
    out << "i,j,d\n";
    for (Eigen::Index i = 0; i < d.rows(); ++i)
        for (Eigen::Index j = 0; j < d.cols(); ++j) out << i << ',' << j << ',' << csv::format_double(d(i, j)) << '\n';
}

std::vector<GeoPoint> points_of(std::span<const LocatedCell> cells) {
    std::vector<GeoPoint> pts;
    pts.reserve(cells.size());
    for (const auto& c : cells) pts.push_back(c.point);
    return pts;
}

RetentionReport retention_report(std::span<const LocatedCell> before, std::span<const LocatedCell> after,
                                 MetricMode mode) {
    std::set<CellKey> before_keys;
    for (const auto& c : before) before_keys.insert(c.cell);
    for (const auto& c : after)
        if (!before_keys.count(c.cell))
            throw std::domain_error("kept cell " + to_string(c.cell) + " is not among the cells before cleaning");

    RetentionReport r;
    r.before = before.size();
    r.after = after.size();
    r.pct_kept = Percent::of(r.after, r.before);
    if (before.empty() || after.empty()) return r;

    const auto d = distance_matrix(points_of(before), points_of(after), mode);
    r.dhd_before_after = d.rowwise().minCoeff().maxCoeff();
    r.dhd_after_before = d.colwise().minCoeff().maxCoeff();
    r.hausdorff = std::max(*r.dhd_before_after, *r.dhd_after_before);
    return r;
}

}  // namespace cellclean
