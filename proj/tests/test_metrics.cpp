#include <doctest.h>

#include <sstream>

#include "cellclean/metrics.hpp"
#include "support.hpp"

using namespace cellclean;

namespace {

constexpr auto kDeg = MetricMode::degrees;

std::vector<GeoPoint> pts(std::initializer_list<std::pair<double, double>> coords) {
    std::vector<GeoPoint> out;
    for (const auto& [lat, lon] : coords) out.emplace_back(lat, lon);
    return out;
}

std::vector<LocatedCell> located(const std::vector<GeoPoint>& p) {
    std::vector<LocatedCell> out;
    std::uint32_t id = 1;
    for (const auto& g : p) out.push_back({CellKey(1, id++), g});
    return out;
}

}  // namespace

TEST_CASE("single-pair matrix") {
    auto d = distance_matrix(pts({{0, 0}}), pts({{3, 4}}), kDeg);
    REQUIRE(d.rows() == 1);
    REQUIRE(d.cols() == 1);
    CHECK(d(0, 0) == 5.0);
}

TEST_CASE("matrix of a set with itself has a zero diagonal") {
    testing::Gen g(61);
    auto x = g.points(8);
    CHECK(distance_matrix(x, x).diagonal().isZero(0.0));
}

TEST_CASE("random 5x7 matrix matches recomputation, rows follow X") {
    testing::Gen g(62);
    auto x = g.points(5), y = g.points(7);
    auto d = distance_matrix(x, y);
    REQUIRE(d.rows() == 5);
    REQUIRE(d.cols() == 7);
    for (Eigen::Index i = 0; i < 5; ++i)
        for (Eigen::Index j = 0; j < 7; ++j)
            REQUIRE(d(i, j) == geo_distance(x[static_cast<std::size_t>(i)], y[static_cast<std::size_t>(j)]));
}

TEST_CASE("empty sets are rejected") {
    std::vector<GeoPoint> none, one = pts({{0, 0}});
    CHECK_THROWS_AS(distance_matrix(none, one), std::domain_error);
    CHECK_THROWS_AS(hausdorff(one, none), std::domain_error);
    CHECK_THROWS_AS(directional_hausdorff(none, one), std::domain_error);
}

TEST_CASE("hand cases") {
    auto a = pts({{0, 0}});
    auto b = pts({{0, 0}, {0, 10}});
    CHECK(directional_hausdorff(a, b, kDeg) == 0.0);
    CHECK(directional_hausdorff(b, a, kDeg) == 10.0);
    CHECK(hausdorff(a, b, kDeg) == 10.0);
    CHECK(hausdorff(b, b, kDeg) == 0.0);
}

TEST_CASE("oracle equivalence, symmetry and subset properties") {
    testing::Gen g(63);
    for (int round = 0; round < 200; ++round) {
        const auto mode = round % 2 == 0 ? kDeg : MetricMode::geodesic_meters;
        auto x = g.points(g.range(1, 50)), y = g.points(g.range(1, 50));
        REQUIRE(directional_hausdorff(x, y, mode) == testing::oracle_dhd(x, y, mode));
        REQUIRE(directional_hausdorff(y, x, mode) == testing::oracle_dhd(y, x, mode));
        REQUIRE(hausdorff(x, y, mode) == testing::oracle_hausdorff(x, y, mode));
        REQUIRE(hausdorff(x, y, mode) == hausdorff(y, x, mode));
        REQUIRE(hausdorff(x, y, mode) ==
                std::max(directional_hausdorff(x, y, mode), directional_hausdorff(y, x, mode)));
        REQUIRE(hausdorff(x, x, mode) == 0.0);

        // A subset of y is at distance zero from y; enlarging y never hurts.
        std::vector<GeoPoint> sub(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(g.range(1, y.size())));
        REQUIRE(directional_hausdorff(sub, y, mode) == 0.0);
        auto bigger = y;
        bigger.push_back(g.point());
        REQUIRE(directional_hausdorff(x, bigger, mode) <= directional_hausdorff(x, y, mode));
        if (directional_hausdorff(x, y, mode) == 0.0)
            for (const auto& p : x) REQUIRE(std::find(y.begin(), y.end(), p) != y.end());
    }
}

TEST_CASE("matrix CSV export") {
    std::ostringstream out;
    write_distance_matrix_csv(out, distance_matrix(pts({{0, 0}, {0, 1}}), pts({{3, 4}}), kDeg));
    CHECK(out.str().rfind("i,j,d\n0,0,5\n", 0) == 0);
}

TEST_CASE("retention of an identical set") {
    auto before = located(pts({{1, 1}, {1, 2}}));
    auto r = retention_report(before, before);
    CHECK(r.before == 2);
    CHECK(r.after == 2);
    CHECK(r.pct_kept.str() == "100.0");
    CHECK(r.hausdorff == std::optional<double>(0.0));
}

TEST_CASE("removing one far outlier") {
    // Three kept points on the equator; the outlier at (0,10) is closest to (0,2).
    auto before = located(pts({{0, 0}, {0, 1}, {0, 2}, {0, 10}}));
    std::vector<LocatedCell> after(before.begin(), before.begin() + 3);
    auto r = retention_report(before, after, kDeg);
    CHECK(r.pct_kept.str() == "75.0");
    CHECK(r.dhd_before_after == std::optional<double>(8.0));
    CHECK(r.dhd_after_before == std::optional<double>(0.0));
    CHECK(r.hausdorff == std::optional<double>(8.0));
}

TEST_CASE("retention preconditions and empty sets") {
    auto before = located(pts({{0, 0}}));
    std::vector<LocatedCell> stranger{{CellKey(2, 2), GeoPoint(0, 0)}};
    CHECK_THROWS_AS(retention_report(before, stranger), std::domain_error);
    auto r = retention_report(before, {});
    CHECK(r.after == 0);
    CHECK_FALSE(r.hausdorff.has_value());
    auto z = retention_report({}, {});
    CHECK(z.pct_kept.str() == "0.0");
}
