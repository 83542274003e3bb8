#include <doctest.h>

#include "cellclean/outlier.hpp"
#include "support.hpp"

using namespace cellclean;

namespace {

constexpr auto kDeg = MetricMode::degrees;

std::vector<LocatedCell> cells(std::initializer_list<std::pair<double, double>> coords, std::uint32_t lac = 7) {
    std::vector<LocatedCell> out;
    std::uint32_t id = 1;
    for (const auto& [lat, lon] : coords) out.push_back({CellKey(lac, id++), GeoPoint(lat, lon)});
    return out;
}

std::vector<LocatedCell> random_cells(testing::Gen& g, std::size_t n, bool grid) {
    auto keys = testing::distinct_keys(g, n);
    std::vector<LocatedCell> out;
    for (const auto& k : keys) out.push_back({k, grid ? g.grid_point(6) : g.point(-1, 1, -1, 1)});
    return out;
}

std::vector<GeoPoint> leaf_points(const Dendrogram& d) {
    std::vector<GeoPoint> pts;
    for (const auto& l : d.leaves) pts.push_back(l.point);
    return pts;
}

std::set<CellKey> keys_of(const std::vector<LocatedCell>& v) {
    std::set<CellKey> s;
    for (const auto& c : v) s.insert(c.cell);
    return s;
}

}  // namespace

TEST_CASE("proximity matrix of one point") {
    auto m = proximity_matrix(cells({{1, 1}}));
    REQUIRE(m.rows() == 1);
    CHECK(m(0, 0) == 0.0);
    CHECK_THROWS_AS(proximity_matrix({}), std::domain_error);
}

TEST_CASE("proximity matrix of a 3-4-5 triangle") {
    auto m = proximity_matrix(cells({{0, 0}, {0, 3}, {4, 0}}), kDeg);
    CHECK(m(0, 1) == 3.0);
    CHECK(m(0, 2) == 4.0);
    CHECK(m(1, 2) == 5.0);
    CHECK(m == m.transpose());
    CHECK(m.diagonal().isZero(0.0));
}

TEST_CASE("proximity matrix matches pairwise recomputation") {
    testing::Gen g(51);
    auto pts = random_cells(g, 10, false);
    auto m = proximity_matrix(pts);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j)
            REQUIRE(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
                    geo_distance(pts[i].point, pts[j].point));
}

TEST_CASE("collinear points 0, 1, 10") {
    auto d = agglomerate(cells({{0, 0}, {0, 1}, {0, 10}}), kDeg);
    REQUIRE(d.merges.size() == 2);
    CHECK(d.merges[0].height == 1.0);
    CHECK(d.merges[0].size == 2);
    CHECK(d.merges[1].height == 9.0);
    CHECK(d.merges[1].size == 3);

    auto p = cut_and_select(d, 5.0, 1);
    CHECK(keys_of(p.representative) == std::set{CellKey(7, 1), CellKey(7, 2)});
    CHECK(keys_of(p.outliers) == std::set{CellKey(7, 3)});
    CHECK(p.status == LacStatus::clustered);
}

TEST_CASE("two points merge once at their distance") {
    auto pts = cells({{10, 10}, {10.01, 10.02}});
    auto d = agglomerate(pts);
    REQUIRE(d.merges.size() == 1);
    CHECK(d.merges[0].height == geo_distance(pts[0].point, pts[1].point));
}

TEST_CASE("agglomerate preconditions") {
    CHECK_THROWS_AS(agglomerate({}), std::domain_error);
    std::vector<LocatedCell> dup{{CellKey(1, 1), GeoPoint(0, 0)}, {CellKey(1, 1), GeoPoint(1, 1)}};
    CHECK_THROWS(agglomerate(dup));
}

TEST_CASE("identical points stay together") {
    std::vector<LocatedCell> pts;
    for (std::uint32_t i = 1; i <= 12; ++i) pts.push_back({CellKey(3, i), GeoPoint(5, 5)});
    auto p = cut_and_select(agglomerate(pts), 1.0, 10);
    CHECK(p.representative.size() == 12);
    CHECK(p.outliers.empty());
}

TEST_CASE("cut below every merge keeps the smallest key") {
    auto pts = cells({{0, 5}, {0, 0}, {0, 20}});
    auto p = cut_and_select(agglomerate(pts, kDeg), 0.5, 1);
    REQUIRE(p.representative.size() == 1);
    CHECK(p.representative[0].cell == CellKey(7, 1));
    CHECK(p.outliers.size() == 2);
}

TEST_CASE("equal-size clusters: the tighter one wins") {
    // {1,2} are 2 apart, {3,4} are 1 apart, the groups are 50 apart.
    auto pts = cells({{0, 0}, {0, 2}, {0, 50}, {0, 51}});
    auto p = cut_and_select(agglomerate(pts, kDeg), 5, 1);
    CHECK(keys_of(p.representative) == std::set{CellKey(7, 3), CellKey(7, 4)});
}

TEST_CASE("below the size threshold the LAC is insufficient") {
    std::vector<LocatedCell> pts;
    for (std::uint32_t i = 1; i <= 9; ++i) pts.push_back({CellKey(3, i), GeoPoint(5, 5 + i * 1e-4)});
    auto p = cut_and_select(agglomerate(pts), 5000, 10);
    CHECK(p.status == LacStatus::insufficient_data);
    CHECK(p.representative.empty());
    CHECK(p.outliers.size() == 9);

    std::vector<Resolution> res;
    for (const auto& c : pts) res.push_back({c.cell, c.point, ResolutionSource::db});
    auto r = clean_all(res);
    CHECK(r.report.kept == 0);
    CHECK(r.report.insufficient == 9);
    CHECK(r.report.lacs_insufficient == 1);

    CleanOptions keep;
    keep.keep_insufficient = true;
    auto kept = clean_all(res, keep);
    CHECK(kept.report.kept == 9);
    CHECK(kept.report.passed_through == 9);
    CHECK(kept_cells(kept.partitions, true).size() == 9);
}

TEST_CASE("clean_all rejects unlocated input") {
    std::vector<Resolution> res{{CellKey(1, 1), std::nullopt, ResolutionSource::missing}};
    CHECK_THROWS_AS(clean_all(res), std::domain_error);
}

TEST_CASE("merge heights and flat clusters equal the naive oracle") {
    testing::Gen g(52);
    for (int round = 0; round < 150; ++round) {
        const bool grid = round % 2 == 0;
        const auto mode = round % 3 == 0 ? MetricMode::geodesic_meters : kDeg;
        auto pts = random_cells(g, g.range(1, 20), grid);
        auto d = agglomerate(pts, mode);
        const auto lp = leaf_points(d);
        auto expected = testing::oracle_single_linkage(lp, mode);
        REQUIRE(d.merges.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i) {
            REQUIRE(d.merges[i].height == expected[i]);
            if (i > 0) REQUIRE(d.merges[i - 1].height <= d.merges[i].height);
        }
        for (int c = 0; c < 3; ++c) {
            const double cut = expected.empty() ? 1.0 : expected[g.below(expected.size())] * g.real(0.8, 1.2);
            REQUIRE(flat_clusters(d, cut) == testing::oracle_components(lp, cut, mode));
        }
    }
}

TEST_CASE("permutation invariance") {
    testing::Gen g(53);
    for (int round = 0; round < 100; ++round) {
        auto pts = random_cells(g, g.range(1, 25), round % 2 == 0);
        const double cut = g.real(0.5, 3);
        auto a = cut_and_select(agglomerate(pts, kDeg), cut, 1);
        g.shuffle(pts);
        auto b = cut_and_select(agglomerate(pts, kDeg), cut, 1);
        REQUIRE(a.representative == b.representative);
        REQUIRE(a.outliers == b.outliers);
    }
}

TEST_CASE("raising the cut never shrinks the representative") {
    testing::Gen g(54);
    for (int round = 0; round < 100; ++round) {
        auto pts = random_cells(g, g.range(1, 25), round % 2 == 0);
        auto d = agglomerate(pts, kDeg);
        std::size_t last = 0;
        for (double cut = 0.1; cut < 3.0; cut += 0.1) {
            auto p = cut_and_select(d, cut, 1);
            REQUIRE(p.representative.size() >= last);
            last = p.representative.size();
        }
    }
}

TEST_CASE("partition and report conservation, any thread count") {
    testing::Gen g(55);
    for (int round = 0; round < 30; ++round) {
        std::vector<Resolution> res;
        std::map<std::uint32_t, std::vector<LocatedCell>> by_lac;
        const auto lacs = g.range(1, 6);
        for (std::uint32_t lac = 1; lac <= lacs; ++lac) {
            auto center = g.point();
            for (const auto& k : testing::distinct_keys(g, g.range(1, 30), lac)) {
                GeoPoint p(center.lat() + g.real(-0.05, 0.05), center.lon() + g.real(-0.05, 0.05));
                if (g.below(10) == 0) p = GeoPoint(center.lat() + g.real(1, 2), center.lon());
                res.push_back({k, p, ResolutionSource::db});
                by_lac[lac].push_back({k, p});
            }
        }
        CleanOptions opt;
        opt.threads = 1;
        auto one = clean_all(res, opt);
        opt.threads = 4;
        auto four = clean_all(res, opt);
        REQUIRE(one.partitions.size() == four.partitions.size());
        std::size_t kept = 0, out = 0, insufficient = 0;
        for (std::size_t i = 0; i < one.partitions.size(); ++i) {
            const auto& p = one.partitions[i];
            if (i > 0) REQUIRE(one.partitions[i - 1].lac < p.lac);
            REQUIRE(p.representative == four.partitions[i].representative);
            REQUIRE(p.outliers == four.partitions[i].outliers);
            REQUIRE(testing::partition_conserves(p, by_lac[p.lac]));
            if (p.status == LacStatus::clustered) {
                kept += p.representative.size();
                out += p.outliers.size();
            } else {
                insufficient += p.outliers.size();
            }
        }
        const auto& r = one.report;
        REQUIRE(r.input_cells == res.size());
        REQUIRE(r.kept == kept);
        REQUIRE(r.outliers == out);
        REQUIRE(r.insufficient == insufficient);
        REQUIRE(r.kept + r.outliers + r.insufficient == r.input_cells);
        REQUIRE(kept_cells(one.partitions).size() == r.kept);
    }
}

TEST_CASE("same (lac, cell_id) under two operators is reported") {
    std::vector<Resolution> res;
    for (std::uint32_t i = 1; i <= 10; ++i) res.push_back({CellKey(3, i, 310, 26), GeoPoint(5, 5), ResolutionSource::db});
    res.push_back({CellKey(3, 1, 310, 27), GeoPoint(5, 5), ResolutionSource::db});
    auto r = clean_all(res);
    CHECK(r.report.diagnostics.size() == 1);
}
