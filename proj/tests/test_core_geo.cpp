#include <doctest.h>

#include <cmath>

#include "cellclean/core_geo.hpp"
#include "support.hpp"

using namespace cellclean;

TEST_CASE("identical points are zero apart in both modes") {
    GeoPoint a(10, 20);
    CHECK(geo_distance(a, a, MetricMode::degrees) == 0.0);
    CHECK(geo_distance(a, a, MetricMode::geodesic_meters) == 0.0);
}

TEST_CASE("degrees mode is the plane metric") {
    CHECK(geo_distance(GeoPoint(0, 0), GeoPoint(3, 4), MetricMode::degrees) == 5.0);
}

TEST_CASE("one degree of longitude on the equator") {
    // 6371000 * 3.14159265358979 / 180, worked by hand: 111194.926644...
    const double expected = 111194.93;
    CHECK(std::abs(geo_distance(GeoPoint(0, 0), GeoPoint(0, 1)) - expected) <= 0.01);
    CHECK(std::abs(kMetersPerDegree - expected) <= 0.01);
}

TEST_CASE("longitude shrinks with the cosine of the mean latitude") {
    const double d = geo_distance(GeoPoint(60, 0), GeoPoint(60, 1));
    CHECK(d == doctest::Approx(kMetersPerDegree * 0.5).epsilon(1e-12));
}

TEST_CASE("default mode is geodesic meters") {
    GeoPoint a(1, 2), b(3, 4);
    CHECK(geo_distance(a, b) == geo_distance(a, b, MetricMode::geodesic_meters));
}

TEST_CASE("invalid coordinates are rejected") {
    CHECK_THROWS_AS(GeoPoint(95, 0), std::domain_error);
    CHECK_THROWS_AS(GeoPoint(0, 181), std::domain_error);
    CHECK_THROWS_AS(GeoPoint(NAN, 0), std::domain_error);
    CHECK_NOTHROW(GeoPoint(-90, -180));
    CHECK_NOTHROW(GeoPoint(0, 0));
}

TEST_CASE("float points share the template") {
    BasicGeoPoint<float> a(0.f, 0.f), b(3.f, 4.f);
    CHECK(geo_distance(a, b, MetricMode::degrees) == 5.f);
}

TEST_CASE("metric names") {
    CHECK(parse_metric("degrees") == MetricMode::degrees);
    CHECK(parse_metric("geodesic-meters") == MetricMode::geodesic_meters);
    CHECK(to_string(MetricMode::geodesic_meters) == "geodesic-meters");
    CHECK_THROWS(parse_metric("furlongs"));
    CHECK(distance_in_mode(5, MetricMode::geodesic_meters) == 5000.0);
    CHECK(distance_in_mode(5, MetricMode::degrees) == doctest::Approx(5000.0 / kMetersPerDegree));
}

TEST_CASE("symmetry, identity and positivity on random pairs") {
    testing::Gen g(11);
    for (int i = 0; i < 2000; ++i) {
        auto a = g.point(), b = g.point();
        for (auto m : {MetricMode::degrees, MetricMode::geodesic_meters}) {
            REQUIRE(geo_distance(a, b, m) == geo_distance(b, a, m));
            REQUIRE(geo_distance(a, a, m) == 0.0);
            if (!(a == b)) REQUIRE(geo_distance(a, b, m) > 0.0);
        }
    }
}

TEST_CASE("triangle inequality in degrees mode") {
    testing::Gen g(12);
    for (int i = 0; i < 2000; ++i) {
        auto a = g.point(), b = g.point(), c = g.point();
        const auto m = MetricMode::degrees;
        REQUIRE(geo_distance(a, c, m) <= geo_distance(a, b, m) + geo_distance(b, c, m));
    }
}

TEST_CASE("CellKey construction and rendering") {
    CHECK_THROWS_AS(CellKey(0, 5), std::domain_error);
    CHECK_THROWS_AS(CellKey(5, 0), std::domain_error);
    CellKey k(4120, 110, 310, 26);
    CHECK(k.has_cgi());
    CHECK_FALSE(CellKey(4120, 110).has_cgi());
    CHECK(k.short_key() == CellKey(4120, 110));
    CHECK(to_string(k) == "310.26.4120.110");
}

TEST_CASE("CellKey ordering is a strict total order") {
    testing::Gen g(13);
    auto key = [&] {
        std::optional<std::uint32_t> mcc, mnc;
        if (g.coin()) {
            mcc = static_cast<std::uint32_t>(g.range(1, 3));
            mnc = static_cast<std::uint32_t>(g.range(1, 3));
        }
        return CellKey(static_cast<std::uint32_t>(g.range(1, 3)), static_cast<std::uint32_t>(g.range(1, 3)), mcc,
                       mnc);
    };
    for (int i = 0; i < 5000; ++i) {
        auto a = key(), b = key(), c = key();
        REQUIRE(int(a < b) + int(b < a) + int(a == b) == 1);
        REQUIRE_FALSE(a < a);
        if (a < b && b < c) REQUIRE(a < c);
        if (a == b) REQUIRE((a <=> b) == 0);
    }
}
