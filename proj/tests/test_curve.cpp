#include <doctest.h>

#include "alame/curve.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using alame::SampledCurve;

TEST_CASE("CSV round-trip is bit exact") {
    SampledCurve c;
    c.set_meta("k2", 0.99);
    c.set_meta("m", 1.0);
    c.set_meta("note", "defect partner");
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> uni(-1e3, 1e3);
    std::vector<double> x, y;
    for (int i = 0; i < 200; ++i) {
        x.push_back(uni(rng));
        y.push_back(std::exp(uni(rng) / 100.0) * (i % 2 ? -1.0 : 1.0));
    }
    x.push_back(1.0 / 3.0);
    y.push_back(-0.1);
    c.add_column("x", x);
    c.add_column("y", y);

    const auto r = SampledCurve::from_csv(c.to_csv());
    REQUIRE(r.columns() == 2);
    REQUIRE(r.rows() == x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        CHECK(r.column("x")[i] == x[i]);
        CHECK(r.column("y")[i] == y[i]);
    }
    CHECK(r.meta("k2") == c.meta("k2"));
    CHECK(r.meta("note") == "defect partner");
}

TEST_CASE("JSON mirrors the same schema") {
    SampledCurve c;
    c.set_meta("alpha", "1");
    c.add_column("t", {0.0, 0.5, 1.0});
    c.add_column("v", {1.0, 2.0, 3.0});
    const auto r = SampledCurve::from_json(c.to_json());
    CHECK(r.names() == c.names());
    CHECK(r.column("v")[2] == 3.0);
    CHECK(r.meta("alpha") == "1");
}

TEST_CASE("column length mismatch is rejected") {
    SampledCurve c;
    c.add_column("a", {1.0, 2.0});
    CHECK_THROWS_AS(c.add_column("b", {1.0}), std::invalid_argument);
}
