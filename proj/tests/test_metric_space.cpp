#include <catch2/catch_amalgamated.hpp>

#include "fuzzdyn/metric_space.hpp"
#include "fuzzdyn/rational.hpp"

using namespace fuzzdyn;

TEST_CASE("rational parsing and canonical form") {
    CHECK(parse_rational("1/2") == Rational(1, 2));
    CHECK(parse_rational("3") == Rational(3));
    CHECK(parse_rational("2/4") == Rational(1, 2));
    CHECK(to_string(Rational(1, 2)) == "1/2");
    CHECK(to_string(Rational(2)) == "2");
    CHECK(to_string(Rational(0)) == "0");
    CHECK_FALSE(try_parse_rational("1/0").has_value());
    CHECK_FALSE(try_parse_rational("a/b").has_value());
    CHECK_FALSE(try_parse_rational("").has_value());
    CHECK_FALSE(try_parse_rational("1.5").has_value());
}

TEST_CASE("two point space is accepted") {
    auto space = build_space({{Rational(0), Rational(1)}, {Rational(1), Rational(0)}});
    CHECK(space->size() == 2);
    CHECK(space->diameter() == 1);
    CHECK(space->min_positive_distance() == 1);
    CHECK(space->distance(0, 1) == 1);
}

TEST_CASE("metric axiom violations are reported with the axiom name") {
    SECTION("asymmetric entry") {
        try {
            build_space({{Rational(0), Rational(1)}, {Rational(2), Rational(0)}});
            FAIL("expected MetricViolation");
        } catch (const MetricViolation& e) {
            CHECK(e.axiom == "symmetry");
        }
    }
    SECTION("nonzero diagonal") {
        try {
            build_space({{Rational(1)}});
            FAIL("expected MetricViolation");
        } catch (const MetricViolation& e) {
            CHECK(e.axiom == "diagonal");
        }
    }
    SECTION("zero off-diagonal") {
        try {
            build_space({{Rational(0), Rational(0)}, {Rational(0), Rational(0)}});
            FAIL("expected MetricViolation");
        } catch (const MetricViolation& e) {
            CHECK(e.axiom == "positivity");
        }
    }
    SECTION("triangle violation") {
        try {
            build_space({{Rational(0), Rational(1), Rational(3)},
                         {Rational(1), Rational(0), Rational(1)},
                         {Rational(3), Rational(1), Rational(0)}});
            FAIL("expected MetricViolation");
        } catch (const MetricViolation& e) {
            CHECK(e.axiom == "triangle");
        }
    }
    SECTION("empty matrix") {
        CHECK_THROWS_AS(build_space({}), EmptySpace);
    }
    SECTION("ragged matrix") {
        CHECK_THROWS_AS(build_space({{Rational(0), Rational(1)}, {Rational(1)}}), MetricViolation);
    }
}

TEST_CASE("line space distances") {
    auto space = line_space({Rational(0), Rational(1, 8), Rational(5, 8)});
    CHECK(space->distance(1, 2) == Rational(1, 2));
    CHECK(space->diameter() == Rational(5, 8));
    CHECK(space->label(1) == "1/8");
}

TEST_CASE("circle space wraps around") {
    auto space = circle_space({Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4)});
    CHECK(space->distance(0, 3) == Rational(1, 4));
    CHECK(space->distance(0, 2) == Rational(1, 2));
    CHECK(space->diameter() == Rational(1, 2));
}

TEST_CASE("uniform space") {
    auto space = uniform_space(5);
    CHECK(space->diameter() == 1);
    CHECK(space->distance(2, 4) == 1);
    CHECK(space->distance(3, 3) == 0);
}
