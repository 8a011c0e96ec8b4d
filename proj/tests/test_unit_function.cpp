#include <catch2/catch_amalgamated.hpp>

#include "fuzzdyn/random_models.hpp"
#include "fuzzdyn/unit_function.hpp"

using namespace fuzzdyn;

namespace {

// defining property of xi_g on a probe grid: g(xi(x)) >= x and g(t) < x for
// every probed t below xi(x)
void check_xi_minimality(const MonotoneUnitFunction& g, int den = 128) {
    for (int i = 0; i <= den; ++i) {
        Rational x(i, den);
        Rational xi = g.xi(x);
        REQUIRE(in_unit_interval(xi));
        REQUIRE(g.eval(xi) >= x);
        if (x > 0) REQUIRE(xi > 0);
        for (int j = 0; j <= den; ++j) {
            Rational t(j, den);
            if (t < xi) REQUIRE(g.eval(t) < x);
        }
    }
}

}  // namespace

TEST_CASE("identity function") {
    auto g = MonotoneUnitFunction::identity();
    CHECK(g.eval(Rational(3, 7)) == Rational(3, 7));
    CHECK(g.xi(Rational(3, 7)) == Rational(3, 7));
    CHECK(g.one_preimage_is_singleton());
}

TEST_CASE("cap2x values") {
    auto g = MonotoneUnitFunction::cap2x();
    CHECK(g.eval(Rational(1, 4)) == Rational(1, 2));
    CHECK(g.eval(Rational(1, 2)) == 1);
    CHECK(g.eval(Rational(3, 4)) == 1);
    CHECK(g.eval(Rational(0)) == 0);
    CHECK(g.xi(Rational(1)) == Rational(1, 2));
    CHECK(g.xi(Rational(1, 3)) == Rational(1, 6));
    CHECK_FALSE(g.one_preimage_is_singleton());
}

TEST_CASE("dyadic staircase values") {
    auto g = MonotoneUnitFunction::dyadic_staircase();
    CHECK(g.eval(Rational(0)) == 0);
    CHECK(g.eval(Rational(1)) == 1);
    CHECK(g.eval(Rational(1, 4)) == 0);           // piece [0, 1/2)
    CHECK(g.eval(Rational(5, 8)) == Rational(1, 2));  // piece [1/2, 3/4)
    CHECK(g.eval(Rational(3, 4)) == Rational(3, 4));
    CHECK(g.eval(Rational(13, 16)) == Rational(3, 4));
    CHECK(g.eval(Rational(100, 128)) == Rational(3, 4));
    CHECK(g.eval(Rational(127, 128)) == Rational(127, 128));  // the plateau heights are fixed points
    CHECK(g.xi(Rational(1, 4)) == Rational(1, 2));
    CHECK(g.xi(Rational(1, 2)) == Rational(1, 2));
    CHECK(g.xi(Rational(5, 8)) == Rational(3, 4));
    CHECK(g.xi(Rational(1)) == 1);
    CHECK(g.xi(Rational(0)) == 0);
    CHECK(g.one_preimage_is_singleton());
}

TEST_CASE("staircase fixation of the xi iterates") {
    auto g = MonotoneUnitFunction::dyadic_staircase();
    for (std::size_t n = 1; n <= 20; ++n) CHECK(g.xi_iter(Rational(1, 4), n).value == Rational(1, 2));
    auto it = g.xi_iter(Rational(1, 4), 20);
    REQUIRE(it.fixation.has_value());
    CHECK(*it.fixation == 1);
}

TEST_CASE("cap2x iterates halve forever") {
    auto g = MonotoneUnitFunction::cap2x();
    auto it = g.xi_iter(Rational(1), 3);
    CHECK(it.value == Rational(1, 8));
    CHECK_FALSE(it.fixation.has_value());
    CHECK_FALSE(g.xi_iter(Rational(1), 50).fixation.has_value());
}

TEST_CASE("identity fixes at step zero") {
    auto it = MonotoneUnitFunction::identity().xi_iter(Rational(2, 5), 6);
    CHECK(it.value == Rational(2, 5));
    REQUIRE(it.fixation.has_value());
    CHECK(*it.fixation == 0);
}

TEST_CASE("step function evaluation and xi") {
    // 0 on [0,1/4), 1/2 on [1/4,1/2), 1 on [1/2,1), g(1)=1
    auto g = MonotoneUnitFunction::step({Rational(0), Rational(1, 4), Rational(1, 2), Rational(1)},
                                        {Rational(0), Rational(1, 2), Rational(1)});
    CHECK(g.eval(Rational(1, 8)) == 0);
    CHECK(g.eval(Rational(1, 4)) == Rational(1, 2));
    CHECK(g.eval(Rational(3, 8)) == Rational(1, 2));
    CHECK(g.eval(Rational(1, 2)) == 1);
    CHECK(g.eval(Rational(1)) == 1);
    CHECK(g.xi(Rational(1, 3)) == Rational(1, 4));
    CHECK(g.xi(Rational(1, 2)) == Rational(1, 4));
    CHECK(g.xi(Rational(2, 3)) == Rational(1, 2));
    CHECK(g.xi(Rational(1)) == Rational(1, 2));
    CHECK_FALSE(g.one_preimage_is_singleton());
    check_xi_minimality(g);
}

TEST_CASE("piecewise linear evaluation and xi") {
    // kink at (1/2, 1/4): slow then fast
    auto g = MonotoneUnitFunction::piecewise_linear(
        {{Rational(0), Rational(0)}, {Rational(1, 2), Rational(1, 4)}, {Rational(1), Rational(1)}});
    CHECK(g.eval(Rational(1, 4)) == Rational(1, 8));
    CHECK(g.eval(Rational(3, 4)) == Rational(5, 8));
    CHECK(g.xi(Rational(1, 8)) == Rational(1, 4));
    CHECK(g.xi(Rational(5, 8)) == Rational(3, 4));
    CHECK(g.xi(Rational(1)) == 1);
    CHECK(g.one_preimage_is_singleton());
    check_xi_minimality(g);
}

TEST_CASE("xi minimality for the built-in functions") {
    check_xi_minimality(MonotoneUnitFunction::identity());
    check_xi_minimality(MonotoneUnitFunction::cap2x());
    check_xi_minimality(MonotoneUnitFunction::dyadic_staircase());
}

TEST_CASE("adjunction between g and xi_g on a probe grid") {
    Rng rng(3);
    std::vector<MonotoneUnitFunction> gs = {MonotoneUnitFunction::identity(), MonotoneUnitFunction::cap2x(),
                                            MonotoneUnitFunction::dyadic_staircase(), random_step_g(rng),
                                            random_step_g(rng, true)};
    for (const auto& g : gs) {
        auto rep = probe_unit_function(g, 200);
        INFO(g.name());
        CHECK(rep.endpoints_ok);
        CHECK(rep.nondecreasing);
        CHECK(rep.adjunction_ok);
    }
}

TEST_CASE("xi is nondecreasing on a probe grid") {
    for (const auto& g : {MonotoneUnitFunction::cap2x(), MonotoneUnitFunction::dyadic_staircase()}) {
        Rational prev = g.xi(Rational(0));
        for (int i = 1; i <= 256; ++i) {
            Rational cur = g.xi(Rational(i, 256));
            REQUIRE(prev <= cur);
            prev = cur;
        }
    }
}

TEST_CASE("malformed specs are rejected") {
    CHECK_THROWS_AS(MonotoneUnitFunction::step({Rational(0), Rational(1)}, {Rational(1, 2)}),
                    InvalidUnitFunction);  // g(0) != 0
    CHECK_THROWS_AS(MonotoneUnitFunction::step({Rational(0), Rational(1, 2)}, {Rational(0)}),
                    InvalidUnitFunction);  // does not end at 1
    CHECK_THROWS_AS(MonotoneUnitFunction::step({Rational(0), Rational(1, 2), Rational(1)},
                                               {Rational(1, 2), Rational(1, 4)}),
                    InvalidUnitFunction);  // decreasing values
    CHECK_THROWS_AS(MonotoneUnitFunction::piecewise_linear({{Rational(0), Rational(0)}}),
                    InvalidUnitFunction);  // too few knots
    CHECK_THROWS_AS(MonotoneUnitFunction::piecewise_linear(
                        {{Rational(0), Rational(0)}, {Rational(1), Rational(1, 2)}}),
                    InvalidUnitFunction);  // does not reach (1,1)
    CHECK_THROWS_AS(MonotoneUnitFunction::identity().eval(Rational(3, 2)), DomainError);
    CHECK_THROWS_AS(MonotoneUnitFunction::identity().xi(Rational(-1, 2)), DomainError);
}

TEST_CASE("theorem63 classification") {
    const std::vector<Rational> probe = {Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)};
    SECTION("staircase is applicable at z=1/4 with m=1") {
        auto cls = classify_for_theorem63(MonotoneUnitFunction::dyadic_staircase(), probe, 10);
        REQUIRE(cls.applicable);
        CHECK(cls.z == Rational(1, 4));
        CHECK(cls.m == 1);
    }
    SECTION("identity is never applicable") {
        CHECK_FALSE(classify_for_theorem63(MonotoneUnitFunction::identity(), probe, 10).applicable);
    }
    SECTION("cap2x never stabilizes") {
        CHECK_FALSE(classify_for_theorem63(MonotoneUnitFunction::cap2x(),
                                           {Rational(1, 4), Rational(1, 2), Rational(1)}, 50)
                        .applicable);
    }
    SECTION("a plateau-at-one step function is applicable in the descending case") {
        // 0 on [0,1/4), 1/2 on [1/4,1/2), 1 on [1/2,1): xi(1) = 1/2, xi(1/2) = 1/4, xi(1/4) = 1/4
        auto g = MonotoneUnitFunction::step({Rational(0), Rational(1, 4), Rational(1, 2), Rational(1)},
                                            {Rational(0), Rational(1, 2), Rational(1)});
        auto cls = classify_for_theorem63(g, {Rational(1)}, 10);
        REQUIRE(cls.applicable);
        CHECK(cls.z == 1);
        CHECK(cls.m == 2);
        CHECK(g.xi(cls.z) < cls.z);
    }
}
