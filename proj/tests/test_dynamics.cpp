#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <set>

#include "fuzzdyn/dynamics.hpp"
#include "fuzzdyn/random_models.hpp"

using namespace fuzzdyn;

namespace {

PointId point_at(const NamedSystem& sys, const Rational& coord) {
    for (std::size_t i = 0; i < sys.coords.size(); ++i)
        if (sys.coords[i] == coord) return static_cast<PointId>(i);
    FAIL("coordinate not on grid: " + to_string(coord));
    return 0;
}

}  // namespace

TEST_CASE("tent grid geometry") {
    auto sys = tent_grid(3);
    REQUIRE(sys.space->size() == 9);
    CHECK(sys.space->distance(point_at(sys, Rational(1, 8)), point_at(sys, Rational(5, 8))) == Rational(1, 2));
    CHECK(sys.space->diameter() == 1);
}

TEST_CASE("tent map iterates exactly on the grid") {
    auto sys = tent_grid(3);
    CHECK(sys.map.iterate(point_at(sys, Rational(1, 8)), 1) == point_at(sys, Rational(1, 4)));
    // 3/8 -> 3/4 -> 1/2
    CHECK(sys.map.iterate(point_at(sys, Rational(3, 8)), 2) == point_at(sys, Rational(1, 2)));
    CHECK(sys.map.iterate(point_at(sys, Rational(1, 2)), 1) == point_at(sys, Rational(1)));
}

TEST_CASE("rotation closes up after q steps") {
    auto sys = rotation(1, 4);
    CHECK(sys.map.iterate(0, 4) == 0);
    CHECK(sys.map.iterate(point_at(sys, Rational(1, 4)), 2) == point_at(sys, Rational(3, 4)));
}

TEST_CASE("rotation orbit size equals q when gcd(p,q)=1") {
    for (auto [p, q] : {std::pair<unsigned, unsigned>{1, 5}, {3, 8}, {2, 7}, {5, 12}}) {
        auto sys = rotation(p, q);
        for (PointId x = 0; x < q; ++x) {
            std::set<PointId> orbit;
            PointId cur = x;
            for (unsigned n = 0; n < q; ++n) {
                orbit.insert(cur);
                cur = sys.map.apply(cur);
            }
            CHECK(orbit.size() == q);
        }
    }
}

TEST_CASE("iterate satisfies the semigroup law") {
    // exhaustive over several systems with up to 64 points and a,b <= 20
    std::vector<NamedSystem> systems = {tent_grid(5), rotation(7, 60), identity_system(9)};
    Rng rng(7);
    auto space = random_space(rng, 12);
    systems.push_back(NamedSystem{"random", space, random_map(rng, space), {}});
    for (const auto& sys : systems) {
        REQUIRE(sys.space->size() <= 64);
        for (PointId x = 0; x < sys.space->size(); ++x)
            for (std::size_t a = 0; a <= 20; a += 3)
                for (std::size_t b = 0; b <= 20; b += 4)
                    CHECK(sys.map.iterate(x, a + b) == sys.map.iterate(sys.map.iterate(x, a), b));
    }
}

TEST_CASE("map table must stay inside the point set") {
    auto space = uniform_space(3);
    CHECK_THROWS_AS(DynMap(space, {0, 1}), Error);
    CHECK_THROWS_AS(DynMap(space, {0, 1, 3}), Error);
}

TEST_CASE("named systems are closed over their point set") {
    for (const auto& sys : {tent_grid(4), tent_grid(6), rotation(3, 10), identity_system(4)}) {
        for (PointId x = 0; x < sys.space->size(); ++x) CHECK(sys.map.apply(x) < sys.space->size());
    }
}

TEST_CASE("power tables agree with repeated application") {
    auto sys = tent_grid(4);
    auto pow = sys.map.power_tables(12);
    for (PointId x = 0; x < sys.space->size(); ++x)
        for (std::size_t n = 0; n <= 12; ++n) CHECK(pow[n][x] == sys.map.iterate(x, n));
}

TEST_CASE("identity map fixes everything") {
    auto space = uniform_space(6);
    auto id = identity_map(space);
    for (PointId x = 0; x < 6; ++x) CHECK(id.iterate(x, 17) == x);
}
