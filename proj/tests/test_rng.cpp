#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "geonas/hash.hpp"
#include "geonas/rng.hpp"
#include "geonas/textio.hpp"

using geonas::Rng;

TEST_CASE("fnv1a64 matches the published test vectors") {
    CHECK(geonas::fnv1a64("") == 14695981039346656037ULL);
    CHECK(geonas::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(geonas::fnv1a64("foobar") == 0x85944171f73967e8ULL);
    static_assert(geonas::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("splitmix64 from state 0 produces the reference sequence") {
    uint64_t state = 0;
    CHECK(geonas::splitmix64(state) == 0xe220a8397b1dcdafULL);
    CHECK(geonas::splitmix64(state) == 0x6e789e6aa1b965f4ULL);
    CHECK(geonas::splitmix64(state) == 0x06c45d188009454fULL);
}

TEST_CASE("derive_seed is pure and separates sub-streams") {
    const uint64_t master = 123456789;
    CHECK(geonas::derive_seed(master, 0) == geonas::derive_seed(master, 0));
    std::vector<uint64_t> seeds;
    for (uint64_t k = 0; k < 64; ++k) seeds.push_back(geonas::derive_seed(master, k));
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
    CHECK(geonas::derive_seed(master, 1) != geonas::derive_seed(master + 1, 1));
}

TEST_CASE("raw engine output matches the standard mt19937_64 check value") {
    Rng rng(5489);  // the engine's default seed
    uint64_t x = 0;
    for (int i = 0; i < 10000; ++i) x = rng.next_u64();
    CHECK(x == 9981545732273789042ULL);
}

TEST_CASE("uniform draws stay in [0,1) with the right mean") {
    Rng rng(7);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("ranged uniform respects its bounds") {
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform(-3.0, 5.0);
        REQUIRE(u >= -3.0);
        REQUIRE(u < 5.0);
    }
}

TEST_CASE("below produces unbiased small integers") {
    Rng rng(13);
    std::vector<int> counts(6, 0);
    const int n = 60000;
    for (int i = 0; i < n; ++i) {
        const uint64_t v = rng.below(6);
        REQUIRE(v < 6);
        ++counts[v];
    }
    for (int c : counts) {
        CHECK(c > 9000);
        CHECK(c < 11000);
    }
}

TEST_CASE("normal draws have unit moments") {
    Rng rng(17);
    double sum = 0.0, sq = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sq += z * z;
    }
    const double mean = sum / n;
    CHECK(std::fabs(mean) < 0.02);
    CHECK(sq / n - mean * mean == doctest::Approx(1.0).epsilon(0.03));
    CHECK(rng.normal(10.0, 0.0) == 10.0);
}

TEST_CASE("identically seeded generators replay the same mixed stream") {
    Rng a(42), b(42);
    for (int i = 0; i < 200; ++i) {
        CHECK(a.uniform() == b.uniform());
        CHECK(a.normal() == b.normal());
        CHECK(a.below(97) == b.below(97));
    }
}

TEST_CASE("shuffle permutes deterministically per seed") {
    std::vector<int> v(100), w(100), base(100);
    for (int i = 0; i < 100; ++i) base[i] = i;
    v = base;
    w = base;
    Rng a(5), b(5), c(6);
    a.shuffle(v);
    b.shuffle(w);
    CHECK(v == w);

    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == base);

    std::vector<int> u = base;
    c.shuffle(u);
    CHECK(u != v);
}

TEST_CASE("format_double renders shortest round-trip decimals") {
    CHECK(geonas::format_double(1.0) == "1");
    CHECK(geonas::format_double(0.5) == "0.5");
    CHECK(geonas::format_double(-2.0) == "-2");

    Rng rng(19);
    for (int i = 0; i < 2000; ++i) {
        const double x = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-12.0, 12.0));
        CHECK(geonas::parse_double(geonas::format_double(x)) == x);
    }
    const double third = 1.0 / 3.0;
    CHECK(geonas::parse_double(geonas::format_double(third)) == third);
    CHECK(geonas::parse_double(geonas::format_double(1e300)) == 1e300);
}

TEST_CASE("format_double_padded right-aligns short renderings") {
    CHECK(geonas::format_double_padded(1.0, 5) == "    1");
    CHECK(geonas::format_double_padded(0.5, 2) == "0.5");
}

TEST_CASE("parse_double rejects anything but a full numeric token") {
    CHECK_THROWS_AS(geonas::parse_double("abc"), geonas::IoError);
    CHECK_THROWS_AS(geonas::parse_double("1.5x"), geonas::IoError);
    CHECK_THROWS_AS(geonas::parse_double(""), geonas::IoError);
    CHECK_THROWS_AS(geonas::parse_double(" 1"), geonas::IoError);
    CHECK(geonas::parse_double("-0.25") == -0.25);
}
