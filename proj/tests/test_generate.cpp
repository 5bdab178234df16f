#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <set>

#include "mag/generate.hpp"

using namespace mag;

TEST_CASE("random MAG has the requested shape", "[generate]") {
    gen_spec spec;
    spec.aspect_sizes = {10, 4};
    spec.edge_count = 300;
    spec.seed = 99;
    const mag_graph g = random_mag(spec);
    CHECK(g.order() == 2);
    CHECK(g.vertex_count() == 40);
    REQUIRE(g.edge_count() == 300);

    std::set<std::pair<vertex_id, vertex_id>> seen;
    for (const mag_edge& e : g.edges()) {
        CHECK(e.from != e.to);  // no loops
        CHECK(seen.insert({e.from, e.to}).second);
    }
}

TEST_CASE("paper-scale configurations build", "[generate]") {
    SECTION("order 2") {
        gen_spec spec;
        spec.aspect_sizes = {1000, 10};
        spec.edge_count = 42586;
        spec.seed = 1;
        const mag_graph g = random_mag(spec);
        CHECK(g.vertex_count() == 10000);
        CHECK(g.edge_count() == 42586);
    }
    SECTION("order 3") {
        gen_spec spec;
        spec.aspect_sizes = {1000, 2, 5};
        spec.edge_count = 42586;
        spec.seed = 1;
        const mag_graph g = random_mag(spec);
        CHECK(g.vertex_count() == 10000);
        CHECK(g.order() == 3);
        CHECK(g.edge_count() == 42586);
    }
}

TEST_CASE("edge capacity enforced", "[generate]") {
    gen_spec spec;
    spec.aspect_sizes = {2, 2};
    spec.edge_count = 13;  // capacity 4*3 = 12
    CHECK_THROWS_AS(random_mag(spec), error);
    spec.edge_count = 12;
    CHECK(random_mag(spec).edge_count() == 12);
}

TEST_CASE("same seed reproduces the identical edge list", "[generate]") {
    gen_spec spec;
    spec.aspect_sizes = {8, 5};
    spec.edge_count = 200;
    spec.seed = 123456789;
    const mag_graph a = random_mag(spec);
    const mag_graph b = random_mag(spec);
    REQUIRE(a.edge_count() == b.edge_count());
    for (std::size_t i = 0; i < a.edge_count(); ++i) {
        CHECK(a.edges()[i].from == b.edges()[i].from);
        CHECK(a.edges()[i].to == b.edges()[i].to);
    }
    spec.seed = 987;
    const mag_graph c = random_mag(spec);
    bool all_same = a.edge_count() == c.edge_count();
    for (std::size_t i = 0; all_same && i < a.edge_count(); ++i)
        all_same = a.edges()[i] == c.edges()[i];
    CHECK_FALSE(all_same);
}

TEST_CASE("child seeds differ and are stable", "[generate]") {
    std::set<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(child_seed(7, i));
    CHECK(seeds.size() == 1000);
    CHECK(child_seed(7, 3) == child_seed(7, 3));
    CHECK(child_seed(7, 3) != child_seed(8, 3));
}

TEST_CASE("reciprocal mode emits arc pairs", "[generate]") {
    gen_spec spec;
    spec.aspect_sizes = {6, 2};
    spec.edge_count = 40;
    spec.seed = 5;
    spec.reciprocal = true;
    const mag_graph g = random_mag(spec);
    REQUIRE(g.edge_count() == 40);
    for (const mag_edge& e : g.edges()) CHECK(g.has_edge(e.to, e.from));

    spec.edge_count = 41;
    CHECK_THROWS_AS(random_mag(spec), error);  // odd count has no pairing
}

TEST_CASE("sampled pairs are close to uniform", "[generate]") {
    // 3 of the 6 ordered pairs of a 3-vertex space, resampled 2000 times:
    // each pair lands with probability 1/2.
    std::map<std::pair<vertex_id, vertex_id>, int> freq;
    const int rounds = 2000;
    for (int r = 0; r < rounds; ++r) {
        gen_spec spec;
        spec.aspect_sizes = {3};
        spec.edge_count = 3;
        spec.seed = static_cast<std::uint64_t>(r) + 1;
        const mag_graph g = random_mag(spec);
        for (const mag_edge& e : g.edges()) ++freq[{e.from, e.to}];
    }
    REQUIRE(freq.size() == 6);
    const double expect = rounds * 0.5;
    const double sigma = std::sqrt(rounds * 0.5 * 0.5);
    for (const auto& [pair, count] : freq) {
        CHECK(std::abs(count - expect) <= 5.0 * sigma);
    }
}
