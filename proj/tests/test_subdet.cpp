#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>

#include "helpers.hpp"
#include "mag/oracle.hpp"
#include "mag/subdet.hpp"

using namespace mag;
using testutil::contact_mag;
using testutil::random_test_mag;

namespace {

bool dense_equal(const sparse_matrix& m, const std::vector<std::vector<double>>& want) {
    const auto got = m.to_dense();
    if (got.size() != want.size()) return false;
    for (std::size_t r = 0; r < got.size(); ++r) {
        if (got[r].size() != want[r].size()) return false;
        for (std::size_t c = 0; c < got[r].size(); ++c)
            if (got[r][c] != want[r][c]) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("subdet_spec validation and encodings", "[subdet]") {
    CHECK_THROWS_AS(subdet_spec::from_indicator({1, 1}), error);
    CHECK_THROWS_AS(subdet_spec::from_indicator({0, 0, 0}), error);
    CHECK_THROWS_AS(subdet_spec::from_indicator({}), error);

    const subdet_spec a = subdet_spec::from_indicator({1, 0, 1});
    CHECK(a.integer() == 5);
    const subdet_spec b = subdet_spec::from_integer(5, 3);
    CHECK(a.indicator() == b.indicator());
    CHECK(b.keeps(0));
    CHECK_FALSE(b.keeps(1));
    CHECK(b.to_string() == "1,0,1");
}

TEST_CASE("sub_companion_tuple keeps aspect order", "[subdet]") {
    CHECK(sub_companion_tuple(companion_tuple({3, 2}), subdet_spec::from_indicator({1, 0})).sizes() ==
          std::vector<std::uint32_t>{3});
    CHECK(sub_companion_tuple(companion_tuple({1000, 2, 5}), subdet_spec::from_indicator({1, 0, 0})).sizes() ==
          std::vector<std::uint32_t>{1000});
    CHECK(sub_companion_tuple(companion_tuple({4, 3, 2}), subdet_spec::from_indicator({1, 0, 1})).sizes() ==
          std::vector<std::uint32_t>{4, 2});
    CHECK_THROWS_AS(sub_companion_tuple(companion_tuple({3, 2}), subdet_spec::from_indicator({1, 0, 1})),
                    error);
}

TEST_CASE("sub_determine_vertex projects retained aspects", "[subdet]") {
    CHECK(sub_determine_vertex({1, 1}, subdet_spec::from_indicator({1, 0})) == composite_tuple{1});
    CHECK(sub_determine_vertex({1, 1}, subdet_spec::from_indicator({0, 1})) == composite_tuple{1});
    CHECK(sub_determine_vertex({0, 1, 2}, subdet_spec::from_indicator({1, 0, 1})) == composite_tuple{0, 2});
}

TEST_CASE("quotient matrix of the contact fixture", "[subdet]") {
    const subdet_matrix m = build_subdet_matrix(companion_tuple({3, 2}), subdet_spec::from_indicator({1, 0}));
    REQUIRE(m.rows() == 3);
    REQUIRE(m.cols() == 6);
    CHECK(dense_equal(m.to_sparse(), {{1, 0, 0, 1, 0, 0}, {0, 1, 0, 0, 1, 0}, {0, 0, 1, 0, 0, 1}}));
}

TEST_CASE("quotient matrix when dropping the first aspect", "[subdet]") {
    const subdet_matrix m = build_subdet_matrix(companion_tuple({2, 2}), subdet_spec::from_indicator({0, 1}));
    REQUIRE(m.rows() == 2);
    REQUIRE(m.cols() == 4);
    CHECK(m.class_of(0) == 0);
    CHECK(m.class_of(1) == 0);
    CHECK(m.class_of(2) == 1);
    CHECK(m.class_of(3) == 1);
}

TEST_CASE("quotient matrix structure on random shapes", "[subdet]") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::uint32_t> sizes;
        const std::size_t p = 2 + rng() % 2;
        for (std::size_t i = 0; i < p; ++i) sizes.push_back(1 + rng() % 5);
        companion_tuple tau(sizes);
        for (const subdet_spec& zeta : testutil::proper_specs(tau)) {
            const subdet_matrix m = build_subdet_matrix(tau, zeta);
            const companion_tuple tz = sub_companion_tuple(tau, zeta);
            REQUIRE(m.rows() == tz.vertex_count());
            REQUIRE(tau.vertex_count() % m.rows() == 0);
            // Column map agrees with the definitional route: decode, project,
            // re-encode.
            std::vector<std::size_t> row_count(m.rows(), 0);
            for (vertex_id j = 0; j < m.cols(); ++j) {
                const vertex_id want = tz.encode(sub_determine_vertex(tau.decode(j), zeta));
                CHECK(m.class_of(j) == want);
                ++row_count[m.class_of(j)];
            }
            // Every class has exactly n / n_zeta members.
            for (std::size_t r = 0; r < m.rows(); ++r)
                CHECK(row_count[r] == tau.vertex_count() / m.rows());
        }
    }
}

TEST_CASE("quotient map is not invertible when classes merge", "[subdet]") {
    const subdet_matrix m = build_subdet_matrix(companion_tuple({3, 2}), subdet_spec::from_indicator({1, 0}));
    const sparse_matrix ms = m.to_sparse();
    const sparse_matrix mtm = multiply(ms.transpose(), ms);
    REQUIRE(mtm.rows() == 6);
    bool off_diag = false;
    for (std::size_t r = 0; r < 6; ++r) {
        CHECK(mtm.at(r, r) == 1.0);
        auto cs = mtm.row_cols(r);
        for (std::size_t c : cs)
            if (c != r) off_diag = true;
    }
    CHECK(off_diag);  // therefore M^T M != I
}

TEST_CASE("aggregate_adjacency reproduces the worked matrices", "[subdet]") {
    const mag_graph g = contact_mag();
    const sparse_matrix j = adjacency_matrix(to_digraph(g));
    const subdet_matrix m = build_subdet_matrix(g.tau(), subdet_spec::from_indicator({1, 0}));

    const sparse_matrix agg = aggregate_adjacency(j, m);
    CHECK(dense_equal(agg, {{1, 1, 0}, {0, 1, 1}, {0, 0, 1}}));

    const sparse_matrix simple = simplify_adjacency(agg);
    CHECK(dense_equal(simple, {{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}));
}

TEST_CASE("aggregate_adjacency of a zero matrix is zero", "[subdet]") {
    const sparse_matrix j(4, 4);
    const subdet_matrix m = build_subdet_matrix(companion_tuple({2, 2}), subdet_spec::from_indicator({1, 0}));
    CHECK(aggregate_adjacency(j, m).nonzero_count() == 0);
}

TEST_CASE("aggregate_adjacency counts multi-edges per class pair", "[subdet]") {
    std::mt19937_64 rng(9);
    const mag_graph g = testutil::random_test_mag(rng, 2, 12);
    const subdet_spec zeta = subdet_spec::from_indicator({1, 0});
    const subdet_matrix m = build_subdet_matrix(g.tau(), zeta);
    const sparse_matrix agg = aggregate_adjacency(adjacency_matrix(to_digraph(g)), m);

    // Oracle: count MAG edges whose endpoints land on each class pair.
    std::map<std::pair<vertex_id, vertex_id>, double> want;
    for (const mag_edge& e : g.edges()) ++want[{m.class_of(e.from), m.class_of(e.to)}];
    for (std::size_t r = 0; r < agg.rows(); ++r)
        for (std::size_t c = 0; c < agg.cols(); ++c) {
            auto it = want.find({static_cast<vertex_id>(r), static_cast<vertex_id>(c)});
            CHECK(agg.at(r, c) == (it == want.end() ? 0.0 : it->second));
        }
}

TEST_CASE("simplify_adjacency edge cases", "[subdet]") {
    CHECK(simplify_adjacency(sparse_matrix::identity(3)).nonzero_count() == 0);
    const sparse_matrix m = sparse_matrix::from_triplets(2, 2, {{0, 1, 7.0}});
    CHECK(simplify_adjacency(m).at(0, 1) == 1.0);
    CHECK_THROWS_AS(simplify_adjacency(sparse_matrix(2, 3)), error);
}

TEST_CASE("aggregate_mag matches the matrix route", "[subdet]") {
    SECTION("contact fixture") {
        const composite_digraph agg = aggregate_mag(contact_mag(), subdet_spec::from_indicator({1, 0}));
        REQUIRE(agg.vertex_count() == 3);
        CHECK(agg.arc_count() == 2);
        CHECK(agg.has_arc(0, 1));
        CHECK(agg.has_arc(1, 2));
    }
    SECTION("only intra-class edges -> empty digraph") {
        std::vector<aspect> aspects = {{"v", 2, {}}, {"t", 2, {}}};
        // Both edges stay inside their vertex class.
        mag_graph g(aspects, std::vector<mag_edge>{{0, 2}, {1, 3}});
        const composite_digraph agg = aggregate_mag(g, subdet_spec::from_indicator({1, 0}));
        CHECK(agg.arc_count() == 0);
    }
    SECTION("random graphs agree entrywise") {
        std::mt19937_64 rng(1234);
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t p = 2 + rng() % 2;
            const mag_graph g = random_test_mag(rng, p, 200);
            for (const subdet_spec& zeta : testutil::proper_specs(g.tau())) {
                const composite_digraph agg = aggregate_mag(g, zeta);
                const sparse_matrix via_matrix = simplify_adjacency(
                    aggregate_adjacency(adjacency_matrix(to_digraph(g)),
                                        build_subdet_matrix(g.tau(), zeta)));
                REQUIRE(agg.vertex_count() == via_matrix.rows());
                CHECK(adjacency_matrix(agg).same_pattern(via_matrix));
            }
        }
    }
}

TEST_CASE("aggregated relay keeps the through-path", "[subdet]") {
    const composite_digraph agg = aggregate_mag(testutil::relay_mag(), subdet_spec::from_indicator({1, 0}));
    REQUIRE(agg.vertex_count() == 4);
    CHECK(agg.has_arc(0, 1));
    CHECK(agg.has_arc(1, 2));
    CHECK(agg.has_arc(2, 3));
}
