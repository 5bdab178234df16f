#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "mag/core.hpp"

namespace mag {

/// Configuration for one uniform G(n,m)-style random MAG: exactly
/// `edge_count` distinct directed non-loop composite edges.
struct gen_spec {
    std::vector<std::uint32_t> aspect_sizes;
    std::uint64_t edge_count = 0;
    std::uint64_t seed = 0;
    /// Sample edge_count/2 unordered pairs and emit both directions.
    bool reciprocal = false;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Unbiased bounded draw (rejection sampling), independent of the standard
/// library's distribution implementations so streams are portable.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= threshold) return r % bound;
    }
}

/// Floyd's sampling of `count` distinct values from [0, space).
inline std::vector<std::uint64_t> sample_distinct(std::mt19937_64& rng, std::uint64_t space,
                                                  std::uint64_t count) {
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(static_cast<std::size_t>(count) * 2);
    std::vector<std::uint64_t> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t j = space - count; j < space; ++j) {
        const std::uint64_t t = bounded(rng, j + 1);
        if (chosen.insert(t).second)
            out.push_back(t);
        else {
            chosen.insert(j);
            out.push_back(j);
        }
    }
    return out;
}

}  // namespace detail

/// Derives the per-instance seed for ensemble runs: splitmix64 of the master
/// seed xored with the instance index.
inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
    return detail::splitmix64(master ^ (index * 0x9e3779b97f4a7c15ULL + 1));
}

/// Uniform random MAG with exactly m distinct directed non-loop edges; the
/// same spec always yields the same byte-identical edge list. Aspects are
/// named a1..ap with index-addressed elements.
inline mag_graph random_mag(const gen_spec& spec) {
    if (spec.aspect_sizes.empty()) fail(errc::empty_aspect, "generator needs at least one aspect");
    companion_tuple tau(spec.aspect_sizes);
    const std::uint64_t n = tau.vertex_count();
    const std::uint64_t capacity = n * (n - 1);
    std::uint64_t pair_count = spec.edge_count;
    if (spec.reciprocal) {
        if (spec.edge_count % 2 != 0)
            fail(errc::too_many_edges, "reciprocal generation needs an even edge count");
        pair_count = spec.edge_count / 2;
        if (pair_count > capacity / 2)
            fail(errc::too_many_edges, "edge count exceeds reciprocal capacity " + std::to_string(capacity));
    } else if (pair_count > capacity) {
        fail(errc::too_many_edges,
             "edge count " + std::to_string(pair_count) + " exceeds capacity " + std::to_string(capacity));
    }

    std::vector<aspect> aspects;
    aspects.reserve(spec.aspect_sizes.size());
    for (std::size_t i = 0; i < spec.aspect_sizes.size(); ++i)
        aspects.push_back({"a" + std::to_string(i + 1), spec.aspect_sizes[i], {}});

    std::mt19937_64 rng(spec.seed);
    std::vector<mag_edge> edges;
    edges.reserve(static_cast<std::size_t>(spec.edge_count));
    if (!spec.reciprocal) {
        auto picks = detail::sample_distinct(rng, capacity, pair_count);
        std::sort(picks.begin(), picks.end());
        for (std::uint64_t k : picks) {
            const std::uint64_t row = k / (n - 1);
            std::uint64_t col = k % (n - 1);
            if (col >= row) ++col;  // skip the diagonal
            edges.push_back({static_cast<vertex_id>(row), static_cast<vertex_id>(col)});
        }
    } else {
        // Unordered pair space: k -> (u, v) with u < v.
        auto picks = detail::sample_distinct(rng, capacity / 2, pair_count);
        std::sort(picks.begin(), picks.end());
        for (std::uint64_t k : picks) {
            // Invert k = v*(v-1)/2 + u with u < v.
            std::uint64_t v = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(k))) / 2.0);
            while (v * (v - 1) / 2 > k) --v;
            while ((v + 1) * v / 2 <= k) ++v;
            const std::uint64_t u = k - v * (v - 1) / 2;
            edges.push_back({static_cast<vertex_id>(u), static_cast<vertex_id>(v)});
            edges.push_back({static_cast<vertex_id>(v), static_cast<vertex_id>(u)});
        }
    }
    return mag_graph(std::move(aspects), edges);
}

}  // namespace mag
