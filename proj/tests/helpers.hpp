#pragma once

// Shared fixtures and independent oracles for the test suites. Everything
// here recomputes results from first principles (edge lists, explicit
// enumeration) so the library paths are checked against separate logic.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "mag/core.hpp"
#include "mag/generate.hpp"
#include "mag/subdet.hpp"

namespace testutil {

using namespace mag;

/// 3 actors, 2 time instants, 5 edges. Aggregating over time yields the
/// chain 1 -> 2 -> 3 even though no temporal path connects actor 1 to 3:
/// the 2-3 contact happens at T1, before the 1-2 contact at T2.
inline mag_graph contact_mag() {
    std::vector<aspect> aspects = {{"vertices", 3, {"1", "2", "3"}}, {"time", 2, {"T1", "T2"}}};
    std::vector<std::vector<std::string>> edges = {
        {"1", "T1", "1", "T2"}, {"2", "T1", "3", "T1"}, {"2", "T1", "2", "T2"},
        {"3", "T1", "3", "T2"}, {"1", "T2", "2", "T2"},
    };
    return build_mag(std::move(aspects), edges);
}

/// 4 actors over 3 instants: contacts {1,2}@T1, {3,4}@T2, {2,3}@T3 (both
/// directions) plus per-actor waiting arcs. The aggregate has a 1->4 path;
/// the temporal network does not, because 3-4 closes before 2-3 opens.
inline mag_graph relay_mag() {
    std::vector<aspect> aspects = {{"vertices", 4, {"1", "2", "3", "4"}}, {"time", 3, {"T1", "T2", "T3"}}};
    std::vector<std::vector<std::string>> edges;
    auto contact = [&](const std::string& a, const std::string& b, const std::string& t) {
        edges.push_back({a, t, b, t});
        edges.push_back({b, t, a, t});
    };
    contact("1", "2", "T1");
    contact("3", "4", "T2");
    contact("2", "3", "T3");
    for (const char* v : {"1", "2", "3", "4"}) {
        edges.push_back({v, "T1", v, "T2"});
        edges.push_back({v, "T2", v, "T3"});
    }
    return build_mag(std::move(aspects), edges);
}

/// Random MAG with a density-controlled edge count, both aspects >= 2.
inline mag_graph random_test_mag(std::mt19937_64& rng, std::size_t p, std::uint64_t max_n,
                                 double density_lo = 0.05, double density_hi = 0.3) {
    for (;;) {
        std::vector<std::uint32_t> sizes;
        std::uint64_t n = 1;
        for (std::size_t i = 0; i < p; ++i) {
            const std::uint32_t s = 2 + static_cast<std::uint32_t>(rng() % 6);
            sizes.push_back(s);
            n *= s;
        }
        if (n > max_n || n < 4) continue;
        const double density =
            density_lo + (density_hi - density_lo) * (static_cast<double>(rng() % 1000) / 1000.0);
        std::uint64_t m = static_cast<std::uint64_t>(density * static_cast<double>(n * (n - 1)));
        if (m == 0) m = 1;
        gen_spec spec;
        spec.aspect_sizes = sizes;
        spec.edge_count = m;
        spec.seed = rng();
        return random_mag(spec);
    }
}

/// Plain reachability oracle on the composite digraph: DFS over the raw edge
/// list from a seed set.
inline std::vector<bool> reachable_from(const mag_graph& g, const std::vector<vertex_id>& seeds) {
    const std::size_t n = static_cast<std::size_t>(g.vertex_count());
    std::vector<std::vector<vertex_id>> adj(n);
    for (const mag_edge& e : g.edges()) adj[e.from].push_back(e.to);
    std::vector<bool> seen(n, false);
    std::vector<vertex_id> stack(seeds);
    for (vertex_id s : seeds) seen[s] = true;
    while (!stack.empty()) {
        const vertex_id v = stack.back();
        stack.pop_back();
        for (vertex_id w : adj[v])
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
    }
    return seen;
}

/// Class-level reachability the non-spurious way: class t is reachable from
/// class s iff some member of t is composite-reachable from the seeds of s.
inline std::set<std::pair<vertex_id, vertex_id>> true_class_reachability(const mag_graph& g,
                                                                         const subdet_spec& zeta) {
    const subdet_matrix q = build_subdet_matrix(g.tau(), zeta);
    std::vector<std::vector<vertex_id>> members(q.rows());
    for (vertex_id v = 0; v < q.cols(); ++v) members[q.class_of(v)].push_back(v);
    std::set<std::pair<vertex_id, vertex_id>> out;
    for (vertex_id s = 0; s < q.rows(); ++s) {
        const auto seen = reachable_from(g, members[s]);
        for (vertex_id v = 0; v < q.cols(); ++v)
            if (seen[v] && q.class_of(v) != s) out.insert({s, q.class_of(v)});
    }
    return out;
}

/// Class-level reachability the aggregate (spurious-prone) way: closure of
/// the loop-free aggregated arc set, computed by plain DFS.
inline std::set<std::pair<vertex_id, vertex_id>> aggregate_class_reachability(const mag_graph& g,
                                                                              const subdet_spec& zeta) {
    const subdet_matrix q = build_subdet_matrix(g.tau(), zeta);
    std::vector<std::set<vertex_id>> adj(q.rows());
    for (const mag_edge& e : g.edges()) {
        const vertex_id a = q.class_of(e.from), b = q.class_of(e.to);
        if (a != b) adj[a].insert(b);
    }
    std::set<std::pair<vertex_id, vertex_id>> out;
    for (vertex_id s = 0; s < q.rows(); ++s) {
        std::vector<bool> seen(q.rows(), false);
        std::vector<vertex_id> stack{s};
        seen[s] = true;
        while (!stack.empty()) {
            const vertex_id v = stack.back();
            stack.pop_back();
            for (vertex_id w : adj[v])
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
        }
        for (vertex_id t = 0; t < q.rows(); ++t)
            if (seen[t] && t != s) out.insert({s, t});
    }
    return out;
}

/// Brute-force minimal class-transition distances from a seed class:
/// Bellman-Ford relaxation over the raw edge list with 0-cost intra-class
/// steps, then per-class minima. -1 marks unreachable classes.
inline std::vector<std::int32_t> class_transition_distances(const mag_graph& g, const subdet_spec& zeta,
                                                            vertex_id source_class) {
    const subdet_matrix q = build_subdet_matrix(g.tau(), zeta);
    const std::size_t n = static_cast<std::size_t>(g.vertex_count());
    constexpr std::int32_t inf = std::numeric_limits<std::int32_t>::max();
    std::vector<std::int32_t> d(n, inf);
    for (vertex_id v = 0; v < n; ++v)
        if (q.class_of(v) == source_class) d[v] = 0;
    for (bool changed = true; changed;) {
        changed = false;
        for (const mag_edge& e : g.edges()) {
            if (d[e.from] == inf) continue;
            const std::int32_t cost = q.class_of(e.from) == q.class_of(e.to) ? 0 : 1;
            if (d[e.from] + cost < d[e.to]) {
                d[e.to] = d[e.from] + cost;
                changed = true;
            }
        }
    }
    std::vector<std::int32_t> out(q.rows(), -1);
    for (vertex_id v = 0; v < n; ++v) {
        if (d[v] == inf) continue;
        const vertex_id c = q.class_of(v);
        if (out[c] == -1 || d[v] < out[c]) out[c] = d[v];
    }
    return out;
}

/// All proper sub-determinations of order p whose class count is >= 2.
inline std::vector<subdet_spec> proper_specs(const companion_tuple& tau) {
    std::vector<subdet_spec> out;
    const std::size_t p = tau.order();
    for (std::uint64_t z = 1; z + 1 < (std::uint64_t{1} << p); ++z) {
        subdet_spec spec = subdet_spec::from_integer(z, p);
        if (sub_companion_tuple(tau, spec).vertex_count() >= 2) out.push_back(spec);
    }
    return out;
}

}  // namespace testutil
