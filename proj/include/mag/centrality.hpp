#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mag/core.hpp"
#include "mag/subdet.hpp"

namespace mag {

/// Exact shortest-path counter; counts never overflow.
using bigint = boost::multiprecision::cpp_int;

/// How class-level distances are measured when intra-class edges exist.
/// `faithful` keys the distance of a class to the moment the composite BFS
/// first touches it (hop order), so a class can keep a larger distance than
/// its minimal number of class transitions. `exact` runs 0/1-cost shortest
/// paths over composite vertices (intra-class arcs cost 0) and always yields
/// the minimal class-transition distance. Both modes agree on reachability.
enum class distance_mode { faithful, exact };

enum class closeness_formula { harmonic, classic };

/// `exact` counts paths in arbitrary-precision integers. `fast` counts in
/// doubles: integers above 2^53 round, so entries may deviate relatively by
/// about sigma * 2^-53 on graphs with astronomically many shortest paths.
enum class sigma_mode { exact, fast };

struct centrality_options {
    distance_mode distance = distance_mode::faithful;
    sigma_mode sigma = sigma_mode::exact;
    unsigned threads = 0;  // 0 = hardware concurrency
};

/// Result of one sub-determined single-source computation. All vectors are
/// keyed by class id; `preds` may hold a class several times (once per
/// composite edge that realized the step).
struct sssp_state {
    std::vector<std::int32_t> dist;             // -1 = unreachable
    std::vector<bigint> sigma;
    std::vector<std::vector<vertex_id>> preds;
    std::vector<vertex_id> order;               // classes in finish order
};

namespace detail {

inline unsigned resolve_threads(unsigned requested, std::size_t work) {
    unsigned t = requested ? requested : std::thread::hardware_concurrency();
    if (t == 0) t = 1;
    return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(work, 1)));
}

/// Runs fn(block_index, begin, end) over a static contiguous partition and
/// joins. Partial results merged in block order stay deterministic for a
/// fixed thread count.
template <typename Fn>
void parallel_blocks(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        fn(0, std::size_t{0}, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t b = std::min(count, t * chunk), e = std::min(count, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, t, b, e] { fn(t, b, e); });
    }
    for (auto& th : pool) th.join();
}

template <typename Sigma>
double sigma_ratio(const Sigma& num, const Sigma& den) {
    if constexpr (std::is_same_v<Sigma, double>) {
        return num / den;
    } else {
        return num.template convert_to<double>() / den.template convert_to<double>();
    }
}

template <typename Sigma>
struct brandes_workspace {
    std::vector<std::int32_t> dist;
    std::vector<Sigma> sigma;
    std::vector<std::vector<vertex_id>> preds;
    std::vector<vertex_id> queue, stack;
    std::vector<double> delta;

    explicit brandes_workspace(std::size_t n)
        : dist(n), sigma(n), preds(n), delta(n) {
        queue.reserve(n);
        stack.reserve(n);
    }

    void reset() {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(sigma.begin(), sigma.end(), Sigma{0});
        for (auto& p : preds) p.clear();
        std::fill(delta.begin(), delta.end(), 0.0);
        queue.clear();
        stack.clear();
    }
};

template <typename Sigma>
void brandes_from_source(const composite_digraph& g, vertex_id s, brandes_workspace<Sigma>& ws,
                         std::vector<double>& scores) {
    ws.reset();
    ws.dist[s] = 0;
    ws.sigma[s] = 1;
    ws.queue.push_back(s);
    std::size_t head = 0;
    while (head < ws.queue.size()) {
        const vertex_id v = ws.queue[head++];
        ws.stack.push_back(v);
        for (vertex_id w : g.successors(v)) {
            if (ws.dist[w] < 0) {
                ws.queue.push_back(w);
                ws.dist[w] = ws.dist[v] + 1;
            }
            if (ws.dist[w] == ws.dist[v] + 1) {
                ws.sigma[w] += ws.sigma[v];
                ws.preds[w].push_back(v);
            }
        }
    }
    for (std::size_t i = ws.stack.size(); i-- > 0;) {
        const vertex_id w = ws.stack[i];
        for (vertex_id v : ws.preds[w])
            ws.delta[v] += sigma_ratio(ws.sigma[v], ws.sigma[w]) * (1.0 + ws.delta[w]);
        if (w != s) scores[w] += ws.delta[w];
    }
}

template <typename Sigma>
std::vector<double> betweenness_composite_impl(const composite_digraph& g, unsigned threads) {
    const std::size_t n = g.vertex_count();
    std::vector<double> scores(n, 0.0);
    if (n == 0) return scores;
    const unsigned nt = resolve_threads(threads, n);
    std::vector<std::vector<double>> partial(nt, std::vector<double>(n, 0.0));
    parallel_blocks(n, nt, [&](std::size_t block, std::size_t b, std::size_t e) {
        brandes_workspace<Sigma> ws(n);
        for (std::size_t s = b; s < e; ++s)
            brandes_from_source(g, static_cast<vertex_id>(s), ws, partial[block]);
    });
    for (const auto& part : partial)
        for (std::size_t v = 0; v < n; ++v) scores[v] += part[v];
    return scores;
}

/// Shared indexing for sub-determined traversals over one (MAG, zeta) pair.
struct subdet_context {
    composite_digraph g;
    std::vector<vertex_id> class_of;
    std::size_t class_count = 0;
    std::vector<std::size_t> member_offsets;
    std::vector<vertex_id> members;  // grouped by class, ascending ids

    subdet_context(const mag_graph& m, const subdet_spec& zeta) : g(to_digraph(m)) {
        subdet_matrix q = build_subdet_matrix(m.tau(), zeta);
        class_count = q.rows();
        class_of = q.column_classes();
        member_offsets.assign(class_count + 1, 0);
        for (vertex_id c : class_of) ++member_offsets[c + 1];
        for (std::size_t c = 0; c < class_count; ++c) member_offsets[c + 1] += member_offsets[c];
        members.resize(class_of.size());
        std::vector<std::size_t> cursor(member_offsets.begin(), member_offsets.end() - 1);
        for (vertex_id v = 0; v < class_of.size(); ++v) members[cursor[class_of[v]]++] = v;
    }

    std::span<const vertex_id> class_members(vertex_id c) const {
        return {members.data() + member_offsets[c], members.data() + member_offsets[c + 1]};
    }
};

template <typename Sigma>
struct subdet_workspace {
    std::vector<std::uint8_t> color;       // per composite vertex
    std::vector<std::uint8_t> color_class; // per class
    std::vector<std::int32_t> dist;        // per class
    std::vector<std::int32_t> dist_comp;   // per composite vertex (exact mode)
    std::vector<Sigma> sigma;
    std::vector<std::vector<vertex_id>> preds;
    std::vector<vertex_id> queue, stack;
    std::vector<double> delta;

    subdet_workspace(std::size_t n, std::size_t nz)
        : color(n), color_class(nz), dist(nz), dist_comp(n), sigma(nz), preds(nz), delta(nz) {
        queue.reserve(n);
        stack.reserve(nz);
    }

    void reset() {
        std::fill(color.begin(), color.end(), 0);
        std::fill(color_class.begin(), color_class.end(), 0);
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(dist_comp.begin(), dist_comp.end(), -1);
        std::fill(sigma.begin(), sigma.end(), Sigma{0});
        for (auto& p : preds) p.clear();
        std::fill(delta.begin(), delta.end(), 0.0);
        queue.clear();
        stack.clear();
    }
};

/// The class-seeded BFS over the full composite digraph: the whole source
/// class is enqueued up front, distances / counts / predecessors are keyed by
/// class, and each composite vertex is expanded at most once. Reachability
/// therefore follows real composite paths only.
template <typename Sigma>
void class_bfs_faithful(const subdet_context& ctx, vertex_id s, subdet_workspace<Sigma>& ws) {
    ws.reset();
    for (vertex_id v : ctx.class_members(s)) {
        ws.color[v] = 1;
        ws.queue.push_back(v);
    }
    ws.dist[s] = 0;
    ws.sigma[s] = 1;
    std::size_t head = 0;
    while (head < ws.queue.size()) {
        const vertex_id v = ws.queue[head++];
        const vertex_id vz = ctx.class_of[v];
        if (!ws.color_class[vz]) {
            ws.color_class[vz] = 1;
            ws.stack.push_back(vz);
        }
        for (vertex_id w : ctx.g.successors(v)) {
            if (!ws.color[w]) {
                ws.color[w] = 1;
                ws.queue.push_back(w);
            }
            const vertex_id wz = ctx.class_of[w];
            if (ws.dist[wz] == -1) ws.dist[wz] = ws.dist[vz] + 1;
            if (ws.dist[wz] == ws.dist[vz] + 1) {
                ws.sigma[wz] += ws.sigma[vz];
                ws.preds[wz].push_back(vz);
            }
        }
    }
}

/// 0/1-cost variant: composite distances count only class transitions, class
/// distances are the minima over members, and counting runs level by level.
/// The finish order is sorted by (distance, class id).
template <typename Sigma>
void class_bfs_exact(const subdet_context& ctx, vertex_id s, subdet_workspace<Sigma>& ws) {
    ws.reset();
    std::deque<vertex_id> dq;
    for (vertex_id v : ctx.class_members(s)) {
        ws.dist_comp[v] = 0;
        dq.push_back(v);
    }
    while (!dq.empty()) {
        const vertex_id v = dq.front();
        dq.pop_front();
        if (ws.color[v]) continue;
        ws.color[v] = 1;
        for (vertex_id w : ctx.g.successors(v)) {
            const std::int32_t step = ctx.class_of[w] == ctx.class_of[v] ? 0 : 1;
            const std::int32_t nd = ws.dist_comp[v] + step;
            if (ws.dist_comp[w] == -1 || nd < ws.dist_comp[w]) {
                ws.dist_comp[w] = nd;
                step == 0 ? dq.push_front(w) : dq.push_back(w);
            }
        }
    }
    std::int32_t max_d = 0;
    for (vertex_id v = 0; v < ws.dist_comp.size(); ++v) {
        if (ws.dist_comp[v] < 0) continue;
        const vertex_id z = ctx.class_of[v];
        if (ws.dist[z] == -1 || ws.dist_comp[v] < ws.dist[z]) ws.dist[z] = ws.dist_comp[v];
        max_d = std::max(max_d, ws.dist_comp[v]);
    }
    // Composite vertices realizing their class minimum, bucketed by level.
    std::vector<std::vector<vertex_id>> level(static_cast<std::size_t>(max_d) + 1);
    for (vertex_id v = 0; v < ws.dist_comp.size(); ++v)
        if (ws.dist_comp[v] >= 0 && ws.dist_comp[v] == ws.dist[ctx.class_of[v]])
            level[static_cast<std::size_t>(ws.dist_comp[v])].push_back(v);
    ws.sigma[s] = 1;
    for (std::size_t d = 0; d < level.size(); ++d) {
        for (vertex_id v : level[d]) {
            const vertex_id vz = ctx.class_of[v];
            for (vertex_id w : ctx.g.successors(v)) {
                const vertex_id wz = ctx.class_of[w];
                if (wz == vz) continue;
                if (ws.dist[wz] == ws.dist[vz] + 1 && ws.dist_comp[w] == ws.dist[wz]) {
                    ws.sigma[wz] += ws.sigma[vz];
                    ws.preds[wz].push_back(vz);
                }
            }
        }
    }
    for (std::size_t c = 0; c < ws.dist.size(); ++c)
        if (ws.dist[c] >= 0) ws.stack.push_back(static_cast<vertex_id>(c));
    std::stable_sort(ws.stack.begin(), ws.stack.end(),
                     [&](vertex_id a, vertex_id b) { return ws.dist[a] < ws.dist[b]; });
}

template <typename Sigma>
void class_bfs(const subdet_context& ctx, vertex_id s, distance_mode mode, subdet_workspace<Sigma>& ws) {
    if (mode == distance_mode::faithful)
        class_bfs_faithful(ctx, s, ws);
    else
        class_bfs_exact(ctx, s, ws);
}

template <typename Sigma>
std::vector<double> betweenness_subdet_impl(const subdet_context& ctx, distance_mode mode, unsigned threads) {
    const std::size_t nz = ctx.class_count;
    std::vector<double> scores(nz, 0.0);
    const unsigned nt = resolve_threads(threads, nz);
    std::vector<std::vector<double>> partial(nt, std::vector<double>(nz, 0.0));
    parallel_blocks(nz, nt, [&](std::size_t block, std::size_t b, std::size_t e) {
        subdet_workspace<Sigma> ws(ctx.g.vertex_count(), nz);
        auto& out = partial[block];
        for (std::size_t s = b; s < e; ++s) {
            class_bfs(ctx, static_cast<vertex_id>(s), mode, ws);
            for (std::size_t i = ws.stack.size(); i-- > 0;) {
                const vertex_id w = ws.stack[i];
                for (vertex_id v : ws.preds[w])
                    ws.delta[v] += sigma_ratio(ws.sigma[v], ws.sigma[w]) * (1.0 + ws.delta[w]);
                if (w != s) out[w] += ws.delta[w];
            }
        }
    });
    for (const auto& part : partial)
        for (std::size_t c = 0; c < nz; ++c) scores[c] += part[c];
    return scores;
}

inline double closeness_score(const std::vector<std::int32_t>& dist, std::size_t self, std::size_t domain,
                              closeness_formula formula) {
    if (formula == closeness_formula::harmonic) {
        double acc = 0;
        for (std::size_t t = 0; t < dist.size(); ++t)
            if (t != self && dist[t] > 0) acc += 1.0 / dist[t];
        return acc;
    }
    std::uint64_t reached = 0, total = 0;
    for (std::size_t t = 0; t < dist.size(); ++t) {
        if (dist[t] < 0) continue;
        ++reached;
        if (t != self) total += static_cast<std::uint64_t>(dist[t]);
    }
    if (reached <= 1 || domain <= 1 || total == 0) return 0.0;
    const double r = static_cast<double>(reached);
    return (r - 1.0) * (r - 1.0) /
           (static_cast<double>(domain - 1) * static_cast<double>(total));
}

}  // namespace detail

/// Brandes betweenness over composite vertices: directed, endpoints excluded,
/// unnormalized. O(nm) time, O(n+m) space per concurrent source.
inline std::vector<double> betweenness_composite(const composite_digraph& g,
                                                 const centrality_options& opts = {}) {
    return opts.sigma == sigma_mode::exact
               ? detail::betweenness_composite_impl<bigint>(g, opts.threads)
               : detail::betweenness_composite_impl<double>(g, opts.threads);
}

/// One class-seeded single-source pass, exposed for inspection and testing.
inline sssp_state sub_bfs(const mag_graph& m, const subdet_spec& zeta, vertex_id source_class,
                          distance_mode mode = distance_mode::faithful) {
    zeta.check_order(m.order());
    detail::subdet_context ctx(m, zeta);
    if (source_class >= ctx.class_count)
        fail(errc::unknown_class, "class " + std::to_string(source_class) + " out of range");
    detail::subdet_workspace<bigint> ws(ctx.g.vertex_count(), ctx.class_count);
    detail::class_bfs(ctx, source_class, mode, ws);
    return sssp_state{std::move(ws.dist), std::move(ws.sigma), std::move(ws.preds), std::move(ws.stack)};
}

/// Betweenness of sub-determined classes computed on the full MAG, so only
/// class paths backed by real composite paths are counted.
inline std::vector<double> betweenness_subdet(const mag_graph& m, const subdet_spec& zeta,
                                              const centrality_options& opts = {}) {
    zeta.check_order(m.order());
    detail::subdet_context ctx(m, zeta);
    return opts.sigma == sigma_mode::exact
               ? detail::betweenness_subdet_impl<bigint>(ctx, opts.distance, opts.threads)
               : detail::betweenness_subdet_impl<double>(ctx, opts.distance, opts.threads);
}

/// Closeness over composite vertices. Harmonic: sum of inverse distances to
/// reachable targets. Classic: (r-1)^2 / ((n-1) * sum of distances) over the
/// r reachable targets, 0 when nothing but the source is reachable.
inline std::vector<double> closeness_composite(const composite_digraph& g,
                                               closeness_formula formula = closeness_formula::harmonic,
                                               const centrality_options& opts = {}) {
    const std::size_t n = g.vertex_count();
    std::vector<double> scores(n, 0.0);
    if (n == 0) return scores;
    const unsigned nt = detail::resolve_threads(opts.threads, n);
    detail::parallel_blocks(n, nt, [&](std::size_t, std::size_t b, std::size_t e) {
        std::vector<std::int32_t> dist(n);
        std::vector<vertex_id> queue;
        queue.reserve(n);
        for (std::size_t s = b; s < e; ++s) {
            std::fill(dist.begin(), dist.end(), -1);
            queue.clear();
            dist[s] = 0;
            queue.push_back(static_cast<vertex_id>(s));
            std::size_t head = 0;
            while (head < queue.size()) {
                const vertex_id v = queue[head++];
                for (vertex_id w : g.successors(v)) {
                    if (dist[w] < 0) {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            scores[s] = detail::closeness_score(dist, s, n, formula);
        }
    });
    return scores;
}

/// Closeness over classes using the spurious-path-free class distances.
inline std::vector<double> closeness_subdet(const mag_graph& m, const subdet_spec& zeta,
                                            closeness_formula formula = closeness_formula::harmonic,
                                            const centrality_options& opts = {}) {
    zeta.check_order(m.order());
    detail::subdet_context ctx(m, zeta);
    const std::size_t nz = ctx.class_count;
    std::vector<double> scores(nz, 0.0);
    const unsigned nt = detail::resolve_threads(opts.threads, nz);
    detail::parallel_blocks(nz, nt, [&](std::size_t, std::size_t b, std::size_t e) {
        detail::subdet_workspace<double> ws(ctx.g.vertex_count(), nz);
        for (std::size_t s = b; s < e; ++s) {
            detail::class_bfs(ctx, static_cast<vertex_id>(s), opts.distance, ws);
            scores[s] = detail::closeness_score(ws.dist, s, nz, formula);
        }
    });
    return scores;
}

/// Reference betweenness by explicit enumeration of every shortest path
/// (layered DFS per ordered pair). Exponential; guarded to n <= 14.
inline std::vector<double> betweenness_bruteforce(const composite_digraph& g) {
    const std::size_t n = g.vertex_count();
    if (n > 14) fail(errc::too_large, "brute-force betweenness limited to n <= 14");
    std::vector<double> scores(n, 0.0);
    std::vector<std::int32_t> dist(n);
    std::vector<vertex_id> queue, path;
    std::vector<std::uint64_t> through(n);
    for (vertex_id s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        queue.clear();
        dist[s] = 0;
        queue.push_back(s);
        std::size_t head = 0;
        while (head < queue.size()) {
            const vertex_id v = queue[head++];
            for (vertex_id w : g.successors(v))
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
        }
        for (vertex_id t = 0; t < n; ++t) {
            if (t == s || dist[t] <= 0) continue;
            std::fill(through.begin(), through.end(), 0);
            std::uint64_t total = 0;
            path.clear();
            // Depth-first walk over the shortest-path DAG from s to t.
            auto dfs = [&](auto&& self, vertex_id v) -> void {
                if (v == t) {
                    ++total;
                    for (vertex_id u : path)
                        if (u != s) ++through[u];
                    return;
                }
                for (vertex_id w : g.successors(v)) {
                    if (dist[w] == dist[v] + 1 && dist[w] <= dist[t]) {
                        path.push_back(w);
                        self(self, w);
                        path.pop_back();
                    }
                }
            };
            dfs(dfs, s);
            if (total == 0) continue;
            for (vertex_id v = 0; v < n; ++v)
                if (v != t && through[v] > 0)
                    scores[v] += static_cast<double>(through[v]) / static_cast<double>(total);
        }
    }
    return scores;
}

}  // namespace mag
