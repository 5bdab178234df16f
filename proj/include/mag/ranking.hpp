#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mag/error.hpp"

namespace mag {

/// An ordered ranking of vertex identifiers, best first, with the applied
/// tie-breaking recorded. `group_start[i]` is the rank (0-based) where the
/// i-th score-equal group begins.
struct ranking {
    std::vector<std::uint32_t> items;
    std::vector<std::size_t> group_start;
    std::string tie_rule = "identifier-ascending";

    std::size_t size() const { return items.size(); }
};

/// Sorts by score descending; ties broken by identifier ascending.
inline ranking to_ranking(const std::vector<double>& scores) {
    ranking r;
    r.items.resize(scores.size());
    std::iota(r.items.begin(), r.items.end(), 0u);
    std::sort(r.items.begin(), r.items.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    for (std::size_t i = 0; i < r.items.size(); ++i)
        if (i == 0 || scores[r.items[i]] != scores[r.items[i - 1]]) r.group_start.push_back(i);
    return r;
}

/// Cumulative rank-biased weight of the top `depth` positions for
/// persistence p: the fraction of the total (extrapolated) mass a prefix of
/// that length carries.
inline double prefix_weight(std::size_t depth, double p) {
    if (depth == 0) return 0.0;
    if (p <= 0.0 || p >= 1.0) fail(errc::out_of_range, "persistence must lie in (0,1)");
    const double d = static_cast<double>(depth);
    double tail = 0.0;  // sum_{i=1..d-1} p^i / i
    double power = 1.0;
    for (std::size_t i = 1; i < depth; ++i) {
        power *= p;
        tail += power / static_cast<double>(i);
    }
    return 1.0 - power + (1.0 - p) / p * d * (std::log(1.0 / (1.0 - p)) - tail);
}

/// Solves prefix_weight(depth, p) = weight_fraction for p by bisection to
/// 1e-10. prefix_weight is strictly decreasing in p with range (0,1), so a
/// unique solution exists for any weight fraction strictly inside (0,1).
inline double solve_persistence(double weight_fraction, std::size_t depth) {
    if (depth == 0) fail(errc::out_of_range, "depth must be >= 1");
    if (!(weight_fraction > 0.0 && weight_fraction < 1.0))
        fail(errc::no_solution, "weight fraction must lie strictly in (0,1)");
    double lo = 1e-12, hi = 1.0 - 1e-12;
    double f_lo = prefix_weight(depth, lo), f_hi = prefix_weight(depth, hi);
    if (!(f_lo >= weight_fraction && f_hi <= weight_fraction))
        fail(errc::no_solution, "weight fraction outside attainable range for this depth");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = prefix_weight(depth, mid);
        if (f > weight_fraction)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-10) break;
    }
    return 0.5 * (lo + hi);
}

/// How ties participate in prefix overlap. `identifier` uses the recorded
/// deterministic order; `average_overlap` treats a tie group straddling the
/// prefix boundary as a set with fractional membership, intersecting by the
/// smaller membership, so tied items cannot be told apart by either ranking.
enum class tie_policy { identifier, average_overlap };

namespace detail {

inline void check_universe(const ranking& a, const ranking& b) {
    if (a.items.size() != b.items.size())
        fail(errc::universe_mismatch, "rankings have different lengths");
    std::vector<std::uint32_t> sa = a.items, sb = b.items;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) fail(errc::universe_mismatch, "rankings cover different identifier sets");
}

/// Fractional membership of each item in the top-k prefix when its tie group
/// straddles the boundary.
inline double membership(std::size_t pos, std::size_t group_lo, std::size_t group_hi, std::size_t k) {
    (void)pos;
    if (group_hi <= k) return 1.0;
    if (group_lo >= k) return 0.0;
    return static_cast<double>(k - group_lo) / static_cast<double>(group_hi - group_lo);
}

}  // namespace detail

/// Extrapolated rank-biased overlap of two equal-length rankings:
/// (1-p) * sum_k p^(k-1) X_k/k + p^L * X_L/L. With `truncate`, both lists are
/// cut to the given depth first (prefix items need not coincide then).
inline double rbo(const ranking& a, const ranking& b, double p,
                  tie_policy ties = tie_policy::identifier,
                  std::optional<std::size_t> truncate = std::nullopt) {
    if (!(p > 0.0 && p < 1.0)) fail(errc::out_of_range, "persistence must lie in (0,1)");
    if (!truncate) detail::check_universe(a, b);
    const std::size_t full = std::min(a.items.size(), b.items.size());
    const std::size_t len = truncate ? std::min(*truncate, full) : full;
    if (len == 0) return 0.0;

    double score = 0.0, weight = 1.0;  // weight = p^(k-1)
    double xk = 0.0;
    double ak_last = 0.0;

    if (ties == tie_policy::identifier) {
        std::unordered_map<std::uint32_t, int> seen;  // +1 from a, -1 from b
        seen.reserve(len * 2);
        for (std::size_t k = 0; k < len; ++k) {
            const std::uint32_t ea = a.items[k], eb = b.items[k];
            if (ea == eb) {
                xk += 1;
            } else {
                auto bump = [&](std::uint32_t e, int side) {
                    auto it = seen.find(e);
                    if (it != seen.end() && it->second == -side) {
                        seen.erase(it);
                        xk += 1;
                    } else {
                        seen[e] = side;
                    }
                };
                bump(ea, +1);
                bump(eb, -1);
            }
            ak_last = xk / static_cast<double>(k + 1);
            score += weight * ak_last;
            weight *= p;
        }
    } else {
        // Fuzzy prefix intersection: per depth k, X_k sums the smaller of the
        // two fractional memberships of each item.
        auto group_bounds = [](const ranking& r, std::vector<std::pair<std::size_t, std::size_t>>& out) {
            out.resize(r.items.size());
            for (std::size_t g = 0; g < r.group_start.size(); ++g) {
                const std::size_t lo = r.group_start[g];
                const std::size_t hi = g + 1 < r.group_start.size() ? r.group_start[g + 1] : r.items.size();
                for (std::size_t i = lo; i < hi; ++i) out[i] = {lo, hi};
            }
        };
        std::vector<std::pair<std::size_t, std::size_t>> ga, gb;
        group_bounds(a, ga);
        group_bounds(b, gb);
        std::vector<std::size_t> pos_b(full);
        {
            std::unordered_map<std::uint32_t, std::size_t> where;
            for (std::size_t i = 0; i < b.items.size(); ++i) where[b.items[i]] = i;
            for (std::size_t i = 0; i < a.items.size(); ++i) {
                auto it = where.find(a.items[i]);
                pos_b[i] = it == where.end() ? b.items.size() : it->second;
            }
        }
        for (std::size_t k = 1; k <= len; ++k) {
            double x = 0.0;
            for (std::size_t i = 0; i < a.items.size(); ++i) {
                const double ma = detail::membership(i, ga[i].first, ga[i].second, k);
                if (ma == 0.0) continue;
                const std::size_t j = pos_b[i];
                if (j >= b.items.size()) continue;
                const double mb = detail::membership(j, gb[j].first, gb[j].second, k);
                x += std::min(ma, mb);
            }
            ak_last = x / static_cast<double>(k);
            score += weight * ak_last;
            weight *= p;
        }
    }
    // weight is now p^len.
    return (1.0 - p) * score + weight * ak_last;
}

inline double rbd(const ranking& a, const ranking& b, double p,
                  tie_policy ties = tie_policy::identifier,
                  std::optional<std::size_t> truncate = std::nullopt) {
    return 1.0 - rbo(a, b, p, ties, truncate);
}

}  // namespace mag
