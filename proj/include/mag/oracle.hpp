#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "mag/core.hpp"
#include "mag/sparse.hpp"
#include "mag/subdet.hpp"

namespace mag {

/// Entries above this count as "positive" when reading reachability patterns
/// out of real-arithmetic closures.
constexpr double positive_entry_threshold = 1e-12;

/// Arithmetic for the closure computations. The boolean semiring is exact on
/// patterns; the real one mirrors the scaled-series formulation.
enum class semiring { real, boolean };

inline sparse_matrix adjacency_matrix(const composite_digraph& g) {
    std::vector<sparse_matrix::triplet> t;
    t.reserve(g.arc_count());
    for (vertex_id v = 0; v < g.vertex_count(); ++v)
        for (vertex_id w : g.successors(v)) t.push_back({v, w, 1.0});
    return sparse_matrix::from_triplets(g.vertex_count(), g.vertex_count(), std::move(t));
}

/// Power iteration from the all-ones vector with sup-norm normalization.
/// Returns 0 exactly when the iterate collapses to zero (nilpotent case).
/// When the per-step ratio fails to settle (periodic structure), falls back
/// to the geometric mean of the ratios, which never undershoots the true
/// spectral radius by more than the accumulated-normalization factor.
inline double spectral_radius_estimate(const sparse_matrix& j, std::size_t max_iters = 0, double tol = 1e-9) {
    if (j.rows() != j.cols()) fail(errc::not_square, "spectral radius needs a square matrix");
    const std::size_t n = j.rows();
    if (max_iters == 0) max_iters = std::max<std::size_t>(2 * n + 8, 128);

    std::vector<double> x(n, 1.0), y(n, 0.0);
    double prev = -1.0;
    double log_sum = 0.0;
    std::size_t stable = 0;
    for (std::size_t it = 1; it <= max_iters; ++it) {
        std::fill(y.begin(), y.end(), 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            auto cs = j.row_cols(r);
            auto vs = j.row_values(r);
            double acc = 0;
            for (std::size_t k = 0; k < cs.size(); ++k) acc += vs[k] * x[cs[k]];
            y[r] = acc;
        }
        double norm = 0;
        for (double v : y) norm = std::max(norm, v);
        if (norm == 0.0) return 0.0;
        log_sum += std::log(norm);
        for (std::size_t r = 0; r < n; ++r) x[r] = y[r] / norm;

        if (prev >= 0 && std::abs(norm - prev) <= tol * std::max(norm, 1.0)) {
            if (++stable >= 3) return norm;
        } else {
            stable = 0;
        }
        prev = norm;
        if (it == max_iters) return std::exp(log_sum / static_cast<double>(it));
    }
    return prev;
}

/// Scale factor applied before the walk series: rho_h = (1-eps)/(1+rho*(1+tol)),
/// strictly below 1/rho(J) for any estimate rho within tolerance of the truth.
inline double scale_factor(double rho_estimate, double tol = 1e-9) {
    constexpr double eps = 0x1p-24;
    return (1.0 - eps) / (1.0 + rho_estimate * (1.0 + tol));
}

inline sparse_matrix scale_adjacency(const sparse_matrix& j, double tol = 1e-9) {
    if (j.rows() != j.cols()) fail(errc::not_square, "scaling needs a square matrix");
    return j.scaled(scale_factor(spectral_radius_estimate(j, 0, tol), tol));
}

namespace detail {

/// Truncated walk series sum_{k=0..K} A^k with K = dimension; stops early
/// once a term vanishes. The spectral precondition rho(A) < 1 is checked up
/// front (estimate), with an entry-size backstop during accumulation.
inline sparse_matrix walk_series(const sparse_matrix& a) {
    const std::size_t n = a.rows();
    if (spectral_radius_estimate(a) >= 1.0 - 1e-12)
        fail(errc::divergence, "walk series needs spectral radius < 1");
    sparse_matrix total = add(sparse_matrix::identity(n), a);
    sparse_matrix term = a;
    for (std::size_t k = 2; k <= n; ++k) {
        term = multiply(term, a);
        if (term.nonzero_count() == 0) break;
        if (term.max_entry() > 1e12) fail(errc::divergence, "walk series terms exploded");
        total = add(total, term);
    }
    return total;
}

/// Reflexive-transitive closure pattern by repeated boolean squaring.
inline sparse_matrix boolean_closure(const sparse_matrix& a) {
    sparse_matrix b = add(sparse_matrix::identity(a.rows()), a, true);
    for (;;) {
        sparse_matrix next = multiply(b, b, true);
        if (next.nonzero_count() == b.nonzero_count()) return next;
        b = std::move(next);
    }
}

}  // namespace detail

/// Reachability closure B = sum_k Jr^k. In real arithmetic the caller must
/// pass a scaled matrix (spectral radius < 1); the boolean semiring ignores
/// magnitudes and is exact.
inline sparse_matrix reachability_closure(const sparse_matrix& jr, semiring mode = semiring::real) {
    if (jr.rows() != jr.cols()) fail(errc::not_square, "closure needs a square matrix");
    return mode == semiring::boolean ? detail::boolean_closure(jr) : detail::walk_series(jr);
}

/// Dense inverse-based closure (I - Jr)^(-1), cross-check path for n <= 512.
inline sparse_matrix closure_by_inverse(const sparse_matrix& jr) {
    if (jr.rows() != jr.cols()) fail(errc::not_square, "closure needs a square matrix");
    const std::size_t n = jr.rows();
    if (n > 512) fail(errc::too_large, "dense closure limited to n <= 512");
    // Gauss-Jordan on (I - Jr) | I.
    std::vector<std::vector<double>> a(n, std::vector<double>(2 * n, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
        a[r][r] = 1.0;
        a[r][n + r] = 1.0;
        auto cs = jr.row_cols(r);
        auto vs = jr.row_values(r);
        for (std::size_t k = 0; k < cs.size(); ++k) a[r][cs[k]] -= vs[k];
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-14) fail(errc::divergence, "I - Jr is numerically singular");
        std::swap(a[col], a[pivot]);
        const double d = a[col][col];
        for (std::size_t c = col; c < 2 * n; ++c) a[col][c] /= d;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0.0) continue;
            const double f = a[r][col];
            for (std::size_t c = col; c < 2 * n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<sparse_matrix::triplet> t;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (a[r][n + c] > positive_entry_threshold) t.push_back({r, c, a[r][n + c]});
    return sparse_matrix::from_triplets(n, n, std::move(t));
}

/// Aggregate first, close afterward: sum_k (M Jr M^T)^k. The aggregated
/// matrix is rescaled independently when its own spectral radius reaches 1
/// (loops produced by aggregation otherwise break convergence); only the
/// positivity pattern of the result is contractual.
inline sparse_matrix reach_sub_first(const sparse_matrix& jr, const subdet_matrix& m,
                                     semiring mode = semiring::real) {
    if (jr.rows() != m.cols()) fail(errc::dimension_mismatch, "quotient map does not match matrix");
    sparse_matrix agg = aggregate_adjacency(jr, m);
    if (mode == semiring::boolean) return detail::boolean_closure(agg);
    const double rho = spectral_radius_estimate(agg);
    if (rho >= 1.0 - 1e-9) agg = agg.scaled(scale_factor(rho));
    return detail::walk_series(agg);
}

/// Close first, aggregate afterward: M (sum_k Jr^k) M^T.
inline sparse_matrix reach_bfs_first(const sparse_matrix& jr, const subdet_matrix& m,
                                     semiring mode = semiring::real) {
    if (jr.rows() != m.cols()) fail(errc::dimension_mismatch, "quotient map does not match matrix");
    const bool boolean = mode == semiring::boolean;
    const sparse_matrix closure = reachability_closure(jr, mode);
    const sparse_matrix ms = m.to_sparse();
    return multiply(multiply(ms, closure, boolean), ms.transpose(), boolean);
}

}  // namespace mag
