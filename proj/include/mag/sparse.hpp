#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "mag/error.hpp"

namespace mag {

/// Row-compressed sparse matrix over nonnegative reals. No explicit zeros are
/// stored; boolean-semiring products are available alongside the real ones.
class sparse_matrix {
  public:
    struct triplet {
        std::size_t row, col;
        double value;
    };

    sparse_matrix() = default;

    sparse_matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), offsets_(rows + 1, 0) {
        if (rows == 0 || cols == 0) fail(errc::dimension_mismatch, "matrix dimensions must be >= 1");
    }

    static sparse_matrix identity(std::size_t n) {
        sparse_matrix m(n, n);
        m.cols_idx_.resize(n);
        m.values_.resize(n, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            m.cols_idx_[i] = i;
            m.offsets_[i + 1] = i + 1;
        }
        return m;
    }

    /// Duplicate (row, col) entries accumulate by addition; zeros are dropped.
    static sparse_matrix from_triplets(std::size_t rows, std::size_t cols, std::vector<triplet> entries) {
        sparse_matrix m(rows, cols);
        std::sort(entries.begin(), entries.end(), [](const triplet& a, const triplet& b) {
            return std::tie(a.row, a.col) < std::tie(b.row, b.col);
        });
        for (std::size_t i = 0; i < entries.size();) {
            const std::size_t r = entries[i].row, c = entries[i].col;
            if (r >= rows || c >= cols) fail(errc::out_of_range, "triplet outside matrix");
            double v = 0;
            for (; i < entries.size() && entries[i].row == r && entries[i].col == c; ++i) v += entries[i].value;
            if (v != 0.0) {
                m.cols_idx_.push_back(c);
                m.values_.push_back(v);
                m.offsets_[r + 1] = m.cols_idx_.size();
            }
        }
        for (std::size_t r = 0; r < rows; ++r)
            m.offsets_[r + 1] = std::max(m.offsets_[r + 1], m.offsets_[r]);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nonzero_count() const { return values_.size(); }

    std::span<const std::size_t> row_cols(std::size_t r) const {
        return {cols_idx_.data() + offsets_[r], cols_idx_.data() + offsets_[r + 1]};
    }
    std::span<const double> row_values(std::size_t r) const {
        return {values_.data() + offsets_[r], values_.data() + offsets_[r + 1]};
    }

    double at(std::size_t r, std::size_t c) const {
        if (r >= rows_ || c >= cols_) fail(errc::out_of_range, "matrix index out of range");
        auto cols = row_cols(r);
        auto it = std::lower_bound(cols.begin(), cols.end(), c);
        if (it == cols.end() || *it != c) return 0.0;
        return values_[offsets_[r] + static_cast<std::size_t>(it - cols.begin())];
    }

    sparse_matrix transpose() const {
        std::vector<triplet> t;
        t.reserve(values_.size());
        for (std::size_t r = 0; r < rows_; ++r) {
            auto cs = row_cols(r);
            auto vs = row_values(r);
            for (std::size_t k = 0; k < cs.size(); ++k) t.push_back({cs[k], r, vs[k]});
        }
        return from_triplets(cols_, rows_, std::move(t));
    }

    sparse_matrix scaled(double s) const {
        sparse_matrix m = *this;
        for (double& v : m.values_) v *= s;
        return m;
    }

    double max_entry() const {
        double m = 0;
        for (double v : values_) m = std::max(m, v);
        return m;
    }

    std::vector<std::vector<double>> to_dense() const {
        std::vector<std::vector<double>> d(rows_, std::vector<double>(cols_, 0.0));
        for (std::size_t r = 0; r < rows_; ++r) {
            auto cs = row_cols(r);
            auto vs = row_values(r);
            for (std::size_t k = 0; k < cs.size(); ++k) d[r][cs[k]] = vs[k];
        }
        return d;
    }

    /// Sorted (row, col) pairs of off-diagonal entries exceeding `threshold`.
    std::vector<std::pair<std::size_t, std::size_t>> off_diagonal_pattern(double threshold = 1e-12) const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t r = 0; r < rows_; ++r) {
            auto cs = row_cols(r);
            auto vs = row_values(r);
            for (std::size_t k = 0; k < cs.size(); ++k)
                if (cs[k] != r && vs[k] > threshold) out.emplace_back(r, cs[k]);
        }
        return out;
    }

    bool same_pattern(const sparse_matrix& o, double threshold = 1e-12) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) return false;
        for (std::size_t r = 0; r < rows_; ++r) {
            std::vector<std::size_t> a, b;
            auto collect = [&](const sparse_matrix& m, std::vector<std::size_t>& dst) {
                auto cs = m.row_cols(r);
                auto vs = m.row_values(r);
                for (std::size_t k = 0; k < cs.size(); ++k)
                    if (vs[k] > threshold) dst.push_back(cs[k]);
            };
            collect(*this, a);
            collect(o, b);
            if (a != b) return false;
        }
        return true;
    }

    friend sparse_matrix multiply(const sparse_matrix& a, const sparse_matrix& b, bool boolean);
    friend sparse_matrix add(const sparse_matrix& a, const sparse_matrix& b, bool boolean);

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<std::size_t> offsets_ = {0};
    std::vector<std::size_t> cols_idx_;
    std::vector<double> values_;
};

/// Sparse product; with `boolean` the semiring is OR-AND and all stored
/// entries come out as exactly 1.
inline sparse_matrix multiply(const sparse_matrix& a, const sparse_matrix& b, bool boolean = false) {
    if (a.cols() != b.rows()) fail(errc::dimension_mismatch, "product dimensions do not agree");
    sparse_matrix out(a.rows(), b.cols());
    std::vector<double> acc(b.cols(), 0.0);
    std::vector<std::size_t> touched;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        touched.clear();
        auto acs = a.row_cols(r);
        auto avs = a.row_values(r);
        for (std::size_t k = 0; k < acs.size(); ++k) {
            auto bcs = b.row_cols(acs[k]);
            auto bvs = b.row_values(acs[k]);
            for (std::size_t j = 0; j < bcs.size(); ++j) {
                if (acc[bcs[j]] == 0.0) touched.push_back(bcs[j]);
                acc[bcs[j]] = boolean ? 1.0 : acc[bcs[j]] + avs[k] * bvs[j];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (std::size_t c : touched) {
            if (acc[c] != 0.0) {
                out.cols_idx_.push_back(c);
                out.values_.push_back(acc[c]);
            }
            acc[c] = 0.0;
        }
        out.offsets_[r + 1] = out.cols_idx_.size();
    }
    return out;
}

inline sparse_matrix add(const sparse_matrix& a, const sparse_matrix& b, bool boolean = false) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) fail(errc::dimension_mismatch, "sum dimensions differ");
    sparse_matrix out(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto acs = a.row_cols(r);
        auto avs = a.row_values(r);
        auto bcs = b.row_cols(r);
        auto bvs = b.row_values(r);
        std::size_t i = 0, j = 0;
        while (i < acs.size() || j < bcs.size()) {
            std::size_t c;
            double v;
            if (j == bcs.size() || (i < acs.size() && acs[i] < bcs[j])) {
                c = acs[i];
                v = avs[i++];
            } else if (i == acs.size() || bcs[j] < acs[i]) {
                c = bcs[j];
                v = bvs[j++];
            } else {
                c = acs[i];
                v = avs[i++] + bvs[j++];
            }
            if (boolean && v != 0.0) v = 1.0;
            if (v != 0.0) {
                out.cols_idx_.push_back(c);
                out.values_.push_back(v);
            }
        }
        out.offsets_[r + 1] = out.cols_idx_.size();
    }
    return out;
}

}  // namespace mag
