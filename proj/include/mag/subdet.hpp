#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mag/core.hpp"
#include "mag/sparse.hpp"

namespace mag {

/// Selects a proper, non-empty sublist of aspects: at least one kept, at
/// least one dropped. The integer form maps aspect 1 to the least-significant
/// bit, matching the vertex codec convention.
class subdet_spec {
  public:
    static subdet_spec from_indicator(std::vector<std::uint8_t> bits) {
        subdet_spec z;
        z.bits_ = std::move(bits);
        z.validate();
        return z;
    }

    static subdet_spec from_integer(std::uint64_t zeta, std::size_t p) {
        if (p == 0 || p > 63) fail(errc::spec_arity_mismatch, "aspect count out of range");
        std::vector<std::uint8_t> bits(p);
        for (std::size_t i = 0; i < p; ++i) bits[i] = static_cast<std::uint8_t>((zeta >> i) & 1u);
        return from_indicator(std::move(bits));
    }

    std::size_t order() const { return bits_.size(); }
    bool keeps(std::size_t i) const { return bits_.at(i) != 0; }
    const std::vector<std::uint8_t>& indicator() const { return bits_; }

    std::uint64_t integer() const {
        std::uint64_t z = 0;
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i]) z |= (std::uint64_t{1} << i);
        return z;
    }

    std::vector<std::size_t> kept_aspects() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i]) out.push_back(i);
        return out;
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < bits_.size(); ++i) {
            if (i) s += ',';
            s += bits_[i] ? '1' : '0';
        }
        return s;
    }

    void check_order(std::size_t p) const {
        if (bits_.size() != p)
            fail(errc::spec_arity_mismatch, "sub-determination has " + std::to_string(bits_.size()) +
                                                " entries for " + std::to_string(p) + " aspects");
    }

  private:
    void validate() const {
        if (bits_.empty()) fail(errc::spec_arity_mismatch, "empty sub-determination tuple");
        bool any0 = false, any1 = false;
        for (auto b : bits_) {
            if (b > 1) fail(errc::improper_spec, "indicator entries must be 0 or 1");
            (b ? any1 : any0) = true;
        }
        if (!any1) fail(errc::improper_spec, "sub-determination keeps no aspect");
        if (!any0) fail(errc::improper_spec, "sub-determination drops no aspect");
    }

    std::vector<std::uint8_t> bits_;
};

/// Companion tuple of the retained aspects, original order preserved.
inline companion_tuple sub_companion_tuple(const companion_tuple& tau, const subdet_spec& zeta) {
    zeta.check_order(tau.order());
    std::vector<std::uint32_t> sizes;
    for (std::size_t i = 0; i < tau.order(); ++i)
        if (zeta.keeps(i)) sizes.push_back(tau.size(i));
    return companion_tuple(std::move(sizes));
}

/// Projects a composite vertex onto the retained aspects.
inline composite_tuple sub_determine_vertex(const composite_tuple& v, const subdet_spec& zeta) {
    zeta.check_order(v.size());
    composite_tuple out;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (zeta.keeps(i)) out.push_back(v[i]);
    return out;
}

/// The quotient map from composite vertices to their sub-determined classes,
/// stored column-wise: exactly one nonzero per column, at row class_of(j).
class subdet_matrix {
  public:
    subdet_matrix(std::size_t rows, std::vector<vertex_id> column_classes)
        : rows_(rows), class_of_(std::move(column_classes)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return class_of_.size(); }
    vertex_id class_of(vertex_id column) const { return class_of_.at(column); }
    const std::vector<vertex_id>& column_classes() const { return class_of_; }

    sparse_matrix to_sparse() const {
        std::vector<sparse_matrix::triplet> t;
        t.reserve(class_of_.size());
        for (std::size_t j = 0; j < class_of_.size(); ++j) t.push_back({class_of_[j], j, 1.0});
        return sparse_matrix::from_triplets(rows_, class_of_.size(), std::move(t));
    }

  private:
    std::size_t rows_;
    std::vector<vertex_id> class_of_;
};

/// Builds the quotient map by a single pass over vertex ids, maintaining the
/// mixed-radix digits incrementally; O(n + n_zeta) time, O(n) space.
inline subdet_matrix build_subdet_matrix(const companion_tuple& tau, const subdet_spec& zeta) {
    zeta.check_order(tau.order());
    const companion_tuple tau_z = sub_companion_tuple(tau, zeta);
    const std::size_t p = tau.order();
    const std::uint64_t n = tau.vertex_count();

    // Strides of each kept aspect inside the class index.
    std::vector<std::uint64_t> class_stride(p, 0);
    std::uint64_t acc = 1;
    for (std::size_t i = 0; i < p; ++i) {
        if (zeta.keeps(i)) {
            class_stride[i] = acc;
            acc *= tau.size(i);
        }
    }

    std::vector<vertex_id> class_of(n);
    composite_tuple digits(p, 0);
    std::uint64_t cls = 0;
    for (std::uint64_t j = 0; j < n; ++j) {
        class_of[j] = static_cast<vertex_id>(cls);
        for (std::size_t i = 0; i < p; ++i) {  // increment mixed-radix counter
            if (++digits[i] < tau.size(i)) {
                if (zeta.keeps(i)) cls += class_stride[i];
                break;
            }
            digits[i] = 0;
            if (zeta.keeps(i)) cls -= class_stride[i] * (tau.size(i) - 1);
        }
    }
    return subdet_matrix(static_cast<std::size_t>(tau_z.vertex_count()), std::move(class_of));
}

/// M J M^T: the aggregated adjacency with multiplicities and self-loops kept.
inline sparse_matrix aggregate_adjacency(const sparse_matrix& j, const subdet_matrix& m) {
    if (j.rows() != j.cols()) fail(errc::not_square, "adjacency matrix must be square");
    if (j.rows() != m.cols())
        fail(errc::dimension_mismatch, "adjacency is " + std::to_string(j.rows()) + "x" +
                                           std::to_string(j.cols()) + " but quotient map has " +
                                           std::to_string(m.cols()) + " columns");
    std::vector<sparse_matrix::triplet> t;
    t.reserve(j.nonzero_count());
    for (std::size_t r = 0; r < j.rows(); ++r) {
        auto cs = j.row_cols(r);
        auto vs = j.row_values(r);
        for (std::size_t k = 0; k < cs.size(); ++k)
            t.push_back({m.class_of(static_cast<vertex_id>(r)), m.class_of(static_cast<vertex_id>(cs[k])), vs[k]});
    }
    return sparse_matrix::from_triplets(m.rows(), m.rows(), std::move(t));
}

/// Zeroes the diagonal and collapses every off-diagonal nonzero to 1.
inline sparse_matrix simplify_adjacency(const sparse_matrix& jz) {
    if (jz.rows() != jz.cols()) fail(errc::not_square, "matrix must be square");
    std::vector<sparse_matrix::triplet> t;
    for (std::size_t r = 0; r < jz.rows(); ++r) {
        auto cs = jz.row_cols(r);
        for (std::size_t k = 0; k < cs.size(); ++k)
            if (cs[k] != r) t.push_back({r, cs[k], 1.0});
    }
    return sparse_matrix::from_triplets(jz.rows(), jz.cols(), std::move(t));
}

/// Edge-level aggregation: one arc per class pair with an inter-class MAG
/// edge. Equals simplify_adjacency(aggregate_adjacency(J, M)) entrywise.
inline composite_digraph aggregate_mag(const mag_graph& g, const subdet_spec& zeta) {
    zeta.check_order(g.order());
    const subdet_matrix m = build_subdet_matrix(g.tau(), zeta);
    std::vector<mag_edge> arcs;
    arcs.reserve(g.edge_count());
    for (const mag_edge& e : g.edges()) {
        const vertex_id a = m.class_of(e.from), b = m.class_of(e.to);
        if (a != b) arcs.push_back({a, b});
    }
    return composite_digraph(m.rows(), std::move(arcs));  // ctor dedups
}

}  // namespace mag
