#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mag/error.hpp"

namespace mag {

/// Encoded composite vertex, 0-based. File and CLI surfaces are 1-based.
using vertex_id = std::uint32_t;
/// Element position within one aspect, 0-based.
using element_id = std::uint32_t;
/// One element per aspect; the tuple form of a composite vertex.
using composite_tuple = std::vector<element_id>;

constexpr vertex_id no_vertex = std::numeric_limits<vertex_id>::max();

/// One aspect: a named, ordered, finite element set. When `labels` is empty
/// the elements are addressed by 1-based index only.
struct aspect {
    std::string name;
    std::uint32_t size = 0;
    std::vector<std::string> labels;

    std::string label(element_id e) const {
        if (e >= size) fail(errc::out_of_range, "element index " + std::to_string(e) + " in aspect " + name);
        if (labels.empty()) return std::to_string(e + 1);
        return labels[e];
    }

    /// Resolves a token to an element: exact label match first, then a 1-based
    /// numeric index for label-free aspects or when no label matches.
    std::optional<element_id> find(const std::string& token) const {
        if (!labels.empty()) {
            auto it = std::find(labels.begin(), labels.end(), token);
            if (it != labels.end()) return static_cast<element_id>(it - labels.begin());
        }
        if (!token.empty() && token.find_first_not_of("0123456789") == std::string::npos) {
            unsigned long long v = 0;
            try {
                v = std::stoull(token);
            } catch (...) {
                return std::nullopt;
            }
            if (v >= 1 && v <= size) return static_cast<element_id>(v - 1);
        }
        return std::nullopt;
    }
};

namespace detail {

inline bool has_space(const std::string& s) {
    return s.find_first_of(" \t\r\n") != std::string::npos;
}

inline void validate_aspects(const std::vector<aspect>& aspects) {
    if (aspects.empty()) fail(errc::empty_aspect, "a graph needs at least one aspect");
    for (const auto& a : aspects) {
        if (a.size == 0) fail(errc::empty_aspect, "aspect " + a.name + " has no elements");
        if (a.name.empty() || has_space(a.name))
            fail(errc::parse_error, "aspect name must be non-empty and whitespace-free");
        if (!a.labels.empty()) {
            if (a.labels.size() != a.size)
                fail(errc::arity_mismatch, "aspect " + a.name + " declares " + std::to_string(a.size) +
                                               " elements but " + std::to_string(a.labels.size()) + " labels");
            std::unordered_set<std::string> seen;
            for (const auto& l : a.labels) {
                if (l.empty() || has_space(l))
                    fail(errc::parse_error, "label in aspect " + a.name + " must be non-empty and whitespace-free");
                if (!seen.insert(l).second)
                    fail(errc::unknown_label, "duplicate label '" + l + "' in aspect " + a.name);
            }
        }
    }
}

}  // namespace detail

/// Per-aspect cardinalities. Owns the mixed-radix codec between composite
/// tuples and flat vertex ids. Convention: the first aspect is the
/// least-significant digit (varies fastest).
class companion_tuple {
  public:
    companion_tuple() = default;

    explicit companion_tuple(std::vector<std::uint32_t> sizes) : sizes_(std::move(sizes)) {
        if (sizes_.empty()) fail(errc::empty_aspect, "companion tuple needs at least one aspect");
        strides_.resize(sizes_.size());
        std::uint64_t acc = 1;
        for (std::size_t i = 0; i < sizes_.size(); ++i) {
            if (sizes_[i] == 0) fail(errc::empty_aspect, "aspect cardinality zero");
            strides_[i] = acc;
            if (acc > std::numeric_limits<std::uint64_t>::max() / sizes_[i])
                fail(errc::too_large, "composite vertex space overflows");
            acc *= sizes_[i];
        }
        if (acc > std::numeric_limits<vertex_id>::max())
            fail(errc::too_large, "composite vertex space exceeds 2^32-1");
        count_ = acc;
    }

    std::size_t order() const { return sizes_.size(); }
    std::uint32_t size(std::size_t i) const { return sizes_.at(i); }
    const std::vector<std::uint32_t>& sizes() const { return sizes_; }
    std::uint64_t vertex_count() const { return count_; }

    vertex_id encode(const composite_tuple& v) const {
        if (v.size() != sizes_.size())
            fail(errc::arity_mismatch, "tuple has " + std::to_string(v.size()) + " elements, expected " +
                                           std::to_string(sizes_.size()));
        std::uint64_t idx = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] >= sizes_[i])
                fail(errc::out_of_range, "element " + std::to_string(v[i]) + " out of range for aspect " +
                                             std::to_string(i + 1));
            idx += static_cast<std::uint64_t>(v[i]) * strides_[i];
        }
        return static_cast<vertex_id>(idx);
    }

    composite_tuple decode(vertex_id idx) const {
        if (idx >= count_) fail(errc::out_of_range, "vertex id " + std::to_string(idx) + " out of range");
        composite_tuple v(sizes_.size());
        std::uint64_t r = idx;
        for (std::size_t i = 0; i < sizes_.size(); ++i) {
            v[i] = static_cast<element_id>(r % sizes_[i]);
            r /= sizes_[i];
        }
        return v;
    }

    /// Digit extraction without materializing the full tuple.
    element_id project(vertex_id idx, std::size_t aspect_pos) const {
        if (idx >= count_) fail(errc::out_of_range, "vertex id out of range");
        if (aspect_pos >= sizes_.size()) fail(errc::out_of_range, "aspect position out of range");
        return static_cast<element_id>((idx / strides_[aspect_pos]) % sizes_[aspect_pos]);
    }

    bool operator==(const companion_tuple& o) const { return sizes_ == o.sizes_; }

  private:
    std::vector<std::uint32_t> sizes_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t count_ = 0;
};

inline vertex_id encode_composite(const composite_tuple& v, const companion_tuple& tau) { return tau.encode(v); }
inline composite_tuple decode_composite(vertex_id idx, const companion_tuple& tau) { return tau.decode(idx); }

inline element_id project_aspect(const composite_tuple& v, std::size_t aspect_pos) {
    if (aspect_pos >= v.size()) fail(errc::out_of_range, "aspect position out of range");
    return v[aspect_pos];
}

struct mag_edge {
    vertex_id from = 0;
    vertex_id to = 0;
    friend bool operator==(const mag_edge&, const mag_edge&) = default;
};

/// A MultiAspect Graph: an ordered aspect list plus a set of directed edges
/// between composite vertices. Immutable after construction.
class mag_graph {
  public:
    /// Edges given as length-2p tuples of 0-based element ids
    /// (source tuple then target tuple). Duplicates are an error unless
    /// `dedup` merges them.
    mag_graph(std::vector<aspect> aspects, const std::vector<std::vector<element_id>>& edge_tuples,
              bool dedup = false)
        : aspects_(std::move(aspects)) {
        detail::validate_aspects(aspects_);
        std::vector<std::uint32_t> sizes;
        sizes.reserve(aspects_.size());
        for (const auto& a : aspects_) sizes.push_back(a.size);
        tau_ = companion_tuple(std::move(sizes));

        const std::size_t p = aspects_.size();
        edges_.reserve(edge_tuples.size());
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(edge_tuples.size() * 2);
        composite_tuple a(p), b(p);
        for (const auto& t : edge_tuples) {
            if (t.size() != 2 * p)
                fail(errc::arity_mismatch, "edge tuple has " + std::to_string(t.size()) +
                                               " elements, expected " + std::to_string(2 * p));
            std::copy(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(p), a.begin());
            std::copy(t.begin() + static_cast<std::ptrdiff_t>(p), t.end(), b.begin());
            add_edge(tau_.encode(a), tau_.encode(b), dedup, seen);
        }
    }

    /// Edges pre-encoded as composite vertex id pairs.
    mag_graph(std::vector<aspect> aspects, const std::vector<mag_edge>& edges, bool dedup = false)
        : aspects_(std::move(aspects)) {
        detail::validate_aspects(aspects_);
        std::vector<std::uint32_t> sizes;
        sizes.reserve(aspects_.size());
        for (const auto& a : aspects_) sizes.push_back(a.size);
        tau_ = companion_tuple(std::move(sizes));

        edges_.reserve(edges.size());
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(edges.size() * 2);
        for (const auto& e : edges) {
            if (e.from >= tau_.vertex_count() || e.to >= tau_.vertex_count())
                fail(errc::out_of_range, "edge endpoint out of range");
            add_edge(e.from, e.to, dedup, seen);
        }
    }

    std::size_t order() const { return aspects_.size(); }
    const std::vector<aspect>& aspects() const { return aspects_; }
    const companion_tuple& tau() const { return tau_; }
    std::uint64_t vertex_count() const { return tau_.vertex_count(); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<mag_edge>& edges() const { return edges_; }

    bool has_edge(vertex_id from, vertex_id to) const {
        return edge_keys_.count(key(from, to)) != 0;
    }

    /// Renders a composite vertex with aspect labels: `(a|b|...)`, or the bare
    /// label for order-1 graphs.
    std::string vertex_name(vertex_id v) const {
        composite_tuple t = tau_.decode(v);
        if (aspects_.size() == 1) return aspects_[0].label(t[0]);
        std::string out = "(";
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i) out += '|';
            out += aspects_[i].label(t[i]);
        }
        out += ')';
        return out;
    }

  private:
    std::uint64_t key(vertex_id a, vertex_id b) const {
        return static_cast<std::uint64_t>(a) * tau_.vertex_count() + b;
    }

    void add_edge(vertex_id from, vertex_id to, bool dedup, std::unordered_set<std::uint64_t>& seen) {
        if (!seen.insert(key(from, to)).second) {
            if (dedup) return;
            fail(errc::duplicate_edge, "duplicate edge " + std::to_string(from + 1) + " -> " +
                                           std::to_string(to + 1));
        }
        edges_.push_back({from, to});
        edge_keys_.insert(key(from, to));
    }

    std::vector<aspect> aspects_;
    companion_tuple tau_;
    std::vector<mag_edge> edges_;
    std::unordered_set<std::uint64_t> edge_keys_;
};

/// Builds a MAG from label token tuples (the file-format edge form).
inline mag_graph build_mag(std::vector<aspect> aspects, const std::vector<std::vector<std::string>>& edge_tokens,
                           bool dedup = false) {
    detail::validate_aspects(aspects);
    const std::size_t p = aspects.size();
    std::vector<std::vector<element_id>> tuples;
    tuples.reserve(edge_tokens.size());
    for (const auto& tok : edge_tokens) {
        if (tok.size() != 2 * p)
            fail(errc::arity_mismatch, "edge has " + std::to_string(tok.size()) + " tokens, expected " +
                                           std::to_string(2 * p));
        std::vector<element_id> t(2 * p);
        for (std::size_t i = 0; i < 2 * p; ++i) {
            const aspect& a = aspects[i % p];
            auto e = a.find(tok[i]);
            if (!e) fail(errc::unknown_label, "token '" + tok[i] + "' not in aspect " + a.name);
            t[i] = *e;
        }
        tuples.push_back(std::move(t));
    }
    return mag_graph(std::move(aspects), tuples, dedup);
}

/// The directed graph on composite vertices, CSR form. Vertex i corresponds
/// to the composite tuple decode(i); arcs carry no attributes.
class composite_digraph {
  public:
    composite_digraph() = default;

    composite_digraph(std::uint64_t n, std::vector<mag_edge> arcs) {
        if (n > std::numeric_limits<vertex_id>::max())
            fail(errc::too_large, "vertex count exceeds 2^32-1");
        n_ = static_cast<std::size_t>(n);
        std::sort(arcs.begin(), arcs.end(), [](const mag_edge& x, const mag_edge& y) {
            return x.from != y.from ? x.from < y.from : x.to < y.to;
        });
        offsets_.assign(n_ + 1, 0);
        targets_.reserve(arcs.size());
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            if (arcs[i].from >= n_ || arcs[i].to >= n_) fail(errc::out_of_range, "arc endpoint out of range");
            if (i > 0 && arcs[i] == arcs[i - 1]) continue;  // arc set, not multiset
            ++offsets_[arcs[i].from + 1];
            targets_.push_back(arcs[i].to);
        }
        for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] += offsets_[v];
    }

    std::size_t vertex_count() const { return n_; }
    std::size_t arc_count() const { return targets_.size(); }

    std::span<const vertex_id> successors(vertex_id v) const {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }

    bool has_arc(vertex_id from, vertex_id to) const {
        auto s = successors(from);
        return std::binary_search(s.begin(), s.end(), to);
    }

    composite_digraph reversed() const {
        std::vector<mag_edge> arcs;
        arcs.reserve(targets_.size());
        for (vertex_id v = 0; v < n_; ++v)
            for (vertex_id w : successors(v)) arcs.push_back({w, v});
        return composite_digraph(n_, std::move(arcs));
    }

  private:
    std::size_t n_ = 0;
    std::vector<std::size_t> offsets_ = {0};
    std::vector<vertex_id> targets_;
};

/// The isomorphic digraph view: arc (encode(a), encode(b)) per MAG edge.
inline composite_digraph to_digraph(const mag_graph& g) {
    return composite_digraph(g.vertex_count(), g.edges());
}

}  // namespace mag
