#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mag/core.hpp"
#include "mag/subdet.hpp"

namespace mag {

// MAG text format
//
//   %mag 1
//   %aspect <name> <size> [label...]     (one line per aspect, in order)
//   %reciprocal                          (optional: each edge line also adds
//                                         the reversed arc)
//   %edges <m>
//   <2p whitespace-separated tokens per line, source tuple then target tuple>
//
// '#' starts a comment; blank lines are ignored. Tokens resolve by label
// first, else as 1-based element indices. The declared m counts edge lines,
// before any reciprocal doubling.

namespace detail {

struct line_reader {
    std::istream& in;
    std::size_t line_no = 0;

    bool next(std::string& out) {
        while (std::getline(in, out)) {
            ++line_no;
            const std::size_t h = out.find('#');
            if (h != std::string::npos) out.erase(h);
            if (out.find_first_not_of(" \t\r\n") != std::string::npos) return true;
        }
        return false;
    }

    [[noreturn]] void error(const std::string& msg) const {
        fail(errc::parse_error, "line " + std::to_string(line_no) + ": " + msg);
    }
};

inline std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

}  // namespace detail

inline mag_graph parse_mag_file(std::istream& in, bool dedup = false) {
    detail::line_reader rd{in};
    std::string line;
    if (!rd.next(line)) fail(errc::parse_error, "empty input");
    auto tok = detail::split_tokens(line);
    if (tok.size() != 2 || tok[0] != "%mag") rd.error("expected '%mag <version>' header");
    if (tok[1] != "1") rd.error("unsupported format version " + tok[1]);

    std::vector<aspect> aspects;
    bool reciprocal = false;
    std::size_t declared_edges = 0;
    for (;;) {
        if (!rd.next(line)) rd.error("missing '%edges' section");
        tok = detail::split_tokens(line);
        if (tok[0] == "%aspect") {
            if (tok.size() < 3) rd.error("'%aspect' needs a name and a size");
            aspect a;
            a.name = tok[1];
            try {
                a.size = static_cast<std::uint32_t>(std::stoul(tok[2]));
            } catch (...) {
                rd.error("bad aspect size '" + tok[2] + "'");
            }
            a.labels.assign(tok.begin() + 3, tok.end());
            if (!a.labels.empty() && a.labels.size() != a.size)
                rd.error("aspect " + a.name + " declares " + std::to_string(a.size) + " elements but lists " +
                         std::to_string(a.labels.size()) + " labels");
            aspects.push_back(std::move(a));
        } else if (tok[0] == "%reciprocal") {
            reciprocal = true;
        } else if (tok[0] == "%edges") {
            if (tok.size() != 2) rd.error("'%edges' needs a count");
            try {
                declared_edges = std::stoul(tok[1]);
            } catch (...) {
                rd.error("bad edge count '" + tok[1] + "'");
            }
            break;
        } else {
            rd.error("unknown directive '" + tok[0] + "'");
        }
    }
    if (aspects.empty()) fail(errc::empty_aspect, "file declares no aspects");
    const std::size_t p = aspects.size();

    std::vector<std::vector<std::string>> edge_tokens;
    edge_tokens.reserve(declared_edges * (reciprocal ? 2 : 1));
    for (std::size_t i = 0; i < declared_edges; ++i) {
        if (!rd.next(line))
            fail(errc::parse_error, "header declares " + std::to_string(declared_edges) +
                                        " edges but the body has " + std::to_string(i));
        tok = detail::split_tokens(line);
        if (tok.size() != 2 * p)
            rd.error("edge has " + std::to_string(tok.size()) + " tokens, expected " + std::to_string(2 * p));
        if (reciprocal) {
            std::vector<std::string> rev(tok.begin() + static_cast<std::ptrdiff_t>(p), tok.end());
            rev.insert(rev.end(), tok.begin(), tok.begin() + static_cast<std::ptrdiff_t>(p));
            edge_tokens.push_back(tok);
            if (rev != tok) edge_tokens.push_back(std::move(rev));
        } else {
            edge_tokens.push_back(std::move(tok));
        }
    }
    if (rd.next(line))
        rd.error("body has more edge lines than the declared " + std::to_string(declared_edges));

    return build_mag(std::move(aspects), edge_tokens, dedup);
}

inline mag_graph load_mag_file(const std::filesystem::path& path, bool dedup = false) {
    std::ifstream in(path);
    if (!in) fail(errc::io_error, "cannot open " + path.string());
    return parse_mag_file(in, dedup);
}

inline void write_mag_file(const mag_graph& g, std::ostream& out) {
    out << "%mag 1\n";
    for (const aspect& a : g.aspects()) {
        out << "%aspect " << a.name << ' ' << a.size;
        for (const auto& l : a.labels) out << ' ' << l;
        out << '\n';
    }
    out << "%edges " << g.edge_count() << '\n';
    const companion_tuple& tau = g.tau();
    for (const mag_edge& e : g.edges()) {
        const composite_tuple a = tau.decode(e.from), b = tau.decode(e.to);
        for (std::size_t i = 0; i < a.size(); ++i) out << (i ? " " : "") << g.aspects()[i].label(a[i]);
        for (std::size_t i = 0; i < b.size(); ++i) out << ' ' << g.aspects()[i].label(b[i]);
        out << '\n';
    }
    if (!out) fail(errc::io_error, "write failed");
}

inline void save_mag_file(const mag_graph& g, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) fail(errc::io_error, "cannot open " + path.string() + " for writing");
    write_mag_file(g, out);
}

/// Renders one vertex of a score domain: bare label for one aspect,
/// `(a|b|...)` otherwise.
inline std::string render_vertex(const std::vector<aspect>& domain, const companion_tuple& tau, vertex_id v) {
    const composite_tuple t = tau.decode(v);
    if (domain.size() == 1) return domain[0].label(t[0]);
    std::string out = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += '|';
        out += domain[i].label(t[i]);
    }
    out += ')';
    return out;
}

/// CSV emitter: header `vertex,score`, rows in identifier order, scores with
/// 12 significant digits.
inline void write_scores(const std::vector<double>& scores, const std::vector<aspect>& domain,
                         std::ostream& out) {
    std::vector<std::uint32_t> sizes;
    sizes.reserve(domain.size());
    for (const aspect& a : domain) sizes.push_back(a.size);
    const companion_tuple tau(sizes);
    if (tau.vertex_count() != scores.size())
        fail(errc::dimension_mismatch, "score vector does not match its domain");
    out << "vertex,score\n";
    char buf[64];
    for (std::size_t v = 0; v < scores.size(); ++v) {
        std::snprintf(buf, sizeof buf, "%.12g", scores[v]);
        out << render_vertex(domain, tau, static_cast<vertex_id>(v)) << ',' << buf << '\n';
    }
    if (!out) fail(errc::io_error, "write failed");
}

/// Retained-aspect descriptors for a sub-determined score domain.
inline std::vector<aspect> subdet_domain(const mag_graph& g, const subdet_spec& zeta) {
    zeta.check_order(g.order());
    std::vector<aspect> out;
    for (std::size_t i = 0; i < g.order(); ++i)
        if (zeta.keeps(i)) out.push_back(g.aspects()[i]);
    return out;
}

struct scored_row {
    std::string vertex;
    double score;
};

/// Reads a `vertex,score` CSV produced by write_scores (or compatible).
inline std::vector<scored_row> read_scores(std::istream& in) {
    std::vector<scored_row> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        if (line_no == 1 && line.rfind("vertex,", 0) == 0) continue;
        const std::size_t comma = line.rfind(',');
        if (comma == std::string::npos)
            fail(errc::parse_error, "line " + std::to_string(line_no) + ": expected 'vertex,score'");
        scored_row r;
        r.vertex = line.substr(0, comma);
        try {
            r.score = std::stod(line.substr(comma + 1));
        } catch (...) {
            fail(errc::parse_error, "line " + std::to_string(line_no) + ": bad score value");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace mag
