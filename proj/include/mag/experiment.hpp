#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mag/centrality.hpp"
#include "mag/generate.hpp"
#include "mag/io.hpp"
#include "mag/ranking.hpp"
#include "mag/subdet.hpp"

namespace mag {

/// Everything needed to byte-reproduce one ensemble run: generator shape,
/// master seed, sub-determination, measure, and ranking-comparison knobs.
/// Text form is `key = value` lines, '#' comments allowed.
struct experiment_manifest {
    std::vector<std::uint32_t> aspect_sizes;
    std::uint64_t edge_count = 0;
    std::uint32_t instances = 1;
    std::uint64_t seed = 0;
    std::vector<std::uint8_t> zeta_bits;
    std::string measure = "betweenness";  // or "closeness"
    closeness_formula closeness = closeness_formula::harmonic;
    distance_mode distance = distance_mode::faithful;
    double rbo_weight = 0.85;
    double rbo_depth = 0.10;   // fraction of the compared length
    double truncate = 0.0;     // compare only this top fraction; 0 = full length
    bool reciprocal = false;
    unsigned threads = 0;

    subdet_spec zeta() const { return subdet_spec::from_indicator(zeta_bits); }

    static experiment_manifest parse(std::istream& in);
};

struct instance_result {
    std::uint32_t index = 0;
    std::uint64_t seed = 0;
    double rbo = 0, rbd = 0;
    bool failed = false;
    std::string message;
};

struct summary_stats {
    double minimum = 0, maximum = 0, mean = 0, stddev = 0;
};

struct experiment_report {
    std::vector<instance_result> instances;
    summary_stats rbo, rbd;
    double persistence = 0;
    std::size_t rank_depth = 0;
    std::size_t compared_length = 0;
    std::size_t failed = 0;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

inline summary_stats summarize(const std::vector<double>& xs) {
    summary_stats s;
    if (xs.empty()) return s;
    s.minimum = *std::min_element(xs.begin(), xs.end());
    s.maximum = *std::max_element(xs.begin(), xs.end());
    double acc = 0;
    for (double x : xs) acc += x;
    s.mean = acc / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double sq = 0;
        for (double x : xs) sq += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(sq / static_cast<double>(xs.size() - 1));
    }
    return s;
}

}  // namespace detail

inline experiment_manifest experiment_manifest::parse(std::istream& in) {
    experiment_manifest m;
    bool have_zeta = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t h = line.find('#');
        if (h != std::string::npos) line.erase(h);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail(errc::parse_error, "manifest line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        auto bad = [&](const std::string& what) {
            fail(errc::parse_error, "manifest line " + std::to_string(line_no) + ": " + what);
        };
        try {
            if (key == "aspects") {
                for (const auto& t : detail::split_csv_list(value))
                    m.aspect_sizes.push_back(static_cast<std::uint32_t>(std::stoul(t)));
            } else if (key == "edges") {
                m.edge_count = std::stoull(value);
            } else if (key == "instances") {
                m.instances = static_cast<std::uint32_t>(std::stoul(value));
            } else if (key == "seed") {
                m.seed = std::stoull(value);
            } else if (key == "zeta") {
                for (const auto& t : detail::split_csv_list(value))
                    m.zeta_bits.push_back(static_cast<std::uint8_t>(std::stoul(t)));
                have_zeta = true;
            } else if (key == "measure") {
                if (value != "betweenness" && value != "closeness") bad("measure must be betweenness|closeness");
                m.measure = value;
            } else if (key == "closeness") {
                if (value == "harmonic")
                    m.closeness = closeness_formula::harmonic;
                else if (value == "classic")
                    m.closeness = closeness_formula::classic;
                else
                    bad("closeness must be harmonic|classic");
            } else if (key == "distance") {
                if (value == "faithful")
                    m.distance = distance_mode::faithful;
                else if (value == "exact")
                    m.distance = distance_mode::exact;
                else
                    bad("distance must be faithful|exact");
            } else if (key == "rbo_weight") {
                m.rbo_weight = std::stod(value);
            } else if (key == "rbo_depth") {
                m.rbo_depth = std::stod(value);
            } else if (key == "truncate") {
                m.truncate = std::stod(value);
                if (m.truncate < 0.0 || m.truncate > 1.0) bad("truncate must lie in [0,1]");
            } else if (key == "reciprocal") {
                if (value != "true" && value != "false") bad("reciprocal must be true|false");
                m.reciprocal = value == "true";
            } else if (key == "threads") {
                m.threads = static_cast<unsigned>(std::stoul(value));
            } else {
                bad("unknown key '" + key + "'");
            }
        } catch (const error&) {
            throw;
        } catch (...) {
            bad("bad value '" + value + "' for key '" + key + "'");
        }
    }
    if (m.aspect_sizes.empty()) fail(errc::parse_error, "manifest missing 'aspects'");
    if (m.edge_count == 0) fail(errc::parse_error, "manifest missing 'edges'");
    if (!have_zeta) fail(errc::parse_error, "manifest missing 'zeta'");
    return m;
}

/// Scores of one instance under both pipelines: the naive one runs the plain
/// composite algorithm on the aggregated digraph, the sub-determined one
/// runs the class-seeded algorithm on the full MAG.
inline std::pair<std::vector<double>, std::vector<double>> run_both_modes(
    const mag_graph& g, const subdet_spec& zeta, const std::string& measure, closeness_formula formula,
    const centrality_options& opts) {
    std::vector<double> naive, subdet;
    const composite_digraph agg = aggregate_mag(g, zeta);
    if (measure == "betweenness") {
        naive = betweenness_composite(agg, opts);
        subdet = betweenness_subdet(g, zeta, opts);
    } else {
        naive = closeness_composite(agg, formula, opts);
        subdet = closeness_subdet(g, zeta, formula, opts);
    }
    return {std::move(naive), std::move(subdet)};
}

/// Runs the whole ensemble. Per-instance rows land in `rows_out` as CSV as
/// soon as they complete (failure rows carry a FAILED marker); the summary
/// table goes to `summary_out`. Instances are independent and run in
/// parallel; all derived seeds come from child_seed(seed, index).
inline experiment_report run_experiment(const experiment_manifest& m, std::ostream* rows_out = nullptr,
                                        std::ostream* summary_out = nullptr) {
    const subdet_spec zeta = m.zeta();
    experiment_report report;
    report.instances.resize(m.instances);

    companion_tuple tau(m.aspect_sizes);
    const std::size_t nz = static_cast<std::size_t>(sub_companion_tuple(tau, zeta).vertex_count());
    report.compared_length =
        m.truncate > 0.0
            ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(m.truncate * static_cast<double>(nz))))
            : nz;
    report.rank_depth = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(m.rbo_depth * static_cast<double>(report.compared_length))));
    report.persistence = solve_persistence(m.rbo_weight, report.rank_depth);

    const unsigned nt = detail::resolve_threads(m.threads, m.instances);
    // One instance at a time per worker; centrality itself runs single-threaded
    // inside so that ensembles scale across instances.
    centrality_options opts;
    opts.distance = m.distance;
    opts.threads = 1;

    detail::parallel_blocks(m.instances, nt, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            instance_result& r = report.instances[i];
            r.index = static_cast<std::uint32_t>(i);
            r.seed = child_seed(m.seed, i);
            try {
                gen_spec gs;
                gs.aspect_sizes = m.aspect_sizes;
                gs.edge_count = m.edge_count;
                gs.seed = r.seed;
                gs.reciprocal = m.reciprocal;
                const mag_graph g = random_mag(gs);
                auto [naive, subdet] = run_both_modes(g, zeta, m.measure, m.closeness, opts);
                const ranking ra = to_ranking(naive), rb = to_ranking(subdet);
                std::optional<std::size_t> cut;
                if (report.compared_length < ra.size()) cut = report.compared_length;
                r.rbo = rbo(ra, rb, report.persistence, tie_policy::identifier, cut);
                r.rbd = 1.0 - r.rbo;
            } catch (const std::exception& ex) {
                r.failed = true;
                r.message = ex.what();
            }
        }
    });

    // Rows go out in instance order so a manifest always produces the same CSV.
    if (rows_out) {
        *rows_out << "instance,seed,rbo,rbd\n";
        for (const auto& r : report.instances) {
            if (r.failed)
                *rows_out << r.index << ',' << r.seed << ",FAILED," << r.message << '\n';
            else {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.12g,%.12g", r.rbo, r.rbd);
                *rows_out << r.index << ',' << r.seed << ',' << buf << '\n';
            }
        }
    }

    std::vector<double> rbos, rbds;
    for (const auto& r : report.instances) {
        if (r.failed) {
            ++report.failed;
            continue;
        }
        rbos.push_back(r.rbo);
        rbds.push_back(r.rbd);
    }
    report.rbo = detail::summarize(rbos);
    report.rbd = detail::summarize(rbds);

    if (summary_out) {
        char buf[160];
        *summary_out << "stat,rbo,rbd\n";
        std::snprintf(buf, sizeof buf, "minimum,%.3f,%.3f\n", report.rbo.minimum, report.rbd.minimum);
        *summary_out << buf;
        std::snprintf(buf, sizeof buf, "maximum,%.3f,%.3f\n", report.rbo.maximum, report.rbd.maximum);
        *summary_out << buf;
        std::snprintf(buf, sizeof buf, "mean,%.3f,%.3f\n", report.rbo.mean, report.rbd.mean);
        *summary_out << buf;
        std::snprintf(buf, sizeof buf, "stddev,%.3f,%.3f\n", report.rbo.stddev, report.rbd.stddev);
        *summary_out << buf;
        if (report.failed) *summary_out << "failed," << report.failed << ",\n";
    }
    return report;
}

}  // namespace mag
