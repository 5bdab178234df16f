// mag: shortest-path centralities on MultiAspect Graphs, with and without
// the spurious paths that naive aggregation introduces.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mag/mag.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_data = 2;
constexpr int exit_internal = 3;

mag::subdet_spec parse_zeta(const std::string& text, std::size_t p) {
    std::vector<std::uint8_t> bits;
    std::string cur;
    auto flush = [&] {
        if (cur == "0")
            bits.push_back(0);
        else if (cur == "1")
            bits.push_back(1);
        else
            mag::fail(mag::errc::parse_error, "zeta entries must be 0 or 1, got '" + cur + "'");
        cur.clear();
    };
    for (char c : text) {
        if (c == ',')
            flush();
        else if (!std::isspace(static_cast<unsigned char>(c)))
            cur += c;
    }
    flush();
    auto spec = mag::subdet_spec::from_indicator(bits);
    spec.check_order(p);
    return spec;
}

std::vector<std::uint32_t> parse_sizes(const std::string& text) {
    std::vector<std::uint32_t> out;
    std::string cur;
    for (char c : text + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(static_cast<std::uint32_t>(std::stoul(cur)));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

void emit_scores(const std::vector<double>& scores, const std::vector<mag::aspect>& domain,
                 const std::string& output) {
    if (output.empty()) {
        mag::write_scores(scores, domain, std::cout);
    } else {
        std::ofstream out(output);
        if (!out) mag::fail(mag::errc::io_error, "cannot open " + output + " for writing");
        mag::write_scores(scores, domain, out);
    }
}

struct csv_ranking {
    mag::ranking rank;
    std::vector<std::string> names;  // identifier -> vertex string
};

csv_ranking ranking_from_csv(const std::string& path,
                             const std::unordered_map<std::string, std::uint32_t>* universe) {
    std::ifstream in(path);
    if (!in) mag::fail(mag::errc::io_error, "cannot open " + path);
    const auto rows = mag::read_scores(in);
    if (rows.empty()) mag::fail(mag::errc::parse_error, path + " holds no score rows");
    csv_ranking out;
    std::vector<double> scores(rows.size());
    out.names.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::uint32_t id;
        if (universe) {
            auto it = universe->find(rows[i].vertex);
            if (it == universe->end())
                mag::fail(mag::errc::universe_mismatch, "vertex " + rows[i].vertex + " missing from first file");
            id = it->second;
        } else {
            id = static_cast<std::uint32_t>(i);
        }
        if (id >= out.names.size() || !out.names[id].empty())
            mag::fail(mag::errc::parse_error, "duplicate vertex " + rows[i].vertex + " in " + path);
        out.names[id] = rows[i].vertex;
        scores[id] = rows[i].score;
    }
    if (universe && rows.size() != universe->size())
        mag::fail(mag::errc::universe_mismatch, "files rank different vertex sets");
    out.rank = mag::to_ranking(scores);
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"shortest-path centralities on MultiAspect Graphs"};
    app.require_subcommand(1);

    std::string input, output, zeta_text, manifest_path;
    bool dedup = false;

    auto* info = app.add_subcommand("info", "print the shape of a MAG file");
    info->add_option("--input", input, "MAG file")->required();
    info->add_flag("--dedup", dedup, "merge duplicate edges instead of failing");

    auto* validate = app.add_subcommand("validate", "parse and check a MAG file");
    validate->add_option("--input", input, "MAG file")->required();
    validate->add_flag("--dedup", dedup, "merge duplicate edges instead of failing");

    std::string measure = "betweenness", mode = "composite", distance = "faithful";
    std::string closeness_kind = "harmonic", sigma = "exact";
    unsigned threads = 0;
    auto* centrality = app.add_subcommand("centrality", "compute a centrality vector");
    centrality->add_option("--input", input, "MAG file")->required();
    centrality->add_option("--output", output, "scores CSV (default: stdout)");
    centrality->add_option("--measure", measure, "betweenness|closeness")
        ->check(CLI::IsMember({"betweenness", "closeness"}));
    centrality->add_option("--mode", mode, "composite|subdet|naive-aggregate")
        ->check(CLI::IsMember({"composite", "subdet", "naive-aggregate"}));
    centrality->add_option("--zeta", zeta_text, "sub-determination, e.g. 1,0");
    centrality->add_option("--distance", distance, "faithful|exact class distances")
        ->check(CLI::IsMember({"faithful", "exact"}));
    centrality->add_option("--closeness", closeness_kind, "harmonic|classic")
        ->check(CLI::IsMember({"harmonic", "classic"}));
    centrality->add_option("--sigma", sigma, "exact|fast path counters")
        ->check(CLI::IsMember({"exact", "fast"}));
    centrality->add_option("--threads", threads, "worker threads (0 = hardware)");
    centrality->add_flag("--dedup", dedup, "merge duplicate edges instead of failing");

    auto* aggregate = app.add_subcommand("aggregate", "write the sub-determined (aggregated) MAG");
    aggregate->add_option("--input", input, "MAG file")->required();
    aggregate->add_option("--zeta", zeta_text, "sub-determination, e.g. 1,0")->required();
    aggregate->add_option("--output", output, "output MAG file (default: stdout)");
    aggregate->add_flag("--dedup", dedup, "merge duplicate edges instead of failing");

    std::string aspects_text;
    std::uint64_t edges = 0, seed = 0;
    bool reciprocal = false;
    auto* generate = app.add_subcommand("generate", "sample a uniform random MAG with exactly m edges");
    generate->add_option("--aspects", aspects_text, "aspect sizes, e.g. 1000,10")->required();
    generate->add_option("--edges", edges, "edge count")->required();
    generate->add_option("--seed", seed, "RNG seed");
    generate->add_flag("--reciprocal", reciprocal, "sample undirected contacts as arc pairs");
    generate->add_option("--output", output, "output MAG file (default: stdout)");

    std::vector<std::string> csv_files;
    double rbo_weight = 0.85, rbo_depth = 0.10;
    std::string ties = "identifier";
    std::size_t truncate_value = 0;
    auto* compare = app.add_subcommand("compare", "rank-biased overlap of two score files");
    compare->add_option("files", csv_files, "two score CSV files")->expected(2);
    compare->add_option("--rbo-weight", rbo_weight, "weight carried by the top fraction");
    compare->add_option("--rbo-depth", rbo_depth, "top fraction of the ranking, e.g. 0.10");
    compare->add_option("--ties", ties, "identifier|average-overlap")
        ->check(CLI::IsMember({"identifier", "average-overlap"}));
    auto* trunc_opt = compare->add_option("--truncate", truncate_value, "compare only the top K rows");

    std::string check = "reachability", arithmetic = "boolean";
    auto* oracle = app.add_subcommand("oracle", "matrix-route reachability patterns for one zeta");
    oracle->add_option("--input", input, "MAG file")->required();
    oracle->add_option("--zeta", zeta_text, "sub-determination, e.g. 1,0")->required();
    oracle->add_option("--check", check, "reachability")->check(CLI::IsMember({"reachability"}));
    oracle->add_option("--arithmetic", arithmetic, "boolean|real")
        ->check(CLI::IsMember({"boolean", "real"}));
    oracle->add_flag("--dedup", dedup, "merge duplicate edges instead of failing");

    std::string rows_path, summary_path;
    auto* experiment = app.add_subcommand("experiment", "run an ensemble manifest");
    experiment->add_option("--manifest", manifest_path, "manifest file")->required();
    experiment->add_option("--rows", rows_path, "per-instance CSV (default: stdout)");
    experiment->add_option("--summary", summary_path, "summary CSV (default: stdout)");
    experiment->add_option("--threads", threads, "override manifest threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*info) {
            const mag::mag_graph g = mag::load_mag_file(input, dedup);
            std::printf("aspects: %zu\n", g.order());
            for (const auto& a : g.aspects())
                std::printf("  %s: %u element%s\n", a.name.c_str(), a.size, a.size == 1 ? "" : "s");
            std::printf("composite vertices: %llu\n", static_cast<unsigned long long>(g.vertex_count()));
            std::printf("edges: %zu\n", g.edge_count());
        } else if (*validate) {
            mag::load_mag_file(input, dedup);
            std::printf("ok\n");
        } else if (*centrality) {
            const mag::mag_graph g = mag::load_mag_file(input, dedup);
            mag::centrality_options opts;
            opts.distance = distance == "exact" ? mag::distance_mode::exact : mag::distance_mode::faithful;
            opts.sigma = sigma == "fast" ? mag::sigma_mode::fast : mag::sigma_mode::exact;
            opts.threads = threads;
            const mag::closeness_formula formula = closeness_kind == "classic"
                                                       ? mag::closeness_formula::classic
                                                       : mag::closeness_formula::harmonic;
            std::vector<double> scores;
            std::vector<mag::aspect> domain;
            if (mode == "composite") {
                const mag::composite_digraph d = mag::to_digraph(g);
                scores = measure == "betweenness" ? mag::betweenness_composite(d, opts)
                                                  : mag::closeness_composite(d, formula, opts);
                domain = g.aspects();
            } else {
                if (zeta_text.empty())
                    mag::fail(mag::errc::improper_spec, "--zeta is required for mode " + mode);
                const mag::subdet_spec zeta = parse_zeta(zeta_text, g.order());
                domain = mag::subdet_domain(g, zeta);
                if (mode == "subdet") {
                    scores = measure == "betweenness" ? mag::betweenness_subdet(g, zeta, opts)
                                                      : mag::closeness_subdet(g, zeta, formula, opts);
                } else {  // naive-aggregate
                    const mag::composite_digraph agg = mag::aggregate_mag(g, zeta);
                    scores = measure == "betweenness" ? mag::betweenness_composite(agg, opts)
                                                      : mag::closeness_composite(agg, formula, opts);
                }
            }
            emit_scores(scores, domain, output);
        } else if (*aggregate) {
            const mag::mag_graph g = mag::load_mag_file(input, dedup);
            const mag::subdet_spec zeta = parse_zeta(zeta_text, g.order());
            const mag::composite_digraph agg = mag::aggregate_mag(g, zeta);
            std::vector<mag::mag_edge> arcs;
            for (mag::vertex_id v = 0; v < agg.vertex_count(); ++v)
                for (mag::vertex_id w : agg.successors(v)) arcs.push_back({v, w});
            const mag::mag_graph out_graph(mag::subdet_domain(g, zeta), arcs);
            if (output.empty()) {
                mag::write_mag_file(out_graph, std::cout);
            } else {
                mag::save_mag_file(out_graph, output);
            }
        } else if (*generate) {
            mag::gen_spec spec;
            spec.aspect_sizes = parse_sizes(aspects_text);
            spec.edge_count = edges;
            spec.seed = seed;
            spec.reciprocal = reciprocal;
            const mag::mag_graph g = mag::random_mag(spec);
            if (output.empty()) {
                mag::write_mag_file(g, std::cout);
            } else {
                mag::save_mag_file(g, output);
            }
        } else if (*compare) {
            const csv_ranking a = ranking_from_csv(csv_files[0], nullptr);
            std::unordered_map<std::string, std::uint32_t> universe;
            for (std::uint32_t i = 0; i < a.names.size(); ++i) universe[a.names[i]] = i;
            const csv_ranking b = ranking_from_csv(csv_files[1], &universe);
            std::optional<std::size_t> truncate;
            if (*trunc_opt) truncate = truncate_value;
            const std::size_t len = truncate ? std::min(*truncate, a.rank.size()) : a.rank.size();
            const std::size_t depth =
                std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(rbo_depth * static_cast<double>(len))));
            const double p = mag::solve_persistence(rbo_weight, depth);
            const mag::tie_policy policy =
                ties == "average-overlap" ? mag::tie_policy::average_overlap : mag::tie_policy::identifier;
            const double overlap = mag::rbo(a.rank, b.rank, p, policy, truncate);
            std::printf("length,%zu\n", len);
            std::printf("depth,%zu\n", depth);
            std::printf("persistence,%.12g\n", p);
            std::printf("rbo,%.12g\n", overlap);
            std::printf("rbd,%.12g\n", 1.0 - overlap);
            std::printf("rank,%s,%s\n", csv_files[0].c_str(), csv_files[1].c_str());
            for (std::size_t i = 0; i < depth && i < len; ++i)
                std::printf("%zu,%s,%s\n", i + 1, a.names[a.rank.items[i]].c_str(),
                            b.names[b.rank.items[i]].c_str());
        } else if (*oracle) {
            const mag::mag_graph g = mag::load_mag_file(input, dedup);
            const mag::subdet_spec zeta = parse_zeta(zeta_text, g.order());
            const mag::subdet_matrix m = mag::build_subdet_matrix(g.tau(), zeta);
            const mag::sparse_matrix j = mag::adjacency_matrix(mag::to_digraph(g));
            mag::sparse_matrix sub_first, bfs_first;
            if (arithmetic == "boolean") {
                sub_first = mag::reach_sub_first(j, m, mag::semiring::boolean);
                bfs_first = mag::reach_bfs_first(j, m, mag::semiring::boolean);
            } else {
                const mag::sparse_matrix jr = mag::scale_adjacency(j);
                sub_first = mag::reach_sub_first(jr, m);
                bfs_first = mag::reach_bfs_first(jr, m);
            }
            const auto pat_sub = sub_first.off_diagonal_pattern();
            const auto pat_bfs = bfs_first.off_diagonal_pattern();
            auto print_pattern = [](const char* label,
                                    const std::vector<std::pair<std::size_t, std::size_t>>& pat) {
                std::printf("%s (%zu pairs):", label, pat.size());
                for (auto [r, c] : pat) std::printf(" (%zu,%zu)", r + 1, c + 1);
                std::printf("\n");
            };
            print_pattern("aggregate-first reachability", pat_sub);
            print_pattern("closure-first reachability", pat_bfs);
            std::vector<std::pair<std::size_t, std::size_t>> spurious;
            for (const auto& pr : pat_sub)
                if (std::find(pat_bfs.begin(), pat_bfs.end(), pr) == pat_bfs.end()) spurious.push_back(pr);
            print_pattern("aggregation-only (spurious) pairs", spurious);
        } else if (*experiment) {
            std::ifstream in(manifest_path);
            if (!in) mag::fail(mag::errc::io_error, "cannot open " + manifest_path);
            mag::experiment_manifest m = mag::experiment_manifest::parse(in);
            if (threads) m.threads = threads;
            std::ofstream rows_file, summary_file;
            std::ostream* rows = &std::cout;
            std::ostream* summary = &std::cout;
            if (!rows_path.empty()) {
                rows_file.open(rows_path);
                if (!rows_file) mag::fail(mag::errc::io_error, "cannot open " + rows_path);
                rows = &rows_file;
            }
            if (!summary_path.empty()) {
                summary_file.open(summary_path);
                if (!summary_file) mag::fail(mag::errc::io_error, "cannot open " + summary_path);
                summary = &summary_file;
            }
            const mag::experiment_report report = mag::run_experiment(m, rows, summary);
            if (report.failed)
                mag::fail(mag::errc::io_error,
                          std::to_string(report.failed) + " instance(s) failed; see the rows output");
        }
    } catch (const mag::error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_data;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return exit_internal;
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
