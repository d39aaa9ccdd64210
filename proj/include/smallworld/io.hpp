#pragma once

// Serialization: run configs, graph files (JSON or a JSON header followed by
// little-endian u32 edge pairs), CSV tables and lemma reports.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "experiments.hpp"
#include "models.hpp"
#include "routing.hpp"
#include "validation.hpp"

namespace smallworld {

using json = nlohmann::ordered_json;

struct RunConfig {
    std::string subcommand;
    ModelParams params;
    std::string topology = "grid"; // grid | road
    std::string road_file, road_coords, road_format = "dimacs";
    std::uint64_t seed = 1;
    std::uint64_t pairs = 0;
    std::uint64_t seeds = 1;
    std::string policy;
    double c = 1.0;
    std::vector<double> k_values;
    std::vector<std::string> compare; // model labels for compare
    std::string lemma;
    std::string output;
    std::string format = "json";

    bool operator==(const RunConfig&) const = default;
};

inline json to_json(const ModelParams& p) {
    return json{{"model", to_string(p.model)},
                {"n", p.n},
                {"p", p.p},
                {"q", p.q},
                {"r", p.r},
                {"k", p.k},
                {"epsilon", p.epsilon},
                {"window", p.window},
                {"rh_local_variant", p.rh_local_variant},
                {"directed", p.directed},
                {"wraparound", p.wraparound},
                {"window_weighting", to_string(p.window_weighting)},
                {"wnpa_literal_rate", p.wnpa_literal_rate}};
}

inline ModelParams params_from_json(const json& j) {
    try {
        ModelParams p;
        p.model = parse_model(j.at("model").get<std::string>());
        p.n = j.at("n").get<int>();
        p.p = j.at("p").get<int>();
        p.q = j.at("q").get<double>();
        p.r = j.at("r").get<double>();
        p.k = j.at("k").get<double>();
        p.epsilon = j.at("epsilon").get<double>();
        p.window = j.at("window").get<double>();
        p.rh_local_variant = j.at("rh_local_variant").get<bool>();
        p.directed = j.at("directed").get<bool>();
        p.wraparound = j.at("wraparound").get<bool>();
        p.window_weighting = parse_window_weighting(j.at("window_weighting").get<std::string>());
        p.wnpa_literal_rate = j.at("wnpa_literal_rate").get<bool>();
        return p;
    } catch (const json::exception& e) {
        throw InputError(std::string("bad model params: ") + e.what());
    }
}

inline json to_json(const RunConfig& c) {
    return json{{"subcommand", c.subcommand},
                {"params", to_json(c.params)},
                {"topology", c.topology},
                {"road_file", c.road_file},
                {"road_coords", c.road_coords},
                {"road_format", c.road_format},
                {"seed", c.seed},
                {"pairs", c.pairs},
                {"seeds", c.seeds},
                {"policy", c.policy},
                {"c", c.c},
                {"k_values", c.k_values},
                {"compare", c.compare},
                {"lemma", c.lemma},
                {"output", c.output},
                {"format", c.format}};
}

inline RunConfig config_from_json(const json& j) {
    try {
        RunConfig c;
        c.subcommand = j.at("subcommand").get<std::string>();
        c.params = params_from_json(j.at("params"));
        c.topology = j.at("topology").get<std::string>();
        c.road_file = j.at("road_file").get<std::string>();
        c.road_coords = j.at("road_coords").get<std::string>();
        c.road_format = j.at("road_format").get<std::string>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.pairs = j.at("pairs").get<std::uint64_t>();
        c.seeds = j.at("seeds").get<std::uint64_t>();
        c.policy = j.at("policy").get<std::string>();
        c.c = j.at("c").get<double>();
        c.k_values = j.at("k_values").get<std::vector<double>>();
        c.compare = j.at("compare").get<std::vector<std::string>>();
        c.lemma = j.at("lemma").get<std::string>();
        c.output = j.at("output").get<std::string>();
        c.format = j.at("format").get<std::string>();
        return c;
    } catch (const json::exception& e) {
        throw InputError(std::string("bad run config: ") + e.what());
    }
}

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// {"config": ..., "generated_at": ...}; the timestamp is optional.
inline json artifact_header(const RunConfig& c, bool timestamp) {
    json h{{"config", to_json(c)}};
    if (timestamp) h["generated_at"] = utc_timestamp();
    return h;
}

inline std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

// CSV files start with "# " followed by the header JSON on one line.
inline void write_csv_preamble(std::ostream& os, const json& header) { os << "# " << header.dump() << '\n'; }

inline json read_csv_preamble(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("# ", 0) != 0) throw InputError("csv artifact lacks a '# {json}' header");
    try {
        return json::parse(line.substr(2));
    } catch (const json::exception& e) {
        throw InputError(std::string("bad csv header: ") + e.what());
    }
}

inline json to_json(const StatSummary& s) {
    return json{{"trials", s.trials},          {"mean", s.mean},
                {"median", s.median},          {"stddev", s.stddev},
                {"ci_lo", s.ci_lo},            {"ci_hi", s.ci_hi},
                {"phase_means", s.phase_means}, {"dead_end_mean", s.dead_end_mean},
                {"failures", s.failures}};
}

inline json to_json(const LemmaReport& r) {
    return json{{"lemma", r.lemma},
                {"instance", r.instance},
                {"observed", r.observed},
                {"bound", r.bound},
                {"pass", r.pass},
                {"checked", r.checked},
                {"failures", r.failures},
                {"allowed_failure_fraction", r.allowed_failure_fraction},
                {"note", r.note}};
}

inline json to_json(const DegreeStats& s) {
    return json{{"nodes", s.nodes},
                {"mean_out_degree", s.mean_out_degree},
                {"mean_distinct_degree", s.mean_distinct_degree},
                {"mean_requested_degree", s.mean_requested_degree},
                {"popularity_alpha", s.popularity_alpha},
                {"popularity_alpha_se", s.popularity_alpha_se},
                {"highway_count", s.highway_count},
                {"highway_fraction", s.highway_fraction},
                {"expected_highway_fraction", s.expected_highway_fraction},
                {"highway_fraction_sigma", s.highway_fraction_sigma},
                {"highway_z", s.highway_z}};
}

inline json to_json(const GenerationStats& s) {
    return json{{"requested_edges", s.requested_edges},
                {"realized_edges", s.realized_edges},
                {"placed_connections", s.placed_connections},
                {"repeated_draws", s.repeated_draws},
                {"empty_window_nodes", s.empty_window_nodes},
                {"sssp_runs", s.sssp_runs},
                {"highway_count", s.highway_count},
                {"warnings", s.warnings}};
}

inline void write_sweep_csv(std::ostream& os, const SweepCurve& curve) {
    os << curve.parameter << ",mean,median,stddev,ci_lo,ci_hi,pairs,seeds\n";
    for (const auto& pt : curve.points) {
        const auto& s = pt.summary;
        os << format_number(pt.value) << ',' << format_number(s.mean) << ',' << format_number(s.median) << ','
           << format_number(s.stddev) << ',' << format_number(s.ci_lo) << ',' << format_number(s.ci_hi) << ','
           << s.trials << ',';
        for (std::size_t i = 0; i < pt.graph_seeds.size(); ++i) os << (i ? ";" : "") << pt.graph_seeds[i];
        os << '\n';
    }
}

inline void write_compare_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
    os << "model,mean,ci_lo,ci_hi,ratio_vs_baseline\n";
    for (const auto& r : rows)
        os << r.label << ',' << format_number(r.summary.mean) << ',' << format_number(r.summary.ci_lo) << ','
           << format_number(r.summary.ci_hi) << ',' << format_number(r.ratio) << '\n';
}

inline void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
    os << "src,dst,hops,phase1,phase2,phase3,dead_ends,terminated\n";
    for (const auto& r : records)
        os << r.source << ',' << r.target << ',' << r.hops << ',' << r.phase_hops[0] << ',' << r.phase_hops[1] << ','
           << r.phase_hops[2] << ',' << r.dead_ends << ',' << to_string(r.terminated) << '\n';
}

// ---- graph files ----

template <MetricSpace M>
json graph_json(const GraphInstance<M>& g, const json& header) {
    json out = header;
    out["model"] = to_string(g.params.model);
    out["params"] = to_json(g.params);
    out["seed"] = g.seed;
    out["stats"] = to_json(g.stats);
    json nodes = json::array();
    for (NodeId u = 0; u < g.node_count(); ++u) {
        json node{{"id", u}};
        if constexpr (M::is_grid) {
            const Coord c = g.metric->coord(u);
            node["x"] = c.x;
            node["y"] = c.y;
        } else {
            node["x"] = g.metric->graph().x(u);
            node["y"] = g.metric->graph().y(u);
        }
        node["highway"] = g.is_highway(u);
        node["popularity"] = g.popularity[u];
        nodes.push_back(std::move(node));
    }
    out["nodes"] = std::move(nodes);
    json edges = json::array();
    for (NodeId u = 0; u < g.node_count(); ++u)
        for (NodeId v : g.long_range(u)) edges.push_back({{"src", u}, {"dst", v}});
    out["edges"] = std::move(edges);
    if (!g.link_offsets.empty()) {
        json links = json::array();
        for (NodeId u = 0; u < g.node_count(); ++u)
            for (NodeId v : g.highway_links(u)) links.push_back({{"src", u}, {"dst", v}});
        out["links"] = std::move(links);
    }
    return out;
}

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
    const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                       static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    os.write(b, 4);
}

inline std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) throw InputError("truncated binary graph file");
    return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
           static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

} // namespace detail

// One header line, then (src, dst) pairs of long-range edges followed by
// the highway links. Roles are recomputed from params and seed on load.
template <MetricSpace M>
void write_graph_binary(std::ostream& os, const GraphInstance<M>& g, const json& header) {
    json h = header;
    h["format"] = "smallworld-binary-v1";
    h["params"] = to_json(g.params);
    h["seed"] = g.seed;
    h["nodes"] = g.node_count();
    h["edges"] = g.edge_count();
    h["links"] = g.link_targets.size();
    h["stats"] = to_json(g.stats);
    os << h.dump() << '\n';
    for (NodeId u = 0; u < g.node_count(); ++u)
        for (NodeId v : g.long_range(u)) {
            detail::put_u32(os, u);
            detail::put_u32(os, v);
        }
    for (NodeId u = 0; u < g.node_count(); ++u)
        for (NodeId v : g.highway_links(u)) {
            detail::put_u32(os, u);
            detail::put_u32(os, v);
        }
}

// Parsed graph file before it is attached to a metric.
struct GraphFile {
    json header;
    ModelParams params;
    std::uint64_t seed = 0;
    std::uint64_t nodes = 0;
    std::vector<std::uint8_t> highway; // empty: recompute
    std::vector<double> popularity;
    std::vector<std::pair<NodeId, NodeId>> edges, links;
};

inline GraphFile read_graph_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    GraphFile f;
    std::string first;
    std::getline(in, first);
    json h;
    try {
        h = json::parse(first);
    } catch (const json::exception&) {
        h = nullptr;
    }
    try {
        if (h.is_object() && h.value("format", "") == "smallworld-binary-v1") {
            f.params = params_from_json(h.at("params"));
            f.seed = h.at("seed").get<std::uint64_t>();
            f.nodes = h.at("nodes").get<std::uint64_t>();
            const auto e = h.at("edges").get<std::uint64_t>(), l = h.at("links").get<std::uint64_t>();
            f.edges.reserve(e);
            for (std::uint64_t i = 0; i < e; ++i) {
                const auto a = detail::get_u32(in);
                f.edges.emplace_back(a, detail::get_u32(in));
            }
            for (std::uint64_t i = 0; i < l; ++i) {
                const auto a = detail::get_u32(in);
                f.links.emplace_back(a, detail::get_u32(in));
            }
            f.header = std::move(h);
            return f;
        }
        in.clear();
        in.seekg(0);
        json j = json::parse(in);
        f.params = params_from_json(j.at("params"));
        f.seed = j.at("seed").get<std::uint64_t>();
        const auto& nodes = j.at("nodes");
        f.nodes = nodes.size();
        f.highway.resize(f.nodes);
        f.popularity.resize(f.nodes);
        for (const auto& node : nodes) {
            const auto id = node.at("id").get<std::uint64_t>();
            if (id >= f.nodes) throw IntegrityError("node id " + std::to_string(id) + " out of range");
            f.highway[id] = node.at("highway").get<bool>() ? 1 : 0;
            f.popularity[id] = node.at("popularity").get<double>();
        }
        for (const auto& e : j.at("edges")) f.edges.emplace_back(e.at("src").get<NodeId>(), e.at("dst").get<NodeId>());
        if (j.contains("links"))
            for (const auto& e : j["links"]) f.links.emplace_back(e.at("src").get<NodeId>(), e.at("dst").get<NodeId>());
        j.erase("nodes");
        j.erase("edges");
        j.erase("links");
        f.header = std::move(j);
        return f;
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

template <MetricSpace M>
GraphInstance<M> attach(GraphFile f, std::shared_ptr<const M> metric) {
    if (f.nodes != metric->node_count())
        throw IntegrityError("graph file has " + std::to_string(f.nodes) + " nodes but the metric has " +
                             std::to_string(metric->node_count()));
    GraphInstance<M> g;
    g.metric = metric;
    g.params = f.params;
    g.seed = f.seed;
    if (f.highway.empty()) {
        auto roles = assign_roles(f.params, *metric, f.seed);
        g.highway = std::move(roles.highway);
        g.popularity = std::move(roles.popularity);
    } else {
        g.highway = std::move(f.highway);
        g.popularity = std::move(f.popularity);
    }
    auto build = [&](const std::vector<std::pair<NodeId, NodeId>>& list, std::vector<std::uint64_t>& offsets,
                     std::vector<NodeId>& targets) {
        offsets.assign(f.nodes + 1, 0);
        for (const auto& [a, b] : list) {
            if (a >= f.nodes || b >= f.nodes) throw IntegrityError("edge endpoint out of range");
            ++offsets[a + 1];
        }
        for (std::uint64_t u = 0; u < f.nodes; ++u) offsets[u + 1] += offsets[u];
        targets.resize(list.size());
        std::vector<std::uint64_t> fill(offsets.begin(), offsets.end() - 1);
        for (const auto& [a, b] : list) targets[fill[a]++] = b;
        for (std::uint64_t u = 0; u < f.nodes; ++u)
            std::sort(targets.begin() + static_cast<std::ptrdiff_t>(offsets[u]),
                      targets.begin() + static_cast<std::ptrdiff_t>(offsets[u + 1]));
    };
    build(f.edges, g.offsets, g.targets);
    if (!f.links.empty()) build(f.links, g.link_offsets, g.link_targets);
    for (auto h : g.highway) g.stats.highway_count += h;
    g.stats.realized_edges = g.targets.size();
    return g;
}

} // namespace smallworld
