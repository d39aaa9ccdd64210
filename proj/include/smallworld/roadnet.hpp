#pragma once

// Road networks as metric spaces: loading (DIMACS .gr/.co or CSV edge lists),
// exact shortest-path distances and the MetricSpace adapter used by the
// generators and routers. Road edges play the role of local contacts.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"
#include "metric_space.hpp"
#include "rng.hpp"

namespace smallworld {

struct RoadEdge {
    NodeId u = 0;
    NodeId v = 0;
    Distance weight = 0;
};

class RoadGraph {
public:
    RoadGraph() = default;

    // Builds the undirected graph. Parallel edges keep the lightest weight,
    // self loops are dropped.
    RoadGraph(std::vector<double> xs, std::vector<double> ys, std::vector<RoadEdge> edges,
              std::vector<std::int64_t> external_ids = {})
        : x_(std::move(xs)), y_(std::move(ys)), external_ids_(std::move(external_ids)) {
        const std::size_t n = x_.size();
        if (y_.size() != n) throw InputError("coordinate arrays differ in length");
        if (external_ids_.empty()) {
            external_ids_.resize(n);
            for (std::size_t i = 0; i < n; ++i) external_ids_[i] = static_cast<std::int64_t>(i);
        }
        for (auto& e : edges) {
            if (e.u >= n || e.v >= n) throw IntegrityError("edge endpoint outside node set");
            if (e.weight < 0) throw InputError("negative edge weight");
            if (e.u > e.v) std::swap(e.u, e.v);
        }
        std::sort(edges.begin(), edges.end(), [](const RoadEdge& a, const RoadEdge& b) {
            return std::tie(a.u, a.v, a.weight) < std::tie(b.u, b.v, b.weight);
        });
        std::vector<RoadEdge> unique;
        for (const auto& e : edges) {
            if (e.u == e.v) continue;
            if (!unique.empty() && unique.back().u == e.u && unique.back().v == e.v) continue;
            unique.push_back(e);
        }
        edge_count_ = unique.size();
        offsets_.assign(n + 1, 0);
        for (const auto& e : unique) {
            ++offsets_[e.u + 1];
            ++offsets_[e.v + 1];
        }
        for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
        neighbors_.resize(offsets_[n]);
        weights_.resize(offsets_[n]);
        std::vector<std::uint64_t> fill(offsets_.begin(), offsets_.end() - 1);
        for (const auto& e : unique) {
            neighbors_[fill[e.u]] = e.v;
            weights_[fill[e.u]++] = e.weight;
            neighbors_[fill[e.v]] = e.u;
            weights_[fill[e.v]++] = e.weight;
        }
        label_components();
    }

    std::size_t node_count() const noexcept { return x_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }
    double x(NodeId u) const noexcept { return x_[u]; }
    double y(NodeId u) const noexcept { return y_[u]; }
    std::int64_t external_id(NodeId u) const noexcept { return external_ids_[u]; }

    std::span<const NodeId> neighbors(NodeId u) const noexcept {
        return {neighbors_.data() + offsets_[u], neighbors_.data() + offsets_[u + 1]};
    }
    std::span<const Distance> weights(NodeId u) const noexcept {
        return {weights_.data() + offsets_[u], weights_.data() + offsets_[u + 1]};
    }

    std::uint32_t component(NodeId u) const noexcept { return component_[u]; }
    std::uint32_t component_count() const noexcept { return component_count_; }
    std::uint32_t largest_component() const noexcept { return largest_; }
    std::size_t component_size(std::uint32_t c) const noexcept { return component_sizes_[c]; }

    // Multiplier applied to fractional input weights to make them integers.
    double weight_scale = 1.0;

private:
    void label_components() {
        const std::size_t n = node_count();
        component_.assign(n, std::numeric_limits<std::uint32_t>::max());
        component_sizes_.clear();
        std::vector<NodeId> stack;
        for (NodeId s = 0; s < n; ++s) {
            if (component_[s] != std::numeric_limits<std::uint32_t>::max()) continue;
            const auto c = static_cast<std::uint32_t>(component_sizes_.size());
            std::size_t size = 0;
            component_[s] = c;
            stack.push_back(s);
            while (!stack.empty()) {
                const NodeId u = stack.back();
                stack.pop_back();
                ++size;
                for (NodeId v : neighbors(u))
                    if (component_[v] != c) {
                        component_[v] = c;
                        stack.push_back(v);
                    }
            }
            component_sizes_.push_back(size);
        }
        component_count_ = static_cast<std::uint32_t>(component_sizes_.size());
        largest_ = 0;
        for (std::uint32_t c = 1; c < component_count_; ++c)
            if (component_sizes_[c] > component_sizes_[largest_]) largest_ = c;
    }

    std::vector<double> x_, y_;
    std::vector<std::int64_t> external_ids_;
    std::vector<std::uint64_t> offsets_;
    std::vector<NodeId> neighbors_;
    std::vector<Distance> weights_;
    std::size_t edge_count_ = 0;
    std::vector<std::uint32_t> component_;
    std::vector<std::size_t> component_sizes_;
    std::uint32_t component_count_ = 0;
    std::uint32_t largest_ = 0;
};

// Exact shortest-path distances from u (Dijkstra). Unreachable nodes get
// kUnreachable.
inline std::vector<Distance> single_source_distances(const RoadGraph& g, NodeId u) {
    if (u >= g.node_count()) throw InputError("source node out of range");
    std::vector<Distance> dist(g.node_count(), kUnreachable);
    using Item = std::pair<Distance, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[u] = 0;
    heap.emplace(0, u);
    while (!heap.empty()) {
        const auto [d, x] = heap.top();
        heap.pop();
        if (d != dist[x]) continue;
        const auto nbrs = g.neighbors(x);
        const auto ws = g.weights(x);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            const Distance nd = d + ws[i];
            const NodeId y = nbrs[i];
            if (dist[y] == kUnreachable || nd < dist[y]) {
                dist[y] = nd;
                heap.emplace(nd, y);
            }
        }
    }
    return dist;
}

enum class RoadFormat { dimacs, csv };

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    if (sep == ' ') {
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
            std::size_t j = i;
            while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
            if (j > i) out.push_back(line.substr(i, j - i));
            i = j;
        }
        return out;
    }
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        auto field = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
        while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
        while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
            field.remove_suffix(1);
        out.push_back(field);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
    if constexpr (std::is_floating_point_v<T>) {
        // from_chars for double is incomplete on older toolchains.
        std::string tmp(s);
        char* end = nullptr;
        out = static_cast<T>(std::strtod(tmp.c_str(), &end));
        return !tmp.empty() && end == tmp.c_str() + tmp.size();
    } else {
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc() && p == s.data() + s.size();
    }
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return in;
}

inline std::string_view trim_line(const std::string& line) {
    std::string_view v(line);
    while (!v.empty() && (v.back() == '\r' || v.back() == ' ')) v.remove_suffix(1);
    return v;
}

} // namespace detail

// DIMACS: .gr has "p sp N M" and arcs "a u v w" (1-based); .co has
// "v id x y". The coordinate file is optional.
inline RoadGraph load_dimacs(const std::string& gr_path, const std::string& co_path = {}) {
    std::vector<RoadEdge> edges;
    long declared = -1;
    long line_no = 0;
    {
        auto in = detail::open_input(gr_path);
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            const auto v = detail::trim_line(line);
            if (v.empty() || v[0] == 'c') continue;
            const auto f = detail::split_fields(v, ' ');
            if (f[0] == "p") {
                if (f.size() != 4 || !detail::parse_number(f[2], declared) || declared < 0)
                    throw ParseError("malformed problem line in " + gr_path, line_no);
            } else if (f[0] == "a") {
                long a = 0, b = 0;
                Distance w = 0;
                if (f.size() != 4 || !detail::parse_number(f[1], a) || !detail::parse_number(f[2], b) ||
                    !detail::parse_number(f[3], w))
                    throw ParseError("malformed arc line in " + gr_path, line_no);
                if (declared < 0) throw ParseError("arc before problem line in " + gr_path, line_no);
                if (a < 1 || b < 1 || a > declared || b > declared)
                    throw IntegrityError("arc endpoint outside 1.." + std::to_string(declared) + " at line " +
                                         std::to_string(line_no) + " of " + gr_path);
                if (w < 0) throw ParseError("negative arc weight in " + gr_path, line_no);
                edges.push_back({static_cast<NodeId>(a - 1), static_cast<NodeId>(b - 1), w});
            } else {
                throw ParseError("unknown line type '" + std::string(f[0]) + "' in " + gr_path, line_no);
            }
        }
        if (declared < 0) throw ParseError("missing problem line in " + gr_path);
    }
    std::vector<double> xs(static_cast<std::size_t>(declared), 0.0), ys(static_cast<std::size_t>(declared), 0.0);
    if (!co_path.empty()) {
        auto in = detail::open_input(co_path);
        std::string line;
        line_no = 0;
        std::vector<char> seen(static_cast<std::size_t>(declared), 0);
        while (std::getline(in, line)) {
            ++line_no;
            const auto v = detail::trim_line(line);
            if (v.empty() || v[0] == 'c' || v[0] == 'p') continue;
            const auto f = detail::split_fields(v, ' ');
            long id = 0;
            double x = 0, y = 0;
            if (f.size() != 4 || f[0] != "v" || !detail::parse_number(f[1], id) || !detail::parse_number(f[2], x) ||
                !detail::parse_number(f[3], y))
                throw ParseError("malformed coordinate line in " + co_path, line_no);
            if (id < 1 || id > declared)
                throw IntegrityError("coordinate for unknown node " + std::to_string(id) + " at line " +
                                     std::to_string(line_no) + " of " + co_path);
            xs[static_cast<std::size_t>(id - 1)] = x;
            ys[static_cast<std::size_t>(id - 1)] = y;
            seen[static_cast<std::size_t>(id - 1)] = 1;
        }
        for (std::size_t i = 0; i < seen.size(); ++i)
            if (!seen[i]) throw IntegrityError("node " + std::to_string(i + 1) + " has no coordinates in " + co_path);
    }
    std::vector<std::int64_t> ids(static_cast<std::size_t>(declared));
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<std::int64_t>(i + 1);
    return RoadGraph(std::move(xs), std::move(ys), std::move(edges), std::move(ids));
}

// CSV: edges "u,v,w" and an optional node file "id,x,y". A first line that
// does not parse as numbers is taken as a header. Fractional weights are
// scaled by 1000 and rounded.
inline RoadGraph load_csv(const std::string& edge_path, const std::string& node_path = {}) {
    struct RawEdge {
        std::int64_t u, v;
        double w;
        long line;
    };
    std::vector<RawEdge> raw;
    {
        auto in = detail::open_input(edge_path);
        std::string line;
        long line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto v = detail::trim_line(line);
            if (v.empty() || v[0] == '#') continue;
            const auto f = detail::split_fields(v, ',');
            RawEdge e{0, 0, 0.0, line_no};
            const bool ok = f.size() == 3 && detail::parse_number(f[0], e.u) && detail::parse_number(f[1], e.v) &&
                            detail::parse_number(f[2], e.w);
            if (!ok) {
                if (line_no == 1 && raw.empty()) continue;
                throw ParseError("malformed edge line in " + edge_path, line_no);
            }
            if (e.w < 0) throw ParseError("negative edge weight in " + edge_path, line_no);
            raw.push_back(e);
        }
    }
    std::map<std::int64_t, std::pair<double, double>> coords;
    const bool have_nodes = !node_path.empty();
    if (have_nodes) {
        auto in = detail::open_input(node_path);
        std::string line;
        long line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto v = detail::trim_line(line);
            if (v.empty() || v[0] == '#') continue;
            const auto f = detail::split_fields(v, ',');
            std::int64_t id = 0;
            double x = 0, y = 0;
            const bool ok = f.size() == 3 && detail::parse_number(f[0], id) && detail::parse_number(f[1], x) &&
                            detail::parse_number(f[2], y);
            if (!ok) {
                if (line_no == 1 && coords.empty()) continue;
                throw ParseError("malformed node line in " + node_path, line_no);
            }
            coords[id] = {x, y};
        }
    } else {
        for (const auto& e : raw) {
            coords.emplace(e.u, std::pair{0.0, 0.0});
            coords.emplace(e.v, std::pair{0.0, 0.0});
        }
    }
    std::unordered_map<std::int64_t, NodeId> dense;
    std::vector<double> xs, ys;
    std::vector<std::int64_t> ids;
    for (const auto& [id, xy] : coords) {
        dense.emplace(id, static_cast<NodeId>(ids.size()));
        ids.push_back(id);
        xs.push_back(xy.first);
        ys.push_back(xy.second);
    }
    const bool integral = std::all_of(raw.begin(), raw.end(), [](const RawEdge& e) { return e.w == std::floor(e.w); });
    const double scale = integral ? 1.0 : 1000.0;
    std::vector<RoadEdge> edges;
    edges.reserve(raw.size());
    for (const auto& e : raw) {
        auto a = dense.find(e.u), b = dense.find(e.v);
        if (a == dense.end() || b == dense.end())
            throw IntegrityError("edge at line " + std::to_string(e.line) + " of " + edge_path +
                                 " references a node missing from " + node_path);
        edges.push_back({a->second, b->second, static_cast<Distance>(std::llround(e.w * scale))});
    }
    RoadGraph g(std::move(xs), std::move(ys), std::move(edges), std::move(ids));
    g.weight_scale = scale;
    return g;
}

inline RoadGraph load_road_network(const std::string& path, RoadFormat format, const std::string& coords_path = {}) {
    return format == RoadFormat::dimacs ? load_dimacs(path, coords_path) : load_csv(path, coords_path);
}

inline void write_dimacs(const RoadGraph& g, const std::string& gr_path, const std::string& co_path) {
    std::ofstream gr(gr_path);
    if (!gr) throw IoError("cannot write " + gr_path);
    gr << "c synthetic road network\np sp " << g.node_count() << ' ' << 2 * g.edge_count() << '\n';
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto nb = g.neighbors(u);
        const auto ws = g.weights(u);
        for (std::size_t i = 0; i < nb.size(); ++i) gr << "a " << u + 1 << ' ' << nb[i] + 1 << ' ' << ws[i] << '\n';
    }
    std::ofstream co(co_path);
    if (!co) throw IoError("cannot write " + co_path);
    co << "p aux sp co " << g.node_count() << '\n';
    for (NodeId u = 0; u < g.node_count(); ++u)
        co << "v " << u + 1 << ' ' << static_cast<long long>(std::llround(g.x(u))) << ' '
           << static_cast<long long>(std::llround(g.y(u))) << '\n';
}

// Road-like test network: a jittered side x side lattice of intersections
// with a fraction of street segments removed and Euclidean segment lengths.
inline RoadGraph synthetic_road_network(int side, double keep_probability, std::uint64_t seed,
                                        double spacing = 1000.0) {
    if (side < 2) throw ParameterError("synthetic road network needs side >= 2");
    const auto n = static_cast<std::size_t>(side) * static_cast<std::size_t>(side);
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        RngStream s(seed, i, StreamPurpose::role);
        xs[i] = std::round((static_cast<double>(i % side) + 0.35 * (s.uniform01() - 0.5)) * spacing);
        ys[i] = std::round((static_cast<double>(i / side) + 0.35 * (s.uniform01() - 0.5)) * spacing);
    }
    std::vector<RoadEdge> edges;
    auto link = [&](std::size_t a, std::size_t b, std::uint64_t salt) {
        RngStream s(seed, a * 4 + salt, StreamPurpose::edge_count);
        if (!s.bernoulli(keep_probability)) return;
        const double len = std::hypot(xs[a] - xs[b], ys[a] - ys[b]);
        edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b), std::max<Distance>(1, std::llround(len))});
    };
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t x = i % side, y = i / side;
        if (x + 1 < static_cast<std::size_t>(side)) link(i, i + 1, 0);
        if (y + 1 < static_cast<std::size_t>(side)) link(i, i + side, 1);
    }
    return RoadGraph(std::move(xs), std::move(ys), std::move(edges));
}

// Restricts g to its largest connected component, renumbering nodes.
inline RoadGraph largest_component_subgraph(const RoadGraph& g) {
    const auto keep = g.largest_component();
    std::vector<NodeId> remap(g.node_count(), std::numeric_limits<NodeId>::max());
    std::vector<double> xs, ys;
    std::vector<std::int64_t> ids;
    for (NodeId u = 0; u < g.node_count(); ++u)
        if (g.component(u) == keep) {
            remap[u] = static_cast<NodeId>(xs.size());
            xs.push_back(g.x(u));
            ys.push_back(g.y(u));
            ids.push_back(g.external_id(u));
        }
    std::vector<RoadEdge> edges;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (remap[u] == std::numeric_limits<NodeId>::max()) continue;
        const auto nb = g.neighbors(u);
        const auto ws = g.weights(u);
        for (std::size_t i = 0; i < nb.size(); ++i)
            if (u < nb[i]) edges.push_back({remap[u], remap[nb[i]], ws[i]});
    }
    RoadGraph out(std::move(xs), std::move(ys), std::move(edges), std::move(ids));
    out.weight_scale = g.weight_scale;
    return out;
}

// MetricSpace over a road graph: d(u,v) is the shortest-path length and the
// road edges are the local contacts.
class RoadMetric {
public:
    static constexpr bool is_grid = false;

    explicit RoadMetric(std::shared_ptr<const RoadGraph> graph) : graph_(std::move(graph)) {
        if (!graph_) throw InputError("null road graph");
    }

    const RoadGraph& graph() const noexcept { return *graph_; }
    std::uint64_t node_count() const noexcept { return graph_->node_count(); }

    // Every call runs Dijkstra; counted so callers can assert budgets.
    std::vector<Distance> distances_from(NodeId u) const {
        sssp_runs_.fetch_add(1, std::memory_order_relaxed);
        return single_source_distances(*graph_, u);
    }
    std::uint64_t sssp_runs() const noexcept { return sssp_runs_.load(); }
    void reset_counter() const noexcept { sssp_runs_.store(0); }

    Distance distance(NodeId u, NodeId v) const { return distances_from(u)[v]; }

    template <class F>
    void for_each_local(NodeId u, F&& f) const {
        for (NodeId v : graph_->neighbors(u)) f(v);
    }

    template <class F>
    void for_each_in_ball(NodeId u, Distance d, F&& f) const {
        const auto dist = distances_from(u);
        for (NodeId v = 0; v < dist.size(); ++v)
            if (dist[v] != kUnreachable && dist[v] <= d) f(v);
    }

    template <class F>
    void for_each_in_sphere(NodeId u, Distance j, F&& f) const {
        const auto dist = distances_from(u);
        for (NodeId v = 0; v < dist.size(); ++v)
            if (dist[v] == j) f(v);
    }

    class Target {
    public:
        Target(std::vector<Distance> dist, NodeId t) : dist_(std::move(dist)), t_(t) {}
        Distance operator()(NodeId x) const noexcept { return dist_[x]; }
        NodeId target() const noexcept { return t_; }
        const std::vector<Distance>& distances() const noexcept { return dist_; }

    private:
        std::vector<Distance> dist_;
        NodeId t_;
    };

    // Roads are undirected, so distances from t are distances to t.
    Target to(NodeId t) const { return Target(distances_from(t), t); }

    bool operator==(const RoadMetric& o) const noexcept { return graph_ == o.graph_; }

private:
    std::shared_ptr<const RoadGraph> graph_;
    mutable std::atomic<std::uint64_t> sssp_runs_{0};
};

static_assert(MetricSpace<RoadMetric>);

} // namespace smallworld
