#pragma once

// The four generators: Kleinberg baseline, Kleinberg Highway (KH),
// Randomized Highway (RH) and Windowed NPA. All of them share one code path
// that is generic over the metric (torus/grid or road network).
//
// Local contacts are implicit (B_p(u) on grids, road edges on roads). Only
// long-range contacts are stored, as a directed CSR adjacency. Every node
// draws from its own RngStream, so output is independent of thread count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "metric_space.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "roadnet.hpp"
#include "sampling.hpp"

namespace smallworld {

enum class Model { kleinberg, kh, rh, wnpa };

// How WNPA weights targets inside the popularity window.
enum class WindowWeighting { inverse_square, uniform };

inline std::string to_string(Model m) {
    switch (m) {
    case Model::kleinberg: return "kleinberg";
    case Model::kh: return "kh";
    case Model::rh: return "rh";
    case Model::wnpa: return "wnpa";
    }
    return "?";
}

inline Model parse_model(const std::string& s) {
    if (s == "kleinberg") return Model::kleinberg;
    if (s == "kh") return Model::kh;
    if (s == "rh") return Model::rh;
    if (s == "wnpa") return Model::wnpa;
    throw ParameterError("unknown model '" + s + "' (expected kleinberg, kh, rh or wnpa)");
}

inline std::string to_string(WindowWeighting w) { return w == WindowWeighting::uniform ? "uniform" : "inverse-square"; }

inline WindowWeighting parse_window_weighting(const std::string& s) {
    if (s == "inverse-square") return WindowWeighting::inverse_square;
    if (s == "uniform") return WindowWeighting::uniform;
    throw ParameterError("unknown window weighting '" + s + "' (expected inverse-square or uniform)");
}

struct ModelParams {
    Model model = Model::kleinberg;
    int n = 0;      // grid side; unused on road metrics
    int p = 1;      // local radius
    double q = 1.0; // Kleinberg q, or Q (average long-range degree) for the highway models
    double r = 2.0; // clustering exponent
    double k = 1.0; // highway parameter
    double epsilon = 0.5;
    double window = 1.01; // A
    bool rh_local_variant = false;
    bool directed = true;
    bool wraparound = true;
    WindowWeighting window_weighting = WindowWeighting::inverse_square;
    // WNPA: eps*Q*k connections per node (mean (1+eps) Q) instead of the
    // default eps*Q*k/(1+eps) (mean Q).
    bool wnpa_literal_rate = false;

    bool operator==(const ModelParams&) const = default;
};

// Side length used in log n thresholds: n for grids, ceil(sqrt(|V|)) for roads.
inline int effective_side(std::uint64_t node_count) {
    auto s = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(node_count))));
    while (static_cast<std::uint64_t>(s) * s < node_count) ++s;
    return std::max(1, s);
}

inline double log2_side(int n) { return std::log2(static_cast<double>(std::max(n, 1))); }

// Integer square root of k when k is a perfect square, else 0.
inline int exact_sqrt(double k) {
    if (!(k >= 1.0) || k != std::floor(k)) return 0;
    const auto root = static_cast<long long>(std::llround(std::sqrt(k)));
    return root * root == static_cast<long long>(k) ? static_cast<int>(root) : 0;
}

// Checks the per-model parameter constraints. node_count is |V|.
inline void validate(const ModelParams& p, std::uint64_t node_count, bool grid) {
    if (grid && p.n <= 0) throw ParameterError("grid side n must be positive");
    if (p.p < 1) throw ParameterError("local radius p must be >= 1");
    if (!(p.q >= 0.0) || !std::isfinite(p.q)) throw ParameterError("q/Q must be a finite value >= 0");
    if (!(p.r >= 0.0) || !std::isfinite(p.r)) throw ParameterError("clustering exponent r must be >= 0");
    const double nodes = static_cast<double>(node_count);
    switch (p.model) {
    case Model::kleinberg: break;
    case Model::kh: {
        if (!grid) throw ParameterError("kh needs a grid topology (its highway is a regular subgrid)");
        if (!(p.k >= 1.0) || p.k > nodes) throw ParameterError("kh requires 1 <= k <= n^2");
        const int root = exact_sqrt(p.k);
        if (root == 0 || p.n % root != 0) {
            std::string hint = "kh requires sqrt(k) to be an integer dividing n=" + std::to_string(p.n) + "; valid k:";
            int shown = 0;
            for (int s = 1; s <= p.n && shown < 8; ++s)
                if (p.n % s == 0) {
                    hint += " " + std::to_string(s * s);
                    ++shown;
                }
            throw ParameterError(hint);
        }
        break;
    }
    case Model::rh: {
        const int side = grid ? p.n : effective_side(node_count);
        const double bound = side >= 2 ? nodes / log2_side(side) : nodes;
        if (!(p.k >= 1.0) || p.k > bound)
            throw ParameterError("rh requires 1 <= k <= n^2/log2(n) = " + std::to_string(bound));
        if (p.rh_local_variant && !grid) throw ParameterError("the rh local variant needs a grid topology");
        break;
    }
    case Model::wnpa:
        if (!(p.epsilon > 0.0)) throw ParameterError("wnpa requires epsilon > 0");
        if (!(p.window >= 1.0)) throw ParameterError("wnpa requires window factor A >= 1");
        if (!(p.q > 0.0)) throw ParameterError("wnpa requires Q > 0");
        break;
    }
}

struct GenerationStats {
    std::uint64_t requested_edges = 0;    // sum of connection counts
    std::uint64_t placed_connections = 0; // draws that found a target, with multiplicity
    std::uint64_t repeated_draws = 0;     // draws that repeated an earlier target of the same node
    std::uint64_t realized_edges = 0;     // stored distinct long-range edges (directed)
    std::uint64_t empty_window_nodes = 0; // nodes that wanted edges but had no candidates
    std::uint64_t sssp_runs = 0;          // single-source distance runs (road metrics)
    std::uint64_t highway_count = 0;
    std::vector<std::string> warnings;
};

// Per-node roles: highway membership and popularity.
struct NodeRoles {
    std::vector<std::uint8_t> highway;
    std::vector<double> popularity;
};

template <MetricSpace M>
struct GraphInstance {
    std::shared_ptr<const M> metric;
    ModelParams params;
    std::uint64_t seed = 0;
    std::vector<std::uint8_t> highway;
    std::vector<double> popularity;
    std::vector<std::uint64_t> offsets{0};
    std::vector<NodeId> targets;
    // RH local variant: undirected links between highway nodes.
    std::vector<std::uint64_t> link_offsets;
    std::vector<NodeId> link_targets;
    GenerationStats stats;

    std::uint64_t node_count() const noexcept { return metric->node_count(); }
    std::uint64_t edge_count() const noexcept { return targets.size(); }
    bool is_highway(NodeId u) const noexcept { return highway[u] != 0; }

    std::span<const NodeId> long_range(NodeId u) const noexcept {
        return {targets.data() + offsets[u], targets.data() + offsets[u + 1]};
    }

    std::span<const NodeId> highway_links(NodeId u) const noexcept {
        if (link_offsets.empty()) return {};
        return {link_targets.data() + link_offsets[u], link_targets.data() + link_offsets[u + 1]};
    }

    // Spacing of the KH highway lattice (sqrt k); 1 for other models.
    int highway_spacing() const noexcept { return params.model == Model::kh ? exact_sqrt(params.k) : 1; }

    // Highway-level local links: the 4 highway-grid neighbours on KH, the
    // 8 ball links of the RH variant.
    template <class F>
    void for_each_highway_local(NodeId u, F&& f) const {
        if (!is_highway(u)) return;
        if constexpr (M::is_grid) {
            if (params.model == Model::kh) {
                const int s = highway_spacing();
                if (s == 1) return; // identical to the ordinary local contacts
                const int dirs[4][2] = {{s, 0}, {-s, 0}, {0, s}, {0, -s}};
                NodeId prev[4];
                int used = 0;
                for (auto& d : dirs)
                    if (auto v = metric->offset(u, d[0], d[1]); v && *v != u) {
                        if (std::find(prev, prev + used, *v) != prev + used) continue;
                        prev[used++] = *v;
                        f(*v);
                    }
                return;
            }
        }
        for (NodeId v : highway_links(u)) f(v);
    }

    // Every out-neighbour: local, highway-local and long-range.
    template <class F>
    void for_each_contact(NodeId u, F&& f) const {
        metric->for_each_local(u, f);
        for_each_highway_local(u, f);
        for (NodeId v : long_range(u)) f(v);
    }
};

namespace detail {

template <MetricSpace M>
int side_of(const M& metric, const ModelParams& p) {
    if constexpr (M::is_grid) return metric.side();
    else return effective_side(metric.node_count());
    (void)p;
}

// Popularity band [log2 n, A log2 n] that acts as the WNPA highway.
inline bool in_popularity_band(double popularity, int side, double window) {
    const double lo = log2_side(side);
    return popularity >= lo && popularity <= window * lo;
}

} // namespace detail

// Highway flags and popularities. Deterministic in (params, seed).
template <MetricSpace M>
NodeRoles assign_roles(const ModelParams& p, const M& metric, std::uint64_t seed) {
    const auto n = static_cast<std::size_t>(metric.node_count());
    NodeRoles roles;
    roles.highway.assign(n, 1);
    roles.popularity.assign(n, 1.0);
    switch (p.model) {
    case Model::kleinberg: break;
    case Model::kh:
        if constexpr (M::is_grid) {
            const int s = exact_sqrt(p.k);
            for (NodeId u = 0; u < n; ++u) {
                const Coord c = metric.coord(u);
                roles.highway[u] = (c.x % s == 0 && c.y % s == 0) ? 1 : 0;
            }
        }
        break;
    case Model::rh: {
        const double prob = 1.0 / p.k;
        for (NodeId u = 0; u < n; ++u) {
            RngStream s(seed, u, StreamPurpose::role);
            roles.highway[u] = s.bernoulli(prob) ? 1 : 0;
        }
        break;
    }
    case Model::wnpa: {
        const int side = detail::side_of(metric, p);
        for (NodeId u = 0; u < n; ++u) {
            RngStream s(seed, u, StreamPurpose::popularity);
            roles.popularity[u] = sample_popularity(s, p.epsilon);
            roles.highway[u] = detail::in_popularity_band(roles.popularity[u], side, p.window) ? 1 : 0;
        }
        break;
    }
    }
    return roles;
}

// Expected number of long-range connections node u asks for.
inline double connection_rate(const ModelParams& p, bool highway, double popularity) {
    switch (p.model) {
    case Model::kleinberg: return p.q;
    case Model::kh:
    case Model::rh: return highway ? p.q * p.k : 0.0;
    case Model::wnpa:
        return p.wnpa_literal_rate ? p.epsilon * p.q * popularity : p.epsilon * p.q * popularity / (1.0 + p.epsilon);
    }
    return 0.0;
}

namespace detail {

// Nodes sorted by (popularity, id); a WNPA window is a contiguous range.
struct PopularityIndex {
    std::vector<NodeId> order;
    std::vector<double> sorted;

    explicit PopularityIndex(const std::vector<double>& popularity) {
        order.resize(popularity.size());
        for (NodeId i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
            return popularity[a] < popularity[b] || (popularity[a] == popularity[b] && a < b);
        });
        sorted.resize(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = popularity[order[i]];
    }

    // Index range of nodes v with lo <= k_v <= hi.
    std::pair<std::size_t, std::size_t> range(double lo, double hi) const {
        const auto first = std::partition_point(sorted.begin(), sorted.end(), [&](double x) { return x < lo; });
        const auto last = std::partition_point(first, sorted.end(), [&](double x) { return x <= hi; });
        return {static_cast<std::size_t>(first - sorted.begin()), static_cast<std::size_t>(last - sorted.begin())};
    }
};

// Per-model candidate set of node u, as an explicit list plus a predicate.
struct CandidateSet {
    std::span<const NodeId> list; // may contain u
    bool contains_self = false;
    bool everything = false; // every node except u
    std::uint64_t size = 0;  // candidates excluding u
};

} // namespace detail

template <MetricSpace M>
GraphInstance<M> generate_on_metric(const ModelParams& params, std::shared_ptr<const M> metric, std::uint64_t seed,
                                    unsigned threads = 0) {
    if (!metric) throw InputError("null metric");
    validate(params, metric->node_count(), M::is_grid);
    if constexpr (M::is_grid) {
        if (params.n != metric->side() || params.wraparound != metric->wraparound() ||
            params.p != metric->local_radius())
            throw InputError("model parameters do not match the grid metric");
    }

    GraphInstance<M> g;
    g.metric = metric;
    g.params = params;
    g.seed = seed;
    auto roles = assign_roles(params, *metric, seed);
    g.highway = std::move(roles.highway);
    g.popularity = std::move(roles.popularity);
    const auto n = static_cast<std::size_t>(metric->node_count());
    const int side = detail::side_of(*metric, params);

    std::vector<NodeId> highway_list;
    for (NodeId u = 0; u < n; ++u)
        if (g.highway[u]) highway_list.push_back(u);
    g.stats.highway_count = highway_list.size();
    if (params.model == Model::rh && highway_list.empty())
        throw GenerationError("rh drew zero highway nodes; reseed or lower k");
    if (params.model == Model::rh && side >= 2 && params.k > static_cast<double>(n) / (2.0 * log2_side(side)))
        g.stats.warnings.push_back("k is close to n^2/log n; the average degree guarantee is weak here");

    std::vector<NodeId> all_nodes;
    std::optional<detail::PopularityIndex> pop_index;
    if (params.model == Model::wnpa) pop_index.emplace(g.popularity);
    if constexpr (!M::is_grid) {
        if (params.model == Model::kleinberg) {
            all_nodes.resize(n);
            for (NodeId u = 0; u < n; ++u) all_nodes[u] = u;
        }
    }

    // Samplers shared read-only by all workers.
    std::optional<GridMetric> kh_lattice;
    std::optional<GridRingSampler> ring, kh_ring;
    int kh_step = 1;
    if constexpr (M::is_grid) {
        ring.emplace(*metric, params.r);
        if (params.model == Model::kh) {
            kh_step = exact_sqrt(params.k);
            kh_lattice.emplace(GridTopology{metric->side() / kh_step, metric->wraparound()});
            kh_ring.emplace(*kh_lattice, params.r);
        }
    }

    std::vector<std::vector<NodeId>> adjacency(n);
    std::atomic<std::uint64_t> requested{0}, placed{0}, repeats{0}, empty{0}, sssp{0};
    const bool uniform_window =
        params.model == Model::wnpa && params.window_weighting == WindowWeighting::uniform;

    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
        PrefixSampler table;
        std::vector<NodeId> out;
        for (std::size_t idx = begin; idx < end; ++idx) {
            const auto u = static_cast<NodeId>(idx);
            RngStream count_stream(seed, u, StreamPurpose::edge_count);
            const std::uint64_t count =
                connection_count(connection_rate(params, g.highway[u] != 0, g.popularity[u]), count_stream);
            if (count == 0) continue;
            requested.fetch_add(count, std::memory_order_relaxed);
            RngStream rng(seed, u, StreamPurpose::edge_targets);

            // Candidate set of u.
            detail::CandidateSet cands;
            double window_lo = 0, window_hi = 0;
            switch (params.model) {
            case Model::kleinberg:
                cands.everything = true;
                cands.list = all_nodes;
                cands.contains_self = true;
                cands.size = n - 1;
                break;
            case Model::kh:
            case Model::rh:
                cands.everything = highway_list.size() == n;
                cands.list = highway_list;
                cands.contains_self = g.highway[u] != 0;
                cands.size = highway_list.size() - (cands.contains_self ? 1 : 0);
                break;
            case Model::wnpa: {
                window_lo = g.popularity[u] / params.window;
                window_hi = g.popularity[u] * params.window;
                const auto [a, b] = pop_index->range(window_lo, window_hi);
                cands.list = std::span<const NodeId>(pop_index->order).subspan(a, b - a);
                cands.contains_self = true;
                cands.size = (b - a) - 1;
                cands.everything = cands.size == n - 1;
                break;
            }
            }
            auto eligible = [&](NodeId v) {
                if (v == u) return false;
                switch (params.model) {
                case Model::kleinberg: return true;
                case Model::kh:
                case Model::rh: return g.highway[v] != 0;
                case Model::wnpa: return g.popularity[v] >= window_lo && g.popularity[v] <= window_hi;
                }
                return false;
            };

            std::uint64_t repeated = 0;
            if constexpr (M::is_grid) {
                if (cands.size == 0) {
                    empty.fetch_add(1, std::memory_order_relaxed);
                    continue;
                }
                if (params.model == Model::kh) {
                    // The highway is itself a lattice with distances scaled by sqrt(k).
                    const Coord c = metric->coord(u);
                    const NodeId hu = kh_lattice->id({c.x / kh_step, c.y / kh_step});
                    repeated = draw_targets(count, out, [&] {
                        const Coord hc = kh_lattice->coord(kh_ring->sample(hu, rng));
                        return metric->id({hc.x * kh_step, hc.y * kh_step});
                    });
                } else if (uniform_window) {
                    repeated = draw_targets(count, out, [&] {
                        for (;;) {
                            const NodeId v = cands.list[rng.below(cands.list.size())];
                            if (v != u) return v;
                        }
                    });
                } else if (cands.everything) {
                    repeated = draw_targets(count, out, [&] { return ring->sample(u, rng); });
                } else {
                    // Rejection from the whole-grid sampler costs about count*N/|C|
                    // proposals; an explicit table costs |C|.
                    const double proposals =
                        static_cast<double>(count) * static_cast<double>(n) / static_cast<double>(cands.size);
                    const bool explicit_table = proposals > 4.0 * static_cast<double>(cands.size);
                    const auto cap = static_cast<std::uint64_t>(64.0 * proposals) + 1024;
                    std::uint64_t spent = 0;
                    bool table_ready = false;
                    auto build_table = [&] {
                        table.clear();
                        for (NodeId v : cands.list)
                            if (v != u) table.add(v, distance_weight(metric->distance(u, v), params.r));
                        table_ready = true;
                    };
                    if (explicit_table) build_table();
                    repeated = draw_targets(count, out, [&]() -> NodeId {
                        if (!table_ready) {
                            while (spent < cap) {
                                ++spent;
                                const NodeId v = ring->sample(u, rng);
                                if (eligible(v)) return v;
                            }
                            build_table();
                        }
                        return table.sample(rng);
                    });
                }
            } else {
                // Road metric: one exact single-source run per drawing node.
                sssp.fetch_add(1, std::memory_order_relaxed);
                const auto dist = metric->distances_from(u);
                table.clear();
                auto consider = [&](NodeId v) {
                    if (v == u || dist[v] == kUnreachable || dist[v] == 0) return;
                    table.add(v, uniform_window ? 1.0 : distance_weight(dist[v], params.r));
                };
                if (params.model == Model::kleinberg) {
                    for (NodeId v = 0; v < n; ++v) consider(v);
                } else {
                    for (NodeId v : cands.list) consider(v);
                }
                if (table.size() == 0) {
                    empty.fetch_add(1, std::memory_order_relaxed);
                    continue;
                }
                repeated = draw_targets(count, out, [&] { return table.sample(rng); });
            }
            placed.fetch_add(count, std::memory_order_relaxed);
            repeats.fetch_add(repeated, std::memory_order_relaxed);
            adjacency[u] = out;
        }
    });

    g.stats.requested_edges = requested.load();
    g.stats.placed_connections = placed.load();
    g.stats.repeated_draws = repeats.load();
    g.stats.empty_window_nodes = empty.load();
    g.stats.sssp_runs = sssp.load();
    if constexpr (!M::is_grid) {
        if (metric->graph().component_count() > 1)
            g.stats.warnings.push_back("road network has " + std::to_string(metric->graph().component_count()) +
                                       " components; targets restricted to the source's component");
    }

    if (!params.directed) {
        // Mirror every edge and dedupe.
        std::vector<std::vector<NodeId>> mirrored(n);
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v : adjacency[u]) mirrored[v].push_back(u);
        for (NodeId u = 0; u < n; ++u) {
            auto& a = adjacency[u];
            a.insert(a.end(), mirrored[u].begin(), mirrored[u].end());
            std::sort(a.begin(), a.end());
            a.erase(std::unique(a.begin(), a.end()), a.end());
        }
    }

    g.offsets.assign(n + 1, 0);
    for (std::size_t u = 0; u < n; ++u) g.offsets[u + 1] = g.offsets[u] + adjacency[u].size();
    g.targets.resize(g.offsets[n]);
    for (std::size_t u = 0; u < n; ++u) {
        std::copy(adjacency[u].begin(), adjacency[u].end(), g.targets.begin() + static_cast<std::ptrdiff_t>(g.offsets[u]));
        std::vector<NodeId>().swap(adjacency[u]);
    }
    g.stats.realized_edges = g.targets.size();

    if constexpr (M::is_grid) {
        if (params.model == Model::rh && params.rh_local_variant) {
            // Link each highway node to the highway node nearest the centre of
            // each of the 8 adjacent balls of radius 3 sqrt(k log n).
            const double radius = 3.0 * std::sqrt(params.k * log2_side(side));
            const auto reach = static_cast<Distance>(std::floor(radius));
            const int spacing = static_cast<int>(2 * reach + 1);
            std::vector<std::vector<NodeId>> links(n);
            for (NodeId u : highway_list) {
                for (int a = -1; a <= 1; ++a)
                    for (int b = -1; b <= 1; ++b) {
                        if (a == 0 && b == 0) continue;
                        const auto center = metric->offset(u, a * spacing, b * spacing);
                        if (!center) continue;
                        std::optional<NodeId> pick;
                        for (Distance j = 0; j <= reach && !pick; ++j)
                            metric->for_each_in_sphere(*center, j, [&](NodeId v) {
                                if (v != u && g.highway[v] && (!pick || v < *pick)) pick = v;
                            });
                        if (pick) {
                            links[u].push_back(*pick);
                            links[*pick].push_back(u);
                        }
                    }
            }
            g.link_offsets.assign(n + 1, 0);
            for (std::size_t u = 0; u < n; ++u) {
                std::sort(links[u].begin(), links[u].end());
                links[u].erase(std::unique(links[u].begin(), links[u].end()), links[u].end());
                g.link_offsets[u + 1] = g.link_offsets[u] + links[u].size();
            }
            for (std::size_t u = 0; u < n; ++u) g.link_targets.insert(g.link_targets.end(), links[u].begin(), links[u].end());
        }
    }
    return g;
}

using GridInstance = GraphInstance<GridMetric>;
using RoadInstance = GraphInstance<RoadMetric>;

inline std::shared_ptr<const GridMetric> make_grid(const ModelParams& p) {
    return std::make_shared<const GridMetric>(GridTopology{p.n, p.wraparound}, p.p);
}

inline GridInstance generate_kleinberg(ModelParams params, std::uint64_t seed, unsigned threads = 0) {
    params.model = Model::kleinberg;
    return generate_on_metric(params, make_grid(params), seed, threads);
}

inline GridInstance generate_kh(int n, double k, double Q, std::uint64_t seed, unsigned threads = 0) {
    ModelParams p;
    p.model = Model::kh;
    p.n = n;
    p.k = k;
    p.q = Q;
    return generate_on_metric(p, make_grid(p), seed, threads);
}

inline GridInstance generate_rh(int n, double k, double Q, std::uint64_t seed, bool variant_local = false,
                                unsigned threads = 0) {
    ModelParams p;
    p.model = Model::rh;
    p.n = n;
    p.k = k;
    p.q = Q;
    p.rh_local_variant = variant_local;
    return generate_on_metric(p, make_grid(p), seed, threads);
}

inline GridInstance generate_wnpa(int n, double Q, double eps, double A, std::uint64_t seed, unsigned threads = 0,
                                  WindowWeighting weighting = WindowWeighting::inverse_square) {
    ModelParams p;
    p.model = Model::wnpa;
    p.n = n;
    p.q = Q;
    p.epsilon = eps;
    p.window = A;
    p.window_weighting = weighting;
    return generate_on_metric(p, make_grid(p), seed, threads);
}

// Dispatches on params.model over a grid built from params.
inline GridInstance generate(const ModelParams& params, std::uint64_t seed, unsigned threads = 0) {
    return generate_on_metric(params, make_grid(params), seed, threads);
}

} // namespace smallworld
