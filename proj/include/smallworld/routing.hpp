#pragma once

// Decentralized greedy routing. Each router only looks at the current
// holder's contacts and their distances to the target.
//
// Traces split hops into three phases: 0 = reaching the highway, 1 = on the
// highway, 2 = final approach. Plain greedy routing counts everything as
// phase 1 (every node is a highway node in Kleinberg's model).

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "metric_space.hpp"
#include "models.hpp"

namespace smallworld {

enum class Termination { arrived, hop_limit, stuck };

inline std::string to_string(Termination t) {
    switch (t) {
    case Termination::arrived: return "arrived";
    case Termination::hop_limit: return "hop_limit";
    case Termination::stuck: return "stuck";
    }
    return "?";
}

enum class Policy { kleinberg, kh_known, kh_unknown, rh, wnpa_highway, full_greedy };

inline std::string to_string(Policy p) {
    switch (p) {
    case Policy::kleinberg: return "kleinberg";
    case Policy::kh_known: return "kh_known";
    case Policy::kh_unknown: return "kh_unknown";
    case Policy::rh: return "rh";
    case Policy::wnpa_highway: return "wnpa_highway";
    case Policy::full_greedy: return "full_greedy";
    }
    return "?";
}

inline Policy parse_policy(const std::string& s) {
    for (Policy p : {Policy::kleinberg, Policy::kh_known, Policy::kh_unknown, Policy::rh, Policy::wnpa_highway,
                     Policy::full_greedy})
        if (to_string(p) == s) return p;
    throw ParameterError("unknown policy '" + s +
                         "' (expected kleinberg, kh_known, kh_unknown, rh, wnpa_highway or full_greedy)");
}

// The router each model is analysed with.
inline Policy default_policy(Model m) {
    switch (m) {
    case Model::kleinberg: return Policy::kleinberg;
    case Model::kh: return Policy::kh_known;
    case Model::rh: return Policy::rh;
    case Model::wnpa: return Policy::full_greedy;
    }
    return Policy::full_greedy;
}

struct RouteTrace {
    NodeId source = 0;
    NodeId target = 0;
    std::uint64_t hops = 0;
    std::vector<NodeId> path;
    std::array<std::uint64_t, 3> phase_hops{0, 0, 0};
    std::uint64_t dead_end_events = 0;
    Termination terminated = Termination::arrived;
};

struct RoutingOptions {
    double c = 1.0;              // RH final-approach factor
    std::uint64_t hop_limit = 0; // 0: 16 n on grids, max(16 n, |V|) on roads
    bool record_path = true;
};

template <MetricSpace M>
std::uint64_t default_hop_limit(const GraphInstance<M>& g) {
    const auto side = static_cast<std::uint64_t>(detail::side_of(*g.metric, g.params));
    if constexpr (M::is_grid) return 16 * side;
    else return std::max<std::uint64_t>(16 * side, g.node_count());
}

namespace detail {

template <MetricSpace M, TargetView V>
class Walk {
public:
    Walk(const GraphInstance<M>& g, const V& dist, NodeId s, NodeId t, const RoutingOptions& opts)
        : g_(g), dist_(dist), limit_(opts.hop_limit ? opts.hop_limit : default_hop_limit(g)),
          record_(opts.record_path), cur_(s) {
        const auto side = static_cast<std::uint64_t>(side_of(*g.metric, g.params));
        if (opts.hop_limit && opts.hop_limit < 4 * side)
            throw ParameterError("hop limit must be at least 4n = " + std::to_string(4 * side));
        trace_.source = s;
        trace_.target = t;
        if (record_) trace_.path.push_back(s);
    }

    NodeId current() const noexcept { return cur_; }
    Distance here() const { return dist_(cur_); }
    bool arrived() const { return cur_ == trace_.target; }
    bool done() const { return finished_ || arrived(); }
    void set_phase(int p) noexcept { phase_ = p; }
    void dead_end() noexcept { ++trace_.dead_end_events; }

    bool step(NodeId next) {
        if (trace_.hops >= limit_) {
            finish(Termination::hop_limit);
            return false;
        }
        cur_ = next;
        ++trace_.hops;
        ++trace_.phase_hops[static_cast<std::size_t>(phase_)];
        if (record_) trace_.path.push_back(next);
        return true;
    }

    void finish(Termination t) {
        finished_ = true;
        trace_.terminated = t;
    }

    // Best (distance, id) among the candidates visited by each(f).
    template <class Each>
    std::optional<NodeId> best(Each&& each) const {
        std::optional<NodeId> pick;
        Distance pick_d = 0;
        each([&](NodeId v) {
            const Distance d = dist_(v);
            if (d == kUnreachable) return;
            if (!pick || d < pick_d || (d == pick_d && v < *pick)) {
                pick = v;
                pick_d = d;
            }
        });
        return pick;
    }

    // One greedy move over the given candidates; false when no candidate
    // improves on the current distance.
    template <class Each>
    bool greedy_move(Each&& each) {
        auto v = best(each);
        if (!v || dist_(*v) >= here()) return false;
        return step(*v);
    }

    // Greedy over local contacts only.
    bool lattice_move() {
        const NodeId u = cur_;
        if (!greedy_move([&](auto&& f) { g_.metric->for_each_local(u, f); })) {
            if (!finished_) finish(Termination::stuck);
            return false;
        }
        return true;
    }

    RouteTrace take() {
        if (!finished_) trace_.terminated = arrived() ? Termination::arrived : Termination::stuck;
        return std::move(trace_);
    }

    const GraphInstance<M>& graph() const noexcept { return g_; }
    const V& dist() const noexcept { return dist_; }

private:
    const GraphInstance<M>& g_;
    const V& dist_;
    std::uint64_t limit_;
    bool record_;
    NodeId cur_;
    int phase_ = 1;
    bool finished_ = false;
    RouteTrace trace_;
};

template <MetricSpace M>
void check_endpoints(const GraphInstance<M>& g, NodeId s, NodeId t) {
    if (s >= g.node_count() || t >= g.node_count()) throw InputError("route endpoint out of range");
}

// Phase index floor(log2 d); -1 at the target.
inline int distance_class(Distance d) noexcept {
    if (d <= 0) return -1;
    int c = 0;
    while (d > 1) {
        d >>= 1;
        ++c;
    }
    return c;
}

// Which nodes form the highway and which long-range edges RH routing may use.
template <MetricSpace M>
struct HighwayView {
    const GraphInstance<M>* g;
    double k;
    bool band_only; // WNPA: only edges between two band nodes

    bool is_highway(NodeId u) const noexcept { return g->highway[u] != 0; }

    template <class F>
    void for_each_highway_contact(NodeId u, F&& f) const {
        for (NodeId v : g->long_range(u))
            if (!band_only || g->highway[v]) f(v);
        if (!band_only)
            for (NodeId v : g->highway_links(u)) f(v);
    }
};

template <MetricSpace M, TargetView V>
RouteTrace route_highway_discipline(const GraphInstance<M>& g, const HighwayView<M>& view, const V& dist, NodeId s,
                                    NodeId t, const RoutingOptions& opts) {
    Walk<M, V> w(g, dist, s, t, opts);
    const int side = side_of(*g.metric, g.params);
    const double log_n = log2_side(side);
    const auto skip = static_cast<Distance>(std::ceil(4.0 * std::sqrt(view.k)));
    const double final_radius = opts.c * (view.k + log_n);
    const bool large_k = view.k >= log_n;

    auto in_final = [&] { return static_cast<double>(w.here()) <= final_radius; };

    // Phase 0: lattice-greedy until a highway node.
    w.set_phase(0);
    while (!w.done() && !view.is_highway(w.current()))
        if (!w.lattice_move()) break;

    w.set_phase(1);
    while (!w.done()) {
        if (in_final()) break;
        const NodeId u = w.current();
        const Distance du = w.here();
        const int cls = distance_class(du);
        auto halving = w.best([&](auto&& f) {
            view.for_each_highway_contact(u, [&](NodeId v) {
                if (distance_class(dist(v)) < cls) f(v);
            });
        });
        if (halving) {
            if (!w.step(*halving)) break;
            continue;
        }
        if (large_k) {
            auto far = w.best([&](auto&& f) {
                view.for_each_highway_contact(u, [&](NodeId v) {
                    if (du - dist(v) >= skip) f(v);
                });
            });
            if (far) {
                if (!w.step(*far)) break;
                continue;
            }
        }
        // Leave the highway: walk 4 sqrt(k) lattice hops, then keep walking
        // until the next highway node.
        w.dead_end();
        for (Distance i = 0; i < skip && !w.done() && !in_final(); ++i)
            if (!w.lattice_move()) break;
        while (!w.done() && !in_final() && !view.is_highway(w.current()))
            if (!w.lattice_move()) break;
    }

    w.set_phase(2);
    while (!w.done())
        if (!w.lattice_move()) break;
    return w.take();
}

} // namespace detail

// Plain greedy routing over every contact (local, highway-local, long-range).
template <MetricSpace M>
RouteTrace greedy_route(const GraphInstance<M>& g, NodeId s, NodeId t, const RoutingOptions& opts = {}) {
    detail::check_endpoints(g, s, t);
    const auto dist = g.metric->to(t);
    detail::Walk w(g, dist, s, t, opts);
    while (!w.done()) {
        const NodeId u = w.current();
        if (!w.greedy_move([&](auto&& f) { g.for_each_contact(u, f); })) {
            if (!w.done()) w.finish(Termination::stuck);
            break;
        }
    }
    return w.take();
}

// Three-step KH routing: to the highway, greedy on the highway until within
// sqrt(k) of t (or no highway move improves), then lattice-greedy.
template <MetricSpace M>
RouteTrace route_kh(const GraphInstance<M>& g, NodeId s, NodeId t, bool known_layout, const RoutingOptions& opts = {}) {
    if (g.params.model != Model::kh) throw PolicyError("kh routing needs a kh instance");
    detail::check_endpoints(g, s, t);
    if constexpr (!M::is_grid) {
        throw PolicyError("kh routing needs a grid topology");
    } else {
        const GridMetric& m = *g.metric;
        const int step = g.highway_spacing();
        const auto dist = m.to(t);
        detail::Walk w(g, dist, s, t, opts);

        w.set_phase(0);
        if (!g.is_highway(s)) {
            if (known_layout) {
                // Nearest highway point: round each coordinate to a multiple of sqrt(k).
                auto round_axis = [&](int x) {
                    const int rem = x % step;
                    int down = x - rem, up = x - rem + step;
                    if (m.wraparound()) up %= m.side();
                    else if (up >= m.side()) return down;
                    return rem <= step - rem ? down : up;
                };
                const Coord c = m.coord(s);
                const auto h = m.id({round_axis(c.x), round_axis(c.y)});
                const auto to_h = m.to(h);
                while (!w.done() && w.current() != h) {
                    const NodeId u = w.current();
                    std::optional<NodeId> pick;
                    Distance pick_d = 0;
                    m.for_each_local(u, [&](NodeId v) {
                        const Distance d = to_h(v);
                        if (!pick || d < pick_d || (d == pick_d && v < *pick)) {
                            pick = v;
                            pick_d = d;
                        }
                    });
                    if (!pick || pick_d >= to_h(u)) {
                        w.finish(Termination::stuck);
                        break;
                    }
                    if (!w.step(*pick)) break;
                }
            } else {
                // Serpentine scan of a sqrt(k) x sqrt(k) block.
                const Coord c = m.coord(s);
                const int sx = (m.wraparound() || c.x + step - 1 < m.side()) ? 1 : -1;
                const int sy = (m.wraparound() || c.y + step - 1 < m.side()) ? 1 : -1;
                for (int row = 0; row < step && !w.done() && !g.is_highway(w.current()); ++row) {
                    for (int col = 1; col < step && !w.done() && !g.is_highway(w.current()); ++col) {
                        const int dx = (row % 2 == 0) ? sx : -sx;
                        if (!w.step(*m.offset(w.current(), dx, 0))) break;
                    }
                    if (row + 1 < step && !w.done() && !g.is_highway(w.current()))
                        if (!w.step(*m.offset(w.current(), 0, sy))) break;
                }
            }
        }

        w.set_phase(1);
        while (!w.done() && g.is_highway(w.current()) && w.here() >= step) {
            const NodeId u = w.current();
            const bool moved = w.greedy_move([&](auto&& f) {
                if (step == 1) m.for_each_local(u, f);
                else g.for_each_highway_local(u, f);
                for (NodeId v : g.long_range(u)) f(v);
            });
            if (!moved) break;
        }

        w.set_phase(2);
        while (!w.done())
            if (!w.lattice_move()) break;
        return w.take();
    }
}

// RH routing: halving long-range hops when available; for k >= log n any
// long-range hop gaining >= 4 sqrt(k); otherwise leave the highway on the
// lattice. Final approach within c (k + log n) of t is lattice-greedy.
template <MetricSpace M>
RouteTrace route_rh(const GraphInstance<M>& g, NodeId s, NodeId t, double c = 1.0, RoutingOptions opts = {}) {
    if (g.params.model != Model::rh) throw PolicyError("rh routing needs an rh instance");
    detail::check_endpoints(g, s, t);
    if constexpr (!M::is_grid) {
        throw PolicyError("rh routing needs a grid topology");
    } else {
        opts.c = c;
        const auto dist = g.metric->to(t);
        return detail::route_highway_discipline(g, detail::HighwayView<M>{&g, g.params.k, false}, dist, s, t, opts);
    }
}

// restricted: the analysed variant, RH discipline on the popularity band
// [log n, A log n] with k' = log^(1+eps) n and only band-to-band long-range
// edges. Otherwise plain greedy over every edge.
template <MetricSpace M>
RouteTrace route_wnpa(const GraphInstance<M>& g, NodeId s, NodeId t, bool restricted, const RoutingOptions& opts = {}) {
    if (g.params.model != Model::wnpa) throw PolicyError("wnpa routing needs a wnpa instance");
    detail::check_endpoints(g, s, t);
    if (!restricted) return greedy_route(g, s, t, opts);
    if constexpr (!M::is_grid) {
        throw PolicyError("restricted wnpa routing needs a grid topology");
    } else {
        const double log_n = log2_side(g.metric->side());
        const double k_band = std::pow(log_n, 1.0 + g.params.epsilon);
        const auto dist = g.metric->to(t);
        return detail::route_highway_discipline(g, detail::HighwayView<M>{&g, k_band, true}, dist, s, t, opts);
    }
}

template <MetricSpace M>
RouteTrace route(const GraphInstance<M>& g, NodeId s, NodeId t, Policy policy, const RoutingOptions& opts = {}) {
    switch (policy) {
    case Policy::kleinberg:
        if (g.params.model != Model::kleinberg) throw PolicyError("kleinberg routing needs a kleinberg instance");
        return greedy_route(g, s, t, opts);
    case Policy::full_greedy: return greedy_route(g, s, t, opts);
    case Policy::kh_known: return route_kh(g, s, t, true, opts);
    case Policy::kh_unknown: return route_kh(g, s, t, false, opts);
    case Policy::rh: return route_rh(g, s, t, opts.c, opts);
    case Policy::wnpa_highway: return route_wnpa(g, s, t, true, opts);
    }
    throw PolicyError("unknown policy");
}

// Checks that consecutive path nodes are joined by an edge of g and that
// phase hops add up. Used by tests and by run_trials in debug builds.
template <MetricSpace M>
bool trace_is_valid(const GraphInstance<M>& g, const RouteTrace& tr) {
    if (tr.path.empty() || tr.path.front() != tr.source) return false;
    if (tr.path.size() != tr.hops + 1) return false;
    if (tr.phase_hops[0] + tr.phase_hops[1] + tr.phase_hops[2] != tr.hops) return false;
    if (tr.terminated == Termination::arrived && tr.path.back() != tr.target) return false;
    for (std::size_t i = 0; i + 1 < tr.path.size(); ++i) {
        bool found = false;
        g.for_each_contact(tr.path[i], [&](NodeId v) { found = found || v == tr.path[i + 1]; });
        if (!found) return false;
    }
    return true;
}

} // namespace smallworld
