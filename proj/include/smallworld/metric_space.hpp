#pragma once

// Grid geometry: n x n lattice (torus by default), lattice distance, ball and
// sphere enumeration by ring walking, and the MetricSpace concept that road
// networks also satisfy.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"

namespace smallworld {

using NodeId = std::uint32_t;
using Distance = std::int64_t;

inline constexpr Distance kUnreachable = -1;

struct GridTopology {
    int n = 0;
    bool wraparound = true;

    std::uint64_t node_count() const noexcept { return static_cast<std::uint64_t>(n) * n; }

    // Largest distance between two nodes: 2*floor(n/2) on the torus.
    Distance max_distance() const noexcept { return wraparound ? 2 * (n / 2) : 2 * static_cast<Distance>(n - 1); }

    bool operator==(const GridTopology&) const = default;
};

struct Coord {
    int x = 0;
    int y = 0;
    bool operator==(const Coord&) const = default;
};

namespace detail {

inline Distance axis_distance(int a, int b, int n, bool wrap) noexcept {
    const int delta = std::abs(a - b);
    return wrap ? std::min(delta, n - delta) : delta;
}

// Offset (dx, dy) of the i-th point on the radius-j ring of the infinite
// lattice, i in [0, 4j).
inline Coord ring_offset(Distance j, Distance i) noexcept {
    const auto t = static_cast<int>(i % j);
    const auto jj = static_cast<int>(j);
    switch (i / j) {
    case 0: return {jj - t, t};
    case 1: return {-t, jj - t};
    case 2: return {-(jj - t), -t};
    default: return {t, -(jj - t)};
    }
}

} // namespace detail

// d(u,v) = min(dx, n-dx) + min(dy, n-dy) on the torus, Manhattan otherwise.
inline Distance lattice_distance(Coord u, Coord v, const GridTopology& topo) {
    auto valid = [&](Coord c) { return c.x >= 0 && c.y >= 0 && c.x < topo.n && c.y < topo.n; };
    if (!valid(u) || !valid(v))
        throw InputError("lattice_distance: coordinate outside " + std::to_string(topo.n) + "x" +
                         std::to_string(topo.n) + " grid");
    return detail::axis_distance(u.x, v.x, topo.n, topo.wraparound) +
           detail::axis_distance(u.y, v.y, topo.n, topo.wraparound);
}

// Distance from every node to a fixed target.
template <class V>
concept TargetView = requires(const V& v, NodeId x) {
    { v(x) } -> std::convertible_to<Distance>;
};

// What generators and routers need from an underlying space.
template <class M>
concept MetricSpace = requires(const M& m, NodeId u, NodeId v) {
    { m.node_count() } -> std::convertible_to<std::uint64_t>;
    { m.distance(u, v) } -> std::convertible_to<Distance>;
    { m.to(v) } -> TargetView;
    m.for_each_local(u, [](NodeId) {});
    { M::is_grid } -> std::convertible_to<bool>;
};

class GridMetric {
public:
    static constexpr bool is_grid = true;

    explicit GridMetric(GridTopology topo, int local_radius = 1) : topo_(topo), local_radius_(local_radius) {
        if (topo.n <= 0) throw ParameterError("grid side n must be positive");
        if (topo.node_count() > 0xFFFFFFFFULL) throw ParameterError("grid too large for 32-bit node ids");
        if (local_radius < 0) throw ParameterError("local radius p must be >= 0");
        // Axis offsets that represent each residue once with minimal |d|.
        if (topo.wraparound) {
            lo_ = -((topo.n + 1) / 2 - 1);
            hi_ = topo.n / 2;
        }
    }

    const GridTopology& topology() const noexcept { return topo_; }
    int side() const noexcept { return topo_.n; }
    bool wraparound() const noexcept { return topo_.wraparound; }
    int local_radius() const noexcept { return local_radius_; }
    std::uint64_t node_count() const noexcept { return topo_.node_count(); }
    Distance max_distance() const noexcept { return topo_.max_distance(); }

    Coord coord(NodeId u) const noexcept {
        return {static_cast<int>(u % static_cast<NodeId>(topo_.n)), static_cast<int>(u / static_cast<NodeId>(topo_.n))};
    }
    NodeId id(Coord c) const noexcept { return static_cast<NodeId>(c.y) * static_cast<NodeId>(topo_.n) + static_cast<NodeId>(c.x); }

    NodeId checked_id(Coord c) const {
        if (c.x < 0 || c.y < 0 || c.x >= topo_.n || c.y >= topo_.n) throw InputError("coordinate outside grid");
        return id(c);
    }

    Distance distance(NodeId u, NodeId v) const noexcept {
        const Coord a = coord(u), b = coord(v);
        return detail::axis_distance(a.x, b.x, topo_.n, topo_.wraparound) +
               detail::axis_distance(a.y, b.y, topo_.n, topo_.wraparound);
    }

    // Node at u + (dx, dy). On the torus any offset wraps; off-grid offsets
    // on the plain grid give nullopt.
    std::optional<NodeId> offset(NodeId u, int dx, int dy) const noexcept {
        const Coord c = coord(u);
        int x = c.x + dx, y = c.y + dy;
        if (topo_.wraparound) {
            x %= topo_.n;
            y %= topo_.n;
            if (x < 0) x += topo_.n;
            if (y < 0) y += topo_.n;
        } else if (x < 0 || y < 0 || x >= topo_.n || y >= topo_.n) {
            return std::nullopt;
        }
        return id({x, y});
    }

    // Whether (dx, dy) from u is a distinct node at exactly |dx|+|dy|.
    std::optional<NodeId> ring_point(NodeId u, Coord off) const noexcept {
        if (topo_.wraparound) {
            if (off.x < lo_ || off.x > hi_ || off.y < lo_ || off.y > hi_) return std::nullopt;
        }
        return offset(u, off.x, off.y);
    }

    template <class F>
    void for_each_in_sphere(NodeId u, Distance j, F&& f) const {
        if (j < 0) return;
        if (j == 0) {
            f(u);
            return;
        }
        if (j > max_distance()) return;
        for (Distance i = 0; i < 4 * j; ++i)
            if (auto v = ring_point(u, detail::ring_offset(j, i))) f(*v);
    }

    template <class F>
    void for_each_in_ball(NodeId u, Distance d, F&& f) const {
        const Distance top = std::min(d, max_distance());
        for (Distance j = 0; j <= top; ++j) for_each_in_sphere(u, j, f);
    }

    // Local contacts: every node of B_p(u) except u.
    template <class F>
    void for_each_local(NodeId u, F&& f) const {
        for (Distance j = 1; j <= local_radius_; ++j) for_each_in_sphere(u, j, f);
    }

    // |S_j(u)|. On the torus this does not depend on u.
    std::uint64_t sphere_size(NodeId u, Distance j) const {
        std::uint64_t count = 0;
        for_each_in_sphere(u, j, [&](NodeId) { ++count; });
        return count;
    }

    class Target {
    public:
        Target(const GridMetric& m, NodeId t) : m_(&m), t_(t) {}
        Distance operator()(NodeId x) const noexcept { return m_->distance(x, t_); }
        NodeId target() const noexcept { return t_; }

    private:
        const GridMetric* m_;
        NodeId t_;
    };

    Target to(NodeId t) const { return Target(*this, t); }

    bool operator==(const GridMetric& o) const noexcept { return topo_ == o.topo_ && local_radius_ == o.local_radius_; }

private:
    GridTopology topo_;
    int local_radius_ = 1;
    int lo_ = -(1 << 30);
    int hi_ = 1 << 30;
};

static_assert(MetricSpace<GridMetric>);

// Nodes within distance d of u, sorted by id. Includes u.
template <class M>
std::vector<NodeId> ball_nodes(NodeId u, Distance d, const M& metric) {
    if (d < 0) throw InputError("ball radius must be >= 0");
    if (u >= metric.node_count()) throw InputError("node id out of range");
    std::vector<NodeId> out;
    metric.for_each_in_ball(u, d, [&](NodeId v) { out.push_back(v); });
    std::sort(out.begin(), out.end());
    return out;
}

// Nodes at distance exactly j from u, sorted by id.
template <class M>
std::vector<NodeId> sphere_nodes(NodeId u, Distance j, const M& metric) {
    if (j < 0) throw InputError("sphere radius must be >= 0");
    if (u >= metric.node_count()) throw InputError("node id out of range");
    std::vector<NodeId> out;
    metric.for_each_in_sphere(u, j, [&](NodeId v) { out.push_back(v); });
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace smallworld
