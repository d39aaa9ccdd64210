#pragma once

// Randomness used by the generators: power-law popularity, stochastic
// rounding of fractional connection counts and distance-weighted target
// selection (P(v) proportional to d(u,v)^-r).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "error.hpp"
#include "metric_space.hpp"
#include "rng.hpp"

namespace smallworld {

// Popularity law with density (1+eps) k^-(2+eps) on [1, inf), so that
// P(K >= x) = x^-(1+eps).
struct PopularityDist {
    double epsilon = 0.5;

    explicit PopularityDist(double eps) : epsilon(eps) {
        if (!(eps > 0.0) || !std::isfinite(eps)) throw ParameterError("popularity epsilon must be > 0");
    }

    double from_uniform(double u) const noexcept { return std::pow(u, -1.0 / (1.0 + epsilon)); }
    double tail(double x) const noexcept { return x <= 1.0 ? 1.0 : std::pow(x, -(1.0 + epsilon)); }
    double cdf(double x) const noexcept { return 1.0 - tail(x); }
    double density(double x) const noexcept { return x < 1.0 ? 0.0 : (1.0 + epsilon) * std::pow(x, -(2.0 + epsilon)); }
    // Probability mass on [a, b].
    double mass(double a, double b) const noexcept { return b < a ? 0.0 : tail(a) - tail(b); }
};

inline double sample_popularity(RngStream& stream, double eps) {
    const PopularityDist dist(eps);
    return dist.from_uniform(stream.uniform_open_closed());
}

// floor(rate) plus a Bernoulli(frac(rate)) increment; E[result] == rate.
inline std::uint64_t connection_count(double rate, RngStream& stream) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) throw ParameterError("connection rate must be a finite value >= 0");
    const double whole = std::floor(rate);
    const double frac = rate - whole;
    auto count = static_cast<std::uint64_t>(whole);
    if (frac > 0.0 && stream.bernoulli(frac)) ++count;
    return count;
}

inline double distance_weight(Distance d, double exponent) noexcept {
    if (exponent == 2.0) {
        const auto x = static_cast<double>(d);
        return 1.0 / (x * x);
    }
    return std::pow(static_cast<double>(d), -exponent);
}

// Weighted choice over an explicit list by cumulative sums and binary search.
class PrefixSampler {
public:
    PrefixSampler() = default;

    void clear() {
        ids_.clear();
        cumulative_.clear();
    }
    void add(NodeId v, double weight) {
        ids_.push_back(v);
        cumulative_.push_back((cumulative_.empty() ? 0.0 : cumulative_.back()) + weight);
    }

    bool empty() const noexcept { return ids_.empty() || cumulative_.back() <= 0.0; }
    std::size_t size() const noexcept { return ids_.size(); }
    double total() const noexcept { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
    std::span<const NodeId> ids() const noexcept { return ids_; }

    NodeId sample(RngStream& rng) const {
        const double x = rng.uniform01() * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
        if (it == cumulative_.end()) --it;
        return ids_[static_cast<std::size_t>(it - cumulative_.begin())];
    }

private:
    std::vector<NodeId> ids_;
    std::vector<double> cumulative_;
};

// Draws v != u from the whole grid with P(v) proportional to d(u,v)^-r in
// O(1) expected time: pick a radius j with weight |S_j| j^-r, then a uniform
// point of the ring. On the torus |S_j| is exact and position independent;
// on the plain grid the proposal uses the infinite-lattice ring (4j points)
// and rejects off-grid points.
class GridRingSampler {
public:
    GridRingSampler(const GridMetric& metric, double exponent = 2.0) : metric_(&metric), exponent_(exponent) {
        const Distance top = metric.max_distance();
        radius_weights_.reserve(static_cast<std::size_t>(std::max<Distance>(top, 0)));
        double acc = 0.0;
        if (metric.wraparound()) {
            // |S_j| on the torus from per-axis offset counts.
            const int n = metric.side();
            std::vector<std::uint64_t> axis(static_cast<std::size_t>(n / 2 + 1), 0);
            for (int d = -((n + 1) / 2 - 1); d <= n / 2; ++d) ++axis[static_cast<std::size_t>(std::abs(d))];
            for (Distance j = 1; j <= top; ++j) {
                std::uint64_t size = 0;
                for (Distance a = std::max<Distance>(0, j - n / 2); a <= std::min<Distance>(j, n / 2); ++a)
                    size += axis[static_cast<std::size_t>(a)] * axis[static_cast<std::size_t>(j - a)];
                acc += static_cast<double>(size) * distance_weight(j, exponent);
                radius_weights_.push_back(acc);
            }
        } else {
            for (Distance j = 1; j <= top; ++j) {
                acc += 4.0 * static_cast<double>(j) * distance_weight(j, exponent);
                radius_weights_.push_back(acc);
            }
        }
    }

    bool has_targets() const noexcept { return metric_->node_count() > 1; }

    NodeId sample(NodeId u, RngStream& rng) const {
        for (;;) {
            const double x = rng.uniform01() * radius_weights_.back();
            auto it = std::upper_bound(radius_weights_.begin(), radius_weights_.end(), x);
            if (it == radius_weights_.end()) --it;
            const Distance j = static_cast<Distance>(it - radius_weights_.begin()) + 1;
            if (metric_->wraparound()) {
                // The radius is final; retry only the point within the ring.
                for (;;) {
                    const auto i = static_cast<Distance>(rng.below(static_cast<std::uint64_t>(4 * j)));
                    if (auto v = metric_->ring_point(u, detail::ring_offset(j, i))) return *v;
                }
            }
            const auto i = static_cast<Distance>(rng.below(static_cast<std::uint64_t>(4 * j)));
            if (auto v = metric_->ring_point(u, detail::ring_offset(j, i))) return *v;
        }
    }

    const GridMetric& metric() const noexcept { return *metric_; }

private:
    const GridMetric* metric_;
    double exponent_;
    std::vector<double> radius_weights_;
};

// Returns v in candidates with probability d(u,v)^-r / sum_w d(u,w)^-r.
// Candidates equal to u or unreachable are ignored; nullopt means there is
// nothing to choose from.
template <class M>
std::optional<NodeId> sample_inverse_square_target(NodeId u, std::span<const NodeId> candidates, const M& metric,
                                                   RngStream& stream, double exponent = 2.0) {
    PrefixSampler table;
    for (NodeId v : candidates) {
        if (v == u) continue;
        const Distance d = metric.distance(u, v);
        if (d <= 0) continue;
        table.add(v, distance_weight(d, exponent));
    }
    if (table.empty()) return std::nullopt;
    return table.sample(stream);
}

// Makes `count` independent draws from propose() and stores the distinct
// targets, sorted. Returns how many draws repeated an earlier target.
template <class Propose>
std::uint64_t draw_targets(std::uint64_t count, std::vector<NodeId>& out, Propose&& propose) {
    out.clear();
    out.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(propose());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return count - out.size();
}

} // namespace smallworld
