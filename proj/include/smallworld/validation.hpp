#pragma once

// Numeric checks of the structural lemmas on concrete instances.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "error.hpp"
#include "metric_space.hpp"
#include "models.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "sampling.hpp"

namespace smallworld {

struct LemmaReport {
    std::string lemma;
    std::map<std::string, std::string> instance;
    std::map<std::string, double> observed;
    double bound = 0;
    bool pass = false;
    std::uint64_t checked = 0;
    std::uint64_t failures = 0;
    double allowed_failure_fraction = 0; // probability budget; 0 for deterministic claims
    std::string note;
};

namespace detail {

// |S_j| for j = 0..max on a torus of side n (position independent).
inline std::vector<std::uint64_t> torus_sphere_sizes(int n) {
    std::vector<std::uint64_t> axis(static_cast<std::size_t>(n / 2 + 1), 0);
    for (int d = -((n + 1) / 2 - 1); d <= n / 2; ++d) ++axis[static_cast<std::size_t>(std::abs(d))];
    const int top = 2 * (n / 2);
    std::vector<std::uint64_t> sizes(static_cast<std::size_t>(top + 1), 0);
    for (int j = 0; j <= top; ++j)
        for (int a = std::max(0, j - n / 2); a <= std::min(j, n / 2); ++a)
            sizes[static_cast<std::size_t>(j)] += axis[static_cast<std::size_t>(a)] * axis[static_cast<std::size_t>(j - a)];
    return sizes;
}

inline long double sphere_sum(const std::vector<std::uint64_t>& sizes, double r, long double scale = 1) {
    long double z = 0;
    for (std::size_t j = 1; j < sizes.size(); ++j)
        z += static_cast<long double>(sizes[j]) * std::pow(static_cast<long double>(j) * scale, -static_cast<long double>(r));
    return z;
}

} // namespace detail

// z(u) = sum over u's long-range candidates w != u of d(u,w)^-r. On KH the
// highway is measured in highway-lattice units (d / sqrt k).
template <MetricSpace M>
double normalization_constant(const GraphInstance<M>& g, NodeId u) {
    if (u >= g.node_count()) throw InputError("node " + std::to_string(u) + " out of range");
    const auto& p = g.params;
    if ((p.model == Model::kh || p.model == Model::rh) && !g.is_highway(u))
        throw InputError("node " + std::to_string(u) + " is not a highway node");
    const auto r = static_cast<long double>(p.r);
    long double z = 0;
    if constexpr (M::is_grid) {
        const auto& m = *g.metric;
        if (m.wraparound() && (p.model == Model::kleinberg || p.model == Model::kh)) {
            const int step = g.highway_spacing();
            return static_cast<double>(detail::sphere_sum(detail::torus_sphere_sizes(m.side() / step), p.r));
        }
        if (p.model == Model::kleinberg) {
            for (Distance j = 1; j <= m.max_distance(); ++j) {
                std::uint64_t count = 0;
                m.for_each_in_sphere(u, j, [&](NodeId) { ++count; });
                z += static_cast<long double>(count) * std::pow(static_cast<long double>(j), -r);
            }
            return static_cast<double>(z);
        }
        if (p.model == Model::kh) {
            const long double step = g.highway_spacing();
            for (NodeId w = 0; w < g.node_count(); ++w)
                if (w != u && g.is_highway(w)) z += std::pow(static_cast<long double>(m.distance(u, w)) / step, -r);
            return static_cast<double>(z);
        }
    }
    auto dist = [&] {
        if constexpr (M::is_grid) return 0;
        else return g.metric->distances_from(u);
    }();
    auto d = [&](NodeId w) -> Distance {
        if constexpr (M::is_grid) return g.metric->distance(u, w);
        else return dist[w];
    };
    const double lo = g.popularity[u] / p.window, hi = g.popularity[u] * p.window;
    for (NodeId w = 0; w < g.node_count(); ++w) {
        if (w == u) continue;
        bool candidate = true;
        switch (p.model) {
        case Model::kleinberg: break;
        case Model::kh:
        case Model::rh: candidate = g.is_highway(w); break;
        case Model::wnpa: candidate = g.popularity[w] >= lo && g.popularity[w] <= hi; break;
        }
        if (!candidate) continue;
        const Distance dw = d(w);
        if (dw <= 0) continue;
        z += p.model == Model::wnpa && p.window_weighting == WindowWeighting::uniform
                 ? 1.0L
                 : std::pow(static_cast<long double>(dw), -r);
    }
    return static_cast<double>(z);
}

inline double kh_norm_bound(std::uint64_t highway_nodes) {
    return 4.0 * std::log(6.0 * static_cast<double>(highway_nodes));
}

// z <= 4 ln(6 n_H) for every highway node of the KH instance (n, k).
inline LemmaReport check_kh_norm(int n, double k, bool wraparound = true) {
    ModelParams p;
    p.model = Model::kh;
    p.n = n;
    p.k = k;
    p.q = 0;
    p.wraparound = wraparound;
    const auto g = generate(p, 0, 1);
    LemmaReport rep;
    rep.lemma = "kh-norm";
    rep.instance = {{"n", std::to_string(n)}, {"k", std::to_string(static_cast<long long>(k))},
                    {"wraparound", wraparound ? "true" : "false"}};
    const std::uint64_t nh = g.stats.highway_count;
    rep.bound = kh_norm_bound(nh);
    double worst = 0;
    if (nh >= 2) {
        std::vector<std::uint64_t> sizes;
        if (wraparound) sizes = detail::torus_sphere_sizes(n / exact_sqrt(k));
        for (NodeId u = 0; u < g.node_count(); ++u) {
            if (!g.is_highway(u)) continue;
            const double z = wraparound ? static_cast<double>(detail::sphere_sum(sizes, p.r)) : normalization_constant(g, u);
            ++rep.checked;
            worst = std::max(worst, z);
            if (z > rep.bound) ++rep.failures;
        }
    }
    rep.observed = {{"max_z", worst}, {"highway_nodes", static_cast<double>(nh)}};
    rep.pass = rep.failures == 0;
    return rep;
}

inline double rh_norm_bound(int n, double k) { return 10.0 + 37.0 * log2_side(n) / k; }

// Fraction of highway nodes with z <= 10 + 37 log2(n)/k, pooled over seeds.
// The claim holds per node with probability at least 1/2.
inline LemmaReport check_rh_norm(int n, double k, std::uint64_t seeds, std::uint64_t seed, double required_fraction = 0.5,
                                 unsigned threads = 0) {
    LemmaReport rep;
    rep.lemma = "rh-norm";
    rep.instance = {{"n", std::to_string(n)}, {"k", std::to_string(k)}, {"seeds", std::to_string(seeds)}};
    rep.bound = rh_norm_bound(n, k);
    rep.allowed_failure_fraction = 1.0 - required_fraction;
    double worst = 0, sum = 0;
    for (std::uint64_t i = 0; i < seeds; ++i) {
        ModelParams p;
        p.model = Model::rh;
        p.n = n;
        p.k = k;
        p.q = 0;
        const auto g = generate(p, derive_seed(seed, i), threads);
        std::vector<NodeId> hw;
        for (NodeId u = 0; u < g.node_count(); ++u)
            if (g.is_highway(u)) hw.push_back(u);
        std::vector<double> z(hw.size());
        parallel_for(hw.size(), threads, [&](std::size_t b, std::size_t e) {
            for (std::size_t j = b; j < e; ++j) z[j] = normalization_constant(g, hw[j]);
        });
        for (double v : z) {
            ++rep.checked;
            sum += v;
            worst = std::max(worst, v);
            if (v > rep.bound) ++rep.failures;
        }
    }
    const double frac = rep.checked ? 1.0 - static_cast<double>(rep.failures) / static_cast<double>(rep.checked) : 0.0;
    rep.observed = {{"fraction_within_bound", frac}, {"max_z", worst},
                    {"mean_z", rep.checked ? sum / static_cast<double>(rep.checked) : 0.0}};
    rep.pass = rep.checked > 0 && frac >= required_fraction;
    return rep;
}

enum class RadiusClass { n, loglog, constant };

inline std::string to_string(RadiusClass c) {
    switch (c) {
    case RadiusClass::n: return "n";
    case RadiusClass::loglog: return "loglog";
    case RadiusClass::constant: return "const";
    }
    return "?";
}

inline RadiusClass parse_radius_class(const std::string& s) {
    if (s == "n") return RadiusClass::n;
    if (s == "loglog") return RadiusClass::loglog;
    if (s == "const") return RadiusClass::constant;
    throw ParameterError("unknown radius class '" + s + "' (expected n, loglog or const)");
}

inline constexpr std::uint64_t kBallCenterSample = 10000;

// Highway counts in lattice balls of an RH instance against the
// nested-lattice thresholds.
inline LemmaReport check_ball_counts(const GridInstance& g, RadiusClass cls, std::uint64_t sample_seed = 0,
                                     unsigned threads = 0) {
    if (g.params.model != Model::rh) throw InputError("ball counts apply to rh instances");
    const auto& m = *g.metric;
    const int n = m.side();
    const double k = g.params.k;
    const double logn = log2_side(n);
    LemmaReport rep;
    rep.lemma = "rh-balls";
    rep.instance = {{"n", std::to_string(n)}, {"k", std::to_string(k)}, {"seed", std::to_string(g.seed)},
                    {"radius_class", to_string(cls)}};

    Distance radius = 0;
    std::vector<NodeId> centers;
    switch (cls) {
    case RadiusClass::n: radius = static_cast<Distance>(std::floor(3.0 * std::sqrt(k * logn))); break;
    case RadiusClass::loglog:
        radius = static_cast<Distance>(std::floor(3.0 * std::sqrt(k * std::log2(std::max(logn, 1.0)))));
        break;
    case RadiusClass::constant: radius = static_cast<Distance>(std::floor(2.0 * std::sqrt(k))); break;
    }
    if (cls == RadiusClass::constant) {
        // Centres on a sublattice at least 4 sqrt(k) apart.
        const int spacing = static_cast<int>(std::ceil(4.0 * std::sqrt(k)));
        const int last = m.wraparound() ? n - spacing : n - 1;
        for (int y = 0; y <= last; y += spacing)
            for (int x = 0; x <= last; x += spacing) centers.push_back(m.id({x, y}));
        rep.note = "centres on a lattice of spacing " + std::to_string(spacing);
    } else if (m.node_count() > 256ULL * 256ULL) {
        for (std::uint64_t i = 0; i < kBallCenterSample; ++i) {
            RngStream s(sample_seed, i, StreamPurpose::ball_centers);
            centers.push_back(static_cast<NodeId>(s.below(m.node_count())));
        }
        rep.note = "sampled " + std::to_string(kBallCenterSample) + " centres";
    } else {
        centers.resize(m.node_count());
        for (NodeId u = 0; u < centers.size(); ++u) centers[u] = u;
        rep.note = "all centres";
    }

    std::vector<std::uint64_t> counts(centers.size());
    parallel_for(centers.size(), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            std::uint64_t c = 0;
            m.for_each_in_ball(centers[i], radius, [&](NodeId v) { c += g.highway[v]; });
            counts[i] = c;
        }
    });
    const auto [mn, mx] = std::minmax_element(counts.begin(), counts.end());
    rep.checked = counts.size();
    rep.observed["radius"] = static_cast<double>(radius);
    rep.observed["min_count"] = counts.empty() ? 0.0 : static_cast<double>(*mn);
    rep.observed["max_count"] = counts.empty() ? 0.0 : static_cast<double>(*mx);

    switch (cls) {
    case RadiusClass::n: {
        const double lower = 9.0 * logn, upper = 41.0 * logn;
        std::uint64_t below = 0, above = 0;
        for (auto c : counts) {
            below += static_cast<double>(c) < lower;
            above += static_cast<double>(c) >= upper;
        }
        rep.bound = upper;
        rep.observed["lower_bound"] = lower;
        rep.observed["below_lower"] = static_cast<double>(below);
        rep.observed["at_or_above_upper"] = static_cast<double>(above);
        rep.failures = below + above;
        rep.pass = rep.failures == 0;
        break;
    }
    case RadiusClass::loglog: {
        rep.bound = 41.0 * std::log2(std::max(logn, 1.0));
        for (auto c : counts) rep.failures += static_cast<double>(c) >= rep.bound;
        rep.pass = rep.failures == 0;
        break;
    }
    case RadiusClass::constant: {
        rep.bound = 18;
        std::uint64_t within = 0;
        for (auto c : counts) within += c <= 18;
        rep.failures = counts.size() - within;
        rep.allowed_failure_fraction = 0.5;
        const double frac = counts.empty() ? 0.0 : static_cast<double>(within) / static_cast<double>(counts.size());
        rep.observed["fraction_within"] = frac;
        rep.pass = !counts.empty() && frac >= 0.5;
        break;
    }
    }
    return rep;
}

// For every v on S_d(u) and 1 <= j <= 2d: j/2 <= |S_j(v) cap B_d(u)| <= 4j.
// u sits at the grid centre.
inline LemmaReport check_sphere_overlap(int n, Distance d, bool wraparound = true) {
    if (d < 1 || 2 * d >= n) throw InputError("sphere overlap needs 1 <= d < n/2");
    const GridMetric m(GridTopology{n, wraparound});
    const NodeId u = m.id({n / 2, n / 2});
    LemmaReport rep;
    rep.lemma = "sphere-overlap";
    rep.instance = {{"n", std::to_string(n)}, {"d", std::to_string(d)}, {"wraparound", wraparound ? "true" : "false"}};
    rep.bound = 4.0;
    double min_ratio = 1e300, max_ratio = 0, corner_2d = 1e300, noncorner_2d_min = 1e300, noncorner_2d_max = 0;
    const Coord cu = m.coord(u);
    m.for_each_in_sphere(u, d, [&](NodeId v) {
        const Coord cv = m.coord(v);
        const bool corner = cv.x == cu.x || cv.y == cu.y;
        for (Distance j = 1; j <= 2 * d; ++j) {
            std::uint64_t inside = 0;
            m.for_each_in_sphere(v, j, [&](NodeId w) { inside += m.distance(u, w) <= d; });
            ++rep.checked;
            const double jj = static_cast<double>(j);
            if (static_cast<double>(inside) < jj / 2.0 || static_cast<double>(inside) > 4.0 * jj) ++rep.failures;
            const double ratio = static_cast<double>(inside) / (4.0 * jj);
            min_ratio = std::min(min_ratio, ratio);
            max_ratio = std::max(max_ratio, ratio);
            if (j == 2 * d) {
                if (corner) corner_2d = std::min(corner_2d, ratio);
                else {
                    noncorner_2d_min = std::min(noncorner_2d_min, ratio);
                    noncorner_2d_max = std::max(noncorner_2d_max, ratio);
                }
            }
        }
    });
    rep.observed = {{"min_ratio", min_ratio}, {"max_ratio", max_ratio}, {"corner_ratio_at_2d", corner_2d}};
    if (noncorner_2d_max > 0) {
        rep.observed["noncorner_ratio_at_2d_min"] = noncorner_2d_min;
        rep.observed["noncorner_ratio_at_2d_max"] = noncorner_2d_max;
    }
    rep.pass = rep.failures == 0;
    return rep;
}

struct DegreeStats {
    std::uint64_t nodes = 0;
    double mean_out_degree = 0;       // placed long-range connections / N, with multiplicity
    double mean_distinct_degree = 0;  // distinct stored edges / N
    double mean_requested_degree = 0; // connection counts / N
    double popularity_alpha = 0;      // MLE exponent of the popularity density
    double popularity_alpha_se = 0;
    std::uint64_t highway_count = 0;
    double highway_fraction = 0;
    double expected_highway_fraction = 0;
    double highway_fraction_sigma = 0; // binomial sd under the expected fraction
    double highway_z = 0;
};

template <MetricSpace M>
DegreeStats degree_stats(const GraphInstance<M>& g) {
    DegreeStats s;
    s.nodes = g.node_count();
    const auto n = static_cast<double>(s.nodes);
    s.mean_out_degree = static_cast<double>(g.stats.placed_connections) / n;
    s.mean_distinct_degree = static_cast<double>(g.stats.realized_edges) / n;
    s.mean_requested_degree = static_cast<double>(g.stats.requested_edges) / n;
    s.highway_count = g.stats.highway_count;
    s.highway_fraction = static_cast<double>(s.highway_count) / n;
    if (g.params.model == Model::wnpa) {
        long double logs = 0;
        for (double k : g.popularity) logs += std::log(static_cast<long double>(k));
        s.popularity_alpha = 1.0 + n / static_cast<double>(logs);
        s.popularity_alpha_se = (s.popularity_alpha - 1.0) / std::sqrt(n);
        const double lo = log2_side(detail::side_of(*g.metric, g.params));
        const PopularityDist dist(g.params.epsilon);
        s.expected_highway_fraction = dist.mass(lo, g.params.window * lo);
        s.highway_fraction_sigma = std::sqrt(s.expected_highway_fraction * (1 - s.expected_highway_fraction) / n);
        if (s.highway_fraction_sigma > 0)
            s.highway_z = (s.highway_fraction - s.expected_highway_fraction) / s.highway_fraction_sigma;
    }
    return s;
}

// Degree law of a WNPA instance: mean out-degree within `tolerance` of Q,
// popularity exponent within 0.1 of 2+eps, band fraction within 3 sigma.
template <MetricSpace M>
LemmaReport check_wnpa_degree(const GraphInstance<M>& g, double tolerance = 0.05) {
    if (g.params.model != Model::wnpa) throw InputError("wnpa-degree applies to wnpa instances");
    const auto s = degree_stats(g);
    const double q = g.params.wnpa_literal_rate ? g.params.q * (1.0 + g.params.epsilon) : g.params.q;
    LemmaReport rep;
    rep.lemma = "wnpa-degree";
    rep.instance = {{"nodes", std::to_string(s.nodes)}, {"q", std::to_string(g.params.q)},
                    {"epsilon", std::to_string(g.params.epsilon)}, {"window", std::to_string(g.params.window)},
                    {"seed", std::to_string(g.seed)}};
    rep.bound = q;
    rep.observed = {{"mean_out_degree", s.mean_out_degree},
                    {"mean_distinct_degree", s.mean_distinct_degree},
                    {"mean_requested_degree", s.mean_requested_degree},
                    {"popularity_alpha", s.popularity_alpha},
                    {"highway_fraction", s.highway_fraction},
                    {"expected_highway_fraction", s.expected_highway_fraction},
                    {"highway_z", s.highway_z}};
    const bool degree_ok = std::abs(s.mean_out_degree - q) <= tolerance * q;
    const bool alpha_ok = std::abs(s.popularity_alpha - (2.0 + g.params.epsilon)) <= 0.1;
    const bool band_ok = std::abs(s.highway_z) <= 3.0;
    rep.checked = 3;
    rep.failures = !degree_ok + !alpha_ok + !band_ok;
    rep.pass = rep.failures == 0;
    rep.note = "out-degree counts placed connections with multiplicity";
    return rep;
}

} // namespace smallworld
