#pragma once

// Batch routing trials, k sweeps and paired model comparisons.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "error.hpp"
#include "models.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "routing.hpp"

namespace smallworld {

inline constexpr std::uint64_t kMinTrials = 30;
inline constexpr double kZ95 = 1.959963984540054;

struct TrialRecord {
    NodeId source = 0;
    NodeId target = 0;
    std::uint64_t hops = 0;
    std::array<std::uint64_t, 3> phase_hops{0, 0, 0};
    std::uint64_t dead_ends = 0;
    Termination terminated = Termination::arrived;
};

struct StatSummary {
    std::uint64_t trials = 0;
    double mean = 0, median = 0, stddev = 0;
    double ci_lo = 0, ci_hi = 0; // 95% CI of the mean, normal approximation
    std::array<double, 3> phase_means{0, 0, 0};
    double dead_end_mean = 0;
    std::uint64_t failures = 0; // trials that did not arrive
};

inline StatSummary summarize(const std::vector<TrialRecord>& records) {
    if (records.size() < kMinTrials)
        throw ParameterError("at least " + std::to_string(kMinTrials) + " trials are needed for a summary");
    StatSummary s;
    s.trials = records.size();
    std::vector<double> hops;
    hops.reserve(records.size());
    long double sum = 0;
    std::array<long double, 3> phase{0, 0, 0};
    long double dead = 0;
    for (const auto& r : records) {
        hops.push_back(static_cast<double>(r.hops));
        sum += r.hops;
        for (std::size_t i = 0; i < 3; ++i) phase[i] += r.phase_hops[i];
        dead += r.dead_ends;
        if (r.terminated != Termination::arrived) ++s.failures;
    }
    const auto n = static_cast<long double>(records.size());
    s.mean = static_cast<double>(sum / n);
    long double ss = 0;
    for (double h : hops) ss += (h - s.mean) * (h - s.mean);
    s.stddev = static_cast<double>(std::sqrt(ss / (n - 1)));
    const double half = kZ95 * s.stddev / std::sqrt(static_cast<double>(n));
    s.ci_lo = s.mean - half;
    s.ci_hi = s.mean + half;
    for (std::size_t i = 0; i < 3; ++i) s.phase_means[i] = static_cast<double>(phase[i] / n);
    s.dead_end_mean = static_cast<double>(dead / n);
    std::sort(hops.begin(), hops.end());
    const std::size_t mid = hops.size() / 2;
    s.median = hops.size() % 2 ? hops[mid] : 0.5 * (hops[mid - 1] + hops[mid]);
    return s;
}

// Uniform (s, t) pairs with s != t, drawn from per-pair streams. On road
// metrics both endpoints come from the largest component.
template <MetricSpace M>
std::vector<std::pair<NodeId, NodeId>> sample_pairs(const M& metric, std::uint64_t count, std::uint64_t seed) {
    std::vector<NodeId> pool;
    if constexpr (!M::is_grid) {
        const auto& g = metric.graph();
        for (NodeId u = 0; u < g.node_count(); ++u)
            if (g.component(u) == g.largest_component()) pool.push_back(u);
    }
    const std::uint64_t n = pool.empty() ? metric.node_count() : pool.size();
    if (n < 2) throw InputError("need at least two nodes to sample pairs");
    std::vector<std::pair<NodeId, NodeId>> pairs(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        RngStream rng(seed, i, StreamPurpose::pairs);
        auto s = rng.below(n);
        auto t = rng.below(n - 1);
        if (t >= s) ++t;
        if (!pool.empty()) pairs[i] = {pool[s], pool[t]};
        else pairs[i] = {static_cast<NodeId>(s), static_cast<NodeId>(t)};
    }
    return pairs;
}

template <MetricSpace M>
std::vector<TrialRecord> route_pairs(const GraphInstance<M>& g, Policy policy,
                                     const std::vector<std::pair<NodeId, NodeId>>& pairs, RoutingOptions opts = {},
                                     unsigned threads = 0) {
    opts.record_path = false;
    std::vector<TrialRecord> out(pairs.size());
    parallel_for(pairs.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto tr = route(g, pairs[i].first, pairs[i].second, policy, opts);
            out[i] = {tr.source, tr.target, tr.hops, tr.phase_hops, tr.dead_end_events, tr.terminated};
        }
    });
    if constexpr (M::is_grid) {
        for (const auto& r : out)
            if (r.terminated == Termination::stuck)
                throw InvariantError("greedy route " + std::to_string(r.source) + "->" + std::to_string(r.target) +
                                     " got stuck on a grid");
    }
    return out;
}

template <MetricSpace M>
StatSummary run_trials(const GraphInstance<M>& g, Policy policy, std::uint64_t pairs, std::uint64_t seed,
                       const RoutingOptions& opts = {}, unsigned threads = 0) {
    if (pairs < kMinTrials) throw ParameterError("run_trials needs at least 30 pairs");
    return summarize(route_pairs(g, policy, sample_pairs(*g.metric, pairs, seed), opts, threads));
}

struct SweepPoint {
    double value = 0;
    StatSummary summary;
    std::vector<std::uint64_t> graph_seeds;
    std::uint64_t pair_seed = 0;
};

struct SweepCurve {
    std::string parameter = "k";
    Model model = Model::kh;
    std::vector<SweepPoint> points;
    std::vector<std::string> warnings;
};

struct SweepOptions {
    std::uint64_t pairs = 10000; // per point, pooled over graph seeds
    std::uint64_t seeds = 3;     // graphs per point
    std::uint64_t seed = 1;
    Policy policy = Policy::kh_known;
    RoutingOptions routing{};
    unsigned threads = 0;
    ModelParams base{}; // n, Q and the remaining fields; k is swept
};

inline std::uint64_t graph_seed_for(std::uint64_t seed, double value, std::uint64_t index) {
    return derive_seed(seed, std::bit_cast<std::uint64_t>(value), index);
}

// One summary per k. Invalid k values are skipped with a warning. Each point
// pools `pairs` trials over `seeds` freshly seeded graphs.
inline SweepCurve sweep_k(const std::vector<double>& k_values, const SweepOptions& opt) {
    if (opt.seeds == 0) throw ParameterError("sweep needs at least one graph seed per point");
    SweepCurve curve;
    curve.model = opt.base.model;
    const auto grid = make_grid(opt.base);
    const std::uint64_t per_graph = (opt.pairs + opt.seeds - 1) / opt.seeds;
    for (double k : k_values) {
        ModelParams p = opt.base;
        p.k = k;
        try {
            validate(p, grid->node_count(), true);
        } catch (const ParameterError& e) {
            curve.warnings.push_back("skipping k=" + std::to_string(k) + ": " + e.what());
            continue;
        }
        SweepPoint point;
        point.value = k;
        point.pair_seed = derive_seed(opt.seed, 0x5041495253ULL);
        std::vector<TrialRecord> pooled;
        for (std::uint64_t i = 0; i < opt.seeds; ++i) {
            const auto gs = graph_seed_for(opt.seed, k, i);
            point.graph_seeds.push_back(gs);
            const auto g = generate_on_metric(p, grid, gs, opt.threads);
            const auto pairs = sample_pairs(*grid, per_graph, derive_seed(point.pair_seed, i));
            auto recs = route_pairs(g, opt.policy, pairs, opt.routing, opt.threads);
            pooled.insert(pooled.end(), recs.begin(), recs.end());
        }
        point.summary = summarize(pooled);
        curve.points.push_back(std::move(point));
    }
    return curve;
}

struct CompareConfig {
    std::string label;
    ModelParams params;
    Policy policy = Policy::full_greedy;
};

struct ComparisonRow {
    std::string label;
    StatSummary summary;
    double ratio = 1.0; // mean / baseline mean
    double ratio_ci_lo = 1.0, ratio_ci_hi = 1.0;
    double diff_mean = 0, diff_ci_lo = 0, diff_ci_hi = 0; // paired hops - baseline hops
};

struct CompareOptions {
    std::uint64_t pairs = 10000; // per graph seed
    std::uint64_t seeds = 1;
    std::uint64_t seed = 1;
    RoutingOptions routing{};
    unsigned threads = 0;
};

// Paired comparison: for each seed index every config routes the same
// (s, t) list, and graph seeds depend only on the seed index. The first
// config is the baseline.
template <MetricSpace M>
std::vector<ComparisonRow> compare_models(std::shared_ptr<const M> metric, const std::vector<CompareConfig>& configs,
                                          const CompareOptions& opt) {
    if (configs.empty()) throw InputError("compare needs at least one config");
    if (opt.seeds == 0) throw ParameterError("compare needs at least one seed");
    const auto& first = configs.front().params;
    for (const auto& c : configs) {
        if constexpr (M::is_grid) {
            if (c.params.n != first.n || c.params.wraparound != first.wraparound || c.params.p != first.p)
                throw InputError("compare configs must share one topology (n, wraparound, p)");
        } else if (c.params.p != first.p) {
            throw InputError("compare configs must share one topology");
        }
    }
    std::vector<std::vector<TrialRecord>> results(configs.size());
    for (std::uint64_t i = 0; i < opt.seeds; ++i) {
        const auto gs = derive_seed(opt.seed, i, 0x47524150ULL);
        const auto pairs = sample_pairs(*metric, opt.pairs, derive_seed(opt.seed, i, 0x50414952ULL));
        for (std::size_t c = 0; c < configs.size(); ++c) {
            const auto g = generate_on_metric(configs[c].params, metric, gs, opt.threads);
            auto recs = route_pairs(g, configs[c].policy, pairs, opt.routing, opt.threads);
            results[c].insert(results[c].end(), recs.begin(), recs.end());
        }
    }
    std::vector<ComparisonRow> rows;
    const auto& base = results.front();
    const auto base_summary = summarize(base);
    for (std::size_t c = 0; c < configs.size(); ++c) {
        ComparisonRow row;
        row.label = configs[c].label;
        row.summary = c == 0 ? base_summary : summarize(results[c]);
        const auto& cur = results[c];
        const auto n = static_cast<double>(cur.size());
        row.ratio = row.summary.mean / base_summary.mean;
        long double ss_ratio = 0, sum_diff = 0, ss_diff = 0;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            const double diff = static_cast<double>(cur[i].hops) - static_cast<double>(base[i].hops);
            sum_diff += diff;
        }
        row.diff_mean = static_cast<double>(sum_diff / n);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            const double h = static_cast<double>(cur[i].hops), b = static_cast<double>(base[i].hops);
            const double e = h - row.ratio * b;
            ss_ratio += e * e;
            const double diff = h - b - row.diff_mean;
            ss_diff += diff * diff;
        }
        // Delta method for the ratio of paired means.
        const double se_ratio = std::sqrt(static_cast<double>(ss_ratio) / (n - 1) / n) / base_summary.mean;
        row.ratio_ci_lo = row.ratio - kZ95 * se_ratio;
        row.ratio_ci_hi = row.ratio + kZ95 * se_ratio;
        const double se_diff = std::sqrt(static_cast<double>(ss_diff) / (n - 1) / n);
        row.diff_ci_lo = row.diff_mean - kZ95 * se_diff;
        row.diff_ci_hi = row.diff_mean + kZ95 * se_diff;
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace smallworld
