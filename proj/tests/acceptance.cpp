// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <CLI11.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include <smallworld/smallworld.hpp>

using namespace smallworld;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x, int digits = 4) {
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

fs::path workdir;
unsigned threads = 0;

// ---- 1: Kleinberg hops grow like log^2 n ----

Outcome kleinberg_scaling() {
    std::vector<double> x, y;
    std::string detail;
    for (int n : {64, 128, 256, 512}) {
        ModelParams p;
        p.n = n;
        const auto g = generate(p, derive_seed(101, static_cast<std::uint64_t>(n)), threads);
        const auto s = run_trials(g, Policy::kleinberg, 10000, derive_seed(102, static_cast<std::uint64_t>(n)), {}, threads);
        const double l = std::log2(static_cast<double>(n));
        x.push_back(l * l);
        y.push_back(s.mean);
        detail += "n=" + std::to_string(n) + ":" + fmt(s.mean) + " ";
    }
    // Least squares through the origin, R^2 against the mean.
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += x[i] * y[i];
        sxx += x[i] * x[i];
    }
    const double c = sxy / sxx;
    const double ybar = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        ss_res += (y[i] - c * x[i]) * (y[i] - c * x[i]);
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    const double r2 = 1 - ss_res / ss_tot;
    return {r2 >= 0.95, detail + "c=" + fmt(c) + " R^2=" + fmt(r2, 5)};
}

// ---- 2: KH U-curve over k ----

Outcome kh_u_curve() {
    SweepOptions o;
    o.pairs = 10000;
    o.seeds = 3;
    o.seed = 202;
    o.threads = threads;
    o.policy = Policy::kh_known;
    o.base.model = Model::kh;
    o.base.n = 1024;
    o.base.q = 1;
    const auto curve = sweep_k({1, 4, 16, 64, 256, 1024, 4096}, o);
    if (curve.points.size() != 7) return {false, "sweep skipped a k value"};
    std::string detail;
    std::size_t best = 0;
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        detail += "k=" + fmt(curve.points[i].value) + ":" + fmt(curve.points[i].summary.mean) + " ";
        if (curve.points[i].summary.mean < curve.points[best].summary.mean) best = i;
    }
    const double lo_end = curve.points.front().summary.mean, hi_end = curve.points.back().summary.mean;
    const double b = curve.points[best].summary.mean, k = curve.points[best].value;
    const bool deep = b <= 0.75 * lo_end && b <= 0.75 * hi_end;
    const bool placed = k >= 5 && k <= 400;
    return {deep && placed, detail + "argmin k=" + fmt(k) + " drop vs k=1 " + fmt(100 * (1 - b / lo_end), 3) +
                                "%, vs k=4096 " + fmt(100 * (1 - b / hi_end), 3) + "%"};
}

// ---- 3: KH and RH at k = 1 behave like Kleinberg ----

Outcome reduction_at_k1() {
    struct Row {
        std::string name;
        StatSummary s;
    };
    std::vector<Row> rows;
    ModelParams p;
    p.n = 256;
    p.q = 1;
    for (Model m : {Model::kleinberg, Model::kh, Model::rh}) {
        p.model = m;
        p.k = 1;
        const auto tag = static_cast<std::uint64_t>(m);
        const auto g = generate(p, derive_seed(303, tag), threads);
        rows.push_back({to_string(m), run_trials(g, Policy::full_greedy, 10000, derive_seed(304, tag), {}, threads)});
    }
    bool overlap = true;
    std::string detail;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        detail += rows[i].name + " " + fmt(rows[i].s.mean) + " [" + fmt(rows[i].s.ci_lo) + ", " + fmt(rows[i].s.ci_hi) + "] ";
        for (std::size_t j = 0; j < i; ++j)
            overlap = overlap && rows[i].s.ci_lo <= rows[j].s.ci_hi && rows[j].s.ci_lo <= rows[i].s.ci_hi;
    }
    return {overlap, detail};
}

// ---- 4: KH normalization bound, every instance up to n = 256 ----

Outcome kh_norm_exhaustive() {
    std::uint64_t instances = 0, nodes = 0, failures = 0;
    double worst = 0;
    auto run = [&](int n, bool wrap) {
        for (int s = 1; s <= n; ++s) {
            if (n % s) continue;
            const auto rep = check_kh_norm(n, static_cast<double>(s) * s, wrap);
            ++instances;
            nodes += rep.checked;
            failures += rep.failures;
            if (rep.checked) worst = std::max(worst, rep.observed.at("max_z") / rep.bound);
        }
    };
    for (int n = 2; n <= 256; ++n) run(n, true);
    for (int n = 2; n <= 48; ++n) run(n, false);
    return {failures == 0, std::to_string(instances) + " instances (torus n<=256, plain n<=48), " +
                               std::to_string(nodes) + " highway nodes, " + std::to_string(failures) +
                               " violations, max z/bound " + fmt(worst)};
}

// ---- 5: RH ball counts ----

Outcome rh_balls() {
    std::uint64_t n_fail = 0, loglog_fail = 0, const_within = 0, const_total = 0;
    double min_count = 1e9, max_count = 0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        ModelParams p;
        p.model = Model::rh;
        p.n = 64;
        p.k = 4;
        p.q = 0;
        const auto g = generate(p, derive_seed(505, i), threads);
        const auto a = check_ball_counts(g, RadiusClass::n, 0, threads);
        const auto b = check_ball_counts(g, RadiusClass::loglog, 0, threads);
        const auto c = check_ball_counts(g, RadiusClass::constant, 0, threads);
        n_fail += a.failures;
        loglog_fail += b.failures;
        min_count = std::min(min_count, a.observed.at("min_count"));
        max_count = std::max(max_count, a.observed.at("max_count"));
        const_total += c.checked;
        const_within += c.checked - c.failures;
    }
    const double frac = static_cast<double>(const_within) / static_cast<double>(const_total);
    const double logn = 6;
    return {n_fail == 0 && loglog_fail == 0 && frac >= 0.5,
            "radius-3sqrt(k log n) counts in [" + fmt(min_count) + ", " + fmt(max_count) + "] vs [" +
                fmt(9 * logn) + ", " + fmt(41 * logn) + "), violations " + std::to_string(n_fail) +
                "; loglog violations " + std::to_string(loglog_fail) + "; radius-2sqrt(k) balls with <= 18: " +
                fmt(100 * frac, 3) + "%"};
}

// ---- 6: sphere overlap ----

Outcome sphere_overlap() {
    std::uint64_t runs = 0, checked = 0, failures = 0, wrapped = 0, wrapped_fail = 0;
    for (int n = 3; n <= 33; ++n)
        for (Distance d = 1; 2 * d < n; ++d) {
            const auto plain = check_sphere_overlap(n, d, false);
            ++runs;
            checked += plain.checked;
            failures += plain.failures;
            const auto torus = check_sphere_overlap(n, d, true);
            if (4 * d <= n) {
                ++runs;
                checked += torus.checked;
                failures += torus.failures;
            } else {
                ++wrapped;
                wrapped_fail += !torus.pass;
            }
        }
    return {failures == 0, std::to_string(runs) + " (n, d, topology) cases, " + std::to_string(checked) +
                               " (v, j) checks, " + std::to_string(failures) +
                               " violations; torus cases with 4d > n excluded since S_j wraps (" +
                               std::to_string(wrapped_fail) + " of " + std::to_string(wrapped) + " fail there)"};
}

// ---- 7: WNPA degree law ----

Outcome wnpa_degree() {
    const auto g = generate_wnpa(512, 1, 0.5, 1.01, 707, threads);
    const auto rep = check_wnpa_degree(g);
    const auto& o = rep.observed;
    return {rep.pass, "mean out-degree " + fmt(o.at("mean_out_degree")) + " (distinct " +
                          fmt(o.at("mean_distinct_degree")) + "), alpha " + fmt(o.at("popularity_alpha")) +
                          ", highway fraction " + fmt(o.at("highway_fraction")) + " vs " +
                          fmt(o.at("expected_highway_fraction")) + " (z " + fmt(o.at("highway_z"), 3) + "), " +
                          std::to_string(g.stats.empty_window_nodes) + " empty windows"};
}

// ---- 8: WNPA against Kleinberg ----

Outcome wnpa_vs_kleinberg() {
    ModelParams k;
    k.n = 512;
    ModelParams w = k;
    w.model = Model::wnpa;
    w.epsilon = 0.5;
    w.window = 1.01;
    CompareOptions o;
    o.pairs = 30000;
    o.seed = 808;
    o.threads = threads;
    const auto grid = compare_models(make_grid(k), {{"kleinberg", k, Policy::kleinberg}, {"wnpa", w, Policy::full_greedy}}, o);
    const bool grid_ok = grid[1].diff_ci_hi < 0;
    std::string detail = "grid: kleinberg " + fmt(grid[0].summary.mean) + ", wnpa " + fmt(grid[1].summary.mean) +
                         ", paired diff CI [" + fmt(grid[1].diff_ci_lo) + ", " + fmt(grid[1].diff_ci_hi) + "]";

    // No state road files ship with the repo; a synthetic street grid stands in.
    const auto gr = (workdir / "synthetic.gr").string(), co = (workdir / "synthetic.co").string();
    write_dimacs(largest_component_subgraph(synthetic_road_network(145, 0.85, 5)), gr, co);
    auto road = std::make_shared<const RoadMetric>(std::make_shared<const RoadGraph>(load_dimacs(gr, co)));
    ModelParams rk;
    ModelParams rw = w;
    rw.n = 0;
    o.pairs = 3000;
    const auto rows =
        compare_models(road, {{"kleinberg", rk, Policy::kleinberg}, {"wnpa", rw, Policy::full_greedy}}, o);
    const bool road_ok = rows[1].ratio >= 0.35 && rows[1].ratio <= 0.65;
    detail += "; synthetic road (" + std::to_string(road->node_count()) + " nodes): kleinberg " +
              fmt(rows[0].summary.mean) + ", wnpa " + fmt(rows[1].summary.mean) + ", ratio " + fmt(rows[1].ratio) +
              " [" + fmt(rows[1].ratio_ci_lo) + ", " + fmt(rows[1].ratio_ci_hi) + "] vs target [0.35, 0.65]";
    if (!grid_ok) detail += " (grid part failed)";
    if (!road_ok) detail += " (road part failed)";
    return {grid_ok && road_ok, detail};
}

// ---- 9: CLI determinism ----

int run_to_file(const std::string& args, const fs::path& out) {
    const std::string cmd = std::string(SMALLWORLD_CLI) + " " + args + " -o " + out.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome cli_determinism() {
    const auto gr = (workdir / "det.gr").string(), co = (workdir / "det.co").string();
    write_dimacs(synthetic_road_network(40, 0.85, 3), gr, co);
    const std::string road = " --road-file " + gr + " --road-coords " + co;
    const std::vector<std::string> commands = {
        "generate --model kleinberg --n 64 --seed 1",
        "generate --model kh --n 64 --k 16 --seed 1 --format binary",
        "generate --model rh --n 64 --k 4 --rh-local-variant --seed 1",
        "generate --model wnpa --n 64 --window 1.5 --seed 1 --format binary",
        "generate --model wnpa" + road + " --seed 1",
        "route --model kh --n 128 --k 16 --policy kh-unknown --pairs 2000 --seed 2",
        "route --model rh --n 128 --k 8 --pairs 2000 --format csv --seed 2",
        "route --model wnpa --n 128 --policy wnpa-highway --pairs 2000 --seed 2",
        "route --model kleinberg" + road + " --pairs 500 --seed 2",
        "sweep --model kh --n 1024 --q 1 --k 1,16,64,1024 --pairs 1000 --seed 7",
        "sweep --model rh --n 64 --k 1,4,16 --pairs 600 --format json --seed 7",
        "compare --n 128 --models kleinberg,kh,rh,wnpa --k 4 --pairs 2000 --seed 3",
        "compare" + road + " --models kleinberg,wnpa --pairs 300 --format json --seed 3",
        "validate --lemma kh-norm --n 36",
        "validate --lemma rh-norm --n 32 --k 4 --seeds 2",
        "validate --lemma rh-balls --n 64 --k 4 --seeds 3 --radius-class const",
        "validate --lemma sphere-overlap --n 21 --no-wrap",
        "validate --lemma wnpa-degree --n 128 --seeds 2",
    };
    std::uint64_t bad = 0;
    std::string detail;
    const unsigned counts[] = {1, 4, 1};
    for (std::size_t i = 0; i < commands.size(); ++i) {
        std::string first;
        bool same = true;
        for (std::size_t r = 0; r < 3; ++r) {
            // Same -o path every run: the path is part of the echoed config.
            const auto out = workdir / ("det_" + std::to_string(i));
            const int code = run_to_file(commands[i] + " --no-timestamp --threads " + std::to_string(counts[r]), out);
            const auto bytes = slurp(out);
            if (code != 0 || bytes.empty()) {
                same = false;
                detail += " [exit " + std::to_string(code) + ": " + commands[i] + "]";
                break;
            }
            if (r == 0) first = bytes;
            else same = same && bytes == first;
        }
        if (!same) {
            ++bad;
            detail += " [differs: " + commands[i] + "]";
        }
    }
    return {bad == 0, std::to_string(commands.size()) + " commands x 3 runs (threads 1, 4, 1), " + std::to_string(bad) +
                          " mismatched" + detail};
}

// ---- 10: sampler oracles ----

double chi_square_p(const std::vector<double>& observed, const std::vector<double>& prob) {
    // Merge adjacent bins until each expectation is at least 5.
    const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
    std::vector<double> o2, p2;
    double po = 0, pp = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        po += observed[i];
        pp += prob[i];
        if (pp * total >= 5) {
            o2.push_back(po);
            p2.push_back(pp);
            po = pp = 0;
        }
    }
    if (pp > 0 && !o2.empty()) {
        o2.back() += po;
        p2.back() += pp;
    }
    double stat = 0;
    for (std::size_t i = 0; i < o2.size(); ++i) {
        const double e = total * p2[i];
        stat += (o2[i] - e) * (o2[i] - e) / e;
    }
    boost::math::chi_squared dist(static_cast<double>(o2.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

template <class Draw>
double node_frequency_p(const GridMetric& m, NodeId u, const std::vector<NodeId>& cands, std::uint64_t draws, Draw draw) {
    std::vector<double> prob(m.node_count(), 0), counts(m.node_count(), 0);
    double z = 0;
    for (NodeId v : cands)
        if (v != u) {
            prob[v] = std::pow(static_cast<double>(m.distance(u, v)), -2.0);
            z += prob[v];
        }
    for (auto& x : prob) x /= z;
    for (std::uint64_t i = 0; i < draws; ++i) ++counts[draw()];
    std::vector<double> o, p;
    for (NodeId v = 0; v < m.node_count(); ++v)
        if (prob[v] > 0) {
            o.push_back(counts[v]);
            p.push_back(prob[v]);
        } else if (counts[v] > 0) {
            return 0.0; // drew a non-candidate
        }
    return chi_square_p(o, p);
}

Outcome sampler_oracles() {
    std::string detail;
    bool ok = true;
    auto record = [&](const std::string& name, double p) {
        ok = ok && p > 0.01;
        detail += name + " p=" + fmt(p, 3) + "; ";
    };
    // Whole-grid ring sampler: every node of a 100x100 torus and a 64x64 plain grid.
    for (auto [n, wrap, x, y] : {std::tuple{100, true, 17, 80}, std::tuple{64, false, 3, 50}}) {
        const GridMetric m({n, wrap});
        const GridRingSampler sampler(m, 2.0);
        const NodeId u = m.id({x, y});
        std::vector<NodeId> all(m.node_count());
        std::iota(all.begin(), all.end(), NodeId{0});
        RngStream s(1010, u, StreamPurpose::test);
        record("ring n=" + std::to_string(n) + (wrap ? " torus" : " plain"),
               node_frequency_p(m, u, all, 2000000, [&] { return sampler.sample(u, s); }));
    }
    // Explicit candidate subsets of size 10^4 and 500.
    for (std::size_t size : {std::size_t{10000}, std::size_t{500}}) {
        const GridMetric m({128, true});
        RngStream pick(1011, size, StreamPurpose::test);
        std::set<NodeId> chosen;
        while (chosen.size() < size) chosen.insert(static_cast<NodeId>(pick.below(m.node_count())));
        const std::vector<NodeId> cands(chosen.begin(), chosen.end());
        const NodeId u = m.id({64, 64});
        RngStream s(1012, size, StreamPurpose::test);
        record("subset " + std::to_string(size), node_frequency_p(m, u, cands, 2000000, [&] {
                   return *sample_inverse_square_target(u, std::span<const NodeId>(cands), m, s);
               }));
    }
    // Popularity CDF against the DKW band (alpha = 0.01) at 10^6 draws.
    for (double eps : {0.5, 1.0, 2.0}) {
        const PopularityDist dist(eps);
        RngStream s(1013, static_cast<std::uint64_t>(eps * 10), StreamPurpose::popularity);
        const std::size_t n = 1000000;
        std::vector<double> xs(n);
        for (auto& v : xs) v = sample_popularity(s, eps);
        std::sort(xs.begin(), xs.end());
        double sup = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double f = dist.cdf(xs[i]);
            sup = std::max({sup, std::abs(static_cast<double>(i + 1) / n - f), std::abs(static_cast<double>(i) / n - f)});
        }
        const double band = std::sqrt(std::log(2.0 / 0.01) / (2.0 * n));
        ok = ok && sup < band;
        detail += "DKW eps=" + fmt(eps, 2) + " sup=" + fmt(sup, 3) + " < " + fmt(band, 3) + "; ";
    }
    return {ok, detail};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::string dir = "acceptance_work";
    std::vector<int> only;
    app.add_option("--workdir", dir, "scratch directory");
    app.add_option("--only", only, "run only these criteria")->delimiter(',');
    app.add_option("--threads", threads, "worker threads");
    CLI11_PARSE(app, argc, argv);
    workdir = dir;
    fs::create_directories(workdir);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"Kleinberg hops fit c log^2 n", kleinberg_scaling},
        {"KH U-curve over k at n=1024", kh_u_curve},
        {"KH and RH at k=1 match Kleinberg", reduction_at_k1},
        {"KH normalization bound, exhaustive", kh_norm_exhaustive},
        {"RH ball counts, n=64 k=4, 20 seeds", rh_balls},
        {"sphere overlap, exhaustive n<=33", sphere_overlap},
        {"WNPA degree law at n=512", wnpa_degree},
        {"WNPA beats Kleinberg (grid and road)", wnpa_vs_kleinberg},
        {"CLI determinism across thread counts", cli_determinism},
        {"sampler oracles (chi-square, DKW)", sampler_oracles},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << " ("
                  << fmt(secs, 3) << " s)\n    " << o.detail << std::endl;
    }
    return failed ? 1 : 0;
}
