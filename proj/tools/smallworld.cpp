// smallworld: generate, route, sweep, compare and validate small-world
// highway models from the command line.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <smallworld/smallworld.hpp>

using namespace smallworld;

namespace {

struct Flags {
    RunConfig cfg;
    std::string model = "kleinberg";
    std::string window_weighting = "inverse-square";
    bool undirected = false;
    bool no_wrap = false;
    bool no_timestamp = false;
    unsigned threads = 0;
    std::string k_list;
    std::string models = "kleinberg,wnpa";
    std::string policies;
    std::string graph;
    std::optional<NodeId> source, target;
    std::uint64_t hop_limit = 0;
    long d = 0;
    std::string radius_class = "n";
};

void add_model_flags(CLI::App* app, Flags& f, bool with_model = true) {
    if (with_model)
        app->add_option("--model", f.model, "kleinberg | kh | rh | wnpa")->capture_default_str();
    app->add_option("--n", f.cfg.params.n, "grid side");
    app->add_option("--p", f.cfg.params.p, "local radius")->capture_default_str();
    app->add_option("--q", f.cfg.params.q, "Kleinberg q, or Q for the highway models")->capture_default_str();
    app->add_option("--r", f.cfg.params.r, "clustering exponent")->capture_default_str();
    app->add_option("--epsilon,--eps", f.cfg.params.epsilon, "WNPA popularity exponent offset")->capture_default_str();
    app->add_option("--window,--A", f.cfg.params.window, "WNPA window factor A")->capture_default_str();
    app->add_option("--window-weighting", f.window_weighting, "inverse-square | uniform")->capture_default_str();
    app->add_flag("--wnpa-literal-rate", f.cfg.params.wnpa_literal_rate, "WNPA: eps*Q*k connections per node");
    app->add_flag("--rh-local-variant", f.cfg.params.rh_local_variant, "RH: add the 8 ball links per highway node");
    app->add_flag("--undirected", f.undirected, "mirror long-range edges");
    app->add_flag("--no-wrap", f.no_wrap, "plain grid instead of a torus");
    app->add_option("--road-file", f.cfg.road_file, "road network edge file");
    app->add_option("--road-coords", f.cfg.road_coords, "road network coordinate/node file");
    app->add_option("--road-format", f.cfg.road_format, "dimacs | csv")->capture_default_str();
}

void add_run_flags(CLI::App* app, Flags& f, const std::string& default_format) {
    // Subcommands share one config, so the default is set when this one is chosen.
    app->preparse_callback([&f, default_format](std::size_t) { f.cfg.format = default_format; });
    app->add_option("--seed", f.cfg.seed, "master seed")->capture_default_str();
    app->add_option("--threads", f.threads, "worker threads (default: SMALLWORLD_THREADS or all cores)");
    app->add_option("--output,-o", f.cfg.output, "output path (default: stdout)");
    app->add_option("--format", f.cfg.format, "output format")->default_str(default_format);
    app->add_flag("--no-timestamp", f.no_timestamp, "omit the generated_at field");
}

std::vector<double> parse_k_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParameterError("bad k value '" + item + "'");
        }
    }
    return out;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

Policy policy_from_flag(std::string s) {
    for (auto& ch : s)
        if (ch == '-') ch = '_';
    return parse_policy(s);
}

void resolve(Flags& f, const std::string& subcommand) {
    auto& c = f.cfg;
    c.subcommand = subcommand;
    c.params.model = parse_model(f.model);
    c.params.window_weighting = parse_window_weighting(f.window_weighting);
    c.params.directed = !f.undirected;
    c.params.wraparound = !f.no_wrap;
    c.topology = c.road_file.empty() ? "grid" : "road";
    if (c.topology == "road") {
        if (c.road_format != "dimacs" && c.road_format != "csv")
            throw ParameterError("--road-format must be dimacs or csv");
        c.params.n = 0;
        c.params.wraparound = true;
    } else if (c.params.n <= 0) {
        throw ParameterError("--n is required for grid topologies");
    }
}

class Output {
public:
    explicit Output(const std::string& path, bool binary = false) {
        if (!path.empty() && path != "-") {
            file_.open(path, binary ? std::ios::binary : std::ios::out);
            if (!file_) throw IoError("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
    void close() {
        if (file_.is_open()) {
            file_.close();
            if (!file_) throw IoError("write failed");
        } else {
            std::cout.flush();
        }
    }

private:
    std::ofstream file_;
};

std::shared_ptr<const RoadMetric> load_road(const RunConfig& c) {
    auto g = load_road_network(c.road_file, c.road_format == "csv" ? RoadFormat::csv : RoadFormat::dimacs,
                               c.road_coords);
    return std::make_shared<const RoadMetric>(std::make_shared<const RoadGraph>(std::move(g)));
}

json header_of(const Flags& f) { return artifact_header(f.cfg, !f.no_timestamp); }

// ---- generate ----

template <MetricSpace M>
void emit_graph(const Flags& f, const GraphInstance<M>& g) {
    const auto& c = f.cfg;
    if (c.format == "binary") {
        Output out(c.output, true);
        write_graph_binary(out.stream(), g, header_of(f));
        out.close();
    } else if (c.format == "json") {
        Output out(c.output);
        out.stream() << graph_json(g, header_of(f)).dump() << '\n';
        out.close();
    } else {
        throw ParameterError("generate --format must be json or binary");
    }
}

void run_generate(Flags& f) {
    resolve(f, "generate");
    const auto& c = f.cfg;
    if (c.topology == "road") emit_graph(f, generate_on_metric(c.params, load_road(c), c.seed, f.threads));
    else emit_graph(f, generate(c.params, c.seed, f.threads));
}

// ---- route ----

json trial_json(const TrialRecord& r) {
    return json{{"source", r.source},
                {"target", r.target},
                {"hops", r.hops},
                {"phase_hops", r.phase_hops},
                {"dead_ends", r.dead_ends},
                {"terminated", to_string(r.terminated)}};
}

template <MetricSpace M>
void route_on(const Flags& f, const GraphInstance<M>& g) {
    const auto& c = f.cfg;
    const Policy policy = c.policy.empty() ? default_policy(g.params.model) : policy_from_flag(c.policy);
    RoutingOptions opts;
    opts.c = c.c;
    opts.hop_limit = f.hop_limit;
    Output out(c.output);
    if (f.source || f.target) {
        if (!f.source || !f.target) throw ParameterError("--source and --target go together");
        const auto tr = route(g, *f.source, *f.target, policy, opts);
        json j = header_of(f);
        j["trace"] = {{"source", tr.source},
                      {"target", tr.target},
                      {"hops", tr.hops},
                      {"path", tr.path},
                      {"phase_hops", tr.phase_hops},
                      {"dead_ends", tr.dead_end_events},
                      {"terminated", to_string(tr.terminated)}};
        out.stream() << j.dump() << '\n';
        out.close();
        return;
    }
    if (c.pairs == 0) throw ParameterError("--pairs must be positive");
    const auto pairs = sample_pairs(*g.metric, c.pairs, derive_seed(c.seed, 0x50414952ULL));
    const auto records = route_pairs(g, policy, pairs, opts, f.threads);
    if (c.format == "csv") {
        write_csv_preamble(out.stream(), header_of(f));
        write_trials_csv(out.stream(), records);
    } else if (c.format == "json") {
        json j = header_of(f);
        if (records.size() >= kMinTrials) j["summary"] = to_json(summarize(records));
        json trials = json::array();
        for (const auto& r : records) trials.push_back(trial_json(r));
        j["trials"] = std::move(trials);
        out.stream() << j.dump() << '\n';
    } else {
        throw ParameterError("route --format must be json or csv");
    }
    out.close();
}

void run_route(Flags& f) {
    auto& c = f.cfg;
    if (!f.graph.empty()) {
        auto file = read_graph_file(f.graph);
        c.params = file.params;
        f.model = to_string(file.params.model);
        f.window_weighting = to_string(file.params.window_weighting);
        f.undirected = !file.params.directed;
        f.no_wrap = !file.params.wraparound;
        const json& h = file.header;
        if (h.contains("config") && h["config"].value("topology", "grid") == "road") {
            c.road_file = h["config"].value("road_file", "");
            c.road_coords = h["config"].value("road_coords", "");
            c.road_format = h["config"].value("road_format", "dimacs");
        }
        resolve(f, "route");
        if (c.topology == "road") route_on(f, attach(std::move(file), load_road(c)));
        else route_on(f, attach(std::move(file), make_grid(c.params)));
        return;
    }
    resolve(f, "route");
    if (c.topology == "road") route_on(f, generate_on_metric(c.params, load_road(c), c.seed, f.threads));
    else route_on(f, generate(c.params, c.seed, f.threads));
}

// ---- sweep ----

void run_sweep(Flags& f) {
    auto& c = f.cfg;
    resolve(f, "sweep");
    if (c.topology == "road") throw ParameterError("sweep runs on grid topologies");
    if (c.params.model != Model::kh && c.params.model != Model::rh) throw ParameterError("sweep --model must be kh or rh");
    c.k_values = parse_k_list(f.k_list);
    if (c.k_values.empty()) throw ParameterError("--k needs at least one value");
    SweepOptions o;
    o.base = c.params;
    o.pairs = c.pairs;
    o.seeds = c.seeds;
    o.seed = c.seed;
    o.threads = f.threads;
    o.policy = c.policy.empty() ? default_policy(c.params.model) : policy_from_flag(c.policy);
    o.routing.c = c.c;
    const auto curve = sweep_k(c.k_values, o);
    for (const auto& w : curve.warnings) std::cerr << "warning: " << w << '\n';
    Output out(c.output);
    if (c.format == "csv") {
        write_csv_preamble(out.stream(), header_of(f));
        write_sweep_csv(out.stream(), curve);
    } else if (c.format == "json") {
        json j = header_of(f);
        json pts = json::array();
        for (const auto& p : curve.points)
            pts.push_back({{"k", p.value}, {"summary", to_json(p.summary)}, {"graph_seeds", p.graph_seeds}});
        j["points"] = std::move(pts);
        j["warnings"] = curve.warnings;
        out.stream() << j.dump() << '\n';
    } else {
        throw ParameterError("sweep --format must be csv or json");
    }
    out.close();
}

// ---- compare ----

template <MetricSpace M>
void compare_on(const Flags& f, std::shared_ptr<const M> metric) {
    const auto& c = f.cfg;
    const auto policies = split_list(f.policies);
    if (!policies.empty() && policies.size() != c.compare.size())
        throw ParameterError("--policies needs one entry per model");
    std::vector<CompareConfig> configs;
    for (std::size_t i = 0; i < c.compare.size(); ++i) {
        CompareConfig cc;
        cc.label = c.compare[i];
        cc.params = c.params;
        cc.params.model = parse_model(c.compare[i]);
        cc.policy = policies.empty() ? default_policy(cc.params.model) : policy_from_flag(policies[i]);
        configs.push_back(std::move(cc));
    }
    CompareOptions o;
    o.pairs = c.pairs;
    o.seeds = c.seeds;
    o.seed = c.seed;
    o.threads = f.threads;
    o.routing.c = c.c;
    const auto rows = compare_models(metric, configs, o);
    Output out(c.output);
    if (c.format == "csv") {
        write_csv_preamble(out.stream(), header_of(f));
        write_compare_csv(out.stream(), rows);
    } else if (c.format == "json") {
        json j = header_of(f);
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"model", r.label},
                           {"summary", to_json(r.summary)},
                           {"ratio_vs_baseline", r.ratio},
                           {"ratio_ci", {r.ratio_ci_lo, r.ratio_ci_hi}},
                           {"paired_diff", r.diff_mean},
                           {"paired_diff_ci", {r.diff_ci_lo, r.diff_ci_hi}}});
        j["rows"] = std::move(arr);
        out.stream() << j.dump() << '\n';
    } else {
        throw ParameterError("compare --format must be csv or json");
    }
    out.close();
}

void run_compare(Flags& f) {
    auto& c = f.cfg;
    resolve(f, "compare");
    c.compare = split_list(f.models);
    if (c.compare.empty()) throw ParameterError("--models needs at least one model");
    if (c.topology == "road") compare_on(f, load_road(c));
    else compare_on(f, make_grid(c.params));
}

// ---- validate ----

void run_validate(Flags& f) {
    auto& c = f.cfg;
    const std::string lemma = c.lemma;
    if (lemma == "sphere-overlap" && c.params.n <= 0) throw ParameterError("--n is required");
    if (lemma != "kh-norm" && lemma != "rh-norm" && lemma != "rh-balls" && lemma != "sphere-overlap" &&
        lemma != "wnpa-degree")
        throw ParameterError("unknown lemma '" + lemma + "'");
    if (lemma == "kh-norm") f.model = "kh";
    if (lemma == "rh-norm" || lemma == "rh-balls") f.model = "rh";
    if (lemma == "wnpa-degree") f.model = "wnpa";
    resolve(f, "validate");
    if (c.topology == "road") throw ParameterError("validate runs on grid topologies");
    if (!f.k_list.empty()) c.k_values = parse_k_list(f.k_list);
    std::vector<LemmaReport> reports;
    const int n = c.params.n;
    if (lemma == "kh-norm") {
        std::vector<double> ks = c.k_values;
        if (ks.empty())
            for (int s = 1; s <= n; ++s)
                if (n % s == 0) ks.push_back(static_cast<double>(s) * s);
        for (double k : ks) {
            ModelParams p = c.params;
            p.k = k;
            validate(p, static_cast<std::uint64_t>(n) * n, true);
            reports.push_back(check_kh_norm(n, k, c.params.wraparound));
        }
    } else if (lemma == "rh-norm") {
        for (double k : c.k_values.empty() ? std::vector<double>{c.params.k} : c.k_values)
            reports.push_back(check_rh_norm(n, k, c.seeds, c.seed, 0.5, f.threads));
    } else if (lemma == "rh-balls") {
        const auto cls = parse_radius_class(f.radius_class);
        c.policy = f.radius_class;
        for (std::uint64_t i = 0; i < c.seeds; ++i) {
            ModelParams p = c.params;
            p.q = 0;
            const auto g = generate(p, derive_seed(c.seed, i), f.threads);
            reports.push_back(check_ball_counts(g, cls, derive_seed(c.seed, i, 1), f.threads));
        }
    } else if (lemma == "sphere-overlap") {
        if (f.d > 0) {
            reports.push_back(check_sphere_overlap(n, f.d, c.params.wraparound));
        } else {
            for (Distance d = 1; 2 * d < n; ++d) reports.push_back(check_sphere_overlap(n, d, c.params.wraparound));
        }
    } else {
        for (std::uint64_t i = 0; i < c.seeds; ++i)
            reports.push_back(check_wnpa_degree(generate(c.params, derive_seed(c.seed, i), f.threads)));
    }
    bool pass = !reports.empty();
    json arr = json::array();
    for (const auto& r : reports) {
        pass = pass && r.pass;
        arr.push_back(to_json(r));
    }
    json j = header_of(f);
    j["pass"] = pass;
    j["reports"] = std::move(arr);
    Output out(c.output);
    out.stream() << j.dump() << '\n';
    out.close();
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const InvariantError*>(&e)) return 4;
    if (dynamic_cast<const IoError*>(&e)) return 3;
    if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const IntegrityError*>(&e)) return 3;
    if (dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const GenerationError*>(&e)) return 2;
    return 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Small-world highway models: generation, greedy routing and lemma checks"};
    app.require_subcommand(1);
    Flags f;

    auto* gen = app.add_subcommand("generate", "generate one model instance");
    add_model_flags(gen, f);
    gen->add_option("--k", f.cfg.params.k, "highway parameter k")->capture_default_str();
    add_run_flags(gen, f, "json");

    auto* rt = app.add_subcommand("route", "route random (s, t) pairs on one instance");
    add_model_flags(rt, f);
    rt->add_option("--k", f.cfg.params.k, "highway parameter k")->capture_default_str();
    rt->add_option("--graph", f.graph, "route on a saved graph file instead of generating one");
    rt->add_option("--pairs", f.cfg.pairs, "number of (s, t) pairs")->capture_default_str();
    rt->add_option("--policy", f.cfg.policy, "kleinberg | kh_known | kh_unknown | rh | wnpa_highway | full_greedy");
    rt->add_option("--c", f.cfg.c, "RH final-approach factor")->capture_default_str();
    rt->add_option("--hop-limit", f.hop_limit, "abort a route after this many hops (>= 4n)");
    rt->add_option("--source", f.source, "single route: source node id");
    rt->add_option("--target", f.target, "single route: target node id");
    add_run_flags(rt, f, "json");

    auto* sw = app.add_subcommand("sweep", "mean hops against k");
    add_model_flags(sw, f);
    sw->add_option("--k", f.k_list, "comma-separated k values")->required();
    sw->add_option("--pairs", f.cfg.pairs, "pairs per k, pooled over graph seeds")->capture_default_str();
    sw->add_option("--seeds", f.cfg.seeds, "graphs per k")->capture_default_str();
    sw->add_option("--policy", f.cfg.policy, "router (default: the model's own)");
    sw->add_option("--c", f.cfg.c, "RH final-approach factor")->capture_default_str();
    add_run_flags(sw, f, "csv");

    auto* cmp = app.add_subcommand("compare", "paired comparison of models on shared (s, t) pairs");
    add_model_flags(cmp, f, false);
    cmp->add_option("--k", f.cfg.params.k, "highway parameter k")->capture_default_str();
    cmp->add_option("--models", f.models, "comma-separated models; the first is the baseline")->capture_default_str();
    cmp->add_option("--policies", f.policies, "comma-separated routers, one per model");
    cmp->add_option("--pairs", f.cfg.pairs, "pairs per graph seed")->capture_default_str();
    cmp->add_option("--seeds", f.cfg.seeds, "graph seeds")->capture_default_str();
    cmp->add_option("--c", f.cfg.c, "RH final-approach factor")->capture_default_str();
    add_run_flags(cmp, f, "csv");

    auto* val = app.add_subcommand("validate", "numeric lemma checks");
    add_model_flags(val, f, false);
    val->add_option("--lemma", f.cfg.lemma, "kh-norm | rh-norm | rh-balls | sphere-overlap | wnpa-degree")->required();
    val->add_option("--k", f.k_list, "k value(s), comma-separated");
    val->add_option("--d", f.d, "sphere-overlap radius (default: every d < n/2)");
    val->add_option("--seeds", f.cfg.seeds, "instances to check")->capture_default_str();
    val->add_option("--radius-class", f.radius_class, "rh-balls: n | loglog | const")->capture_default_str();
    add_run_flags(val, f, "json");

    f.cfg.pairs = 1000;
    f.cfg.seeds = 1;
    sw->callback([&] {
        if (sw->count("--seeds") == 0) f.cfg.seeds = 3;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*gen) run_generate(f);
        else if (*rt) run_route(f);
        else if (*sw) run_sweep(f);
        else if (*cmp) run_compare(f);
        else if (*val) {
            if (!f.k_list.empty()) {
                const auto ks = parse_k_list(f.k_list);
                if (ks.size() == 1) f.cfg.params.k = ks.front();
            }
            run_validate(f);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return 0;
}
