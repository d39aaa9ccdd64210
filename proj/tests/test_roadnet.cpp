#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include <smallworld/roadnet.hpp>

using namespace smallworld;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() / ("sw_road_" + std::to_string(::getpid()) + "_" +
                                              ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name, const std::string& content) const {
        const auto p = (path_ / name).string();
        std::ofstream(p) << content;
        return p;
    }
    std::string path(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

RoadGraph from_edges(std::size_t n, std::vector<RoadEdge> edges) {
    return RoadGraph(std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::move(edges));
}

} // namespace

TEST(RoadGraph, SingleEdge) {
    const auto g = from_edges(2, {{0, 1, 5}});
    EXPECT_EQ(single_source_distances(g, 0)[1], 5);
    EXPECT_EQ(single_source_distances(g, 1)[0], 5);
}

TEST(RoadGraph, TriangleTakesTheShortPath) {
    const auto g = from_edges(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 3}});
    EXPECT_EQ(single_source_distances(g, 0)[2], 2);
}

TEST(RoadGraph, PathDistances) {
    const auto g = from_edges(3, {{0, 1, 1}, {1, 2, 2}});
    EXPECT_EQ(single_source_distances(g, 0), (std::vector<Distance>{0, 1, 3}));
}

TEST(RoadGraph, ParallelEdgesKeepTheLightestAndSelfLoopsGo) {
    const auto g = from_edges(2, {{0, 1, 9}, {1, 0, 4}, {0, 0, 1}});
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_EQ(single_source_distances(g, 0)[1], 4);
}

TEST(RoadGraph, ComponentsAndUnreachable) {
    const auto g = from_edges(5, {{0, 1, 1}, {1, 2, 1}, {3, 4, 1}});
    EXPECT_EQ(g.component_count(), 2u);
    EXPECT_EQ(g.component(0), g.component(2));
    EXPECT_NE(g.component(0), g.component(3));
    EXPECT_EQ(g.component(g.largest_component() == g.component(0) ? 0 : 3), g.largest_component());
    EXPECT_EQ(g.component_size(g.largest_component()), 3u);
    EXPECT_EQ(single_source_distances(g, 0)[4], kUnreachable);
    const auto sub = largest_component_subgraph(g);
    EXPECT_EQ(sub.node_count(), 3u);
    EXPECT_EQ(sub.component_count(), 1u);
}

TEST(RoadGraph, RejectsBadEdges) {
    EXPECT_THROW(from_edges(2, {{0, 2, 1}}), IntegrityError);
    EXPECT_THROW(from_edges(2, {{0, 1, -1}}), InputError);
}

TEST(RoadGraph, MatchesFloydWarshallOnRandomGraph) {
    const std::size_t n = 500;
    std::mt19937 rng(17);
    std::uniform_int_distribution<NodeId> pick(0, n - 1);
    std::uniform_int_distribution<Distance> weight(0, 50);
    std::vector<RoadEdge> edges;
    for (int i = 0; i < 1500; ++i) edges.push_back({pick(rng), pick(rng), weight(rng)});
    const auto g = from_edges(n, edges);

    const Distance inf = std::numeric_limits<Distance>::max() / 4;
    std::vector<Distance> fw(n * n, inf);
    for (std::size_t i = 0; i < n; ++i) fw[i * n + i] = 0;
    for (const auto& e : edges) {
        if (e.u == e.v) continue;
        fw[e.u * n + e.v] = std::min(fw[e.u * n + e.v], e.weight);
        fw[e.v * n + e.u] = std::min(fw[e.v * n + e.u], e.weight);
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            const Distance ik = fw[i * n + k];
            if (ik == inf) continue;
            for (std::size_t j = 0; j < n; ++j) fw[i * n + j] = std::min(fw[i * n + j], ik + fw[k * n + j]);
        }
    for (NodeId s = 0; s < n; ++s) {
        const auto d = single_source_distances(g, s);
        for (std::size_t t = 0; t < n; ++t) {
            const Distance expect = fw[s * n + t] == inf ? kUnreachable : fw[s * n + t];
            ASSERT_EQ(d[t], expect) << s << "->" << t;
        }
    }
}

TEST(RoadMetric, SymmetricAndCounted) {
    auto g = std::make_shared<const RoadGraph>(synthetic_road_network(12, 0.9, 3));
    RoadMetric m(g);
    m.reset_counter();
    std::mt19937 rng(2);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(g->node_count() - 1));
    for (int i = 0; i < 30; ++i) {
        const NodeId a = pick(rng), b = pick(rng);
        EXPECT_EQ(m.distance(a, b), m.distance(b, a));
        EXPECT_EQ(m.distance(a, a), 0);
    }
    EXPECT_EQ(m.sssp_runs(), 90u);
    std::vector<NodeId> local;
    m.for_each_local(0, [&](NodeId v) { local.push_back(v); });
    EXPECT_EQ(local.size(), g->neighbors(0).size());
}

TEST(Loaders, GridShapedDimacsFileGivesLatticeDistances) {
    TempDir dir;
    const int side = 100;
    std::ostringstream gr, co;
    gr << "c grid\np sp " << side * side << ' ' << 2 * side * (side - 1) << '\n';
    co << "p aux sp co " << side * side << '\n';
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x) {
            const int id = y * side + x + 1;
            co << "v " << id << ' ' << x << ' ' << y << '\n';
            if (x + 1 < side) gr << "a " << id << ' ' << id + 1 << " 1\n";
            if (y + 1 < side) gr << "a " << id << ' ' << id + side << " 1\n";
        }
    const auto g = load_road_network(dir.file("g.gr", gr.str()), RoadFormat::dimacs, dir.file("g.co", co.str()));
    ASSERT_EQ(g.node_count(), static_cast<std::size_t>(side * side));
    const GridMetric lattice({side, false});
    for (NodeId s : {NodeId{0}, NodeId{4321}, NodeId{9999}}) {
        const auto d = single_source_distances(g, s);
        for (NodeId t = 0; t < g.node_count(); ++t) ASSERT_EQ(d[t], lattice.distance(s, t));
    }
    EXPECT_DOUBLE_EQ(g.x(4321), 21.0);
    EXPECT_DOUBLE_EQ(g.y(4321), 43.0);
}

TEST(Loaders, DimacsErrorsCarryLineNumbers) {
    TempDir dir;
    try {
        load_dimacs(dir.file("bad.gr", "p sp 3 2\na 1 2 4\na 2 x 1\n"));
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3);
    }
    EXPECT_THROW(load_dimacs(dir.file("dangling.gr", "p sp 2 1\na 1 3 4\n")), IntegrityError);
    EXPECT_THROW(load_dimacs(dir.file("noprob.gr", "a 1 2 4\n")), ParseError);
    EXPECT_THROW(load_dimacs(dir.path("missing.gr")), IoError);
    EXPECT_THROW(load_dimacs(dir.file("ok.gr", "p sp 2 1\na 1 2 4\n"), dir.file("bad.co", "v 1 0 0\nv 9 1 1\n")),
                 IntegrityError);
}

TEST(Loaders, CsvWithHeaderAndFractionalWeights) {
    TempDir dir;
    const auto edges = dir.file("e.csv", "u,v,w\n10,20,1.5\n20,30,0.25\n");
    const auto nodes = dir.file("n.csv", "id,x,y\n10,0,0\n20,1,0\n30,2,0\n");
    const auto g = load_csv(edges, nodes);
    EXPECT_EQ(g.node_count(), 3u);
    EXPECT_DOUBLE_EQ(g.weight_scale, 1000.0);
    EXPECT_EQ(single_source_distances(g, 0)[2], 1750);
    EXPECT_EQ(g.external_id(2), 30);
}

TEST(Loaders, CsvErrors) {
    TempDir dir;
    try {
        load_csv(dir.file("e.csv", "1,2,3\n2,3\n"));
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2);
    }
    EXPECT_THROW(load_csv(dir.file("e2.csv", "1,2,3\n2,4,1\n"), dir.file("n.csv", "1,0,0\n2,0,0\n3,0,0\n")),
                 IntegrityError);
}

TEST(Loaders, DimacsWriterRoundTrips) {
    TempDir dir;
    const auto g = synthetic_road_network(15, 0.8, 4);
    write_dimacs(g, dir.path("s.gr"), dir.path("s.co"));
    const auto h = load_dimacs(dir.path("s.gr"), dir.path("s.co"));
    ASSERT_EQ(h.node_count(), g.node_count());
    EXPECT_EQ(h.edge_count(), g.edge_count());
    for (NodeId s : {NodeId{0}, NodeId{100}})
        EXPECT_EQ(single_source_distances(h, s), single_source_distances(g, s));
}

TEST(Synthetic, DeterministicInSeed) {
    const auto a = synthetic_road_network(20, 0.85, 9), b = synthetic_road_network(20, 0.85, 9);
    EXPECT_EQ(a.edge_count(), b.edge_count());
    EXPECT_EQ(single_source_distances(a, 7), single_source_distances(b, 7));
    EXPECT_THROW(synthetic_road_network(1, 0.5, 1), ParameterError);
}
