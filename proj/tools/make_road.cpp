// make_road: writes a synthetic road network (jittered lattice of
// intersections, some segments removed) in DIMACS .gr/.co form.

#include <CLI11.hpp>

#include <iostream>

#include <smallworld/roadnet.hpp>

int main(int argc, char** argv) {
    CLI::App app{"Write a synthetic road network as DIMACS .gr/.co files"};
    int side = 100;
    double keep = 0.85;
    std::uint64_t seed = 1;
    std::string gr, co;
    bool largest = false;
    app.add_option("--side", side, "intersections per row")->capture_default_str();
    app.add_option("--keep", keep, "probability that a street segment exists")->capture_default_str();
    app.add_option("--seed", seed, "seed")->capture_default_str();
    app.add_option("--gr", gr, "edge file")->required();
    app.add_option("--co", co, "coordinate file")->required();
    app.add_flag("--largest-component", largest, "keep only the largest component");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        auto g = smallworld::synthetic_road_network(side, keep, seed);
        if (largest) g = smallworld::largest_component_subgraph(g);
        smallworld::write_dimacs(g, gr, co);
        std::cerr << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
    } catch (const smallworld::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
