#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cubecx/generators.hpp"
#include "cubecx/median_graph.hpp"

namespace testing_support {

using cubecx::GeneratorSpec;
using cubecx::MedianGraph;
using cubecx::Vertex;

/// Row-major id of (row, col) in grid([rows, cols]).
constexpr Vertex at(std::size_t cols, std::size_t row, std::size_t col) {
    return static_cast<Vertex>(row * cols + col);
}

struct Named {
    std::string name;
    MedianGraph graph;
};

/// Small valid instances covering trees, products, staircases and a 3-cube.
inline std::vector<Named> small_family() {
    using cubecx::generate;
    std::vector<Named> out;
    out.push_back({"path(1)", generate(GeneratorSpec::path(1))});
    out.push_back({"path(7)", generate(GeneratorSpec::path(7))});
    out.push_back({"grid(3,4)", generate(GeneratorSpec::grid({3, 4}))});
    out.push_back({"grid(2,2,2)", generate(GeneratorSpec::grid({2, 2, 2}))});
    out.push_back({"grid(3,3,2)", generate(GeneratorSpec::grid({3, 3, 2}))});
    out.push_back({"tree(2,3)", generate(GeneratorSpec::tree(2, 3))});
    out.push_back({"tree(3,2)", generate(GeneratorSpec::tree(3, 2))});
    out.push_back({"staircase(3)", generate(GeneratorSpec::staircase(3))});
    out.push_back({"staircase(5)", generate(GeneratorSpec::staircase(5))});
    out.push_back({"random_tree(40,3)", generate(GeneratorSpec::random_tree(40, 3))});
    out.push_back({"product(random_tree(6,1),random_tree(5,2))",
                   generate(GeneratorSpec::product(GeneratorSpec::random_tree(6, 1), GeneratorSpec::random_tree(5, 2)))});
    out.push_back({"product(tree(2,1),path(2))",
                   generate(GeneratorSpec::product(GeneratorSpec::tree(2, 1), GeneratorSpec::path(2)))});
    out.push_back({"product(staircase(2),path(1))",
                   generate(GeneratorSpec::product(GeneratorSpec::staircase(2), GeneratorSpec::path(1)))});
    return out;
}

inline MedianGraph k23() {
    std::vector<cubecx::Edge> edges;
    for (Vertex a : {0u, 1u})
        for (Vertex b : {2u, 3u, 4u}) edges.emplace_back(a, b);
    return cubecx::build_graph(5, edges);
}

inline MedianGraph cycle(std::size_t n) {
    std::vector<cubecx::Edge> edges;
    for (std::size_t i = 0; i < n; ++i) edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % n));
    return cubecx::build_graph(n, edges);
}

/// The 3-cube with the corner 111 removed: hyperplanes still split it, but it
/// is not median. Vertices are the bit patterns 0..6.
inline MedianGraph punctured_cube() {
    std::vector<cubecx::Edge> edges;
    for (Vertex v = 0; v < 7; ++v)
        for (Vertex bit : {1u, 2u, 4u}) {
            Vertex w = v ^ bit;
            if (w < 7 && v < w) edges.emplace_back(v, w);
        }
    return cubecx::build_graph(7, edges);
}

}  // namespace testing_support
