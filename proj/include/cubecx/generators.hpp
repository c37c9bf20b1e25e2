#pragma once

// Instance families of median graphs.
//
// Vertex labeling:
//   path(k)          0-1-...-k
//   grid(sizes)      row-major: (i_0, ..., i_{d-1}) -> ((i_0 * s_1 + i_1) * s_2 + ...)
//   tree(a, depth)   breadth-first, root 0
//   product(A, B)    (a, b) -> a * |B| + b
//   staircase(s)     points (x, y) with y <= x + 1 in [0,s]^2, ordered by x then y
//   random_tree(n)   vertex i > 0 attaches to a uniform earlier vertex

#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "cubecx/median_graph.hpp"

namespace cubecx {

struct GeneratorSpec;

namespace spec {
struct Path {
    std::size_t length;  // edge count
};
struct Grid {
    std::vector<std::size_t> sizes;  // vertices per axis
};
struct Tree {
    std::size_t arity;
    std::size_t depth;
};
struct Product {
    std::shared_ptr<const GeneratorSpec> left;
    std::shared_ptr<const GeneratorSpec> right;
};
struct Staircase {
    std::size_t steps;
};
struct RandomTree {
    std::size_t nodes;
    std::uint64_t seed;
};
}  // namespace spec

struct GeneratorSpec {
    std::variant<spec::Path, spec::Grid, spec::Tree, spec::Product, spec::Staircase, spec::RandomTree> kind;

    static GeneratorSpec path(std::size_t length) { return {spec::Path{length}}; }
    static GeneratorSpec grid(std::vector<std::size_t> sizes) { return {spec::Grid{std::move(sizes)}}; }
    static GeneratorSpec tree(std::size_t arity, std::size_t depth) { return {spec::Tree{arity, depth}}; }
    static GeneratorSpec product(GeneratorSpec left, GeneratorSpec right) {
        return {spec::Product{std::make_shared<const GeneratorSpec>(std::move(left)),
                              std::make_shared<const GeneratorSpec>(std::move(right))}};
    }
    static GeneratorSpec staircase(std::size_t steps) { return {spec::Staircase{steps}}; }
    static GeneratorSpec random_tree(std::size_t nodes, std::uint64_t seed) { return {spec::RandomTree{nodes, seed}}; }
};

struct GenerateOptions {
    std::size_t vertex_cap = 1'000'000;
    std::size_t exhaustive_limit = kDefaultExhaustiveLimit;
    std::size_t sample_count = kDefaultMedianSamples;
    std::uint64_t validation_seed = 0;
};

/// Vertex count the generator would produce; throws Error{InvalidSpec} for
/// non-positive parameters.
std::size_t planned_vertex_count(const GeneratorSpec& spec);

/// Builds the instance and checks it with validate_median. Throws
/// Error{InvalidSpec, SpecTooLarge}, or Error{MedianViolation} if validation fails.
MedianGraph generate(const GeneratorSpec& spec, const GenerateOptions& options = {});

// Raw constructions, unvalidated.
MedianGraph path_graph(std::size_t length);
MedianGraph grid_graph(std::span<const std::size_t> sizes);
MedianGraph tree_graph(std::size_t arity, std::size_t depth);
MedianGraph product_graph(const MedianGraph& left, const MedianGraph& right);
MedianGraph staircase(std::size_t steps);
MedianGraph random_tree(std::size_t nodes, std::uint64_t seed);

/// Label of staircase point (x, y), or nullopt if outside the staircase.
std::optional<Vertex> staircase_vertex(std::size_t steps, std::size_t x, std::size_t y);

}  // namespace cubecx
