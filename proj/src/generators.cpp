#include "cubecx/generators.hpp"

#include <limits>
#include <random>
#include <string>

#include "cubecx/error.hpp"
#include "detail.hpp"

namespace cubecx {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

constexpr std::size_t kSaturated = std::numeric_limits<std::size_t>::max();

std::size_t saturating_mul(std::size_t a, std::size_t b) {
    if (a != 0 && b > kSaturated / a) return kSaturated;
    return a * b;
}

void require_positive(std::size_t value, const char* what) {
    if (value == 0) throw Error(ErrorCode::InvalidSpec, std::string(what) + " must be positive");
}

std::size_t staircase_column(std::size_t steps, std::size_t x) { return std::min(x + 1, steps) + 1; }

MedianGraph construct(const GeneratorSpec& spec) {
    return std::visit(
        Overloaded{
            [](const spec::Path& p) { return path_graph(p.length); },
            [](const spec::Grid& p) { return grid_graph(p.sizes); },
            [](const spec::Tree& p) { return tree_graph(p.arity, p.depth); },
            [](const spec::Product& p) { return product_graph(construct(*p.left), construct(*p.right)); },
            [](const spec::Staircase& p) { return staircase(p.steps); },
            [](const spec::RandomTree& p) { return random_tree(p.nodes, p.seed); },
        },
        spec.kind);
}

}  // namespace

std::size_t planned_vertex_count(const GeneratorSpec& spec) {
    return std::visit(
        Overloaded{
            [](const spec::Path& p) -> std::size_t {
                require_positive(p.length, "path length");
                return p.length == kSaturated ? kSaturated : p.length + 1;
            },
            [](const spec::Grid& p) -> std::size_t {
                if (p.sizes.empty()) throw Error(ErrorCode::InvalidSpec, "grid needs at least one axis");
                std::size_t total = 1;
                for (std::size_t s : p.sizes) {
                    require_positive(s, "grid size");
                    total = saturating_mul(total, s);
                }
                return total;
            },
            [](const spec::Tree& p) -> std::size_t {
                require_positive(p.arity, "tree arity");
                require_positive(p.depth, "tree depth");
                std::size_t total = 1, level = 1;
                for (std::size_t d = 0; d < p.depth && total != kSaturated; ++d) {
                    level = saturating_mul(level, p.arity);
                    total = level > kSaturated - total ? kSaturated : total + level;
                }
                return total;
            },
            [](const spec::Product& p) -> std::size_t {
                if (!p.left || !p.right) throw Error(ErrorCode::InvalidSpec, "product needs two child specs");
                return saturating_mul(planned_vertex_count(*p.left), planned_vertex_count(*p.right));
            },
            [](const spec::Staircase& p) -> std::size_t {
                require_positive(p.steps, "staircase steps");
                std::size_t total = 0;
                for (std::size_t x = 0; x <= p.steps; ++x) total += staircase_column(p.steps, x);
                return total;
            },
            [](const spec::RandomTree& p) -> std::size_t {
                require_positive(p.nodes, "random_tree nodes");
                return p.nodes;
            },
        },
        spec.kind);
}

MedianGraph generate(const GeneratorSpec& spec, const GenerateOptions& options) {
    std::size_t planned = planned_vertex_count(spec);
    if (planned > options.vertex_cap)
        throw Error(ErrorCode::SpecTooLarge, "instance would have " +
                                                 (planned == kSaturated ? std::string("overflowing") : std::to_string(planned)) +
                                                 " vertices, cap is " + std::to_string(options.vertex_cap));
    MedianGraph g = construct(spec);
    auto report = validate_median(g, options.exhaustive_limit, options.sample_count, options.validation_seed);
    if (!report.passed) {
        auto [u, v, w] = *report.failure_witness;
        throw Error(ErrorCode::MedianViolation, "generated instance failed median validation at triple (" +
                                                    std::to_string(u) + "," + std::to_string(v) + "," +
                                                    std::to_string(w) + ")");
    }
    return g;
}

MedianGraph path_graph(std::size_t length) {
    std::vector<Edge> edges;
    edges.reserve(length);
    for (std::size_t i = 0; i < length; ++i) edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(i + 1));
    return build_graph(length + 1, edges);
}

MedianGraph grid_graph(std::span<const std::size_t> sizes) {
    if (sizes.empty()) throw Error(ErrorCode::InvalidSpec, "grid needs at least one axis");
    std::size_t total = 1;
    for (std::size_t s : sizes) {
        require_positive(s, "grid size");
        total *= s;
    }
    std::vector<Edge> edges;
    std::vector<std::size_t> stride(sizes.size(), 1);
    for (std::size_t axis = sizes.size() - 1; axis > 0; --axis) stride[axis - 1] = stride[axis] * sizes[axis];
    for (std::size_t v = 0; v < total; ++v) {
        for (std::size_t axis = 0; axis < sizes.size(); ++axis) {
            std::size_t coord = (v / stride[axis]) % sizes[axis];
            if (coord + 1 < sizes[axis])
                edges.emplace_back(static_cast<Vertex>(v), static_cast<Vertex>(v + stride[axis]));
        }
    }
    return build_graph(total, edges);
}

MedianGraph tree_graph(std::size_t arity, std::size_t depth) {
    require_positive(arity, "tree arity");
    std::vector<Edge> edges;
    std::size_t level_begin = 0, level_end = 1, next = 1;
    for (std::size_t d = 0; d < depth; ++d) {
        for (std::size_t parent = level_begin; parent < level_end; ++parent) {
            for (std::size_t c = 0; c < arity; ++c) edges.emplace_back(static_cast<Vertex>(parent), static_cast<Vertex>(next++));
        }
        level_begin = level_end;
        level_end = next;
    }
    return build_graph(next, edges);
}

MedianGraph product_graph(const MedianGraph& left, const MedianGraph& right) {
    const std::size_t nl = left.vertex_count(), nr = right.vertex_count();
    auto label = [nr](std::size_t a, std::size_t b) { return static_cast<Vertex>(a * nr + b); };
    std::vector<Edge> edges;
    edges.reserve(left.edge_count() * nr + right.edge_count() * nl);
    for (std::size_t a = 0; a < nl; ++a) {
        for (auto [b0, b1] : right.edges()) edges.emplace_back(label(a, b0), label(a, b1));
    }
    for (auto [a0, a1] : left.edges()) {
        for (std::size_t b = 0; b < nr; ++b) edges.emplace_back(label(a0, b), label(a1, b));
    }
    return build_graph(nl * nr, edges);
}

std::optional<Vertex> staircase_vertex(std::size_t steps, std::size_t x, std::size_t y) {
    if (x > steps || y > steps || y > x + 1) return std::nullopt;
    std::size_t label = 0;
    for (std::size_t c = 0; c < x; ++c) label += staircase_column(steps, c);
    return static_cast<Vertex>(label + y);
}

MedianGraph staircase(std::size_t steps) {
    require_positive(steps, "staircase steps");
    std::vector<std::size_t> column_start(steps + 2, 0);
    for (std::size_t x = 0; x <= steps; ++x) column_start[x + 1] = column_start[x] + staircase_column(steps, x);
    auto label = [&](std::size_t x, std::size_t y) { return static_cast<Vertex>(column_start[x] + y); };
    std::vector<Edge> edges;
    for (std::size_t x = 0; x <= steps; ++x) {
        const std::size_t height = staircase_column(steps, x);
        for (std::size_t y = 0; y < height; ++y) {
            if (y + 1 < height) edges.emplace_back(label(x, y), label(x, y + 1));
            if (x < steps && y < staircase_column(steps, x + 1)) edges.emplace_back(label(x, y), label(x + 1, y));
        }
    }
    return build_graph(column_start[steps + 1], edges);
}

MedianGraph random_tree(std::size_t nodes, std::uint64_t seed) {
    require_positive(nodes, "random_tree nodes");
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    edges.reserve(nodes - 1);
    for (std::size_t v = 1; v < nodes; ++v)
        edges.emplace_back(static_cast<Vertex>(detail::bounded(rng, v)), static_cast<Vertex>(v));
    return build_graph(nodes, edges);
}

}  // namespace cubecx
