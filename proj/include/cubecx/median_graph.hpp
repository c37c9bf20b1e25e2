#pragma once

// Median graphs (1-skeleta of CAT(0) cube complexes), their hyperplanes and
// the l1 metric on vertices.

#include <array>
#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace cubecx {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;
using HyperplaneId = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Neighbor entry in an adjacency list: the adjacent vertex and the id of the
/// connecting edge.
struct Incidence {
    Vertex neighbor;
    EdgeId edge;
};

/**
 * Immutable simple connected graph.
 *
 * Edges are stored normalized (first < second) in input order; edge ids are
 * positions in that list. Adjacency lists are sorted by neighbor.
 */
class MedianGraph {
public:
    MedianGraph(const MedianGraph& other);
    MedianGraph& operator=(const MedianGraph& other);
    MedianGraph(MedianGraph&&) noexcept;
    MedianGraph& operator=(MedianGraph&&) noexcept;

    std::size_t vertex_count() const noexcept { return vertex_count_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_[e]; }
    std::span<const Incidence> neighbors(Vertex v) const {
        return {incidences_.data() + offsets_[v], incidences_.data() + offsets_[v + 1]};
    }
    std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
    std::optional<EdgeId> find_edge(Vertex a, Vertex b) const;
    bool adjacent(Vertex a, Vertex b) const { return find_edge(a, b).has_value(); }

    /// Largest cube dimension, once computed by dimension().
    std::optional<unsigned> cached_dimension() const noexcept;

private:
    friend MedianGraph build_graph(std::size_t, std::span<const Edge>);
    friend unsigned dimension(const MedianGraph&);
    MedianGraph() = default;

    std::size_t vertex_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_;
    std::vector<Incidence> incidences_;
    // -1 until computed; concurrent computations store the same value.
    mutable std::atomic<int> dimension_cache_{-1};
};

/// Throws Error{EmptyGraph, VertexOutOfRange, LoopEdge, DuplicateEdge, DisconnectedGraph}.
MedianGraph build_graph(std::size_t vertex_count, std::span<const Edge> edges);

struct ValidationReport {
    bool passed = true;
    bool bipartite = true;
    bool exhaustive = true;
    /// Triple with zero or several medians; present iff !passed.
    std::optional<std::array<Vertex, 3>> failure_witness;
    std::size_t witness_median_count = 0;
    std::size_t triples_checked = 0;
};

inline constexpr std::size_t kDefaultExhaustiveLimit = 500;
inline constexpr std::size_t kDefaultMedianSamples = 10'000;

/// Checks that every vertex triple has exactly one median. All triples are
/// examined when vertex_count <= exhaustive_limit, otherwise sample_count
/// random triples drawn from a generator seeded with seed.
ValidationReport validate_median(const MedianGraph& g,
                                 std::size_t exhaustive_limit = kDefaultExhaustiveLimit,
                                 std::size_t sample_count = kDefaultMedianSamples,
                                 std::uint64_t seed = 0);

/// BFS distances from source (hop counts).
std::vector<std::uint32_t> bfs_distances(const MedianGraph& g, Vertex source);

/// Shortest edge-path length.
std::uint32_t d1(const MedianGraph& g, Vertex u, Vertex v);

/// Longest shortest path, by BFS from every vertex.
std::uint32_t diameter(const MedianGraph& g);

/// One BFS geodesic from u to v as a vertex sequence (u first).
std::vector<Vertex> geodesic(const MedianGraph& g, Vertex u, Vertex v);

/**
 * Partition of the edges into hyperplanes (square-equivalence classes) with
 * the two half-spaces of each hyperplane.
 *
 * Side 0 of every hyperplane is the half-space containing vertex 0, so the
 * side bits of a vertex are exactly the hyperplanes separating it from 0.
 */
class HyperplaneSet {
public:
    std::size_t size() const noexcept { return edges_of_.size(); }
    std::size_t vertex_count() const noexcept { return vertex_count_; }

    HyperplaneId hyperplane_of(EdgeId e) const { return class_of_edge_[e]; }
    const std::vector<HyperplaneId>& class_of_edge() const noexcept { return class_of_edge_; }
    const std::vector<EdgeId>& edges_of(HyperplaneId h) const { return edges_of_[h]; }

    /// 0 or 1: which half-space of h contains v.
    int side(HyperplaneId h, Vertex v) const {
        return static_cast<int>((bits_[v * words_ + h / 64] >> (h % 64)) & 1U);
    }
    /// Vertices on the given side of h, ascending.
    std::vector<Vertex> halfspace(HyperplaneId h, int which) const;

    /// Packed side bits of v, one bit per hyperplane.
    std::span<const std::uint64_t> side_bits(Vertex v) const {
        return {bits_.data() + v * words_, words_};
    }
    std::size_t words_per_vertex() const noexcept { return words_; }

    /// Number of hyperplanes separating u and v (popcount of the side xor).
    std::uint32_t separation_count(Vertex u, Vertex v) const;

private:
    friend HyperplaneSet compute_hyperplanes(const MedianGraph&);

    std::size_t vertex_count_ = 0;
    std::size_t words_ = 0;
    std::vector<HyperplaneId> class_of_edge_;
    std::vector<std::vector<EdgeId>> edges_of_;
    std::vector<std::uint64_t> bits_;
};

/// Union-find over the opposite-edges-of-a-4-cycle relation, then flood fill
/// per class. Throws Error{HalfspaceViolation} when a class does not split the
/// graph into exactly two components with its edges crossing between them.
HyperplaneSet compute_hyperplanes(const MedianGraph& g);

bool separates(const HyperplaneSet& hs, HyperplaneId h, Vertex u, Vertex v);

/// Hyperplanes separating u and v, ascending.
std::vector<HyperplaneId> separating_set(const HyperplaneSet& hs, Vertex u, Vertex v);

/// Vertices on some geodesic from u to v, ascending.
std::vector<Vertex> interval(const MedianGraph& g, const HyperplaneSet& hs, Vertex u, Vertex v);

/// The unique vertex of [u,v] ∩ [v,w] ∩ [w,u]. Throws Error{MedianViolation}.
Vertex median(const MedianGraph& g, const HyperplaneSet& hs, Vertex u, Vertex v, Vertex w);

/// Largest set of edges at a common vertex that pairwise span squares. Exact
/// subset search for vertex degree <= 20, greedy above. Cached on g.
unsigned dimension(const MedianGraph& g);

/// The neighbor of u across hyperplane h, if some edge at u lies in h.
std::optional<Vertex> neighbor_across(const MedianGraph& g, const HyperplaneSet& hs, Vertex u,
                                      HyperplaneId h);

}  // namespace cubecx
