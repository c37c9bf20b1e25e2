#pragma once

// Normal cube paths and the basepoint-relative hyperplane weights they induce.

#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cubecx/median_graph.hpp"

namespace cubecx {

/**
 * A cube given by a base corner and the hyperplanes it spans. corners[mask]
 * is the vertex reached from base by crossing the spanning hyperplanes
 * selected by mask, so corners.front() is the base and corners.back() is the
 * diagonally opposite corner.
 */
struct Cube {
    Vertex base = 0;
    std::vector<HyperplaneId> spanning;  // ascending
    std::vector<Vertex> corners;         // 2^dim entries, indexed by mask

    std::size_t dim() const noexcept { return spanning.size(); }
    Vertex diagonal() const { return corners.back(); }
    /// Corners in ascending vertex order.
    std::vector<Vertex> vertex_set() const;
    bool contains(Vertex v) const;
};

/// vertices[i] is the entry corner of cubes[i]; vertices.back() is the terminal
/// vertex. An empty path (source == target) has no cubes and one vertex.
struct CubePath {
    std::vector<Cube> cubes;
    std::vector<Vertex> vertices;
};

/// Sparse weights w_s(h) of the hyperplanes separating source from basepoint:
/// a hyperplane crossed by the i-th cube (0-based) of the normal cube path from
/// source to basepoint has weight i + 1. Sorted by hyperplane.
struct WeightMap {
    Vertex basepoint = 0;
    Vertex source = 0;
    std::vector<std::pair<HyperplaneId, std::uint32_t>> weights;

    /// 0 when h does not separate source from basepoint.
    std::uint32_t weight(HyperplaneId h) const;
};

/// Hyperplanes of edges at u separating u from target; they must pairwise
/// span squares at u, else Error{NonCrossingPair}.
std::vector<HyperplaneId> adjacent_separating(const MedianGraph& g, const HyperplaneSet& hs, Vertex u, Vertex target);

/// Cube at u spanned by the given hyperplanes (each carried by an edge at u).
/// Throws Error{NoSuchCube} when the crossings do not close up into a cube.
Cube cross_cube(const MedianGraph& g, const HyperplaneSet& hs, Vertex u, std::vector<HyperplaneId> spanning);

/// Greedy construction: at each vertex cross the full set of adjacent
/// separating hyperplanes.
CubePath normal_cube_path(const MedianGraph& g, const HyperplaneSet& hs, Vertex source, Vertex target);

/// Consecutive cubes meet in exactly one vertex, and each cube meets the star of
/// its predecessor only in that vertex.
bool verify_normality(const MedianGraph& g, const HyperplaneSet& hs, const CubePath& path);

/// Vertices of the union of all cubes having `cube` as a face.
std::vector<Vertex> star_vertices(const MedianGraph& g, const HyperplaneSet& hs, const Cube& cube);

WeightMap weight_map(const MedianGraph& g, const HyperplaneSet& hs, Vertex source, Vertex basepoint);

/**
 * Thread-safe memo of weight maps keyed by (source, basepoint). The graph and
 * hyperplane set must outlive the cache. Concurrent callers may compute the
 * same entry; the first insert wins and all values are identical.
 */
class WeightCache {
public:
    WeightCache(const MedianGraph& g, const HyperplaneSet& hs) : g_(&g), hs_(&hs) {}

    std::shared_ptr<const WeightMap> get(Vertex source, Vertex basepoint);
    std::size_t size() const;

    const MedianGraph& graph() const noexcept { return *g_; }
    const HyperplaneSet& hyperplanes() const noexcept { return *hs_; }

private:
    const MedianGraph* g_;
    const HyperplaneSet* hs_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::uint64_t, std::shared_ptr<const WeightMap>> entries_;
};

}  // namespace cubecx
