#include "cubecx/normal_paths.hpp"

#include <algorithm>
#include <bit>
#include <mutex>
#include <string>

#include "cubecx/error.hpp"

namespace cubecx {

namespace {

bool share_square_corner(const MedianGraph& g, Vertex u, Vertex x, Vertex y) {
    for (const auto& inc : g.neighbors(x)) {
        if (inc.neighbor != u && g.adjacent(inc.neighbor, y)) return true;
    }
    return false;
}

std::optional<Cube> try_cross_cube(const MedianGraph& g, const HyperplaneSet& hs, Vertex u,
                                   std::vector<HyperplaneId> spanning, std::string* why) {
    std::sort(spanning.begin(), spanning.end());
    if (std::adjacent_find(spanning.begin(), spanning.end()) != spanning.end()) {
        if (why) *why = "repeated spanning hyperplane";
        return std::nullopt;
    }
    const std::size_t k = spanning.size();
    if (k >= 31) {
        if (why) *why = "cube dimension too large";
        return std::nullopt;
    }
    Cube cube;
    cube.base = u;
    cube.spanning = std::move(spanning);
    const std::size_t count = std::size_t{1} << k;
    cube.corners.assign(count, 0);
    cube.corners[0] = u;
    for (std::size_t mask = 1; mask < count; ++mask) {
        std::size_t bit = static_cast<std::size_t>(std::countr_zero(mask));
        auto next = neighbor_across(g, hs, cube.corners[mask ^ (std::size_t{1} << bit)], cube.spanning[bit]);
        if (!next) {
            if (why) *why = "no edge across hyperplane " + std::to_string(cube.spanning[bit]);
            return std::nullopt;
        }
        cube.corners[mask] = *next;
    }
    // Every cube edge must be present, not only the ones used to reach corners.
    for (std::size_t mask = 1; mask < count; ++mask) {
        for (std::size_t bit = 0; bit < k; ++bit) {
            if ((mask >> bit & 1U) == 0) continue;
            auto across = neighbor_across(g, hs, cube.corners[mask ^ (std::size_t{1} << bit)], cube.spanning[bit]);
            if (!across || *across != cube.corners[mask]) {
                if (why) *why = "crossings do not commute";
                return std::nullopt;
            }
        }
    }
    auto sorted = cube.corners;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        if (why) *why = "corners are not distinct";
        return std::nullopt;
    }
    return cube;
}

}  // namespace

std::vector<Vertex> Cube::vertex_set() const {
    auto out = corners;
    std::sort(out.begin(), out.end());
    return out;
}

bool Cube::contains(Vertex v) const { return std::find(corners.begin(), corners.end(), v) != corners.end(); }

std::uint32_t WeightMap::weight(HyperplaneId h) const {
    auto it = std::lower_bound(weights.begin(), weights.end(), h,
                               [](const auto& entry, HyperplaneId key) { return entry.first < key; });
    return it != weights.end() && it->first == h ? it->second : 0;
}

std::vector<HyperplaneId> adjacent_separating(const MedianGraph& g, const HyperplaneSet& hs, Vertex u, Vertex target) {
    std::vector<std::pair<HyperplaneId, Vertex>> found;
    for (const auto& inc : g.neighbors(u)) {
        HyperplaneId h = hs.hyperplane_of(inc.edge);
        if (separates(hs, h, u, target)) found.emplace_back(h, inc.neighbor);
    }
    for (std::size_t i = 0; i < found.size(); ++i) {
        for (std::size_t j = i + 1; j < found.size(); ++j) {
            if (!share_square_corner(g, u, found[i].second, found[j].second))
                throw Error(ErrorCode::NonCrossingPair, "hyperplanes " + std::to_string(found[i].first) + " and " +
                                                            std::to_string(found[j].first) +
                                                            " do not span a square at vertex " + std::to_string(u));
        }
    }
    std::vector<HyperplaneId> out;
    out.reserve(found.size());
    for (const auto& [h, _] : found) out.push_back(h);
    std::sort(out.begin(), out.end());
    return out;
}

Cube cross_cube(const MedianGraph& g, const HyperplaneSet& hs, Vertex u, std::vector<HyperplaneId> spanning) {
    std::string why;
    auto cube = try_cross_cube(g, hs, u, std::move(spanning), &why);
    if (!cube) throw Error(ErrorCode::NoSuchCube, "at vertex " + std::to_string(u) + ": " + why);
    return std::move(*cube);
}

CubePath normal_cube_path(const MedianGraph& g, const HyperplaneSet& hs, Vertex source, Vertex target) {
    CubePath path;
    path.vertices.push_back(source);
    Vertex u = source;
    std::uint32_t remaining = hs.separation_count(source, target);
    while (u != target) {
        auto spanning = adjacent_separating(g, hs, u, target);
        if (spanning.empty() || spanning.size() > remaining)
            throw Error(ErrorCode::HalfspaceViolation,
                        "no separating hyperplane at vertex " + std::to_string(u) + " toward " + std::to_string(target));
        remaining -= static_cast<std::uint32_t>(spanning.size());
        path.cubes.push_back(cross_cube(g, hs, u, std::move(spanning)));
        u = path.cubes.back().diagonal();
        path.vertices.push_back(u);
    }
    return path;
}

std::vector<Vertex> star_vertices(const MedianGraph& g, const HyperplaneSet& hs, const Cube& cube) {
    std::vector<HyperplaneId> extensions;
    for (const auto& inc : g.neighbors(cube.base)) {
        HyperplaneId t = hs.hyperplane_of(inc.edge);
        if (std::binary_search(cube.spanning.begin(), cube.spanning.end(), t)) continue;
        auto spanning = cube.spanning;
        spanning.push_back(t);
        if (try_cross_cube(g, hs, cube.base, std::move(spanning), nullptr)) extensions.push_back(t);
    }
    std::vector<Vertex> out = cube.corners;
    if (extensions.size() > 20)
        throw Error(ErrorCode::NoSuchCube, "star of a cube at vertex " + std::to_string(cube.base) +
                                               " has more than 20 extension directions");
    const std::size_t subsets = std::size_t{1} << extensions.size();
    for (std::size_t mask = 1; mask < subsets; ++mask) {
        auto spanning = cube.spanning;
        for (std::size_t i = 0; i < extensions.size(); ++i) {
            if (mask >> i & 1U) spanning.push_back(extensions[i]);
        }
        if (auto bigger = try_cross_cube(g, hs, cube.base, std::move(spanning), nullptr))
            out.insert(out.end(), bigger->corners.begin(), bigger->corners.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool verify_normality(const MedianGraph& g, const HyperplaneSet& hs, const CubePath& path) {
    if (path.vertices.size() != path.cubes.size() + 1) return false;
    for (std::size_t i = 0; i < path.cubes.size(); ++i) {
        const Cube& c = path.cubes[i];
        Vertex entry = path.vertices[i], exit = path.vertices[i + 1];
        if (c.dim() == 0 || !c.contains(entry) || !c.contains(exit)) return false;
        if (hs.separation_count(entry, exit) != c.dim()) return false;
    }
    for (std::size_t i = 0; i + 1 < path.cubes.size(); ++i) {
        auto here = path.cubes[i].vertex_set();
        auto next = path.cubes[i + 1].vertex_set();
        std::vector<Vertex> shared;
        std::set_intersection(here.begin(), here.end(), next.begin(), next.end(), std::back_inserter(shared));
        if (shared.size() != 1 || shared.front() != path.vertices[i + 1]) return false;
        auto star = star_vertices(g, hs, path.cubes[i]);
        std::vector<Vertex> touching;
        std::set_intersection(star.begin(), star.end(), next.begin(), next.end(), std::back_inserter(touching));
        if (touching != shared) return false;
    }
    return true;
}

WeightMap weight_map(const MedianGraph& g, const HyperplaneSet& hs, Vertex source, Vertex basepoint) {
    WeightMap map;
    map.source = source;
    map.basepoint = basepoint;
    auto path = normal_cube_path(g, hs, source, basepoint);
    for (std::size_t i = 0; i < path.cubes.size(); ++i) {
        for (HyperplaneId h : path.cubes[i].spanning) map.weights.emplace_back(h, static_cast<std::uint32_t>(i + 1));
    }
    std::sort(map.weights.begin(), map.weights.end());
    return map;
}

std::shared_ptr<const WeightMap> WeightCache::get(Vertex source, Vertex basepoint) {
    const std::uint64_t key = (std::uint64_t{source} << 32) | basepoint;
    {
        std::shared_lock lock(mutex_);
        if (auto it = entries_.find(key); it != entries_.end()) return it->second;
    }
    auto computed = std::make_shared<const WeightMap>(weight_map(*g_, *hs_, source, basepoint));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = entries_.emplace(key, std::move(computed));
    return it->second;
}

std::size_t WeightCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

}  // namespace cubecx
