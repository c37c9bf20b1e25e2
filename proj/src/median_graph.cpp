#include "cubecx/median_graph.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <string>

#include "cubecx/error.hpp"
#include "detail.hpp"

namespace cubecx {

namespace {

constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

std::string edge_text(Vertex a, Vertex b) {
    return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0U); }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent_[b] = a;
    }

private:
    std::vector<std::uint32_t> parent_;
};

// Number of vertices of g lying in all three pairwise intervals of (u, v, w),
// from BFS rows of the three vertices.
std::size_t count_medians(const std::vector<std::uint32_t>& du, const std::vector<std::uint32_t>& dv,
                          const std::vector<std::uint32_t>& dw, Vertex u, Vertex v, Vertex w) {
    const std::uint32_t uv = du[v], vw = dv[w], wu = dw[u];
    std::size_t count = 0;
    for (std::size_t x = 0; x < du.size(); ++x) {
        if (du[x] + dv[x] == uv && dv[x] + dw[x] == vw && dw[x] + du[x] == wu) ++count;
    }
    return count;
}

// Largest clique of `compatible` (bitmask adjacency over k <= 64 items).
unsigned max_clique(const std::vector<std::uint64_t>& compatible, std::uint64_t candidates, unsigned size) {
    if (candidates == 0) return size;
    unsigned best = size;
    while (candidates != 0) {
        if (size + static_cast<unsigned>(std::popcount(candidates)) <= best) break;
        unsigned i = static_cast<unsigned>(std::countr_zero(candidates));
        candidates &= candidates - 1;
        best = std::max(best, max_clique(compatible, candidates & compatible[i], size + 1));
    }
    return best;
}

}  // namespace

MedianGraph::MedianGraph(const MedianGraph& other)
    : vertex_count_(other.vertex_count_),
      edges_(other.edges_),
      offsets_(other.offsets_),
      incidences_(other.incidences_),
      dimension_cache_(other.dimension_cache_.load()) {}

MedianGraph& MedianGraph::operator=(const MedianGraph& other) {
    if (this != &other) {
        vertex_count_ = other.vertex_count_;
        edges_ = other.edges_;
        offsets_ = other.offsets_;
        incidences_ = other.incidences_;
        dimension_cache_.store(other.dimension_cache_.load());
    }
    return *this;
}

MedianGraph::MedianGraph(MedianGraph&& other) noexcept
    : vertex_count_(other.vertex_count_),
      edges_(std::move(other.edges_)),
      offsets_(std::move(other.offsets_)),
      incidences_(std::move(other.incidences_)),
      dimension_cache_(other.dimension_cache_.load()) {}

MedianGraph& MedianGraph::operator=(MedianGraph&& other) noexcept {
    vertex_count_ = other.vertex_count_;
    edges_ = std::move(other.edges_);
    offsets_ = std::move(other.offsets_);
    incidences_ = std::move(other.incidences_);
    dimension_cache_.store(other.dimension_cache_.load());
    return *this;
}

std::optional<EdgeId> MedianGraph::find_edge(Vertex a, Vertex b) const {
    auto row = neighbors(a);
    auto it = std::lower_bound(row.begin(), row.end(), b,
                               [](const Incidence& inc, Vertex key) { return inc.neighbor < key; });
    if (it != row.end() && it->neighbor == b) return it->edge;
    return std::nullopt;
}

std::optional<unsigned> MedianGraph::cached_dimension() const noexcept {
    int d = dimension_cache_.load();
    if (d < 0) return std::nullopt;
    return static_cast<unsigned>(d);
}

MedianGraph build_graph(std::size_t vertex_count, std::span<const Edge> edges) {
    if (vertex_count == 0) throw Error(ErrorCode::EmptyGraph, "graph must have at least one vertex");
    if (vertex_count > std::numeric_limits<Vertex>::max())
        throw Error(ErrorCode::VertexOutOfRange, "too many vertices");

    MedianGraph g;
    g.vertex_count_ = vertex_count;
    g.edges_.reserve(edges.size());
    for (auto [a, b] : edges) {
        if (a >= vertex_count || b >= vertex_count)
            throw Error(ErrorCode::VertexOutOfRange, "edge " + edge_text(a, b) + " has an endpoint >= " +
                                                         std::to_string(vertex_count));
        if (a == b) throw Error(ErrorCode::LoopEdge, "loop at vertex " + std::to_string(a));
        g.edges_.emplace_back(std::min(a, b), std::max(a, b));
    }

    std::vector<std::size_t> degree(vertex_count, 0);
    for (auto [a, b] : g.edges_) {
        ++degree[a];
        ++degree[b];
    }
    g.offsets_.assign(vertex_count + 1, 0);
    for (std::size_t v = 0; v < vertex_count; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
    g.incidences_.resize(g.offsets_.back());
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (EdgeId e = 0; e < g.edges_.size(); ++e) {
        auto [a, b] = g.edges_[e];
        g.incidences_[fill[a]++] = {b, e};
        g.incidences_[fill[b]++] = {a, e};
    }
    for (std::size_t v = 0; v < vertex_count; ++v) {
        auto first = g.incidences_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
        auto last = g.incidences_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
        std::sort(first, last, [](const Incidence& x, const Incidence& y) { return x.neighbor < y.neighbor; });
        auto dup = std::adjacent_find(first, last, [](const Incidence& x, const Incidence& y) {
            return x.neighbor == y.neighbor;
        });
        if (dup != last)
            throw Error(ErrorCode::DuplicateEdge, "edge " + edge_text(static_cast<Vertex>(v), dup->neighbor) +
                                                      " listed more than once");
    }

    auto dist = bfs_distances(g, 0);
    auto missing = std::find(dist.begin(), dist.end(), kUnreached);
    if (missing != dist.end())
        throw Error(ErrorCode::DisconnectedGraph,
                    "vertex " + std::to_string(missing - dist.begin()) + " is unreachable from vertex 0");
    return g;
}

std::vector<std::uint32_t> bfs_distances(const MedianGraph& g, Vertex source) {
    std::vector<std::uint32_t> dist(g.vertex_count(), kUnreached);
    std::vector<Vertex> queue;
    queue.reserve(g.vertex_count());
    dist[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        Vertex x = queue[head];
        for (const auto& inc : g.neighbors(x)) {
            if (dist[inc.neighbor] == kUnreached) {
                dist[inc.neighbor] = dist[x] + 1;
                queue.push_back(inc.neighbor);
            }
        }
    }
    return dist;
}

std::uint32_t d1(const MedianGraph& g, Vertex u, Vertex v) {
    if (u == v) return 0;
    return bfs_distances(g, u)[v];
}

std::uint32_t diameter(const MedianGraph& g) {
    const std::size_t n = g.vertex_count();
    unsigned workers = detail::worker_count(n / 64);
    std::vector<std::uint32_t> best(workers, 0);
    detail::parallel_chunks(n, workers, [&](unsigned w, std::size_t begin, std::size_t end) {
        for (std::size_t v = begin; v < end; ++v) {
            auto dist = bfs_distances(g, static_cast<Vertex>(v));
            best[w] = std::max(best[w], *std::max_element(dist.begin(), dist.end()));
        }
    });
    return *std::max_element(best.begin(), best.end());
}

std::vector<Vertex> geodesic(const MedianGraph& g, Vertex u, Vertex v) {
    auto dist = bfs_distances(g, v);
    std::vector<Vertex> path{u};
    Vertex x = u;
    while (x != v) {
        for (const auto& inc : g.neighbors(x)) {
            if (dist[inc.neighbor] + 1 == dist[x]) {
                x = inc.neighbor;
                break;
            }
        }
        path.push_back(x);
    }
    return path;
}

ValidationReport validate_median(const MedianGraph& g, std::size_t exhaustive_limit, std::size_t sample_count,
                                 std::uint64_t seed) {
    ValidationReport report;
    const std::size_t n = g.vertex_count();

    // Bipartite rejection: an edge (a,b) with equal BFS depth from 0 makes
    // (0,a,b) a triple whose three intervals have empty intersection.
    auto depth = bfs_distances(g, 0);
    for (auto [a, b] : g.edges()) {
        if (depth[a] == depth[b]) {
            report.passed = false;
            report.bipartite = false;
            report.failure_witness = std::array<Vertex, 3>{0, a, b};
            report.witness_median_count = 0;
            return report;
        }
    }

    if (n <= exhaustive_limit) {
        report.exhaustive = true;
        std::vector<std::vector<std::uint32_t>> dist(n);
        for (std::size_t v = 0; v < n; ++v) dist[v] = bfs_distances(g, static_cast<Vertex>(v));

        const std::size_t words = (n + 63) / 64;
        std::vector<std::uint64_t> intervals(n * n * words, 0);
        auto row = [&](std::size_t a, std::size_t b) { return intervals.data() + (a * n + b) * words; };
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                std::uint64_t* bits = row(a, b);
                const std::uint32_t ab = dist[a][b];
                for (std::size_t x = 0; x < n; ++x) {
                    if (dist[a][x] + dist[x][b] == ab) bits[x / 64] |= std::uint64_t{1} << (x % 64);
                }
            }
        }
        for (std::size_t u = 0; u < n; ++u) {
            for (std::size_t v = u + 1; v < n; ++v) {
                const std::uint64_t* uv = row(u, v);
                for (std::size_t w = v + 1; w < n; ++w) {
                    const std::uint64_t* vw = row(v, w);
                    const std::uint64_t* uw = row(u, w);
                    std::size_t count = 0;
                    for (std::size_t i = 0; i < words; ++i)
                        count += static_cast<std::size_t>(std::popcount(uv[i] & vw[i] & uw[i]));
                    ++report.triples_checked;
                    if (count != 1) {
                        report.passed = false;
                        report.failure_witness = std::array<Vertex, 3>{static_cast<Vertex>(u), static_cast<Vertex>(v),
                                                                       static_cast<Vertex>(w)};
                        report.witness_median_count = count;
                        return report;
                    }
                }
            }
        }
        return report;
    }

    report.exhaustive = false;
    std::mt19937_64 rng(seed);
    std::vector<std::array<Vertex, 3>> triples(sample_count);
    for (auto& t : triples) {
        for (auto& x : t) x = static_cast<Vertex>(detail::bounded(rng, n));
    }
    unsigned workers = detail::worker_count(sample_count / 16);
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> first_bad(workers, kNone);
    std::vector<std::size_t> bad_count(workers, 0);
    detail::parallel_chunks(sample_count, workers, [&](unsigned wk, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            auto [u, v, w] = triples[i];
            auto du = bfs_distances(g, u);
            auto dv = bfs_distances(g, v);
            auto dw = bfs_distances(g, w);
            std::size_t count = count_medians(du, dv, dw, u, v, w);
            if (count != 1) {
                first_bad[wk] = i;
                bad_count[wk] = count;
                return;
            }
        }
    });
    for (unsigned wk = 0; wk < workers; ++wk) {
        if (first_bad[wk] != kNone) {
            report.passed = false;
            report.failure_witness = triples[first_bad[wk]];
            report.witness_median_count = bad_count[wk];
            report.triples_checked = first_bad[wk] + 1;
            return report;
        }
    }
    report.triples_checked = sample_count;
    return report;
}

HyperplaneSet compute_hyperplanes(const MedianGraph& g) {
    const std::size_t n = g.vertex_count();
    const std::size_t m = g.edge_count();

    UnionFind uf(m);
    for (Vertex a = 0; a < n; ++a) {
        auto around = g.neighbors(a);
        for (std::size_t i = 0; i < around.size(); ++i) {
            for (std::size_t j = i + 1; j < around.size(); ++j) {
                const Incidence& ab = around[i];
                const Incidence& ac = around[j];
                for (const auto& bd : g.neighbors(ab.neighbor)) {
                    if (bd.neighbor == a) continue;
                    auto cd = g.find_edge(ac.neighbor, bd.neighbor);
                    if (!cd) continue;
                    // Square a-b-d-c: opposite sides share a hyperplane.
                    uf.unite(ab.edge, *cd);
                    uf.unite(ac.edge, bd.edge);
                }
            }
        }
    }

    HyperplaneSet hs;
    hs.vertex_count_ = n;
    hs.class_of_edge_.resize(m);
    std::vector<HyperplaneId> id_of_root(m, std::numeric_limits<HyperplaneId>::max());
    for (EdgeId e = 0; e < m; ++e) {
        std::uint32_t root = uf.find(e);
        if (id_of_root[root] == std::numeric_limits<HyperplaneId>::max()) {
            id_of_root[root] = static_cast<HyperplaneId>(hs.edges_of_.size());
            hs.edges_of_.emplace_back();
        }
        hs.class_of_edge_[e] = id_of_root[root];
        hs.edges_of_[id_of_root[root]].push_back(e);
    }

    const std::size_t count = hs.edges_of_.size();
    hs.words_ = (count + 63) / 64;
    hs.bits_.assign(n * hs.words_, 0);

    // Flood fill from vertex 0 without crossing h; the rest must be the other
    // half-space.
    std::vector<std::uint32_t> stamp(n, 0);
    std::vector<Vertex> queue;
    queue.reserve(n);
    std::uint32_t epoch = 0;
    auto flood = [&](Vertex start, HyperplaneId h) {
        ++epoch;
        queue.clear();
        queue.push_back(start);
        stamp[start] = epoch;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            for (const auto& inc : g.neighbors(queue[head])) {
                if (hs.class_of_edge_[inc.edge] == h || stamp[inc.neighbor] == epoch) continue;
                stamp[inc.neighbor] = epoch;
                queue.push_back(inc.neighbor);
            }
        }
        return queue.size();
    };
    for (HyperplaneId h = 0; h < count; ++h) {
        std::size_t first = flood(0, h);
        const std::uint32_t zero_epoch = epoch;
        if (first == n)
            throw Error(ErrorCode::HalfspaceViolation,
                        "hyperplane " + std::to_string(h) + " does not disconnect the graph");
        Vertex other = 0;
        for (Vertex v = 0; v < n; ++v) {
            if (stamp[v] != zero_epoch) {
                hs.bits_[v * hs.words_ + h / 64] |= std::uint64_t{1} << (h % 64);
                other = v;
            }
        }
        std::size_t second = flood(other, h);
        if (first + second != n)
            throw Error(ErrorCode::HalfspaceViolation,
                        "removing hyperplane " + std::to_string(h) + " leaves more than two components");
        for (EdgeId e : hs.edges_of_[h]) {
            auto [a, b] = g.edge(e);
            if (hs.side(h, a) == hs.side(h, b))
                throw Error(ErrorCode::HalfspaceViolation, "edge " + edge_text(a, b) + " of hyperplane " +
                                                               std::to_string(h) + " lies inside one half-space");
        }
    }
    return hs;
}

std::vector<Vertex> HyperplaneSet::halfspace(HyperplaneId h, int which) const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < vertex_count_; ++v) {
        if (side(h, v) == which) out.push_back(v);
    }
    return out;
}

std::uint32_t HyperplaneSet::separation_count(Vertex u, Vertex v) const {
    return detail::popcount_xor(bits_.data() + u * words_, bits_.data() + v * words_, words_);
}

bool separates(const HyperplaneSet& hs, HyperplaneId h, Vertex u, Vertex v) {
    return hs.side(h, u) != hs.side(h, v);
}

std::vector<HyperplaneId> separating_set(const HyperplaneSet& hs, Vertex u, Vertex v) {
    std::vector<HyperplaneId> out;
    auto a = hs.side_bits(u);
    auto b = hs.side_bits(v);
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::uint64_t diff = a[i] ^ b[i];
        while (diff != 0) {
            out.push_back(static_cast<HyperplaneId>(i * 64 + static_cast<unsigned>(std::countr_zero(diff))));
            diff &= diff - 1;
        }
    }
    return out;
}

std::vector<Vertex> interval(const MedianGraph& g, const HyperplaneSet& hs, Vertex u, Vertex v) {
    // w ∈ [u,v] iff no hyperplane separates w from both u and v.
    std::vector<Vertex> out;
    auto su = hs.side_bits(u);
    auto sv = hs.side_bits(v);
    for (Vertex w = 0; w < g.vertex_count(); ++w) {
        auto sw = hs.side_bits(w);
        bool inside = true;
        for (std::size_t i = 0; i < su.size() && inside; ++i) inside = ((su[i] ^ sw[i]) & (sv[i] ^ sw[i])) == 0;
        if (inside) out.push_back(w);
    }
    return out;
}

Vertex median(const MedianGraph& g, const HyperplaneSet& hs, Vertex u, Vertex v, Vertex w) {
    auto uv = interval(g, hs, u, v);
    auto vw = interval(g, hs, v, w);
    auto wu = interval(g, hs, w, u);
    std::vector<Vertex> first, common;
    std::set_intersection(uv.begin(), uv.end(), vw.begin(), vw.end(), std::back_inserter(first));
    std::set_intersection(first.begin(), first.end(), wu.begin(), wu.end(), std::back_inserter(common));
    if (common.size() != 1)
        throw Error(ErrorCode::MedianViolation, "triple (" + std::to_string(u) + "," + std::to_string(v) + "," +
                                                    std::to_string(w) + ") has " + std::to_string(common.size()) +
                                                    " medians");
    return common.front();
}

unsigned dimension(const MedianGraph& g) {
    if (auto cached = g.cached_dimension()) return *cached;

    unsigned best = 0;
    for (Vertex u = 0; u < g.vertex_count(); ++u) {
        auto around = g.neighbors(u);
        const std::size_t k = around.size();
        if (k <= best) continue;
        // Edges (u,x) and (u,y) span a square iff x and y share a neighbor besides u.
        auto spans_square = [&](Vertex x, Vertex y) {
            for (const auto& inc : g.neighbors(x)) {
                if (inc.neighbor != u && g.adjacent(inc.neighbor, y)) return true;
            }
            return false;
        };
        if (k <= 20) {
            std::vector<std::uint64_t> compatible(k, 0);
            for (std::size_t i = 0; i < k; ++i) {
                for (std::size_t j = i + 1; j < k; ++j) {
                    if (spans_square(around[i].neighbor, around[j].neighbor)) {
                        compatible[i] |= std::uint64_t{1} << j;
                        compatible[j] |= std::uint64_t{1} << i;
                    }
                }
            }
            best = std::max(best, max_clique(compatible, (std::uint64_t{1} << k) - 1, 0));
        } else {
            for (std::size_t seed = 0; seed < k; ++seed) {
                std::vector<Vertex> chosen{around[seed].neighbor};
                for (std::size_t j = 0; j < k; ++j) {
                    if (j == seed) continue;
                    Vertex y = around[j].neighbor;
                    if (std::all_of(chosen.begin(), chosen.end(), [&](Vertex x) { return spans_square(x, y); }))
                        chosen.push_back(y);
                }
                best = std::max(best, static_cast<unsigned>(chosen.size()));
            }
        }
    }
    g.dimension_cache_.store(static_cast<int>(best));
    return best;
}

std::optional<Vertex> neighbor_across(const MedianGraph& g, const HyperplaneSet& hs, Vertex u, HyperplaneId h) {
    for (const auto& inc : g.neighbors(u)) {
        if (hs.hyperplane_of(inc.edge) == h) return inc.neighbor;
    }
    return std::nullopt;
}

}  // namespace cubecx
