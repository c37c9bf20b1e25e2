#include "cubecx/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <tuple>

#include "cubecx/error.hpp"
#include "detail.hpp"

namespace cubecx {

namespace {

constexpr double kRelTol = 1e-9;

// Smallest (value, u, v), lexicographically, so reductions are independent of
// evaluation order.
struct Best {
    double value = std::numeric_limits<double>::infinity();
    VertexPair pair{std::numeric_limits<Vertex>::max(), std::numeric_limits<Vertex>::max()};
    bool set = false;

    void offer(double candidate, VertexPair p) {
        if (!set || candidate < value || (candidate == value && p < pair)) {
            value = candidate;
            pair = p;
            set = true;
        }
    }
    void merge(const Best& other) {
        if (other.set) offer(other.value, other.pair);
    }
};

unsigned resolve_workers(const AnalysisOptions& options, std::size_t work) {
    if (options.threads != 0) return std::max(1U, std::min<unsigned>(options.threads, static_cast<unsigned>(std::max<std::size_t>(1, work))));
    return detail::worker_count(work);
}

// All u < v when exhaustive; otherwise the explicit list.
struct PairPlan {
    bool exhaustive = true;
    std::size_t vertex_count = 0;
    std::vector<VertexPair> pairs;

    std::size_t size() const {
        return exhaustive ? vertex_count * (vertex_count - 1) / 2 : pairs.size();
    }
};

// Runs fn(worker, u, v) over every planned pair. Exhaustive plans interleave
// rows across workers for balance.
template <typename Fn>
void for_each_pair(const PairPlan& plan, unsigned workers, Fn&& fn) {
    const std::size_t n = plan.vertex_count;
    auto run = [&](unsigned w) {
        if (plan.exhaustive) {
            for (std::size_t u = w; u < n; u += workers) {
                for (std::size_t v = u + 1; v < n; ++v) fn(w, static_cast<Vertex>(u), static_cast<Vertex>(v));
            }
        } else {
            for (std::size_t i = w; i < plan.pairs.size(); i += workers) fn(w, plan.pairs[i].first, plan.pairs[i].second);
        }
    };
    if (workers <= 1) {
        run(0);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
}

VertexPair diametral_pair(const MedianGraph& g, unsigned workers) {
    const std::size_t n = g.vertex_count();
    std::vector<std::pair<std::uint32_t, VertexPair>> best(workers, {0, {0, 0}});
    detail::parallel_chunks(n, workers, [&](unsigned w, std::size_t begin, std::size_t end) {
        for (std::size_t u = begin; u < end; ++u) {
            auto dist = bfs_distances(g, static_cast<Vertex>(u));
            for (std::size_t v = u + 1; v < n; ++v) {
                if (dist[v] > best[w].first) best[w] = {dist[v], {static_cast<Vertex>(u), static_cast<Vertex>(v)}};
            }
        }
    });
    auto it = std::max_element(best.begin(), best.end(), [](const auto& a, const auto& b) {
        return a.first < b.first || (a.first == b.first && a.second > b.second);
    });
    return it->second;
}

PairPlan plan_pairs(const MedianGraph& g, Vertex basepoint, const AnalysisOptions& options, unsigned workers) {
    PairPlan plan;
    plan.vertex_count = g.vertex_count();
    if (g.vertex_count() <= options.exhaustive_cap) return plan;

    plan.exhaustive = false;
    const std::size_t n = g.vertex_count();
    auto normalized = [](Vertex a, Vertex b) { return a < b ? VertexPair{a, b} : VertexPair{b, a}; };
    for (Vertex x = 0; x < n; ++x) {
        if (x != basepoint) plan.pairs.push_back(normalized(basepoint, x));
    }
    plan.pairs.push_back(diametral_pair(g, workers));
    std::mt19937_64 rng(options.seed);
    for (std::size_t i = 0; i < options.sample_pairs; ++i) {
        Vertex a = static_cast<Vertex>(detail::bounded(rng, n));
        Vertex b = static_cast<Vertex>(detail::bounded(rng, n - 1));
        if (b >= a) ++b;
        plan.pairs.push_back(normalized(a, b));
    }
    return plan;
}

std::vector<std::shared_ptr<const WeightMap>> all_weight_maps(const MedianGraph& g, const HyperplaneSet& hs,
                                                              Vertex basepoint, WeightCache* cache, unsigned workers) {
    WeightCache local(g, hs);
    WeightCache& source = cache ? *cache : local;
    std::vector<std::shared_ptr<const WeightMap>> maps(g.vertex_count());
    detail::parallel_chunks(g.vertex_count(), workers, [&](unsigned, std::size_t begin, std::size_t end) {
        for (std::size_t v = begin; v < end; ++v) maps[v] = source.get(static_cast<Vertex>(v), basepoint);
    });
    return maps;
}

std::vector<double> pow_table(const std::vector<std::shared_ptr<const WeightMap>>& maps, Epsilon eps) {
    std::uint32_t top = 0;
    for (const auto& m : maps) {
        for (const auto& [_, w] : m->weights) top = std::max(top, w);
    }
    std::vector<double> table(top + 1, 0.0);
    for (std::uint32_t w = 1; w <= top; ++w) table[w] = std::pow(static_cast<double>(w), eps.value());
    return table;
}

void check_vertex(const MedianGraph& g, Vertex v) {
    if (v >= g.vertex_count())
        throw Error(ErrorCode::VertexOutOfRange, "vertex " + std::to_string(v) + " out of range");
}

}  // namespace

std::vector<std::uint32_t> log_spaced_radii(std::uint32_t lo, std::uint32_t hi, std::size_t count) {
    std::vector<std::uint32_t> out;
    if (lo == 0) lo = 1;
    if (hi < lo || count == 0) return out;
    if (count == 1 || lo == hi) return {lo};
    const double ratio = std::log(static_cast<double>(hi) / lo);
    for (std::size_t i = 0; i < count; ++i) {
        double r = lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(count - 1));
        auto ri = static_cast<std::uint32_t>(std::lround(r));
        ri = std::clamp(ri, lo, hi);
        if (out.empty() || ri > out.back()) out.push_back(ri);
    }
    return out;
}

CompressionProfile compression_profile(const MedianGraph& g, const HyperplaneSet& hs, Vertex basepoint,
                                       std::optional<Epsilon> eps, const std::vector<std::uint32_t>& radii,
                                       const AnalysisOptions& options, WeightCache* cache) {
    check_vertex(g, basepoint);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] == 0 || (i > 0 && radii[i] <= radii[i - 1]))
            throw Error(ErrorCode::InvalidSpec, "radii must be positive and strictly increasing");
    }
    const std::uint32_t diam = diameter(g);
    if (!radii.empty() && radii.back() > diam)
        throw Error(ErrorCode::RadiusExceedsDiameter,
                    "radius " + std::to_string(radii.back()) + " exceeds diameter " + std::to_string(diam));

    const unsigned workers = resolve_workers(options, g.vertex_count());
    PairPlan plan = plan_pairs(g, basepoint, options, workers);

    std::vector<std::shared_ptr<const WeightMap>> maps;
    std::vector<double> table;
    if (eps) {
        maps = all_weight_maps(g, hs, basepoint, cache, workers);
        table = pow_table(maps, *eps);
    }

    // Per realized distance, the smallest squared image distance. The
    // unweighted squared distance is the size of the support symmetric
    // difference, i.e. the separation count.
    std::vector<std::vector<Best>> by_distance(workers, std::vector<Best>(diam + 1));
    for_each_pair(plan, workers, [&](unsigned w, Vertex u, Vertex v) {
        const std::uint32_t d = hs.separation_count(u, v);
        const double value = eps ? weighted_squared_distance(*maps[u], *maps[v], table) : static_cast<double>(d);
        by_distance[w][d].offer(value, {u, v});
    });
    std::vector<Best> merged(diam + 1);
    for (const auto& part : by_distance) {
        for (std::size_t d = 0; d <= diam; ++d) merged[d].merge(part[d]);
    }
    // Suffix minimum over distances >= r.
    for (std::size_t d = diam; d-- > 0;) merged[d].merge(merged[d + 1]);

    CompressionProfile profile;
    profile.radii = radii;
    profile.basepoint = basepoint;
    profile.eps = eps;
    profile.exhaustive = plan.exhaustive;
    profile.pairs_evaluated = plan.size();
    for (std::uint32_t r : radii) {
        profile.rho.push_back(std::sqrt(merged[r].value));
        profile.witnesses.push_back(merged[r].pair);
    }
    return profile;
}

ExponentFit fit_exponent(const CompressionProfile& profile, std::uint32_t r_min, std::uint32_t r_max) {
    std::vector<double> xs, ys;
    ExponentFit fit;
    fit.r_min = std::numeric_limits<std::uint32_t>::max();
    fit.r_max = 0;
    for (std::size_t i = 0; i < profile.radii.size(); ++i) {
        const std::uint32_t r = profile.radii[i];
        if (r < r_min || r > r_max || !(profile.rho[i] > 1.0)) continue;
        xs.push_back(std::log(static_cast<double>(r)));
        ys.push_back(std::log(std::max(profile.rho[i], 1.0)));
        fit.r_min = std::min(fit.r_min, r);
        fit.r_max = std::max(fit.r_max, r);
    }
    if (xs.size() < 5)
        throw Error(ErrorCode::InsufficientData, "need at least 5 radii with rho > 1 in [" + std::to_string(r_min) +
                                                     ", " + std::to_string(r_max) + "], have " +
                                                     std::to_string(xs.size()));
    const double count = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= count;
    my /= count;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    fit.points = xs.size();
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (std::size_t i = 0; i < xs.size(); ++i)
        fit.residual = std::max(fit.residual, std::abs(ys[i] - (fit.intercept + fit.slope * xs[i])));
    return fit;
}

double lower_bound_constant(unsigned n, Epsilon eps) {
    const double e = eps.value();
    return 1.0 / (std::max(1U, n) * std::pow(2.0, 2.0 * e + 1.0) * (2.0 * e + 1.0));
}

BoundReport verify_lower_bound(const MedianGraph& g, const HyperplaneSet& hs, Vertex basepoint, Epsilon eps,
                               const AnalysisOptions& options, WeightCache* cache) {
    check_vertex(g, basepoint);
    const unsigned workers = resolve_workers(options, g.vertex_count());
    const double constant = lower_bound_constant(dimension(g), eps);
    const double power = 2.0 * eps.value() + 1.0;
    auto maps = all_weight_maps(g, hs, basepoint, cache, workers);
    auto table = pow_table(maps, eps);
    PairPlan plan = plan_pairs(g, basepoint, options, workers);

    std::vector<Best> worst(workers);
    std::vector<char> failed(workers, 0);
    for_each_pair(plan, workers, [&](unsigned w, Vertex u, Vertex v) {
        const double rhs = constant * std::pow(static_cast<double>(hs.separation_count(u, v)), power);
        const double lhs = weighted_squared_distance(*maps[u], *maps[v], table);
        const double margin = lhs - rhs;
        if (margin < -kRelTol * std::max(1.0, rhs)) failed[w] = 1;
        worst[w].offer(margin, {u, v});
    });
    BoundReport report;
    report.name = "lower_bound";
    Best all;
    for (const auto& b : worst) all.merge(b);
    report.passed = std::none_of(failed.begin(), failed.end(), [](char f) { return f != 0; });
    report.pairs_checked = plan.size();
    if (all.set) {
        report.worst_margin = all.value;
        report.worst_pair = all.pair;
    }
    return report;
}

BoundReport verify_lipschitz(const MedianGraph& g, const HyperplaneSet& hs, Vertex basepoint, Epsilon eps,
                             const AnalysisOptions& options, WeightCache* cache) {
    check_vertex(g, basepoint);
    const unsigned workers = resolve_workers(options, g.edge_count());
    const double bound = lipschitz_bound(dimension(g), eps, options.lipschitz_terms);
    auto maps = all_weight_maps(g, hs, basepoint, cache, workers);
    auto table = pow_table(maps, eps);

    std::vector<Best> worst(workers);
    const auto& edges = g.edges();
    detail::parallel_chunks(edges.size(), workers, [&](unsigned w, std::size_t begin, std::size_t end) {
        for (std::size_t e = begin; e < end; ++e) {
            auto [s, t] = edges[e];
            worst[w].offer(bound - weighted_squared_distance(*maps[s], *maps[t], table), {s, t});
        }
    });
    BoundReport report;
    report.name = "lipschitz";
    Best all;
    for (const auto& b : worst) all.merge(b);
    report.pairs_checked = edges.size();
    if (all.set) {
        report.worst_margin = all.value;
        report.worst_pair = all.pair;
    }
    report.passed = report.worst_margin >= -kRelTol * std::max(1.0, bound);
    return report;
}

BoundReport verify_fellow_traveler(const MedianGraph& g, const HyperplaneSet& hs, Vertex basepoint,
                                   const AnalysisOptions& options, WeightCache* cache) {
    check_vertex(g, basepoint);
    const unsigned workers = resolve_workers(options, g.edge_count());
    auto maps = all_weight_maps(g, hs, basepoint, cache, workers);

    std::vector<Best> worst(workers);
    const auto& edges = g.edges();
    detail::parallel_chunks(edges.size(), workers, [&](unsigned w, std::size_t begin, std::size_t end) {
        for (std::size_t e = begin; e < end; ++e) {
            auto [s, t] = edges[e];
            const auto& a = maps[s]->weights;
            const auto& b = maps[t]->weights;
            std::int64_t largest = 0;
            std::size_t i = 0, j = 0;
            while (i < a.size() && j < b.size()) {
                if (a[i].first < b[j].first) {
                    ++i;
                } else if (b[j].first < a[i].first) {
                    ++j;
                } else {
                    const std::int64_t diff = std::int64_t{a[i].second} - std::int64_t{b[j].second};
                    largest = std::max(largest, diff < 0 ? -diff : diff);
                    ++i;
                    ++j;
                }
            }
            worst[w].offer(1.0 - static_cast<double>(largest), {s, t});
        }
    });
    BoundReport report;
    report.name = "fellow_traveler";
    Best all;
    for (const auto& b : worst) all.merge(b);
    report.pairs_checked = edges.size();
    if (all.set) {
        report.worst_margin = all.value;
        report.worst_pair = all.pair;
    }
    report.passed = report.worst_margin >= 0.0;
    return report;
}

BoundReport verify_crossing_once(const MedianGraph& g, const HyperplaneSet& hs, const AnalysisOptions& options) {
    const std::size_t n = g.vertex_count();
    const unsigned workers = resolve_workers(options, n);

    // d1 (BFS) against the separation count, every pair.
    std::vector<Best> identity(workers);
    detail::parallel_chunks(n, workers, [&](unsigned w, std::size_t begin, std::size_t end) {
        for (std::size_t u = begin; u < end; ++u) {
            auto dist = bfs_distances(g, static_cast<Vertex>(u));
            for (std::size_t v = u + 1; v < n; ++v) {
                const double gap = std::abs(static_cast<double>(dist[v]) -
                                            static_cast<double>(hs.separation_count(static_cast<Vertex>(u), static_cast<Vertex>(v))));
                identity[w].offer(0.0 - gap, {static_cast<Vertex>(u), static_cast<Vertex>(v)});
            }
        }
    });

    std::vector<VertexPair> sample;
    const std::size_t all_pairs = n * (n - 1) / 2;
    if (all_pairs <= options.crossing_samples) {
        for (Vertex u = 0; u < n; ++u) {
            for (Vertex v = u + 1; v < n; ++v) sample.emplace_back(u, v);
        }
    } else {
        std::mt19937_64 rng(options.seed);
        for (std::size_t i = 0; i < options.crossing_samples; ++i) {
            Vertex a = static_cast<Vertex>(detail::bounded(rng, n));
            Vertex b = static_cast<Vertex>(detail::bounded(rng, n - 1));
            if (b >= a) ++b;
            sample.emplace_back(std::min(a, b), std::max(a, b));
        }
    }
    // Group by target so each BFS serves several pairs.
    std::sort(sample.begin(), sample.end(), [](const VertexPair& x, const VertexPair& y) {
        return std::tie(x.second, x.first) < std::tie(y.second, y.first);
    });
    std::vector<std::size_t> group_start;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        if (i == 0 || sample[i].second != sample[i - 1].second) group_start.push_back(i);
    }
    group_start.push_back(sample.size());

    std::vector<Best> crossing(workers);
    detail::parallel_chunks(group_start.size() - 1, workers, [&](unsigned w, std::size_t begin, std::size_t end) {
        std::vector<HyperplaneId> crossed;
        for (std::size_t grp = begin; grp < end; ++grp) {
            const Vertex target = sample[group_start[grp]].second;
            auto dist = bfs_distances(g, target);
            for (std::size_t i = group_start[grp]; i < group_start[grp + 1]; ++i) {
                crossed.clear();
                Vertex x = sample[i].first;
                while (x != target) {
                    for (const auto& inc : g.neighbors(x)) {
                        if (dist[inc.neighbor] + 1 == dist[x]) {
                            crossed.push_back(hs.hyperplane_of(inc.edge));
                            x = inc.neighbor;
                            break;
                        }
                    }
                }
                std::sort(crossed.begin(), crossed.end());
                std::size_t most = crossed.empty() ? 0 : 1, run = 1;
                for (std::size_t k = 1; k < crossed.size(); ++k) {
                    run = crossed[k] == crossed[k - 1] ? run + 1 : 1;
                    most = std::max(most, run);
                }
                crossing[w].offer(1.0 - static_cast<double>(most), sample[i]);
            }
        }
    });

    BoundReport report;
    report.name = "crossing_once";
    Best all;
    for (const auto& b : identity) all.merge(b);
    for (const auto& b : crossing) all.merge(b);
    report.pairs_checked = all_pairs + sample.size();
    if (all.set) {
        report.worst_margin = all.value;
        report.worst_pair = all.pair;
    }
    report.passed = report.worst_margin >= 0.0;
    return report;
}

std::pair<double, double> block_inequality_sides(unsigned n, unsigned i, Epsilon eps) {
    const double p = 2.0 * eps.value();
    double block = 0.0;
    for (unsigned q = (i - 1) * n + 1; q <= i * n; ++q) block += std::pow(static_cast<double>(q), p);
    return {n * std::pow(static_cast<double>(i), p), block / n};
}

std::pair<double, double> remainder_inequality_sides(unsigned n, unsigned k, unsigned m, Epsilon eps) {
    const double p = 2.0 * eps.value();
    double block = 0.0;
    for (unsigned q = k * n + 1; q <= k * n + m; ++q) block += std::pow(static_cast<double>(q), p);
    return {m * std::pow(static_cast<double>(k + 1), p), block / n};
}

InequalitySummary check_block_inequality(unsigned max_n, unsigned max_i, const std::vector<Epsilon>& eps_grid) {
    InequalitySummary summary;
    for (const Epsilon& eps : eps_grid) {
        for (unsigned n = 1; n <= max_n; ++n) {
            for (unsigned i = 1; i <= max_i; ++i) {
                auto [lhs, rhs] = block_inequality_sides(n, i, eps);
                ++summary.cases;
                if (lhs < rhs) ++summary.weak_violations;
                if (n == 1) {
                    if (lhs == rhs) ++summary.degenerate_cases;
                } else if (!(lhs > rhs)) {
                    ++summary.strict_violations;
                }
            }
        }
    }
    return summary;
}

InequalitySummary check_remainder_inequality(unsigned max_n, unsigned max_k, const std::vector<Epsilon>& eps_grid) {
    InequalitySummary summary;
    for (const Epsilon& eps : eps_grid) {
        for (unsigned n = 1; n <= max_n; ++n) {
            for (unsigned k = 1; k <= max_k; ++k) {
                for (unsigned m = 0; m < n; ++m) {
                    auto [lhs, rhs] = remainder_inequality_sides(n, k, m, eps);
                    ++summary.cases;
                    if (lhs < rhs) ++summary.weak_violations;
                    if (m == 0) {
                        if (lhs == rhs) ++summary.degenerate_cases;
                    } else if (!(lhs > rhs)) {
                        ++summary.strict_violations;
                    }
                }
            }
        }
    }
    return summary;
}

}  // namespace cubecx
