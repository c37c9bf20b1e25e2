#pragma once

// Compression profiles, exponent fits and the bound verification suites.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cubecx/embedding.hpp"
#include "cubecx/median_graph.hpp"
#include "cubecx/normal_paths.hpp"

namespace cubecx {

using VertexPair = std::pair<Vertex, Vertex>;

struct AnalysisOptions {
    /// Pair-based suites are exhaustive up to this many vertices.
    std::size_t exhaustive_cap = 3000;
    /// Random pairs added above the cap (on top of all pairs through the
    /// basepoint and one diametral pair).
    std::size_t sample_pairs = 200'000;
    std::uint64_t seed = 0;
    /// Partial terms for lipschitz_bound.
    std::size_t lipschitz_terms = 1'000'000;
    /// Pairs sampled for the geodesic crossing check.
    std::size_t crossing_samples = 10'000;
    /// 0 selects std::thread::hardware_concurrency().
    unsigned threads = 0;
};

struct CompressionProfile {
    std::vector<std::uint32_t> radii;
    /// rho[i] = min image distance over evaluated pairs with d1 >= radii[i].
    std::vector<double> rho;
    std::vector<VertexPair> witnesses;
    Vertex basepoint = 0;
    std::optional<Epsilon> eps;  // absent for the unweighted embedding
    bool exhaustive = true;
    std::size_t pairs_evaluated = 0;
};

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::uint32_t r_min = 0;
    std::uint32_t r_max = 0;
    std::size_t points = 0;
    /// Max absolute log-log residual.
    double residual = 0.0;
};

struct BoundReport {
    std::string name;
    bool passed = true;
    VertexPair worst_pair{0, 0};
    /// min over checked pairs of (allowed side - observed side); >= 0 passes.
    double worst_margin = 0.0;
    std::size_t pairs_checked = 0;
};

/// Up to `count` distinct integers spread logarithmically over [lo, hi].
std::vector<std::uint32_t> log_spaced_radii(std::uint32_t lo, std::uint32_t hi, std::size_t count);

/// Exact rho over all pairs when the graph has at most exhaustive_cap
/// vertices, otherwise over the documented sample (all basepoint pairs, one
/// diametral pair, then sample_pairs seeded random pairs). Throws
/// Error{RadiusExceedsDiameter} and Error{InvalidSpec} for non-increasing or
/// zero radii.
CompressionProfile compression_profile(const MedianGraph& g, const HyperplaneSet& hs, Vertex basepoint,
                                       std::optional<Epsilon> eps, const std::vector<std::uint32_t>& radii,
                                       const AnalysisOptions& options = {}, WeightCache* cache = nullptr);

/// Least-squares slope of log max(rho, 1) against log r over radii in
/// [r_min, r_max] with rho > 1. Throws Error{InsufficientData} below 5 points.
ExponentFit fit_exponent(const CompressionProfile& profile, std::uint32_t r_min, std::uint32_t r_max);

/// Constant in ||f_eps(s) - f_eps(t)||^2 >= d1^(2 eps + 1) / (n 2^(2 eps + 1) (2 eps + 1)).
double lower_bound_constant(unsigned n, Epsilon eps);

BoundReport verify_lower_bound(const MedianGraph& g, const HyperplaneSet& hs, Vertex basepoint, Epsilon eps,
                               const AnalysisOptions& options = {}, WeightCache* cache = nullptr);

/// Every edge against lipschitz_bound(n, eps, options.lipschitz_terms).
BoundReport verify_lipschitz(const MedianGraph& g, const HyperplaneSet& hs, Vertex basepoint, Epsilon eps,
                             const AnalysisOptions& options = {}, WeightCache* cache = nullptr);

/// Every edge (s,t) and hyperplane separating both from the basepoint:
/// |w_t(h) - w_s(h)| <= 1. Margin is 1 - max |difference|.
BoundReport verify_fellow_traveler(const MedianGraph& g, const HyperplaneSet& hs, Vertex basepoint,
                                   const AnalysisOptions& options = {}, WeightCache* cache = nullptr);

/// BFS geodesics of crossing_samples seeded pairs cross each hyperplane at
/// most once, and d1 equals the separation count for every pair (exhaustive).
BoundReport verify_crossing_once(const MedianGraph& g, const HyperplaneSet& hs, const AnalysisOptions& options = {});

/// Both sides of the block inequality n i^(2e) > (1/n) sum_{q=(i-1)n+1}^{in} q^(2e).
std::pair<double, double> block_inequality_sides(unsigned n, unsigned i, Epsilon eps);

/// Both sides of m (k+1)^(2e) > (1/n) sum_{q=kn+1}^{kn+m} q^(2e), 0 <= m < n.
std::pair<double, double> remainder_inequality_sides(unsigned n, unsigned k, unsigned m, Epsilon eps);

struct InequalitySummary {
    std::size_t cases = 0;
    /// lhs < rhs anywhere: the form the lower-bound argument relies on.
    std::size_t weak_violations = 0;
    /// lhs <= rhs on cases with n >= 2 (block) or m >= 1 (remainder).
    std::size_t strict_violations = 0;
    /// Cases where both sides coincide (n = 1 blocks, m = 0 remainders).
    std::size_t degenerate_cases = 0;
};

InequalitySummary check_block_inequality(unsigned max_n, unsigned max_i, const std::vector<Epsilon>& eps_grid);
InequalitySummary check_remainder_inequality(unsigned max_n, unsigned max_k, const std::vector<Epsilon>& eps_grid);

}  // namespace cubecx
