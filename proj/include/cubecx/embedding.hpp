#pragma once

// Basepoint embeddings of the vertex set into l2 over the hyperplanes.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cubecx/median_graph.hpp"
#include "cubecx/normal_paths.hpp"

namespace cubecx {

/// Exponent of the weighted embedding, strictly inside (0, 1/2).
class Epsilon {
public:
    /// Throws Error{InvalidEpsilon}.
    explicit Epsilon(double value);
    double value() const noexcept { return value_; }

private:
    double value_;
};

/// Finitely supported vector over hyperplane ids, sorted, no stored zeros.
class SparseVector {
public:
    using Entry = std::pair<HyperplaneId, double>;

    SparseVector() = default;
    /// Entries are sorted; zero coordinates are dropped.
    explicit SparseVector(std::vector<Entry> entries);

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    std::size_t support_size() const noexcept { return entries_.size(); }
    double operator[](HyperplaneId h) const;
    double squared_norm() const;

private:
    std::vector<Entry> entries_;
};

/// Characteristic vector of the hyperplanes separating s from the basepoint.
SparseVector embed_unweighted(const HyperplaneSet& hs, Vertex s, Vertex basepoint);

/// Coordinates w_s(h)^eps over the weight map support.
SparseVector embed_eps(const MedianGraph& g, const HyperplaneSet& hs, Vertex s, Vertex basepoint, Epsilon eps);
SparseVector embed_eps(const WeightMap& weights, Epsilon eps);

double squared_distance(const SparseVector& x, const SparseVector& y);

/// Euclidean norm of x - y. Double precision; callers compare at 1e-9 relative.
double hilbert_distance(const SparseVector& x, const SparseVector& y);

/// |supp(x) Δ supp(y)| for 0/1 vectors: the exact integer value of the squared
/// distance between two unweighted embeddings.
std::size_t symmetric_difference_size(const SparseVector& x, const SparseVector& y);

/// Certified upper bound on n * sum_{j>=0} (j^eps - (j+1)^eps)^2: the first
/// partial_terms terms summed exactly plus the remainder bound
/// eps^2 (J-1)^(2 eps - 1) / (1 - 2 eps). Infinite for partial_terms == 1.
double lipschitz_bound(unsigned n, Epsilon eps, std::size_t partial_terms);

/// Remainder bound used by lipschitz_bound (without the factor n).
double lipschitz_tail(Epsilon eps, std::size_t partial_terms);

/**
 * Squared distance between f_eps(s) and f_eps(t) computed straight from the
 * two weight maps; pow_table[w] must hold w^eps for every weight present
 * (pow_table[0] = 0).
 */
double weighted_squared_distance(const WeightMap& s, const WeightMap& t, std::span<const double> pow_table);

}  // namespace cubecx
