#include "cubecx/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cubecx/error.hpp"

namespace cubecx {

Epsilon::Epsilon(double value) : value_(value) {
    if (!(value > 0.0 && value < 0.5))
        throw Error(ErrorCode::InvalidEpsilon, "epsilon must lie in (0, 1/2), got " + std::to_string(value));
}

SparseVector::SparseVector(std::vector<Entry> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end());
    std::erase_if(entries_, [](const Entry& e) { return e.second == 0.0; });
}

double SparseVector::operator[](HyperplaneId h) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), h,
                               [](const Entry& e, HyperplaneId key) { return e.first < key; });
    return it != entries_.end() && it->first == h ? it->second : 0.0;
}

double SparseVector::squared_norm() const {
    double total = 0.0;
    for (const auto& [_, x] : entries_) total += x * x;
    return total;
}

SparseVector embed_unweighted(const HyperplaneSet& hs, Vertex s, Vertex basepoint) {
    std::vector<SparseVector::Entry> entries;
    for (HyperplaneId h : separating_set(hs, s, basepoint)) entries.emplace_back(h, 1.0);
    return SparseVector(std::move(entries));
}

SparseVector embed_eps(const WeightMap& weights, Epsilon eps) {
    std::vector<SparseVector::Entry> entries;
    entries.reserve(weights.weights.size());
    for (const auto& [h, w] : weights.weights) entries.emplace_back(h, std::pow(static_cast<double>(w), eps.value()));
    return SparseVector(std::move(entries));
}

SparseVector embed_eps(const MedianGraph& g, const HyperplaneSet& hs, Vertex s, Vertex basepoint, Epsilon eps) {
    return embed_eps(weight_map(g, hs, s, basepoint), eps);
}

double squared_distance(const SparseVector& x, const SparseVector& y) {
    const auto& a = x.entries();
    const auto& b = y.entries();
    double total = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        double diff;
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            diff = a[i++].second;
        } else if (i == a.size() || b[j].first < a[i].first) {
            diff = b[j++].second;
        } else {
            diff = a[i++].second - b[j++].second;
        }
        total += diff * diff;
    }
    return total;
}

double hilbert_distance(const SparseVector& x, const SparseVector& y) { return std::sqrt(squared_distance(x, y)); }

std::size_t symmetric_difference_size(const SparseVector& x, const SparseVector& y) {
    const auto& a = x.entries();
    const auto& b = y.entries();
    std::size_t common = 0, i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first) {
            ++i;
        } else if (b[j].first < a[i].first) {
            ++j;
        } else {
            ++common;
            ++i;
            ++j;
        }
    }
    return a.size() + b.size() - 2 * common;
}

double lipschitz_tail(Epsilon eps, std::size_t partial_terms) {
    const double e = eps.value();
    if (partial_terms <= 1) return std::numeric_limits<double>::infinity();
    return e * e * std::pow(static_cast<double>(partial_terms - 1), 2.0 * e - 1.0) / (1.0 - 2.0 * e);
}

double lipschitz_bound(unsigned n, Epsilon eps, std::size_t partial_terms) {
    if (partial_terms == 0) throw Error(ErrorCode::InvalidSpec, "lipschitz_bound needs at least one term");
    const double e = eps.value();
    // (j+1)^e - j^e = j^e * expm1(e * log1p(1/j)), summed smallest first.
    double partial = 0.0;
    for (std::size_t j = partial_terms - 1; j >= 1; --j) {
        const double x = static_cast<double>(j);
        const double step = std::pow(x, e) * std::expm1(e * std::log1p(1.0 / x));
        partial += step * step;
    }
    partial += 1.0;  // j = 0: (0^e - 1^e)^2 with 0^e = 0
    return static_cast<double>(n) * (partial + lipschitz_tail(eps, partial_terms));
}

double weighted_squared_distance(const WeightMap& s, const WeightMap& t, std::span<const double> pow_table) {
    const auto& a = s.weights;
    const auto& b = t.weights;
    double total = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        double diff;
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            diff = pow_table[a[i++].second];
        } else if (i == a.size() || b[j].first < a[i].first) {
            diff = pow_table[b[j++].second];
        } else {
            diff = pow_table[a[i++].second] - pow_table[b[j++].second];
        }
        total += diff * diff;
    }
    return total;
}

}  // namespace cubecx
