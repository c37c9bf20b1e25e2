#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "cubecx/analysis.hpp"
#include "cubecx/error.hpp"
#include "cubecx/generators.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace cubecx;

namespace {

std::vector<std::uint32_t> every_radius(std::uint32_t hi) {
    std::vector<std::uint32_t> r(hi);
    for (std::uint32_t i = 0; i < hi; ++i) r[i] = i + 1;
    return r;
}

ErrorCode error_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::IoError;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("log_spaced_radii are strictly increasing inside the range") {
    auto r = log_spaced_radii(1, 2048, 64);
    CHECK(r.front() == 1);
    CHECK(r.back() == 2048);
    CHECK(std::adjacent_find(r.begin(), r.end(), std::greater_equal<>()) == r.end());
    CHECK(r.size() <= 64);
    CHECK(log_spaced_radii(3, 5, 10) == std::vector<std::uint32_t>{3, 4, 5});
}

TEST_CASE("unweighted profile is the square root of the smallest realized distance") {
    for (const auto& [name, g] : testing_support::small_family()) {
        CAPTURE(name);
        if (g.vertex_count() < 2) continue;
        auto hs = compute_hyperplanes(g);
        auto d = oracle::all_distances(g);
        const std::uint32_t diam = diameter(g);
        auto p = compression_profile(g, hs, 0, std::nullopt, every_radius(diam));
        CHECK(p.exhaustive);
        for (std::size_t i = 0; i < p.radii.size(); ++i) {
            std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
            for (auto& row : d)
                for (auto x : row)
                    if (x >= p.radii[i]) best = std::min(best, x);
            CHECK(p.rho[i] == doctest::Approx(std::sqrt(static_cast<double>(best))).epsilon(1e-12));
            auto [u, v] = p.witnesses[i];
            CHECK(d[u][v] >= p.radii[i]);
            CHECK(p.rho[i] == doctest::Approx(std::sqrt(static_cast<double>(d[u][v]))).epsilon(1e-12));
        }
    }
}

TEST_CASE("weighted profile on a path dominates the basepoint sum") {
    auto g = path_graph(63);
    auto hs = compute_hyperplanes(g);
    const Epsilon eps(0.4);
    auto p = compression_profile(g, hs, 0, eps, every_radius(63));
    for (std::size_t i = 0; i < p.radii.size(); ++i) {
        double tail = 0.0;
        for (std::uint32_t j = 1; j <= p.radii[i]; ++j) tail += std::pow(static_cast<double>(j), 0.8);
        CHECK(p.rho[i] * p.rho[i] >= tail * (1 - 1e-9));
        if (i > 0) CHECK(p.rho[i] >= p.rho[i - 1]);
        auto [u, v] = p.witnesses[i];
        CHECK(d1(g, u, v) >= p.radii[i]);
        auto fu = embed_eps(g, hs, u, 0, eps), fv = embed_eps(g, hs, v, 0, eps);
        CHECK(hilbert_distance(fu, fv) == doctest::Approx(p.rho[i]).epsilon(1e-9));
    }
}

TEST_CASE("profile argument checks") {
    auto g = grid_graph(std::vector<std::size_t>{4, 4});
    auto hs = compute_hyperplanes(g);
    CHECK(error_of([&] { (void)compression_profile(g, hs, 0, std::nullopt, {3, 7}); }) ==
          ErrorCode::RadiusExceedsDiameter);
    CHECK(error_of([&] { (void)compression_profile(g, hs, 0, std::nullopt, {3, 3}); }) == ErrorCode::InvalidSpec);
    CHECK(error_of([&] { (void)compression_profile(g, hs, 0, std::nullopt, {0, 2}); }) == ErrorCode::InvalidSpec);
}

TEST_CASE("profile results do not depend on the thread count") {
    auto g = product_graph(random_tree(40, 5), path_graph(30));
    auto hs = compute_hyperplanes(g);
    auto radii = log_spaced_radii(1, diameter(g), 20);
    AnalysisOptions one, many;
    one.threads = 1;
    many.threads = 4;
    for (std::optional<Epsilon> eps : {std::optional<Epsilon>{}, std::optional<Epsilon>{Epsilon(0.3)}}) {
        auto a = compression_profile(g, hs, 3, eps, radii, one);
        auto b = compression_profile(g, hs, 3, eps, radii, many);
        CHECK(a.rho == b.rho);
        CHECK(a.witnesses == b.witnesses);
    }
    AnalysisOptions sampled = one;
    sampled.exhaustive_cap = 100;
    sampled.sample_pairs = 5000;
    AnalysisOptions sampled_many = sampled;
    sampled_many.threads = 3;
    auto a = compression_profile(g, hs, 3, Epsilon(0.2), radii, sampled);
    auto b = compression_profile(g, hs, 3, Epsilon(0.2), radii, sampled_many);
    CHECK_FALSE(a.exhaustive);
    CHECK(a.rho == b.rho);
    CHECK(a.witnesses == b.witnesses);
}

TEST_CASE("sampled profile includes the basepoint pairs") {
    auto g = path_graph(300);
    auto hs = compute_hyperplanes(g);
    AnalysisOptions options;
    options.exhaustive_cap = 50;
    options.sample_pairs = 10;
    auto p = compression_profile(g, hs, 0, Epsilon(0.4), every_radius(300), options);
    CHECK_FALSE(p.exhaustive);
    // The basepoint pairs alone realize every radius, so rho is at most the
    // distance from the basepoint to vertex r.
    for (std::size_t i = 0; i < p.radii.size(); ++i) {
        double via_basepoint = embed_eps(g, hs, p.radii[i], 0, Epsilon(0.4)).squared_norm();
        CHECK(p.rho[i] * p.rho[i] <= via_basepoint * (1 + 1e-12));
    }
}

TEST_CASE("fit_exponent recovers exact power laws") {
    CompressionProfile p;
    for (std::uint32_t r = 1; r <= 100; ++r) {
        p.radii.push_back(r);
        p.rho.push_back(static_cast<double>(r));
        p.witnesses.emplace_back(0, r);
    }
    auto fit = fit_exponent(p, 2, 100);
    CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.intercept == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK(fit.residual < 1e-9);
    CHECK(fit.points == 99);

    for (auto& x : p.rho) x = 3.0 * std::pow(x, 0.7);
    auto fit2 = fit_exponent(p, 1, 100);
    CHECK(fit2.slope == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(fit2.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-9));

    CHECK(error_of([&] { (void)fit_exponent(p, 10, 13); }) == ErrorCode::InsufficientData);
    for (auto& x : p.rho) x = 1.0;
    CHECK(error_of([&] { (void)fit_exponent(p, 1, 100); }) == ErrorCode::InsufficientData);
}

TEST_CASE("unweighted and weighted exponents on a path") {
    auto g = path_graph(1024);
    auto hs = compute_hyperplanes(g);
    auto radii = log_spaced_radii(1, 1024, 48);
    auto unweighted = fit_exponent(compression_profile(g, hs, 0, std::nullopt, radii), 16, 900);
    CHECK(unweighted.slope == doctest::Approx(0.5).epsilon(0.04));
    WeightCache cache(g, hs);
    double previous = unweighted.slope;
    for (double e : {0.1, 0.2, 0.3, 0.4, 0.45}) {
        auto fit = fit_exponent(compression_profile(g, hs, 0, Epsilon(e), radii, {}, &cache), 16, 900);
        CAPTURE(e);
        CHECK(fit.slope >= previous - 0.02);
        CHECK(fit.slope >= 0.5 + e - 0.06);
        previous = fit.slope;
    }
}

TEST_CASE("lower bound suite") {
    auto edge = path_graph(1);
    auto he = compute_hyperplanes(edge);
    for (double e : {0.1, 0.3, 0.45}) {
        auto r = verify_lower_bound(edge, he, 0, Epsilon(e));
        CHECK(r.passed);
        CHECK(r.pairs_checked >= 1);
        const double rhs = lower_bound_constant(1, Epsilon(e));
        CHECK(rhs < 1.0);
        CHECK(r.worst_margin == doctest::Approx(1.0 - rhs));
    }
    CHECK(lower_bound_constant(2, Epsilon(0.25)) == doctest::Approx(1.0 / (2 * std::pow(2.0, 1.5) * 1.5)));

    auto g = grid_graph(std::vector<std::size_t>{8, 8});
    auto hs = compute_hyperplanes(g);
    for (double e : {0.1, 0.25, 0.4}) {
        for (Vertex bp : {Vertex{0}, Vertex{27}}) {
            auto r = verify_lower_bound(g, hs, bp, Epsilon(e));
            CHECK(r.passed);
            CHECK(r.worst_margin > 0.0);
        }
    }
    auto s = staircase(6);
    auto hss = compute_hyperplanes(s);
    CHECK(verify_lower_bound(s, hss, 0, Epsilon(0.3)).passed);
}

TEST_CASE("property: a passing lower bound bounds the profile from below") {
    auto g = staircase(7);
    auto hs = compute_hyperplanes(g);
    const unsigned n = dimension(g);
    for (double e : {0.1, 0.3, 0.45}) {
        const Epsilon eps(e);
        REQUIRE(verify_lower_bound(g, hs, 5, eps).passed);
        auto p = compression_profile(g, hs, 5, eps, every_radius(diameter(g)));
        const double c = lower_bound_constant(n, eps);
        for (std::size_t i = 0; i < p.radii.size(); ++i)
            CHECK(p.rho[i] >= std::sqrt(c) * std::pow(p.radii[i], 0.5 + e) * (1 - 1e-9));
    }
}

TEST_CASE("lipschitz suite") {
    auto two = path_graph(2);
    auto h2 = compute_hyperplanes(two);
    for (double e : {0.1, 0.45}) {
        auto r = verify_lipschitz(two, h2, 1, Epsilon(e));
        CHECK(r.passed);
        CHECK(r.pairs_checked == 2);
    }
    auto p = path_graph(1024);
    auto hp = compute_hyperplanes(p);
    auto r = verify_lipschitz(p, hp, 0, Epsilon(0.45));
    CHECK(r.passed);
    CHECK(r.pairs_checked == 1024);
    // The far edge realizes the first 1024 terms of the series.
    double partial = 0.0;
    for (int k = 1023; k >= 0; --k) {
        const double step = std::pow(k + 1.0, 0.45) - std::pow(static_cast<double>(k), 0.45);
        partial += step * step;
    }
    CHECK(r.worst_margin == doctest::Approx(lipschitz_bound(1, Epsilon(0.45), 1'000'000) - partial).epsilon(1e-9));
    CHECK(r.worst_pair == VertexPair{1023, 1024});

    auto g = grid_graph(std::vector<std::size_t>{16, 16});
    auto hg = compute_hyperplanes(g);
    CHECK(verify_lipschitz(g, hg, 0, Epsilon(0.25)).passed);
}

TEST_CASE("fellow traveler suite") {
    auto t = random_tree(200, 8);
    auto ht = compute_hyperplanes(t);
    for (Vertex bp : {Vertex{0}, Vertex{99}}) {
        auto r = verify_fellow_traveler(t, ht, bp);
        CHECK(r.passed);
        CHECK(r.worst_margin == 0.0);
    }
    auto g = grid_graph(std::vector<std::size_t>{8, 8});
    auto hg = compute_hyperplanes(g);
    CHECK(verify_fellow_traveler(g, hg, 9).passed);
    auto s = staircase(6);
    auto hs = compute_hyperplanes(s);
    CHECK(verify_fellow_traveler(s, hs, 0).passed);
    auto single = build_graph(1, {});
    auto h1 = compute_hyperplanes(single);
    auto r1 = verify_fellow_traveler(single, h1, 0);
    CHECK(r1.passed);
    CHECK(r1.pairs_checked == 0);
}

TEST_CASE("crossing suite") {
    for (auto g : {tree_graph(2, 5), grid_graph(std::vector<std::size_t>{8, 8}),
                   product_graph(random_tree(20, 7), path_graph(5))}) {
        auto hs = compute_hyperplanes(g);
        auto r = verify_crossing_once(g, hs);
        CHECK(r.passed);
        CHECK(r.pairs_checked > 0);
    }
}

TEST_CASE("block and remainder inequalities over the full grid") {
    std::vector<Epsilon> grid;
    for (double e : {0.1, 0.2, 0.25, 0.3, 0.4, 0.45}) grid.emplace_back(e);
    auto block = check_block_inequality(6, 64, grid);
    CHECK(block.cases == 6 * 64 * grid.size());
    CHECK(block.weak_violations == 0);
    CHECK(block.strict_violations == 0);
    CHECK(block.degenerate_cases == 64 * grid.size());
    auto rem = check_remainder_inequality(6, 64, grid);
    CHECK(rem.weak_violations == 0);
    CHECK(rem.strict_violations == 0);
    CHECK(rem.cases == 21 * 64 * grid.size());

    auto [lhs, rhs] = block_inequality_sides(3, 2, Epsilon(0.25));
    const double direct = (std::pow(4.0, 0.5) + std::pow(5.0, 0.5) + std::pow(6.0, 0.5)) / 3.0;
    CHECK(rhs == doctest::Approx(direct));
    CHECK(lhs == doctest::Approx(3 * std::pow(2.0, 0.5)));
    auto [l2, r2] = remainder_inequality_sides(4, 3, 2, Epsilon(0.4));
    CHECK(l2 == doctest::Approx(2 * std::pow(4.0, 0.8)));
    CHECK(r2 == doctest::Approx((std::pow(13.0, 0.8) + std::pow(14.0, 0.8)) / 4.0));
}

}  // TEST_SUITE
