#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gdba/error.hpp"
#include "gdba/kernel.hpp"
#include "support.hpp"

using namespace gdba;

TEST_CASE("rbf_entry basics") {
    const std::vector<double> a{3.2, -1.0};
    CHECK(rbf_entry(a, a, {}) == 1.0);

    const std::vector<double> o{0.0, 0.0};
    const std::vector<double> one{1.0, 1.0};
    // squared distance 2, divided by d = 2 gives 1; exp(-1 / (2 * 0.15^2))
    const double expected = std::exp(-1.0 / (2.0 * 0.0225));
    CHECK(rbf_entry(o, one, KernelParams{0.15}) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(expected == doctest::Approx(2.19e-10).epsilon(5e-3));

    KernelParams raw{0.15, false};
    CHECK(rbf_entry(o, one, raw) == doctest::Approx(std::exp(-2.0 / 0.045)).epsilon(1e-14));
}

TEST_CASE("rbf_entry approaches 1 monotonically as sigma grows") {
    const std::vector<double> a{0.0};
    const std::vector<double> b{1.0};
    double prev = 0.0;
    for (double sigma : {0.1, 0.5, 1.0, 10.0, 1e3, 1e6}) {
        const double v = rbf_entry(a, b, KernelParams{sigma});
        CHECK(v > prev);
        prev = v;
    }
    CHECK(prev == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rbf_entry rejects bad input") {
    const std::vector<double> a{0.0, 1.0};
    const std::vector<double> b{1.0};
    CHECK_THROWS_AS((void)rbf_entry(a, b, {}), Error);
    CHECK_THROWS_AS((void)rbf_entry(a, a, KernelParams{0.0}), Error);
    CHECK_THROWS_AS((void)rbf_entry(a, a, KernelParams{-1.0}), Error);
    CHECK_THROWS_AS((void)rbf_entry(a, a, KernelParams{std::nan("")}), Error);
}

TEST_CASE("kernel_matrix small cases") {
    const auto single = kernel_matrix(test::from_rows({{0.3, 1.0}}), {});
    CHECK(single.size() == 1);
    CHECK(single.values(0, 0) == 1.0);

    const auto same = kernel_matrix(test::from_rows({{1, 2}, {1, 2}, {1, 2}}), {});
    for (double v : same.values.values()) CHECK(v == 1.0);
}

TEST_CASE("kernel_matrix equals pairwise rbf_entry and obeys invariants") {
    std::mt19937_64 rng(5);
    const Dataset d = test::random_dataset(rng, 5, 3);
    const KernelParams p{0.7};
    const auto k = kernel_matrix(d, p);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(k.values(i, i) == 1.0);
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK(std::abs(k.values(i, j) - rbf_entry(d.features.row(i), d.features.row(j), p)) <= 1e-15);
            CHECK(k.values(i, j) == k.values(j, i));
            CHECK(k.values(i, j) > 0.0);
            CHECK(k.values(i, j) <= 1.0);
        }
    }
}

TEST_CASE("kernel_matrix enforces the dense cap") {
    std::mt19937_64 rng(1);
    const Dataset d = test::random_dataset(rng, 20, 2);
    try {
        (void)kernel_matrix(d, {}, 10);
        FAIL("expected DenseCapExceeded");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::DenseCapExceeded);
    }
}

TEST_CASE("degree trivial cases") {
    const auto nu = degree(test::from_rows({{4, 4}, {4, 4}, {4, 4}}), {}, 2);
    CHECK(nu.values == std::vector<double>{3, 3, 3});
    CHECK(nu.off_diagonal == std::vector<double>{2, 2, 2});

    const auto one = degree(test::from_rows({{1.0}}), {}, 8);
    CHECK(one.values == std::vector<double>{1});

    CHECK_THROWS_AS((void)degree(test::from_rows({{1.0}}), {}, 0), Error);
}

TEST_CASE("blocked degree matches dense row sums for any block size") {
    std::mt19937_64 rng(9);
    const Dataset d = test::random_dataset(rng, 50, 4);
    const KernelParams p{0.4};
    const auto k = kernel_matrix(d, p);
    std::vector<double> row_sums(50);
    for (std::size_t i = 0; i < 50; ++i) {
        const auto r = k.values.row(i);
        row_sums[i] = std::accumulate(r.begin(), r.end(), 0.0);
    }
    std::vector<double> first;
    for (std::size_t block : {1, 7, 50, 64}) {
        const auto nu = degree(d, p, block);
        CHECK(test::max_rel_diff(nu.values, row_sums) <= 1e-10);
        if (first.empty()) first = nu.values;
        CHECK(nu.values == first);  // accumulation order is independent of the tiling
    }
}

TEST_CASE("degree stays in [1, N] and equals N times the mean similarity") {
    std::mt19937_64 rng(21);
    const Dataset d = test::random_dataset(rng, 40, 3);
    const KernelParams p{0.3};
    const auto nu = degree(d, p, 16);
    const auto k = kernel_matrix(d, p);
    for (std::size_t i = 0; i < 40; ++i) {
        CHECK(nu[i] >= 1.0);
        CHECK(nu[i] <= 40.0);
        double mean_similarity = 0.0;
        for (std::size_t j = 0; j < 40; ++j) mean_similarity += k.values(i, j);
        mean_similarity /= 40.0;
        CHECK(std::abs(nu[i] - 40.0 * mean_similarity) <= 1e-12 * 40.0);
    }
}

TEST_CASE("degree is permutation equivariant") {
    std::mt19937_64 rng(4);
    const Dataset d = test::random_dataset(rng, 30, 2);
    std::vector<std::size_t> perm(30);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix shuffled(30, 2);
    for (std::size_t r = 0; r < 30; ++r) {
        std::copy(d.features.row(perm[r]).begin(), d.features.row(perm[r]).end(), shuffled.row(r).begin());
    }
    const auto nu = degree(d, {}, 4);
    const auto nu_perm = degree(make_dataset(shuffled), {}, 4);
    for (std::size_t r = 0; r < 30; ++r) CHECK(nu_perm[r] == doctest::Approx(nu[perm[r]]).epsilon(1e-12));
}

TEST_CASE("degree is non-decreasing in sigma") {
    std::mt19937_64 rng(8);
    const Dataset d = test::random_dataset(rng, 25, 3);
    std::vector<double> prev(25, 0.0);
    for (double sigma : {0.01, 0.05, 0.1, 0.3, 1.0, 5.0}) {
        const auto nu = degree(d, KernelParams{sigma});
        for (std::size_t i = 0; i < 25; ++i) CHECK(nu[i] >= prev[i]);
        prev = nu.values;
    }
}

TEST_CASE("sigma limits") {
    std::mt19937_64 rng(12);
    const Dataset d = test::random_dataset(rng, 20, 3);
    double max_dist = 0.0;
    double min_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 20; ++i) {
        for (std::size_t j = i + 1; j < 20; ++j) {
            const double dist = test::euclid(d.features.row(i), d.features.row(j));
            max_dist = std::max(max_dist, dist);
            min_dist = std::min(min_dist, dist);
        }
    }
    const auto wide = degree(d, KernelParams{1e6 * max_dist});
    for (double v : wide.values) {
        CHECK(v >= 20.0 - 1e-6);
        CHECK(v <= 20.0);
    }
    const auto narrow = degree(d, KernelParams{1e-6 * min_dist});
    for (double v : narrow.values) {
        CHECK(v >= 1.0);
        CHECK(v <= 1.0 + 1e-6);
    }
}

TEST_CASE("off-diagonal degree keeps resolution below one ulp of the self term") {
    // Neighbors at distances where exp() is ~1e-30: 1 + x == 1 in double,
    // but the off-diagonal sums still rank the points.
    const Dataset d = test::from_rows({{0.0}, {0.1}, {0.22}});
    const KernelParams p{0.01};
    const auto nu = degree(d, p);
    for (double v : nu.values) CHECK(v == 1.0);
    CHECK(nu.off_diagonal[1] > nu.off_diagonal[0]);
    CHECK(nu.off_diagonal[0] > nu.off_diagonal[2]);
    CHECK(nu.off_diagonal[2] > 0.0);
}
