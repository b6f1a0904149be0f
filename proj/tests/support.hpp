#pragma once

#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "gdba/data.hpp"

namespace gdba::test {

inline Dataset random_dataset(std::mt19937_64 &rng, std::size_t n, std::size_t d, bool standardized = true) {
    std::normal_distribution<double> g;
    Matrix m(n, d);
    for (double &v : m.values()) v = g(rng);
    Dataset out = make_dataset(std::move(m));
    return standardized ? standardize(out) : out;
}

inline Dataset from_rows(std::vector<std::vector<double>> rows, std::vector<int> labels = {}) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    }
    return make_dataset(std::move(m), std::move(labels));
}

// Independent brute-force Euclidean distance, written without library helpers.
inline double euclid(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

inline double max_rel_diff(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(std::abs(b[i]), 1e-300));
    }
    return worst;
}

}  // namespace gdba::test
