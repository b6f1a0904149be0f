#pragma once

#include <cstdint>
#include <vector>

#include "gdba/data.hpp"
#include "gdba/matrix.hpp"
#include "gdba/scoring.hpp"

namespace gdba::baselines {

/// Exact k nearest neighbors under Euclidean distance, self excluded.
/// Row i holds neighbors in ascending distance; equal distances are ordered
/// by lower sample index.
struct NeighborTable {
    std::size_t k = 0;
    std::vector<std::size_t> indices;  // n x k, row-major
    std::vector<double> distances;     // n x k, row-major

    [[nodiscard]] std::size_t n_samples() const noexcept { return k == 0 ? 0 : indices.size() / k; }
    [[nodiscard]] std::size_t index(std::size_t i, std::size_t r) const noexcept { return indices[i * k + r]; }
    [[nodiscard]] double distance(std::size_t i, std::size_t r) const noexcept { return distances[i * k + r]; }
};

[[nodiscard]] NeighborTable knn_table(const Dataset &data, std::size_t k);

/// Mean distance to the k nearest neighbors.
[[nodiscard]] ScoreVector knn_score(const Dataset &data, std::size_t k);
[[nodiscard]] ScoreVector knn_score(const NeighborTable &table);

/// Distance to the k-th nearest neighbor.
[[nodiscard]] ScoreVector kthnn_score(const Dataset &data, std::size_t k);
[[nodiscard]] ScoreVector kthnn_score(const NeighborTable &table);

/// Floor applied to mean neighbor distances before forming density ratios.
inline constexpr double kLofEpsilon = 1e-12;

/// Density ratio (1/k) sum_{j in knn(i)} dbar_i / dbar_j, where dbar is the
/// mean k-nn distance. This is the simplified ratio form, not the
/// reachability-distance LOF: no reach-dist and no local reachability density.
/// Both numerator and denominator are floored at kLofEpsilon, so duplicate
/// points score 1 instead of dividing by zero.
[[nodiscard]] ScoreVector lof_score(const Dataset &data, std::size_t k);
[[nodiscard]] ScoreVector lof_score(const NeighborTable &table);

struct Clustering {
    Matrix centroids;                     // clusters x d
    std::vector<std::size_t> assignment;  // per sample
    double inertia = 0.0;                 // sum of squared distances to own centroid
    std::size_t iterations = 0;

    [[nodiscard]] std::size_t n_clusters() const noexcept { return centroids.rows(); }
};

inline constexpr std::size_t kMaxKmeansIterations = 300;

/// Lloyd's algorithm from k-means++ seeding. Stops when assignments repeat or
/// after kMaxKmeansIterations. Empty clusters are re-seeded at the point
/// farthest from its centroid. If the data has fewer distinct points than k,
/// clusters that stay empty are dropped from the result.
[[nodiscard]] Clustering kmeans(const Dataset &data, std::size_t k, std::uint64_t seed);

/// Score assigned when a cluster's mean centroid distance is zero.
inline constexpr double kLdcofDegenerateScore = 1e12;

/// Distance to own centroid over the mean such distance in that cluster.
/// Applied uniformly to all clusters; there is no large/small-cluster split.
[[nodiscard]] ScoreVector ldcof_score(const Dataset &data, std::size_t k_clusters, std::uint64_t seed);
[[nodiscard]] ScoreVector ldcof_score(const Dataset &data, const Clustering &clustering);

}  // namespace gdba::baselines
