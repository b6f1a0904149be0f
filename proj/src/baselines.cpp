#include "gdba/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include "gdba/error.hpp"
#include "gdba/parallel.hpp"

namespace gdba::baselines {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        const double diff = a[c] - b[c];
        s += diff * diff;
    }
    return s;
}

std::string k_digest(std::size_t k) { return "k=" + std::to_string(k); }

std::vector<double> mean_knn_distance(const NeighborTable &table) {
    std::vector<double> out(table.n_samples());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double s = 0.0;
        for (std::size_t r = 0; r < table.k; ++r) s += table.distance(i, r);
        out[i] = s / static_cast<double>(table.k);
    }
    return out;
}

}  // namespace

NeighborTable knn_table(const Dataset &data, std::size_t k) {
    const std::size_t n = data.n_samples();
    if (k == 0) throw Error(ErrorCode::InvalidParameter, "k must be >= 1");
    if (k + 1 > n) {
        throw Error(ErrorCode::KTooLarge, "k=" + std::to_string(k) + " needs at least " + std::to_string(k + 1) +
                                              " samples, have " + std::to_string(n));
    }

    NeighborTable table;
    table.k = k;
    table.indices.resize(n * k);
    table.distances.resize(n * k);

    parallel_for(n, [&](std::size_t i) {
        std::vector<std::pair<double, std::size_t>> candidates;
        candidates.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) candidates.emplace_back(squared_distance(data.features.row(i), data.features.row(j)), j);
        }
        // Pair ordering breaks distance ties by the lower index.
        std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k), candidates.end());
        for (std::size_t r = 0; r < k; ++r) {
            table.indices[i * k + r] = candidates[r].second;
            table.distances[i * k + r] = std::sqrt(candidates[r].first);
        }
    });
    return table;
}

ScoreVector knn_score(const NeighborTable &table) {
    return {mean_knn_distance(table), "knn", k_digest(table.k)};
}

ScoreVector knn_score(const Dataset &data, std::size_t k) { return knn_score(knn_table(data, k)); }

ScoreVector kthnn_score(const NeighborTable &table) {
    ScoreVector out{std::vector<double>(table.n_samples()), "kthnn", k_digest(table.k)};
    for (std::size_t i = 0; i < out.size(); ++i) out.scores[i] = table.distance(i, table.k - 1);
    return out;
}

ScoreVector kthnn_score(const Dataset &data, std::size_t k) { return kthnn_score(knn_table(data, k)); }

ScoreVector lof_score(const NeighborTable &table) {
    const std::vector<double> dbar = mean_knn_distance(table);
    ScoreVector out{std::vector<double>(dbar.size()), "lof", k_digest(table.k)};
    for (std::size_t i = 0; i < dbar.size(); ++i) {
        const double own = std::max(dbar[i], kLofEpsilon);
        double s = 0.0;
        for (std::size_t r = 0; r < table.k; ++r) s += own / std::max(dbar[table.index(i, r)], kLofEpsilon);
        out.scores[i] = s / static_cast<double>(table.k);
    }
    return out;
}

ScoreVector lof_score(const Dataset &data, std::size_t k) { return lof_score(knn_table(data, k)); }

namespace {

std::size_t nearest_centroid(std::span<const double> point, const Matrix &centroids, double *best_out = nullptr) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
        const double d = squared_distance(point, centroids.row(c));
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    if (best_out) *best_out = best_d;
    return best;
}

Matrix plus_plus_seeds(const Dataset &data, std::size_t k, std::mt19937_64 &rng) {
    const std::size_t n = data.n_samples();
    const std::size_t d = data.n_features();
    Matrix centroids(k, d);
    std::vector<bool> chosen(n, false);
    std::vector<double> nearest_sq(n, std::numeric_limits<double>::infinity());

    auto take = [&](std::size_t c, std::size_t i) {
        chosen[i] = true;
        std::copy(data.features.row(i).begin(), data.features.row(i).end(), centroids.row(c).begin());
        for (std::size_t j = 0; j < n; ++j) {
            nearest_sq[j] = std::min(nearest_sq[j], squared_distance(data.features.row(j), centroids.row(c)));
        }
    };

    take(0, std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (double v : nearest_sq) total += v;
        std::size_t pick = n;
        if (total > 0.0) {
            double u = std::uniform_real_distribution<double>(0.0, total)(rng);
            for (std::size_t j = 0; j < n; ++j) {
                if (nearest_sq[j] <= 0.0) continue;
                pick = j;
                u -= nearest_sq[j];
                if (u < 0.0) break;
            }
        } else {
            // Every remaining point coincides with a seed.
            pick = static_cast<std::size_t>(std::find(chosen.begin(), chosen.end(), false) - chosen.begin());
        }
        take(c, pick);
    }
    return centroids;
}

}  // namespace

Clustering kmeans(const Dataset &data, std::size_t k, std::uint64_t seed) {
    const std::size_t n = data.n_samples();
    const std::size_t d = data.n_features();
    if (k == 0) throw Error(ErrorCode::InvalidParameter, "k_clusters must be >= 1");
    if (k > n) throw Error(ErrorCode::KTooLarge, std::to_string(k) + " clusters for " + std::to_string(n) + " samples");

    std::mt19937_64 rng(seed);
    Clustering out;
    out.centroids = plus_plus_seeds(data, k, rng);
    out.assignment.assign(n, k);
    std::vector<std::size_t> next(n);
    std::vector<double> dist_sq(n);

    bool converged = false;
    while (out.iterations < kMaxKmeansIterations) {
        ++out.iterations;
        parallel_for(n, [&](std::size_t i) { next[i] = nearest_centroid(data.features.row(i), out.centroids, &dist_sq[i]); });
        if (next == out.assignment) {
            converged = true;
            break;
        }
        out.assignment = next;

        Matrix sums(k, d);
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = out.assignment[i];
            ++counts[c];
            for (std::size_t f = 0; f < d; ++f) sums(c, f) += data.features(i, f);
        }
        std::vector<bool> used_for_reseed(n, false);
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                for (std::size_t f = 0; f < d; ++f) out.centroids(c, f) = sums(c, f) / static_cast<double>(counts[c]);
                continue;
            }
            std::size_t far = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (!used_for_reseed[i] && (far == n || dist_sq[i] > dist_sq[far])) far = i;
            }
            if (far == n) continue;
            used_for_reseed[far] = true;
            std::copy(data.features.row(far).begin(), data.features.row(far).end(), out.centroids.row(c).begin());
        }
    }
    if (!converged) {
        for (std::size_t i = 0; i < n; ++i) out.assignment[i] = nearest_centroid(data.features.row(i), out.centroids, &dist_sq[i]);
    }

    // Compact away clusters that ended up empty.
    std::vector<std::size_t> remap(k, k);
    std::size_t kept = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (remap[out.assignment[i]] == k) remap[out.assignment[i]] = 0;
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (remap[c] != k) remap[c] = kept++;
    }
    if (kept != k) {
        Matrix compact(kept, d);
        for (std::size_t c = 0; c < k; ++c) {
            if (remap[c] == k) continue;
            std::copy(out.centroids.row(c).begin(), out.centroids.row(c).end(), compact.row(remap[c]).begin());
        }
        out.centroids = std::move(compact);
        for (auto &a : out.assignment) a = remap[a];
    }

    out.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) out.inertia += dist_sq[i];
    return out;
}

ScoreVector ldcof_score(const Dataset &data, const Clustering &clustering) {
    const std::size_t n = data.n_samples();
    const std::size_t k = clustering.n_clusters();
    std::vector<double> dist(n);
    std::vector<double> cluster_sum(k, 0.0);
    std::vector<std::size_t> cluster_size(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = clustering.assignment[i];
        dist[i] = std::sqrt(squared_distance(data.features.row(i), clustering.centroids.row(c)));
        cluster_sum[c] += dist[i];
        ++cluster_size[c];
    }

    ScoreVector out{std::vector<double>(n), "ldcof", "k_clusters=" + std::to_string(k)};
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = clustering.assignment[i];
        const double mean = cluster_sum[c] / static_cast<double>(cluster_size[c]);
        out.scores[i] = mean > 0.0 ? dist[i] / mean : kLdcofDegenerateScore;
    }
    return out;
}

ScoreVector ldcof_score(const Dataset &data, std::size_t k_clusters, std::uint64_t seed) {
    ScoreVector out = ldcof_score(data, kmeans(data, k_clusters, seed));
    out.params_digest = "k_clusters=" + std::to_string(k_clusters) + ";seed=" + std::to_string(seed);
    return out;
}

}  // namespace gdba::baselines
