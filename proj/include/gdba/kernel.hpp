#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gdba/data.hpp"
#include "gdba/matrix.hpp"

namespace gdba {

inline constexpr double kDefaultSigma = 0.15;
inline constexpr std::size_t kDefaultDenseCap = 5000;
inline constexpr std::size_t kDefaultBlockSize = 1024;

struct KernelParams {
    double sigma = kDefaultSigma;
    // Divide the squared distance by the feature dimension before applying the bandwidth.
    bool dim_normalize = true;

    /// Throws InvalidParameter unless sigma is finite and positive.
    void validate() const;
};

/// exp(-(|a - b|^2 / d) / (2 sigma^2)), or without the 1/d factor when
/// dim_normalize is off.
[[nodiscard]] double rbf_entry(std::span<const double> a, std::span<const double> b, const KernelParams &params);

struct KernelMatrix {
    Matrix values;
    KernelParams params;

    [[nodiscard]] std::size_t size() const noexcept { return values.rows(); }
};

/// Explicit Gram matrix. Each unordered pair is evaluated once and mirrored.
[[nodiscard]] KernelMatrix kernel_matrix(const Dataset &data, const KernelParams &params,
                                         std::size_t dense_cap = kDefaultDenseCap);

/// Graph degree of every sample in the fully connected kernel graph.
///
/// The self-loop contributes exactly 1, so values[i] = 1 + off_diagonal[i].
/// The off-diagonal sum is kept separately because at small bandwidths it
/// can fall below the resolution of 1 + x in double precision, which would
/// erase the ranking information that scores are built from.
struct DegreeVector {
    std::vector<double> values;
    std::vector<double> off_diagonal;
    KernelParams params;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t i) const noexcept { return values[i]; }

    static DegreeVector from_off_diagonal(std::vector<double> off_diagonal, const KernelParams &params);
    static DegreeVector from_values(std::vector<double> values, const KernelParams &params);
};

/// Blocked degree computation: row blocks are distributed over workers and
/// every row accumulates its column terms in ascending index order with
/// compensated summation, so the result does not depend on block_size.
/// Never allocates an N x N buffer.
[[nodiscard]] DegreeVector degree(const Dataset &data, const KernelParams &params,
                                  std::size_t block_size = kDefaultBlockSize);

}  // namespace gdba
