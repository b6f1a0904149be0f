#pragma once

// Independent checks of the graph-degree identities on small problems:
// the degree equals the eigen-expansion sum_i lambda_i psi_i psi_i^T 1, and
// ranking by degree equals ranking by the single-sample MMD^2 against the
// dataset. Everything here works on explicit matrices and is oracle-scale.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gdba/data.hpp"
#include "gdba/kernel.hpp"
#include "gdba/matrix.hpp"

namespace gdba::oracles {

struct EigenSystem {
    std::vector<double> eigenvalues;  // descending
    Matrix eigenvectors;              // column i pairs with eigenvalues[i]
};

inline constexpr int kMaxJacobiSweeps = 100;
inline constexpr double kJacobiRelativeTolerance = 1e-12;

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops to
/// 1e-12 of the matrix norm. Throws NoConvergence after 100 sweeps.
[[nodiscard]] EigenSystem symmetric_eigen(const Matrix &k);
[[nodiscard]] EigenSystem symmetric_eigen(const KernelMatrix &k);

/// x^T K x / x^T x.
[[nodiscard]] double rayleigh_quotient(const Matrix &k, std::span<const double> x);
[[nodiscard]] double rayleigh_quotient(const KernelMatrix &k, std::span<const double> x);

/// Degree through the eigen-expansion, never through row sums.
[[nodiscard]] DegreeVector spectral_degree(const KernelMatrix &k);

/// Unbiased three-term MMD^2 between X and Y by direct double loops.
/// For a single-sample Y the within-Y term is taken as k(y, y) = 1.
[[nodiscard]] double mmd2_empirical(const Dataset &x, const Dataset &y, const KernelParams &params);

/// Closed form (d_avg - 1)/(m - 1) + 1 - 2 d_l / m for Y = {x_l}, from degrees only.
[[nodiscard]] double mmd2_single(const DegreeVector &nu, std::size_t l);
[[nodiscard]] double mmd2_single(const Dataset &x, std::size_t l, const KernelParams &params);

/// Stable argsort by ascending key, ties broken by lower index.
[[nodiscard]] std::vector<std::size_t> argsort(std::span<const double> keys);

struct IdentityCheck {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;

    [[nodiscard]] bool passed() const noexcept { return max_residual <= tolerance; }
};

struct IdentitySuiteOptions {
    std::uint64_t seed = 7;
    std::size_t n_datasets = 12;
    // Test-only: perturb K(0, 1) without mirroring it into K(1, 0).
    bool inject_asymmetry = false;
};

/// Runs every identity on generated data and reports the worst residual of each.
[[nodiscard]] std::vector<IdentityCheck> run_identity_suite(const IdentitySuiteOptions &options = {});

}  // namespace gdba::oracles
