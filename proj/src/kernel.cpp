#include "gdba/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gdba/error.hpp"
#include "gdba/parallel.hpp"

namespace gdba {

namespace {

// Neumaier variant of Kahan summation.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) noexcept {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    [[nodiscard]] double value() const noexcept { return sum + carry; }
};

double squared_distance(const double *a, const double *b, std::size_t d) noexcept {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        const double diff = a[k] - b[k];
        s += diff * diff;
    }
    return s;
}

// Multiplier applied to the raw squared distance inside exp().
double exponent_scale(const KernelParams &params, std::size_t d) {
    const double dim = params.dim_normalize ? static_cast<double>(d) : 1.0;
    return -1.0 / (dim * 2.0 * params.sigma * params.sigma);
}

}  // namespace

void KernelParams::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw Error(ErrorCode::InvalidParameter, "sigma must be finite and > 0, got " + std::to_string(sigma));
    }
}

double rbf_entry(std::span<const double> a, std::span<const double> b, const KernelParams &params) {
    params.validate();
    if (a.size() != b.size() || a.empty()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "vectors of dimension " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
    }
    return std::exp(squared_distance(a.data(), b.data(), a.size()) * exponent_scale(params, a.size()));
}

KernelMatrix kernel_matrix(const Dataset &data, const KernelParams &params, std::size_t dense_cap) {
    params.validate();
    const std::size_t n = data.n_samples();
    if (n > dense_cap) {
        throw Error(ErrorCode::DenseCapExceeded,
                    std::to_string(n) + " samples exceeds dense cap " + std::to_string(dense_cap));
    }
    const std::size_t d = data.n_features();
    const double scale = exponent_scale(params, d);

    KernelMatrix k{Matrix(n, n), params};
    for (std::size_t i = 0; i < n; ++i) {
        k.values(i, i) = 1.0;
        const double *fi = data.features.row(i).data();
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = std::exp(squared_distance(fi, data.features.row(j).data(), d) * scale);
            k.values(i, j) = v;
            k.values(j, i) = v;
        }
    }
    return k;
}

DegreeVector DegreeVector::from_off_diagonal(std::vector<double> off_diagonal, const KernelParams &params) {
    DegreeVector out;
    out.values.resize(off_diagonal.size());
    std::transform(off_diagonal.begin(), off_diagonal.end(), out.values.begin(), [](double x) { return 1.0 + x; });
    out.off_diagonal = std::move(off_diagonal);
    out.params = params;
    return out;
}

DegreeVector DegreeVector::from_values(std::vector<double> values, const KernelParams &params) {
    DegreeVector out;
    out.off_diagonal.resize(values.size());
    std::transform(values.begin(), values.end(), out.off_diagonal.begin(), [](double x) { return x - 1.0; });
    out.values = std::move(values);
    out.params = params;
    return out;
}

DegreeVector degree(const Dataset &data, const KernelParams &params, std::size_t block_size) {
    params.validate();
    if (block_size == 0) throw Error(ErrorCode::InvalidParameter, "block_size must be >= 1");

    const std::size_t n = data.n_samples();
    const std::size_t d = data.n_features();
    const double scale = exponent_scale(params, d);
    const std::size_t n_blocks = (n + block_size - 1) / block_size;
    std::vector<double> off(n, 0.0);

    parallel_for(n_blocks, [&](std::size_t rb) {
        const std::size_t row_begin = rb * block_size;
        const std::size_t row_end = std::min(n, row_begin + block_size);
        std::vector<CompensatedSum> acc(row_end - row_begin);

        for (std::size_t col_begin = 0; col_begin < n; col_begin += block_size) {
            const std::size_t col_end = std::min(n, col_begin + block_size);
            for (std::size_t i = row_begin; i < row_end; ++i) {
                const double *fi = data.features.row(i).data();
                CompensatedSum &row_acc = acc[i - row_begin];
                for (std::size_t j = col_begin; j < col_end; ++j) {
                    if (j == i) continue;
                    row_acc.add(std::exp(squared_distance(fi, data.features.row(j).data(), d) * scale));
                }
            }
        }
        for (std::size_t i = row_begin; i < row_end; ++i) off[i] = acc[i - row_begin].value();
    });

    return DegreeVector::from_off_diagonal(std::move(off), params);
}

}  // namespace gdba
