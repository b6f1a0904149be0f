#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gdba/matrix.hpp"

namespace gdba {

/// Validated numeric table as read from disk. Labels are empty when the
/// table was loaded without a label column; otherwise one 0/1 flag per row.
struct RawTable {
    Matrix rows;
    std::vector<int> labels;
    std::vector<std::string> column_names;
    std::string label_column;

    [[nodiscard]] std::size_t n_samples() const noexcept { return rows.rows(); }
    [[nodiscard]] std::size_t n_features() const noexcept { return rows.cols(); }
    [[nodiscard]] bool has_labels() const noexcept { return !labels.empty(); }
};

struct ColumnStats {
    double mean = 0.0;
    double std = 1.0;  // divisor actually applied; 1 for constant columns
    bool constant = false;
};

/// Immutable feature matrix handed to every detector.
struct Dataset {
    Matrix features;
    std::vector<int> labels;
    std::vector<std::string> column_names;
    std::vector<ColumnStats> standardization;  // empty when features are raw

    [[nodiscard]] std::size_t n_samples() const noexcept { return features.rows(); }
    [[nodiscard]] std::size_t n_features() const noexcept { return features.cols(); }
    [[nodiscard]] bool has_labels() const noexcept { return !labels.empty(); }
    [[nodiscard]] bool standardized() const noexcept { return !standardization.empty(); }
};

/// Parses comma-separated text with a header row. An empty label_column
/// loads an unlabeled table; otherwise the named column must exist and hold 0/1.
RawTable parse_csv(std::istream &in, std::string_view label_column = "label");
RawTable load_csv(const std::filesystem::path &path, std::string_view label_column = "label");

/// Writes the table back in the same layout (label column last), 17 significant digits.
void write_csv(std::ostream &out, const RawTable &table);

/// Population z-score per column. Constant columns are centered only.
Dataset standardize(const RawTable &table);
Dataset standardize(const Dataset &data);

/// Wraps the table without transforming features.
Dataset raw_dataset(const RawTable &table);

/// Builds a Dataset straight from a matrix; used by tests and generators.
Dataset make_dataset(Matrix features, std::vector<int> labels = {});

RawTable to_raw_table(const Dataset &data);

/// Two 2-D Gaussian clusters (tight around the origin, looser around (1.5, 0))
/// and one local anomaly at (0.35, 0), which is the last row and the only
/// positive label. Cluster draws are truncated at two standard deviations. Coordinates are left unstandardized.
Dataset make_toy_fig2(std::uint64_t seed);

inline constexpr std::size_t kToyClusterSize = 15;
inline constexpr std::size_t kToyAnomalyIndex = 2 * kToyClusterSize;

}  // namespace gdba
