#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gdba/data.hpp"
#include "gdba/kernel.hpp"
#include "gdba/scoring.hpp"

namespace gdba::eval {

/// ROC points from the strictest threshold to the loosest; a group of tied
/// scores moves the curve in one diagonal step.
struct RocCurve {
    std::vector<std::pair<double, double>> points;  // (false positive rate, true positive rate)
};

struct AucResult {
    double auc = 0.0;
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
    std::string detector;
    std::string params_digest;
};

/// Mann-Whitney AUC with mid-ranks for ties. Label 1 is the positive class.
[[nodiscard]] double auc_value(std::span<const double> scores, std::span<const int> labels);
[[nodiscard]] AucResult auc(const ScoreVector &scores, std::span<const int> labels);

[[nodiscard]] RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels);
[[nodiscard]] RocCurve roc_curve(const ScoreVector &scores, std::span<const int> labels);
[[nodiscard]] double trapezoid_area(const RocCurve &curve);

struct SweepGrid {
    double start = 0.005;
    double stop = 1.0;
    double step = 0.005;

    void validate() const;
    [[nodiscard]] std::vector<double> values() const;
    [[nodiscard]] std::string to_string() const;  // start:step:stop
};

/// Parses "start:step:stop".
[[nodiscard]] SweepGrid parse_grid(std::string_view text);

inline constexpr double kRobustLow = 0.02;
inline constexpr double kRobustHigh = 0.2;

struct SweepRow {
    double sigma = 0.0;
    double auc = 0.0;
};

struct SweepReport {
    SweepGrid grid;
    std::vector<SweepRow> rows;
    double best_sigma = 0.0;  // first row reaching the maximum AUC
    double best_auc = 0.0;
    // Mean and population std of AUC over rows with sigma in [0.02, 0.2].
    std::size_t robust_count = 0;
    double robust_mean = 0.0;
    double robust_std = 0.0;
};

[[nodiscard]] SweepReport sigma_sweep(const Dataset &data, const SweepGrid &grid = {},
                                      std::size_t block_size = kDefaultBlockSize, bool dim_normalize = true);

void write_sweep_csv(std::ostream &out, const SweepReport &report);
void write_sweep_json(std::ostream &out, const SweepReport &report, std::string_view dataset_name);

/// Detector plus its parameters. Text form: "name" or "name:key=value,key=value".
struct DetectorSpec {
    std::string name = "gdba";
    double sigma = kDefaultSigma;
    bool dim_normalize = true;
    std::size_t k = 10;
    std::size_t k_clusters = 10;
    std::uint64_t seed = 0;
    std::size_t block_size = kDefaultBlockSize;

    void validate() const;
    [[nodiscard]] std::string label() const;
};

[[nodiscard]] bool is_known_detector(std::string_view name) noexcept;

/// Applies "name[:key=value,...]" on top of defaults.
[[nodiscard]] DetectorSpec parse_detector(std::string_view text, const DetectorSpec &defaults = {});

[[nodiscard]] ScoreVector run_detector(const Dataset &data, const DetectorSpec &spec);

struct NamedDataset {
    std::string name;
    Dataset data;
};

struct ComparisonCell {
    std::string dataset;
    std::string detector;
    AucResult result;
    double wall_ms = 0.0;
};

struct ComparisonTable {
    std::vector<std::string> datasets;
    std::vector<std::string> detectors;
    std::vector<ComparisonCell> cells;  // detector-major, datasets in input order
    std::vector<double> averages;       // per detector

    [[nodiscard]] const ComparisonCell &cell(std::size_t detector, std::size_t dataset) const {
        return cells[detector * datasets.size() + dataset];
    }
};

[[nodiscard]] ComparisonTable compare(const std::vector<NamedDataset> &datasets,
                                      const std::vector<DetectorSpec> &detectors);

/// One row per (detector, dataset) cell plus one "avg" row per detector.
/// Wall times are left out so the file is reproducible byte for byte.
void write_comparison_csv(std::ostream &out, const ComparisonTable &table);
/// Nested by dataset, including per-cell wall time in milliseconds.
void write_comparison_json(std::ostream &out, const ComparisonTable &table);

}  // namespace gdba::eval
