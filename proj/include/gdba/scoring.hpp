#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gdba/data.hpp"
#include "gdba/kernel.hpp"

namespace gdba {

/// Per-sample anomaly scores. Across every detector, higher means more anomalous.
struct ScoreVector {
    std::vector<double> scores;
    std::string detector;
    std::string params_digest;

    [[nodiscard]] std::size_t size() const noexcept { return scores.size(); }
};

/// Graph-degree anomaly score: the negated degree. Computed from the
/// off-diagonal part of the degree so rankings survive at small sigma; the
/// constant self-loop term shifts every score equally and never changes order.
[[nodiscard]] ScoreVector gdba_score(const Dataset &data, const KernelParams &params,
                                     std::size_t block_size = kDefaultBlockSize);

/// Same scores from an already computed degree vector.
[[nodiscard]] ScoreVector gdba_score(const DegreeVector &nu);

[[nodiscard]] std::string digest(const KernelParams &params);

/// CSV with header "row_index,score[,label]"; the label column is written
/// only when labels is non-empty. Scores use 17 significant digits.
void write_scores_csv(std::ostream &out, const ScoreVector &scores, std::span<const int> labels = {});

struct ScoreTable {
    std::vector<double> scores;
    std::vector<int> labels;  // empty when the file has no label column
};

ScoreTable read_scores_csv(std::istream &in);

}  // namespace gdba
