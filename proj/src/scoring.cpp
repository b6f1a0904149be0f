#include "gdba/scoring.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "gdba/error.hpp"

namespace gdba {

std::string digest(const KernelParams &params) {
    std::ostringstream os;
    os << "sigma=" << params.sigma << ";dim_normalize=" << (params.dim_normalize ? 1 : 0);
    return os.str();
}

ScoreVector gdba_score(const DegreeVector &nu) {
    ScoreVector out;
    out.scores.resize(nu.size());
    std::transform(nu.off_diagonal.begin(), nu.off_diagonal.end(), out.scores.begin(), [](double x) { return -x; });
    out.detector = "gdba";
    out.params_digest = digest(nu.params);
    return out;
}

ScoreVector gdba_score(const Dataset &data, const KernelParams &params, std::size_t block_size) {
    return gdba_score(degree(data, params, block_size));
}

void write_scores_csv(std::ostream &out, const ScoreVector &scores, std::span<const int> labels) {
    if (!labels.empty() && labels.size() != scores.size()) {
        throw Error(ErrorCode::DimensionMismatch, "label count differs from score count");
    }
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    out << "row_index,score" << (labels.empty() ? "" : ",label") << '\n';
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out << i << ',' << scores.scores[i];
        if (!labels.empty()) out << ',' << labels[i];
        out << '\n';
    }
    out.precision(old_precision);
}

ScoreTable read_scores_csv(std::istream &in) {
    const bool has_label = [&] {
        std::string header;
        std::getline(in, header);
        if (!header.empty() && header.back() == '\r') header.pop_back();
        if (header == "row_index,score,label") return true;
        if (header == "row_index,score") return false;
        throw Error(ErrorCode::NonNumericCell, "unexpected score CSV header '" + header + "'");
    }();
    // Score files are our own output, so the generic table parser applies.
    std::stringstream body;
    body << "row_index,score" << (has_label ? ",label" : "") << '\n' << in.rdbuf();
    RawTable t = parse_csv(body, has_label ? "label" : "");
    ScoreTable out;
    out.labels = std::move(t.labels);
    out.scores.reserve(t.n_samples());
    for (std::size_t r = 0; r < t.n_samples(); ++r) out.scores.push_back(t.rows(r, 1));
    return out;
}

}  // namespace gdba
