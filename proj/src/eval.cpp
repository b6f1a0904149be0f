#include "gdba/eval.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "gdba/baselines.hpp"
#include "gdba/error.hpp"

namespace gdba::eval {

namespace {

std::pair<std::size_t, std::size_t> count_classes(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) {
        throw Error(ErrorCode::DimensionMismatch, std::to_string(scores.size()) + " scores but " +
                                                      std::to_string(labels.size()) + " labels");
    }
    std::size_t pos = 0;
    for (int l : labels) {
        if (l != 0 && l != 1) throw Error(ErrorCode::InvalidLabel, "labels must be 0 or 1");
        pos += l == 1 ? 1 : 0;
    }
    const std::size_t neg = labels.size() - pos;
    if (pos == 0 || neg == 0) {
        throw Error(ErrorCode::SingleClass, "AUC needs both classes (positives=" + std::to_string(pos) +
                                                ", negatives=" + std::to_string(neg) + ")");
    }
    return {pos, neg};
}

std::vector<std::size_t> order_by_score(std::span<const double> scores, bool descending) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return descending ? scores[a] > scores[b] : scores[a] < scores[b];
    });
    return order;
}

double parse_double(std::string_view text, std::string_view what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw Error(ErrorCode::InvalidParameter, std::string(what) + ": cannot parse '" + std::string(text) + "'");
    }
    return v;
}

std::uint64_t parse_unsigned(std::string_view text, std::string_view what) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::InvalidParameter, std::string(what) + ": cannot parse '" + std::string(text) + "'");
    }
    return v;
}

}  // namespace

double auc_value(std::span<const double> scores, std::span<const int> labels) {
    const auto [n_pos, n_neg] = count_classes(scores, labels);
    for (double s : scores) {
        if (!std::isfinite(s)) throw Error(ErrorCode::NonFiniteValue, "scores must be finite");
    }
    const auto order = order_by_score(scores, false);

    // Sum of 1-based mid-ranks over positives.
    double rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        std::size_t pos_in_group = 0;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            pos_in_group += labels[order[j]] == 1 ? 1 : 0;
            ++j;
        }
        const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
        rank_sum += mid_rank * static_cast<double>(pos_in_group);
        i = j;
    }
    const double np = static_cast<double>(n_pos);
    const double u = rank_sum - np * (np + 1.0) / 2.0;
    return u / (np * static_cast<double>(n_neg));
}

AucResult auc(const ScoreVector &scores, std::span<const int> labels) {
    AucResult r;
    r.auc = auc_value(scores.scores, labels);
    r.n_pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    r.n_neg = labels.size() - r.n_pos;
    r.detector = scores.detector;
    r.params_digest = scores.params_digest;
    return r;
}

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels) {
    const auto [n_pos, n_neg] = count_classes(scores, labels);
    const auto order = order_by_score(scores, true);
    RocCurve curve;
    curve.points.emplace_back(0.0, 0.0);
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            (labels[order[j]] == 1 ? tp : fp) += 1;
            ++j;
        }
        curve.points.emplace_back(static_cast<double>(fp) / static_cast<double>(n_neg),
                                  static_cast<double>(tp) / static_cast<double>(n_pos));
        i = j;
    }
    return curve;
}

RocCurve roc_curve(const ScoreVector &scores, std::span<const int> labels) { return roc_curve(scores.scores, labels); }

double trapezoid_area(const RocCurve &curve) {
    double area = 0.0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const auto [x0, y0] = curve.points[i - 1];
        const auto [x1, y1] = curve.points[i];
        area += (x1 - x0) * (y0 + y1) * 0.5;
    }
    return area;
}

void SweepGrid::validate() const {
    const bool finite = std::isfinite(start) && std::isfinite(stop) && std::isfinite(step);
    if (!finite || !(start > 0.0) || !(stop >= start) || !(step > 0.0)) {
        throw Error(ErrorCode::InvalidGrid, "need 0 < start <= stop and step > 0, got " + to_string());
    }
    if ((stop - start) / step > 1e6) throw Error(ErrorCode::InvalidGrid, "grid has more than 1e6 points");
}

std::vector<double> SweepGrid::values() const {
    validate();
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = start + static_cast<double>(i) * step;
    return out;
}

std::string SweepGrid::to_string() const {
    std::ostringstream os;
    os.precision(10);
    os << start << ':' << step << ':' << stop;
    return os.str();
}

SweepGrid parse_grid(std::string_view text) {
    const auto first = text.find(':');
    const auto second = first == std::string_view::npos ? first : text.find(':', first + 1);
    if (text.empty() || second == std::string_view::npos || text.find(':', second + 1) != std::string_view::npos) {
        throw Error(ErrorCode::InvalidGrid, "expected start:step:stop, got '" + std::string(text) + "'");
    }
    SweepGrid g;
    try {
        g.start = parse_double(text.substr(0, first), "grid start");
        g.step = parse_double(text.substr(first + 1, second - first - 1), "grid step");
        g.stop = parse_double(text.substr(second + 1), "grid stop");
    } catch (const Error &e) {
        throw Error(ErrorCode::InvalidGrid, e.what());
    }
    g.validate();
    return g;
}

SweepReport sigma_sweep(const Dataset &data, const SweepGrid &grid, std::size_t block_size, bool dim_normalize) {
    if (!data.has_labels()) throw Error(ErrorCode::SingleClass, "sigma sweep needs labels");
    SweepReport report;
    report.grid = grid;
    for (double sigma : grid.values()) {
        const ScoreVector s = gdba_score(data, KernelParams{sigma, dim_normalize}, block_size);
        report.rows.push_back({sigma, auc_value(s.scores, data.labels)});
    }

    const auto best = std::max_element(report.rows.begin(), report.rows.end(),
                                       [](const SweepRow &a, const SweepRow &b) { return a.auc < b.auc; });
    report.best_sigma = best->sigma;
    report.best_auc = best->auc;

    constexpr double kSlack = 1e-9;
    std::vector<double> robust;
    for (const auto &row : report.rows) {
        if (row.sigma >= kRobustLow - kSlack && row.sigma <= kRobustHigh + kSlack) robust.push_back(row.auc);
    }
    report.robust_count = robust.size();
    if (!robust.empty()) {
        const double n = static_cast<double>(robust.size());
        report.robust_mean = std::accumulate(robust.begin(), robust.end(), 0.0) / n;
        double ss = 0.0;
        for (double a : robust) ss += (a - report.robust_mean) * (a - report.robust_mean);
        report.robust_std = std::sqrt(ss / n);
    }
    return report;
}

void write_sweep_csv(std::ostream &out, const SweepReport &report) {
    const auto old_precision = out.precision();
    out << "sigma,auc\n";
    for (const auto &row : report.rows) {
        out.precision(10);
        out << row.sigma << ',';
        out.precision(std::numeric_limits<double>::max_digits10);
        out << row.auc << '\n';
    }
    out.precision(old_precision);
}

void write_sweep_json(std::ostream &out, const SweepReport &report, std::string_view dataset_name) {
    nlohmann::ordered_json j;
    j["dataset"] = dataset_name;
    j["grid"] = {{"start", report.grid.start}, {"step", report.grid.step}, {"stop", report.grid.stop}};
    j["best_sigma"] = report.best_sigma;
    j["best_auc"] = report.best_auc;
    j["robust_interval"] = {{"low", kRobustLow},
                            {"high", kRobustHigh},
                            {"rows", report.robust_count},
                            {"mean", report.robust_mean},
                            {"std", report.robust_std}};
    auto rows = nlohmann::ordered_json::array();
    for (const auto &row : report.rows) rows.push_back({{"sigma", row.sigma}, {"auc", row.auc}});
    j["rows"] = std::move(rows);
    out << j.dump(2) << '\n';
}

bool is_known_detector(std::string_view name) noexcept {
    return name == "gdba" || name == "knn" || name == "kthnn" || name == "lof" || name == "ldcof";
}

void DetectorSpec::validate() const {
    if (!is_known_detector(name)) {
        throw Error(ErrorCode::UnknownDetector, "'" + name + "' (expected gdba, knn, kthnn, lof or ldcof)");
    }
    if (name == "gdba") KernelParams{sigma, dim_normalize}.validate();
    if ((name == "knn" || name == "kthnn" || name == "lof") && k == 0) {
        throw Error(ErrorCode::InvalidParameter, "k must be >= 1");
    }
    if (name == "ldcof" && k_clusters == 0) throw Error(ErrorCode::InvalidParameter, "k_clusters must be >= 1");
    if (block_size == 0) throw Error(ErrorCode::InvalidParameter, "block_size must be >= 1");
}

std::string DetectorSpec::label() const {
    std::ostringstream os;
    os << name;
    if (name == "gdba") {
        os << ":sigma=" << sigma;
        if (!dim_normalize) os << ",dim_normalize=0";
    } else if (name == "ldcof") {
        os << ":k_clusters=" << k_clusters << ",seed=" << seed;
    } else {
        os << ":k=" << k;
    }
    return os.str();
}

DetectorSpec parse_detector(std::string_view text, const DetectorSpec &defaults) {
    DetectorSpec spec = defaults;
    const auto colon = text.find(':');
    spec.name = std::string(text.substr(0, colon));
    if (colon != std::string_view::npos) {
        std::string_view rest = text.substr(colon + 1);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = rest.substr(0, comma);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
            const auto eq = item.find('=');
            if (eq == std::string_view::npos) {
                throw Error(ErrorCode::InvalidParameter, "detector option '" + std::string(item) + "' lacks '='");
            }
            const std::string_view key = item.substr(0, eq);
            const std::string_view value = item.substr(eq + 1);
            if (key == "sigma") {
                spec.sigma = parse_double(value, key);
            } else if (key == "k") {
                spec.k = parse_unsigned(value, key);
            } else if (key == "k_clusters") {
                spec.k_clusters = parse_unsigned(value, key);
            } else if (key == "seed") {
                spec.seed = parse_unsigned(value, key);
            } else if (key == "dim_normalize") {
                spec.dim_normalize = parse_unsigned(value, key) != 0;
            } else {
                throw Error(ErrorCode::InvalidParameter, "unknown detector option '" + std::string(key) + "'");
            }
        }
    }
    spec.validate();
    return spec;
}

ScoreVector run_detector(const Dataset &data, const DetectorSpec &spec) {
    spec.validate();
    if (spec.name == "gdba") return gdba_score(data, KernelParams{spec.sigma, spec.dim_normalize}, spec.block_size);
    if (spec.name == "knn") return baselines::knn_score(data, spec.k);
    if (spec.name == "kthnn") return baselines::kthnn_score(data, spec.k);
    if (spec.name == "lof") return baselines::lof_score(data, spec.k);
    return baselines::ldcof_score(data, spec.k_clusters, spec.seed);
}

ComparisonTable compare(const std::vector<NamedDataset> &datasets, const std::vector<DetectorSpec> &detectors) {
    ComparisonTable table;
    for (const auto &d : datasets) {
        if (!d.data.has_labels()) throw Error(ErrorCode::SingleClass, "dataset '" + d.name + "' has no labels");
        table.datasets.push_back(d.name);
    }
    for (const auto &spec : detectors) {
        spec.validate();
        table.detectors.push_back(spec.label());
    }

    for (std::size_t di = 0; di < detectors.size(); ++di) {
        double sum = 0.0;
        for (const auto &d : datasets) {
            const auto t0 = std::chrono::steady_clock::now();
            const ScoreVector s = run_detector(d.data, detectors[di]);
            const auto t1 = std::chrono::steady_clock::now();
            ComparisonCell cell{d.name, table.detectors[di], auc(s, d.data.labels),
                                std::chrono::duration<double, std::milli>(t1 - t0).count()};
            sum += cell.result.auc;
            table.cells.push_back(std::move(cell));
        }
        table.averages.push_back(datasets.empty() ? 0.0 : sum / static_cast<double>(datasets.size()));
    }
    return table;
}

void write_comparison_csv(std::ostream &out, const ComparisonTable &table) {
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    out << "detector,dataset,auc,n_pos,n_neg\n";
    for (std::size_t di = 0; di < table.detectors.size(); ++di) {
        for (std::size_t ds = 0; ds < table.datasets.size(); ++ds) {
            const auto &c = table.cell(di, ds);
            out << '"' << c.detector << "\"," << c.dataset << ',' << c.result.auc << ',' << c.result.n_pos << ','
                << c.result.n_neg << '\n';
        }
        out << '"' << table.detectors[di] << "\",avg," << table.averages[di] << ",,\n";
    }
    out.precision(old_precision);
}

void write_comparison_json(std::ostream &out, const ComparisonTable &table) {
    nlohmann::ordered_json j;
    j["detectors"] = table.detectors;
    nlohmann::ordered_json by_dataset = nlohmann::ordered_json::object();
    for (std::size_t ds = 0; ds < table.datasets.size(); ++ds) {
        nlohmann::ordered_json cells = nlohmann::ordered_json::object();
        for (std::size_t di = 0; di < table.detectors.size(); ++di) {
            const auto &c = table.cell(di, ds);
            cells[c.detector] = {{"auc", c.result.auc},
                                 {"n_pos", c.result.n_pos},
                                 {"n_neg", c.result.n_neg},
                                 {"wall_ms", c.wall_ms}};
        }
        by_dataset[table.datasets[ds]] = std::move(cells);
    }
    j["datasets"] = std::move(by_dataset);
    nlohmann::ordered_json avg = nlohmann::ordered_json::object();
    for (std::size_t di = 0; di < table.detectors.size(); ++di) avg[table.detectors[di]] = table.averages[di];
    j["average"] = std::move(avg);
    out << j.dump(2) << '\n';
}

}  // namespace gdba::eval
