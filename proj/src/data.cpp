#include "gdba/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "gdba/error.hpp"

namespace gdba {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string_view> split_line(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return cells;
}

std::string cell_location(std::size_t row, std::string_view column) {
    std::ostringstream os;
    os << "row " << row << ", column '" << column << "'";
    return os.str();
}

double parse_cell(std::string_view text, std::size_t row, std::string_view column) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto *first = text.data();
    const auto *last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ptr != last || (ec != std::errc() && ec != std::errc::result_out_of_range)) {
        throw Error(ErrorCode::NonNumericCell, cell_location(row, column) + ": '" + std::string(text) + "'");
    }
    // from_chars accepts nan/inf spellings; those are not numeric data here.
    const bool spelled_non_finite = std::any_of(text.begin(), text.end(), [](char c) {
        return c == 'n' || c == 'N' || c == 'i' || c == 'I';
    });
    if (spelled_non_finite) {
        throw Error(ErrorCode::NonNumericCell, cell_location(row, column) + ": '" + std::string(text) + "'");
    }
    if (ec == std::errc::result_out_of_range || !std::isfinite(value)) {
        throw Error(ErrorCode::NonFiniteValue, cell_location(row, column) + ": '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace

RawTable parse_csv(std::istream &in, std::string_view label_column) {
    std::string line;
    if (!std::getline(in, line) || trim(line).empty()) {
        throw Error(ErrorCode::EmptyDataset, "missing header row");
    }
    std::vector<std::string> header;
    for (auto cell : split_line(line)) header.emplace_back(cell);

    std::size_t label_index = header.size();
    if (!label_column.empty()) {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (header[c] == label_column) label_index = c;
        }
        if (label_index == header.size()) {
            throw Error(ErrorCode::MissingLabelColumn, "no column named '" + std::string(label_column) + "'");
        }
    }

    RawTable table;
    table.label_column = std::string(label_column);
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c != label_index) table.column_names.emplace_back(header[c]);
    }
    const std::size_t d = table.column_names.size();
    if (d == 0) throw Error(ErrorCode::EmptyDataset, "no feature columns");

    std::vector<double> values;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != header.size()) {
            std::ostringstream os;
            os << "row " << n << " has " << cells.size() << " cells, header has " << header.size();
            throw Error(ErrorCode::RaggedRow, os.str());
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const double v = parse_cell(cells[c], n, header[c]);
            if (c == label_index) {
                if (v != 0.0 && v != 1.0) {
                    throw Error(ErrorCode::InvalidLabel, cell_location(n, header[c]) + " must be 0 or 1");
                }
                table.labels.push_back(static_cast<int>(v));
            } else {
                values.push_back(v);
            }
        }
        ++n;
    }
    if (n == 0) throw Error(ErrorCode::EmptyDataset, "header only, no data rows");

    table.rows = Matrix(n, d);
    std::copy(values.begin(), values.end(), table.rows.values().begin());
    return table;
}

RawTable load_csv(const std::filesystem::path &path, std::string_view label_column) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileNotFound, path.string());
    return parse_csv(in, label_column);
}

void write_csv(std::ostream &out, const RawTable &table) {
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    for (std::size_t c = 0; c < table.column_names.size(); ++c) {
        if (c) out << ',';
        out << table.column_names[c];
    }
    if (table.has_labels()) out << ',' << table.label_column;
    out << '\n';
    for (std::size_t r = 0; r < table.n_samples(); ++r) {
        const auto row = table.rows.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            out << row[c];
        }
        if (table.has_labels()) out << ',' << table.labels[r];
        out << '\n';
    }
    out.precision(old_precision);
}

namespace {

Dataset standardize_matrix(const Matrix &in, std::vector<int> labels, std::vector<std::string> names) {
    const std::size_t n = in.rows();
    const std::size_t d = in.cols();
    Dataset out;
    out.features = Matrix(n, d);
    out.labels = std::move(labels);
    out.column_names = std::move(names);
    out.standardization.resize(d);

    for (std::size_t c = 0; c < d; ++c) {
        bool constant = true;
        double sum = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            sum += in(r, c);
            constant = constant && in(r, c) == in(0, c);
        }
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t r = 0; r < n; ++r) ss += (in(r, c) - mean) * (in(r, c) - mean);
        const double std = std::sqrt(ss / static_cast<double>(n));

        ColumnStats &stats = out.standardization[c];
        stats.constant = constant || std == 0.0;
        stats.mean = stats.constant ? in(0, c) : mean;
        stats.std = stats.constant ? 1.0 : std;
        for (std::size_t r = 0; r < n; ++r) out.features(r, c) = (in(r, c) - stats.mean) / stats.std;
    }
    return out;
}

}  // namespace

Dataset standardize(const RawTable &table) {
    return standardize_matrix(table.rows, table.labels, table.column_names);
}

Dataset standardize(const Dataset &data) {
    return standardize_matrix(data.features, data.labels, data.column_names);
}

Dataset raw_dataset(const RawTable &table) {
    Dataset out;
    out.features = table.rows;
    out.labels = table.labels;
    out.column_names = table.column_names;
    return out;
}

Dataset make_dataset(Matrix features, std::vector<int> labels) {
    if (!labels.empty() && labels.size() != features.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "label count differs from row count");
    }
    Dataset out;
    out.column_names.reserve(features.cols());
    for (std::size_t c = 0; c < features.cols(); ++c) out.column_names.push_back("f" + std::to_string(c));
    out.features = std::move(features);
    out.labels = std::move(labels);
    return out;
}

RawTable to_raw_table(const Dataset &data) {
    RawTable t;
    t.rows = data.features;
    t.labels = data.labels;
    t.column_names = data.column_names;
    t.label_column = "label";
    return t;
}

Dataset make_toy_fig2(std::uint64_t seed) {
    constexpr double kTightStd = 0.03;
    constexpr double kLooseStd = 0.12;
    constexpr double kLooseCenterX = 1.5;
    constexpr double kAnomalyX = 0.35;
    // Cluster members are redrawn until they fall within this many standard
    // deviations of the center, so no unlabeled tail point competes with the
    // planted anomaly.
    constexpr double kMaxRadiusInStd = 2.0;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> unit;
    auto draw = [&](double std, double &x, double &y) {
        do {
            x = unit(rng);
            y = unit(rng);
        } while (x * x + y * y > kMaxRadiusInStd * kMaxRadiusInStd);
        x *= std;
        y *= std;
    };

    Matrix xy(2 * kToyClusterSize + 1, 2);
    for (std::size_t i = 0; i < kToyClusterSize; ++i) draw(kTightStd, xy(i, 0), xy(i, 1));
    for (std::size_t i = kToyClusterSize; i < 2 * kToyClusterSize; ++i) {
        draw(kLooseStd, xy(i, 0), xy(i, 1));
        xy(i, 0) += kLooseCenterX;
    }
    xy(kToyAnomalyIndex, 0) = kAnomalyX;
    xy(kToyAnomalyIndex, 1) = 0.0;

    std::vector<int> labels(xy.rows(), 0);
    labels[kToyAnomalyIndex] = 1;
    Dataset out = make_dataset(std::move(xy), std::move(labels));
    out.column_names = {"x", "y"};
    return out;
}

}  // namespace gdba
