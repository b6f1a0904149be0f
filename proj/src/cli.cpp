#include "gdba/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "gdba/data.hpp"
#include "gdba/error.hpp"
#include "gdba/eval.hpp"
#include "gdba/oracles.hpp"
#include "gdba/parallel.hpp"
#include "gdba/scoring.hpp"

namespace gdba::cli {

namespace {

constexpr std::string_view kToyPrefix = "toy:";

struct DatasetOptions {
    std::vector<std::string> paths;
    std::string label_column = "label";
    bool no_standardize = false;
};

struct DetectorOptions {
    std::vector<std::string> names{"gdba"};
    double sigma = kDefaultSigma;
    std::size_t k = 10;
    std::size_t k_clusters = 10;
    std::uint64_t seed = 0;
    std::size_t block_size = kDefaultBlockSize;
    bool no_dim_normalize = false;

    [[nodiscard]] eval::DetectorSpec defaults() const {
        eval::DetectorSpec d;
        d.sigma = sigma;
        d.k = k;
        d.k_clusters = k_clusters;
        d.seed = seed;
        d.block_size = block_size;
        d.dim_normalize = !no_dim_normalize;
        return d;
    }
};

// "toy:SEED" generates the two-cluster toy set; anything else is a CSV path.
eval::NamedDataset load_dataset(const std::string &source, const DatasetOptions &opts) {
    if (source.starts_with(kToyPrefix)) {
        const std::string seed_text = source.substr(kToyPrefix.size());
        std::uint64_t seed = 0;
        const auto [ptr, ec] = std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), seed);
        if (seed_text.empty() || ec != std::errc() || ptr != seed_text.data() + seed_text.size()) {
            throw Error(ErrorCode::InvalidParameter, "toy dataset seed must be an integer: '" + source + "'");
        }
        return {source, make_toy_fig2(seed)};
    }
    const RawTable table = load_csv(source, opts.label_column);
    return {source, opts.no_standardize ? raw_dataset(table) : standardize(table)};
}

void add_dataset_options(CLI::App &cmd, DatasetOptions &opts, bool multiple) {
    auto *ds = cmd.add_option("--dataset", opts.paths, "CSV path, or toy:SEED for the generated toy set")->required();
    if (!multiple) ds->expected(1);
    cmd.add_option("--label-column", opts.label_column, "Name of the 0/1 anomaly column; empty for none")
        ->envname("GDBA_LABEL_COLUMN")
        ->capture_default_str();
    cmd.add_flag("--no-standardize", opts.no_standardize, "Use raw feature values");
}

void add_detector_options(CLI::App &cmd, DetectorOptions &opts, bool multiple) {
    auto *det = cmd.add_option("--detector", opts.names, "gdba, knn, kthnn, lof or ldcof, optionally name:key=value,...")
                    ->envname("GDBA_DETECTOR")
                    ->capture_default_str();
    if (!multiple) det->expected(1);
    cmd.add_option("--sigma", opts.sigma, "RBF bandwidth for gdba")->envname("GDBA_SIGMA")->capture_default_str();
    cmd.add_option("--k", opts.k, "Neighbors for knn, kthnn and lof")->envname("GDBA_K")->capture_default_str();
    cmd.add_option("--k-clusters", opts.k_clusters, "Clusters for ldcof")
        ->envname("GDBA_K_CLUSTERS")
        ->capture_default_str();
    cmd.add_option("--seed", opts.seed, "Seed for ldcof clustering")->envname("GDBA_SEED")->capture_default_str();
    cmd.add_flag("--no-dim-normalize", opts.no_dim_normalize, "Do not divide squared distances by the dimension");
}

void add_block_size(CLI::App &cmd, std::size_t &block_size) {
    cmd.add_option("--block-size", block_size, "Tile edge for the blocked degree computation")
        ->envname("GDBA_BLOCK_SIZE")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

std::ofstream open_output(const std::string &path) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::FileNotFound, "cannot write '" + path + "'");
    return f;
}

int cmd_score(const DatasetOptions &dopts, const DetectorOptions &opts, const std::string &out_path,
              std::ostream &out, std::ostream &err) {
    const eval::NamedDataset data = load_dataset(dopts.paths.front(), dopts);
    const eval::DetectorSpec spec = eval::parse_detector(opts.names.front(), opts.defaults());
    const ScoreVector scores = eval::run_detector(data.data, spec);

    if (out_path.empty()) {
        write_scores_csv(out, scores, data.data.labels);
    } else {
        auto f = open_output(out_path);
        write_scores_csv(f, scores, data.data.labels);
    }
    const auto &labels = data.data.labels;
    const auto positives = std::count(labels.begin(), labels.end(), 1);
    if (positives > 0 && static_cast<std::size_t>(positives) < labels.size()) {
        err << "auc " << std::setprecision(6) << eval::auc(scores, labels).auc << " (" << spec.label() << ")\n";
    }
    return 0;
}

int cmd_sweep(const DatasetOptions &dopts, const std::string &grid_text, std::size_t block_size,
              bool no_dim_normalize, const std::string &out_path, const std::string &json_path, std::ostream &out,
              std::ostream &err) {
    const eval::SweepGrid grid = eval::parse_grid(grid_text);
    const eval::NamedDataset data = load_dataset(dopts.paths.front(), dopts);
    const eval::SweepReport report = eval::sigma_sweep(data.data, grid, block_size, !no_dim_normalize);

    if (out_path.empty()) {
        eval::write_sweep_csv(out, report);
    } else {
        auto f = open_output(out_path);
        eval::write_sweep_csv(f, report);
    }
    if (!json_path.empty()) {
        auto f = open_output(json_path);
        eval::write_sweep_json(f, report, data.name);
    }
    err << std::setprecision(6) << "best sigma " << report.best_sigma << " auc " << report.best_auc;
    if (report.robust_count > 0) {
        err << "; sigma in [" << eval::kRobustLow << ", " << eval::kRobustHigh << "]: " << report.robust_mean
            << " +- " << report.robust_std << " over " << report.robust_count << " rows";
    }
    err << '\n';
    return 0;
}

int cmd_compare(const DatasetOptions &dopts, const DetectorOptions &opts, const std::string &out_path,
                const std::string &json_path, std::ostream &out) {
    std::vector<eval::NamedDataset> datasets;
    for (const auto &p : dopts.paths) datasets.push_back(load_dataset(p, dopts));
    std::vector<eval::DetectorSpec> detectors;
    for (const auto &name : opts.names) detectors.push_back(eval::parse_detector(name, opts.defaults()));

    const eval::ComparisonTable table = eval::compare(datasets, detectors);
    if (out_path.empty()) {
        eval::write_comparison_csv(out, table);
    } else {
        auto f = open_output(out_path);
        eval::write_comparison_csv(f, table);
    }
    if (!json_path.empty()) {
        auto f = open_output(json_path);
        eval::write_comparison_json(f, table);
    }
    return 0;
}

int cmd_verify(std::uint64_t seed, bool inject_fault, std::ostream &out, std::ostream &err) {
    oracles::IdentitySuiteOptions options;
    options.seed = seed;
    options.inject_asymmetry = inject_fault;
    const auto checks = oracles::run_identity_suite(options);

    std::vector<std::string> failed;
    for (const auto &c : checks) {
        out << (c.passed() ? "PASS " : "FAIL ") << c.name << "  max residual " << std::scientific
            << std::setprecision(3) << c.max_residual << " (tolerance " << c.tolerance << ")\n"
            << std::defaultfloat;
        if (!c.passed()) failed.push_back(c.name);
    }
    if (failed.empty()) return 0;
    err << "failed identities:";
    for (const auto &f : failed) err << "\n  " << f;
    err << '\n';
    return 1;
}

}  // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Graph-degree anomaly detection on fully connected RBF kernel graphs"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file with option defaults");
    std::size_t threads = 0;
    app.add_option("--threads", threads, "Worker threads, 0 = all cores")->envname("GDBA_THREADS");

    DatasetOptions score_data;
    DetectorOptions score_det;
    std::string score_out;
    auto *score = app.add_subcommand("score", "Score every sample of one dataset");
    add_dataset_options(*score, score_data, false);
    add_detector_options(*score, score_det, false);
    add_block_size(*score, score_det.block_size);
    score->add_option("--out", score_out, "Score CSV path (stdout if omitted)");

    DatasetOptions sweep_data;
    std::string grid_text = eval::SweepGrid{}.to_string();
    std::size_t sweep_block = kDefaultBlockSize;
    bool sweep_no_dim = false;
    std::string sweep_out;
    std::string sweep_json;
    auto *sweep = app.add_subcommand("sweep", "AUC of gdba over a grid of sigma values");
    add_dataset_options(*sweep, sweep_data, false);
    sweep->add_option("--grid", grid_text, "start:step:stop")->envname("GDBA_GRID")->capture_default_str();
    add_block_size(*sweep, sweep_block);
    sweep->add_flag("--no-dim-normalize", sweep_no_dim, "Do not divide squared distances by the dimension");
    sweep->add_option("--out", sweep_out, "sigma,auc CSV path (stdout if omitted)");
    sweep->add_option("--json", sweep_json, "Full report as JSON");

    DatasetOptions cmp_data;
    DetectorOptions cmp_det;
    std::string cmp_out;
    std::string cmp_json;
    auto *cmp = app.add_subcommand("compare", "AUC table for several detectors and datasets");
    add_dataset_options(*cmp, cmp_data, true);
    add_detector_options(*cmp, cmp_det, true);
    add_block_size(*cmp, cmp_det.block_size);
    cmp->add_option("--out", cmp_out, "CSV path (stdout if omitted)");
    cmp->add_option("--json", cmp_json, "JSON report path");

    std::uint64_t verify_seed = 7;
    bool inject_fault = false;
    auto *verify = app.add_subcommand("verify", "Check the spectral and MMD identities on generated data");
    verify->add_option("--seed", verify_seed, "Seed for the generated datasets")->capture_default_str();
    verify->add_flag("--inject-fault", inject_fault, "Perturb one kernel entry asymmetrically (negative control)")
        ->group("");

    std::uint64_t toy_seed = 0;
    std::string toy_out;
    auto *toy = app.add_subcommand("make-toy", "Write the two-cluster toy dataset as CSV");
    toy->add_option("--seed", toy_seed, "Generator seed")->capture_default_str();
    toy->add_option("--out", toy_out, "CSV path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e, out, err);
    }

    try {
        set_thread_count(threads);
        if (*score) return cmd_score(score_data, score_det, score_out, out, err);
        if (*sweep) return cmd_sweep(sweep_data, grid_text, sweep_block, sweep_no_dim, sweep_out, sweep_json, out, err);
        if (*cmp) return cmd_compare(cmp_data, cmp_det, cmp_out, cmp_json, out);
        if (*verify) return cmd_verify(verify_seed, inject_fault, out, err);
        if (*toy) {
            const RawTable table = to_raw_table(make_toy_fig2(toy_seed));
            if (toy_out.empty()) {
                write_csv(out, table);
            } else {
                auto f = open_output(toy_out);
                write_csv(f, table);
            }
            return 0;
        }
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        if (e.code() == ErrorCode::UnknownDetector) err << app.help();
        return 1;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace gdba::cli
