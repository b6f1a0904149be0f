// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gdba/baselines.hpp"
#include "gdba/data.hpp"
#include "gdba/eval.hpp"
#include "gdba/kernel.hpp"
#include "gdba/oracles.hpp"
#include "gdba/scoring.hpp"
#include "support.hpp"

using namespace gdba;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

struct Criterion {
    std::string name;
    double budget_seconds;
    std::function<Outcome()> run;
};

std::string fmt(const char *format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

Dataset single_row(const Dataset &d, std::size_t l) {
    Matrix m(1, d.n_features());
    std::copy(d.features.row(l).begin(), d.features.row(l).end(), m.row(0).begin());
    return make_dataset(std::move(m));
}

std::vector<double> negated(std::span<const double> v) {
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [](double x) { return -x; });
    return out;
}

// Peak resident set in kB from /proc, or -1 when unavailable.
long read_status_kb(const std::string &key) {
    std::ifstream f("/proc/self/status");
    std::string line;
    while (std::getline(f, line)) {
        if (line.rfind(key + ":", 0) == 0) return std::stol(line.substr(key.size() + 1));
    }
    return -1;
}

bool reset_peak_rss() {
    std::ofstream f("/proc/self/clear_refs");
    f << "5";
    return static_cast<bool>(f);
}

Outcome blocked_degree_scalability() {
    constexpr std::size_t kN = 50000;
    constexpr std::size_t kD = 10;
    constexpr std::size_t kSpot = 1000;
    constexpr double kMemoryBudgetMb = 64.0;

    std::mt19937_64 rng(2024);
    const Dataset data = test::random_dataset(rng, kN, kD);
    const KernelParams params{0.15};

    const bool reset = reset_peak_rss();
    const long baseline_kb = read_status_kb("VmRSS");
    const DegreeVector nu = degree(data, params, kDefaultBlockSize);
    const long peak_kb = read_status_kb("VmHWM");
    const double extra_mb = reset && baseline_kb >= 0 && peak_kb >= 0 ? (peak_kb - baseline_kb) / 1024.0 : -1.0;

    std::vector<std::size_t> rows(kN);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    std::shuffle(rows.begin(), rows.end(), rng);
    rows.resize(kSpot);
    double worst = 0.0;
    for (std::size_t i : rows) {
        double sum = 0.0;
        for (std::size_t j = 0; j < kN; ++j) sum += rbf_entry(data.features.row(i), data.features.row(j), params);
        worst = std::max(worst, std::abs(nu[i] - sum) / sum);
    }

    const bool memory_ok = extra_mb >= 0.0 && extra_mb <= kMemoryBudgetMb;
    return {memory_ok && worst <= 1e-8,
            fmt("N=%zu d=%zu: peak extra RSS %.2f MB (budget %.0f), spot-check max rel err %.2e over %zu rows", kN, kD,
                extra_mb, kMemoryBudgetMb, worst, kSpot)};
}

Outcome spectral_identity() {
    constexpr double kSigmas[] = {0.05, 0.15, 0.5, 2.0};
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> pick_n(5, 100), pick_d(1, 10);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const Dataset d = test::random_dataset(rng, pick_n(rng), pick_d(rng));
        const KernelParams p{kSigmas[t % 4]};
        const auto via_eigen = oracles::spectral_degree(kernel_matrix(d, p));
        const auto blocked = degree(d, p, 16);
        for (std::size_t i = 0; i < d.n_samples(); ++i) worst = std::max(worst, std::abs(via_eigen[i] - blocked[i]));
    }
    return {worst <= 1e-8, fmt("50 datasets, max |spectral - blocked| = %.2e (tol 1e-8)", worst)};
}

Outcome mmd_reduction() {
    constexpr double kReductionSigmas[] = {0.05, 0.15, 0.5, 2.0};
    constexpr double kRankSigmas[] = {0.5, 1.0, 2.0};
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<std::size_t> pick_m(2, 64), pick_d(1, 10);
    double worst = 0.0;
    std::size_t rank_failures = 0;
    for (int t = 0; t < 50; ++t) {
        const Dataset x = test::random_dataset(rng, pick_m(rng), pick_d(rng));
        const KernelParams p{kReductionSigmas[t % 4]};
        const DegreeVector nu = degree(x, p);
        for (std::size_t l = 0; l < x.n_samples(); ++l) {
            const double general = oracles::mmd2_empirical(x, single_row(x, l), p);
            worst = std::max(worst, std::abs(general - oracles::mmd2_single(nu, l)));
        }

        const KernelParams rank_params{kRankSigmas[t % 3]};
        const DegreeVector rank_nu = degree(x, rank_params);
        std::vector<double> mmd(x.n_samples());
        for (std::size_t l = 0; l < x.n_samples(); ++l) mmd[l] = oracles::mmd2_single(rank_nu, l);
        if (oracles::argsort(mmd) != oracles::argsort(negated(rank_nu.values))) ++rank_failures;
    }
    return {worst <= 1e-12 && rank_failures == 0,
            fmt("50 datasets, max |three-term - closed form| = %.2e (tol 1e-12); argsort mismatches %zu/50 "
                "(sigma in {0.5,1,2})",
                worst, rank_failures)};
}

Outcome auc_oracle() {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::uniform_int_distribution<int> coarse(0, 4);
    double worst_pairs = 0.0, worst_trapezoid = 0.0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 20 + rng() % 300;
        std::vector<double> s(n);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            // Every other vector draws from five values only: heavy ties.
            s[i] = t % 2 ? static_cast<double>(coarse(rng)) : g(rng);
            y[i] = rng() % 5 == 0;
        }
        if (t % 3 == 0) std::fill(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n / 2), 0.25);
        y[0] = 1;
        y[1] = 0;

        double wins = 0.0, pairs = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            if (!y[p]) continue;
            for (std::size_t q = 0; q < n; ++q) {
                if (y[q]) continue;
                pairs += 1.0;
                wins += s[p] > s[q] ? 1.0 : s[p] == s[q] ? 0.5 : 0.0;
            }
        }
        const double a = eval::auc_value(s, y);
        worst_pairs = std::max(worst_pairs, std::abs(a - wins / pairs));
        worst_trapezoid = std::max(worst_trapezoid, std::abs(a - eval::trapezoid_area(eval::roc_curve(s, y))));
    }
    return {worst_pairs <= 1e-12 && worst_trapezoid <= 1e-12,
            fmt("100 vectors: max |MW - pairwise| = %.2e, max |MW - trapezoid| = %.2e (tol 1e-12)", worst_pairs,
                worst_trapezoid)};
}

Outcome toy_reproduction() {
    const Dataset toy = make_toy_fig2(0);
    const auto at01 = gdba_score(toy, KernelParams{0.1});
    const auto at05 = gdba_score(toy, KernelParams{0.5});
    const double anomaly = at01.scores[kToyAnomalyIndex];
    bool single_top = true;
    for (std::size_t i = 0; i < toy.n_samples(); ++i) {
        if (i != kToyAnomalyIndex && at01.scores[i] >= anomaly) single_top = false;
    }
    std::size_t outranking = 0;
    for (std::size_t i = 0; i < toy.n_samples(); ++i) {
        if (i != kToyAnomalyIndex && at05.scores[i] > at05.scores[kToyAnomalyIndex]) ++outranking;
    }
    const double auc01 = eval::auc_value(at01.scores, toy.labels);
    const double auc05 = eval::auc_value(at05.scores, toy.labels);
    return {single_top && auc01 == 1.0 && outranking >= 1 && auc05 < 1.0,
            fmt("sigma=0.1: anomaly strictly top=%s AUC=%.4f; sigma=0.5: %zu normals outrank it, AUC=%.4f",
                single_top ? "yes" : "no", auc01, outranking, auc05)};
}

Dataset load_bcancer() { return standardize(load_csv(std::string(GDBA_DATA_DIR) + "/bcancer.csv")); }

Outcome bcancer_smoke() {
    const Dataset d = load_bcancer();
    const double at0885 = eval::auc_value(gdba_score(d, KernelParams{0.885}).scores, d.labels);
    const double at005 = eval::auc_value(gdba_score(d, KernelParams{0.05}).scores, d.labels);
    const auto sweep = eval::sigma_sweep(d);
    return {at0885 > at005 && sweep.best_auc >= 0.95,
            fmt("n=%zu anomalies=%d: AUC(0.885)=%.4f > AUC(0.05)=%.4f; grid best %.4f at sigma=%.3f (need >= 0.95)",
                d.n_samples(), std::accumulate(d.labels.begin(), d.labels.end(), 0), at0885, at005, sweep.best_auc,
                sweep.best_sigma)};
}

Outcome robustness_interval() {
    const auto toy = eval::sigma_sweep(make_toy_fig2(0));
    const auto bc = eval::sigma_sweep(load_bcancer());
    return {toy.robust_std < 0.06 && bc.robust_std < 0.06 && toy.robust_count > 0 && bc.robust_count > 0,
            fmt("sigma in [0.02,0.2]: toy %.4f +- %.4f, bcancer %.4f +- %.4f (std < 0.06, %zu rows each)",
                toy.robust_mean, toy.robust_std, bc.robust_mean, bc.robust_std, bc.robust_count)};
}

Outcome kernel_limits() {
    std::mt19937_64 rng(5);
    const Dataset d = test::random_dataset(rng, 40, 4);
    double max_dist = 0.0, min_dist = INFINITY;
    for (std::size_t i = 0; i < 40; ++i) {
        for (std::size_t j = i + 1; j < 40; ++j) {
            const double dist = test::euclid(d.features.row(i), d.features.row(j));
            max_dist = std::max(max_dist, dist);
            if (dist > 0.0) min_dist = std::min(min_dist, dist);
        }
    }
    const auto wide = degree(d, KernelParams{1e6 * max_dist});
    const auto narrow = degree(d, KernelParams{1e-6 * min_dist});
    double wide_gap = 0.0, narrow_gap = 0.0;
    bool in_range = true;
    for (std::size_t i = 0; i < 40; ++i) {
        wide_gap = std::max(wide_gap, 40.0 - wide[i]);
        narrow_gap = std::max(narrow_gap, narrow[i] - 1.0);
        in_range = in_range && wide[i] <= 40.0 && narrow[i] >= 1.0;
    }

    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> sig(0.1, 3.0);
    std::size_t violations = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t dim = 1 + rng() % 10;
        std::vector<double> a(dim), b(dim);
        for (auto &v : a) v = g(rng);
        for (auto &v : b) v = g(rng);
        const KernelParams p{sig(rng)};
        const double ab = rbf_entry(a, b, p);
        const double ba = rbf_entry(b, a, p);
        if (ab != ba || rbf_entry(a, a, p) != 1.0 || !(ab > 0.0) || ab > 1.0) ++violations;
    }
    return {in_range && wide_gap <= 1e-6 && narrow_gap <= 1e-6 && violations == 0,
            fmt("N - min nu at wide sigma = %.2e, max nu - 1 at narrow sigma = %.2e (tol 1e-6); %zu/1000 pair "
                "invariant violations",
                wide_gap, narrow_gap, violations)};
}

Outcome baseline_sanity() {
    std::mt19937_64 rng(6);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        const Dataset d = test::random_dataset(rng, 30, 1 + rng() % 5);
        const std::size_t k = 1 + rng() % 8;

        // Brute force: all pairwise distances, full sort per row.
        std::vector<std::vector<std::pair<double, std::size_t>>> nb(30);
        for (std::size_t i = 0; i < 30; ++i) {
            for (std::size_t j = 0; j < 30; ++j) {
                if (i != j) nb[i].emplace_back(test::euclid(d.features.row(i), d.features.row(j)), j);
            }
            std::sort(nb[i].begin(), nb[i].end());
        }
        std::vector<double> mean_k(30, 0.0);
        for (std::size_t i = 0; i < 30; ++i) {
            for (std::size_t r = 0; r < k; ++r) mean_k[i] += nb[i][r].first / static_cast<double>(k);
        }
        const auto knn = baselines::knn_score(d, k);
        const auto kth = baselines::kthnn_score(d, k);
        const auto lof = baselines::lof_score(d, k);
        for (std::size_t i = 0; i < 30; ++i) {
            double ratio = 0.0;
            for (std::size_t r = 0; r < k; ++r) ratio += mean_k[i] / mean_k[nb[i][r].second] / static_cast<double>(k);
            worst = std::max({worst, std::abs(knn.scores[i] - mean_k[i]), std::abs(kth.scores[i] - nb[i][k - 1].first),
                              std::abs(lof.scores[i] - ratio)});
        }

        const std::size_t clusters = 1 + rng() % 4;
        const auto clustering = baselines::kmeans(d, clusters, static_cast<std::uint64_t>(t));
        const auto ldcof = baselines::ldcof_score(d, clustering);
        for (std::size_t i = 0; i < 30; ++i) {
            double sum = 0.0;
            std::size_t size = 0;
            for (std::size_t j = 0; j < 30; ++j) {
                if (clustering.assignment[j] != clustering.assignment[i]) continue;
                sum += test::euclid(d.features.row(j), clustering.centroids.row(clustering.assignment[j]));
                ++size;
            }
            const double own = test::euclid(d.features.row(i), clustering.centroids.row(clustering.assignment[i]));
            const double expected = sum > 0.0 ? own / (sum / static_cast<double>(size)) : baselines::kLdcofDegenerateScore;
            worst = std::max(worst, std::abs(ldcof.scores[i] - expected));
        }
    }
    const Dataset toy = make_toy_fig2(0);
    const double toy_auc = eval::auc_value(baselines::knn_score(toy, 3).scores, toy.labels);
    return {worst <= 1e-10 && toy_auc >= 0.9,
            fmt("knn/kthnn/lof/ldcof max |impl - brute force| = %.2e (tol 1e-10); toy knn(k=3) AUC = %.4f (>= 0.9)",
                worst, toy_auc)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"blocked-degree scalability", 300.0, blocked_degree_scalability},
        {"spectral identity", 30.0, spectral_identity},
        {"MMD reduction", 10.0, mmd_reduction},
        {"AUC oracle", 5.0, auc_oracle},
        {"toy reproduction", 0.0, toy_reproduction},
        {"bcancer smoke test", 0.0, bcancer_smoke},
        {"robustness interval", 0.0, robustness_interval},
        {"kernel limit properties", 0.0, kernel_limits},
        {"baseline sanity", 0.0, baseline_sanity},
    };

    int failures = 0;
    for (const auto &c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = c.budget_seconds <= 0.0 || secs < c.budget_seconds;
        const bool passed = o.passed && in_time;
        failures += passed ? 0 : 1;
        std::printf("[%s] %-28s %s; %.2fs", passed ? "PASS" : "FAIL", c.name.c_str(), o.detail.c_str(), secs);
        if (c.budget_seconds > 0.0) std::printf(" (budget %.0fs)", c.budget_seconds);
        std::printf("\n");
        std::fflush(stdout);
    }
    std::printf("%zu criteria, %d failed\n", criteria.size(), failures);
    return failures == 0 ? 0 : 1;
}
