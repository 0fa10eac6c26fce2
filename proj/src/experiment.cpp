#include "dyadtree/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "dyadtree/io.hpp"
#include "dyadtree/rng.hpp"

namespace dyadtree {

DistributionOracle OracleSpec::make() const {
    switch (kind) {
    case EtaKind::kSignedPower: return DistributionOracle::signed_power(dim, delta, axis);
    case EtaKind::kMassart: return DistributionOracle::massart(dim, amplitude, axis);
    case EtaKind::kStripe:
        return DistributionOracle::stripe(dim, amplitude, stripe_level, pattern, axis);
    }
    throw std::invalid_argument("OracleSpec: unknown kind");
}

std::vector<int> default_l_grid(int n_half, int dim, int j_max) {
    std::vector<int> grid{1};
    long cells = 1;
    for (int l = 2; l <= (1 << std::min(j_max, 20)); l *= 2) {
        cells = 1;
        bool ok = true;
        for (int a = 0; a < dim; ++a) {
            cells *= l;
            if (cells > n_half) {
                ok = false;
                break;
            }
        }
        if (!ok) break;
        grid.push_back(l);
    }
    return grid;
}

namespace {

RateRow run_row(const RatesConfig& config, const DistributionOracle& oracle, int n, int trial) {
    const auto start = std::chrono::steady_clock::now();

    RateRow row;
    row.n = n;
    row.trial = trial;
    row.seed = Rng::derive(config.base_seed, static_cast<std::uint64_t>(n),
                           static_cast<std::uint64_t>(trial));

    const Dataset data = oracle.sample(n, Rng::derive(row.seed, 1));

    SetClassifier chosen;
    if (config.algo == Algorithm::kUniform) {
        SelectionReport report =
            select_uniform(data, default_l_grid(n / 2, oracle.dim(), config.j_max),
                           Rng::derive(row.seed, 2));
        row.m_star = report.m_star;
        chosen = std::move(report.chosen);
    } else {
        FitOptions opt;
        opt.j_max = config.j_max;
        opt.m_cap = config.m_cap;
        SelectionReport report =
            select_model(data, config.algo, {}, Rng::derive(row.seed, 2), opt);
        row.m_star = report.m_star;
        chosen = std::move(report.chosen);
    }

    if (config.algo == Algorithm::kDecorated && oracle.dim() > 1) {
        row.excess_risk =
            excess_risk_mc(oracle, chosen, config.mc_draws, Rng::derive(row.seed, 3)).value;
    } else {
        row.excess_risk = excess_risk_exact(oracle, chosen).value;
    }

    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            start)
                      .count();
    return row;
}

} // namespace

std::vector<RateRow> run_rates(const RatesConfig& config) {
    if (config.n_grid.empty()) throw std::invalid_argument("run_rates: empty n grid");
    for (std::size_t i = 1; i < config.n_grid.size(); ++i)
        if (config.n_grid[i] <= config.n_grid[i - 1])
            throw std::invalid_argument("run_rates: n grid must be strictly increasing");
    if (config.trials < 1) throw std::invalid_argument("run_rates: trials must be >= 1");

    const DistributionOracle oracle = config.oracle.make();

    struct Job {
        int n;
        int trial;
    };
    std::vector<Job> jobs;
    for (int n : config.n_grid)
        for (int t = 0; t < config.trials; ++t) jobs.push_back({n, t});

    std::vector<RateRow> rows(jobs.size());
    const int threads = std::max(1, config.threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i)
            rows[i] = run_row(config, oracle, jobs[i].n, jobs[i].trial);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= jobs.size()) return;
                rows[i] = run_row(config, oracle, jobs[i].n, jobs[i].trial);
            }
        };
        std::vector<std::thread> pool;
        for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rows;
}

double median_of(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

RatesSummary summarize_rates(const RatesConfig& config, const std::vector<RateRow>& rows) {
    RatesSummary summary;

    for (int n : config.n_grid) {
        std::vector<double> excess, wall;
        for (const auto& row : rows) {
            if (row.n != n) continue;
            excess.push_back(row.excess_risk);
            wall.push_back(row.wall_ms);
        }
        summary.median_excess.emplace_back(n, median_of(excess));
        summary.median_wall_ms.emplace_back(n, median_of(wall));
    }

    const DistributionOracle oracle = config.oracle.make();
    const double alpha = oracle.margin_alpha();
    const double beta = oracle.smoothness_beta();
    summary.theory_exponent =
        std::isinf(alpha) ? -1.0
                          : -((1.0 + alpha) * beta) / ((2.0 + alpha) * beta + oracle.dim());

    // Least-squares slope of log(median excess) against log n; zero medians
    // (exact recovery) carry no slope information and are left out.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (const auto& [n, med] : summary.median_excess) {
        if (!(med > 0.0)) continue;
        const double x = std::log(static_cast<double>(n));
        const double y = std::log(med);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++k;
    }
    if (k >= 2) {
        const double denom = k * sxx - sx * sx;
        if (denom > 0.0) {
            summary.slope = (k * sxy - sx * sy) / denom;
            summary.slope_valid = true;
        }
    }
    return summary;
}

void write_rates_csv(const std::string& path, const std::vector<RateRow>& rows,
                     bool include_timing) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "n,trial,seed,m_star,excess_risk";
    if (include_timing) out << ",wall_ms";
    out << "\n";
    for (const auto& row : rows) {
        out << row.n << "," << row.trial << "," << row.seed << "," << row.m_star << ","
            << format_double(row.excess_risk);
        if (include_timing) out << "," << format_double(row.wall_ms);
        out << "\n";
    }
}

} // namespace dyadtree
