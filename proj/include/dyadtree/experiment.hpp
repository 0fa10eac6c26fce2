#pragma once

// Convergence-rate experiments: for each (n, trial) sample a dataset, fit
// with hold-out selection, evaluate the exact excess risk, and summarize the
// log-log slope of the median excess risk against the theoretical exponent.
// Every row's randomness derives from (base seed, n, trial), so any row can
// be reproduced in isolation and results do not depend on thread count.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dyadtree/classifier.hpp"
#include "dyadtree/oracle.hpp"
#include "dyadtree/select.hpp"

namespace dyadtree {

struct OracleSpec {
    EtaKind kind = EtaKind::kSignedPower;
    int dim = 1;
    int axis = 0;
    double delta = 1.0;
    double amplitude = 1.0;
    int stripe_level = 1;
    std::vector<int> pattern = {-1, 1};

    DistributionOracle make() const;
};

struct RatesConfig {
    OracleSpec oracle;
    Algorithm algo = Algorithm::kPlain;
    std::vector<int> n_grid; // strictly increasing
    int trials = 20;
    std::uint64_t base_seed = 1;
    int j_max = 16;
    std::optional<int> m_cap;
    int threads = 1;
    std::int64_t mc_draws = 200000; // fallback when no exact risk exists
};

struct RateRow {
    int n = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    int m_star = 0;
    double excess_risk = 0.0;
    double wall_ms = 0.0;
};

struct RatesSummary {
    std::vector<std::pair<int, double>> median_excess;
    std::vector<std::pair<int, double>> median_wall_ms;
    double slope = 0.0;
    bool slope_valid = false;
    double theory_exponent = 0.0;
};

// Seed scheme: row = derive(base, n, trial); sampling uses derive(row, 1),
// the hold-out shuffle derive(row, 2), Monte Carlo evaluation derive(row, 3).
std::vector<RateRow> run_rates(const RatesConfig& config);

RatesSummary summarize_rates(const RatesConfig& config, const std::vector<RateRow>& rows);

// Deterministic CSV: n,trial,seed,m_star,excess_risk[,wall_ms].  Timing is
// opt-in because it varies run to run.
void write_rates_csv(const std::string& path, const std::vector<RateRow>& rows,
                     bool include_timing);

double median_of(std::vector<double> values);

// Default grid of uniform side counts for the grid baseline: powers of two
// with l^d not exceeding half the sample count.
std::vector<int> default_l_grid(int n_half, int dim, int j_max);

} // namespace dyadtree
