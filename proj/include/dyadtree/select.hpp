#pragma once

// Hold-out model selection: fit the whole family of budgeted classifiers on
// one half of the data with a single DP pass, then pick the budget whose
// classifier maximizes eta_bar on the other half.  Also the nonadaptive
// uniform-grid baseline.

#include <cstdint>
#include <optional>
#include <vector>

#include "dyadtree/classifier.hpp"
#include "dyadtree/dataset.hpp"
#include "dyadtree/forest.hpp"

namespace dyadtree {

struct SplitHalves {
    Dataset first;
    Dataset second;
    // Present when n was odd: the sample set aside after shuffling.
    std::optional<LabeledSample> dropped;
};

// Seeded uniform shuffle followed by an even split; deterministic given the
// seed.  Requires n >= 4; an odd trailing sample is dropped and reported.
SplitHalves split_halves(const Dataset& data, std::uint64_t seed);

struct FitOptions {
    int j_max = 16;
    StopRule stop = StopRule::kOneSample;
    // Optional cap on the default budget grid (which is 0..min(n/2,
    // saturation)).
    std::optional<int> m_cap;
};

struct SelectionReport {
    int m_star = 0;
    SetClassifier chosen;
    std::vector<int> m_grid;
    std::vector<std::int64_t> eta_second_numer; // per grid entry, over n_second
    std::vector<double> eta_second;
    int n_first = 0;
    int n_second = 0;
    bool sample_dropped = false;
};

// Fits on `first`, evaluates on `second`.  Algorithm must be kPlain or
// kDecorated; an empty m_grid selects the default 0..min(|first|/1,
// saturation) grid capped by options.  Ties pick the smallest budget.
SelectionReport select_over_halves(const Dataset& first, const Dataset& second, Algorithm algo,
                                   std::vector<int> m_grid, const FitOptions& opt = {});

// Splits with the seed, then runs select_over_halves.
SelectionReport select_model(const Dataset& data, Algorithm algo, std::vector<int> m_grid,
                             std::uint64_t seed, const FitOptions& opt = {});

// Uniform-grid empirical maximizer: the union of the l^d grid cells with
// strictly positive eta_bar on `data`.
SetClassifier uniform_baseline(const Dataset& data, int l, std::int64_t cell_cap = 1 << 22);

// Hold-out selection over a grid of uniform side counts (used by the CLI's
// uniform mode; the report's budgets are the candidate l values).
SelectionReport select_uniform(const Dataset& data, std::vector<int> l_grid, std::uint64_t seed);

} // namespace dyadtree
