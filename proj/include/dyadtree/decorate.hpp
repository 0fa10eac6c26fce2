#pragma once

// Per-leaf half-space decorations: for each occupied cube, search the best
// H-cell (cube intersected with one side of a hyperplane) by empirical
// eta_bar, then run the same budgeted DP with those leaf energies.  The
// hyperplane search is restricted to planes through d-subsets of the cube's
// samples; each plane is considered in both orientations so that every
// strict/weak half-space partition of the samples is realized exactly.

#include <cstdint>
#include <optional>
#include <vector>

#include "dyadtree/energy_dp.hpp"
#include "dyadtree/forest.hpp"
#include "dyadtree/geometry.hpp"

namespace dyadtree {

// Hyperplane decorations are supported in low dimension only; the search
// cost per cube grows like n_Q^(d+1).
inline constexpr int kMaxDecorationDim = 3;

struct DecorationResult {
    DyadicCube cube;
    std::int64_t energy_numerator = 0; // best clamped eta_bar numerator, >= 0
    std::optional<HCell> best;         // absent: empty decoration (value 0)
    int candidate_count = 0;           // hyperplanes considered (before orientation doubling)
};

// Candidate cut planes for a cube: one through each affinely spanning
// d-subset of the cube's samples, in sample-index order.  When fewer than d
// samples exist or every subset is degenerate, axis-aligned planes through
// each sample coordinate are substituted.
std::vector<Hyperplane> candidate_hyperplanes(const OccupancyForest& forest, std::int32_t node_id);
std::vector<Hyperplane> candidate_hyperplanes(const OccupancyForest& forest, const DyadicCube& cube);

// Best cell among {empty, full cube} and both sides of every candidate in
// both orientations.  Ties: earliest candidate wins and the full cube beats
// any cut of equal value; `best` is absent unless the value is positive.
DecorationResult best_hcell(const OccupancyForest& forest, std::int32_t node_id);
DecorationResult best_hcell(const OccupancyForest& forest, const DyadicCube& cube);

// Same DP as compute_energy with best_hcell leaf energies.
EnergyTable decorated_energy(const OccupancyForest& forest, int m_max);

// Decorated classifier: each leaf of the optimal tree contributes its best
// H-cell when that cell's energy is positive, nothing otherwise.
SetClassifier extract_decorated_classifier(const EnergyTable& table, const OccupancyForest& forest,
                                           int m);

} // namespace dyadtree
