#pragma once

// Bottom-up dynamic program over the occupancy forest.  For every occupied
// cube Q and budget j it computes the maximal energy
//     gamma(Q,j) = max over complete subtrees rooted at Q with at most j
//                  refinements of  sum over leaves of the leaf energy,
// where the plain leaf energy is max(0, eta_bar numerator).  Budgets are
// distributed over occupied children by max-plus convolution (splitting Q
// costs one unit, the children share j-1).  Energies are exact integer
// numerators over the sample count, so ties are ties.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dyadtree/classifier.hpp"
#include "dyadtree/forest.hpp"
#include "dyadtree/geometry.hpp"

namespace dyadtree {

class EnergyTable {
  public:
    enum class Kind { kPlain, kDecorated };

    struct NodeTable {
        int cap = 0;                     // budgets stored: 0..cap
        std::vector<std::int64_t> gamma; // size cap+1, numerators
        std::vector<std::uint8_t> took_split;
        std::vector<std::vector<std::int32_t>> alloc; // child budgets when split taken
        std::vector<std::int32_t> occupied_children;  // forest node ids, address order
    };

    Kind kind() const { return kind_; }
    int m_max() const { return m_max_; }
    std::int64_t denominator() const { return n_; }
    const OccupancyForest& forest() const { return *forest_; }

    // Budget beyond which the root energy is constant.
    int saturation() const { return forest_->internal_node_count(); }

    // Root energy numerator/value for a budget m <= m_max.
    std::int64_t energy_numerator(int m) const;
    double energy(int m) const {
        return static_cast<double>(energy_numerator(m)) / static_cast<double>(n_);
    }

    // Per-cube energy numerator; clamps j at the node's stored cap and
    // returns 0 for unoccupied or absent cubes.
    std::int64_t node_energy_numerator(const DyadicCube& cube, int j) const;

    bool has_table(std::int32_t id) const { return has_table_[static_cast<std::size_t>(id)] != 0; }
    const NodeTable& table(std::int32_t id) const { return tables_[static_cast<std::size_t>(id)]; }
    const std::optional<HCell>& decoration(std::int32_t id) const {
        return decorations_[static_cast<std::size_t>(id)];
    }

  private:
    const OccupancyForest* forest_ = nullptr;
    Kind kind_ = Kind::kPlain;
    int m_max_ = 0;
    std::int64_t n_ = 1;
    std::vector<NodeTable> tables_;
    std::vector<std::uint8_t> has_table_;
    std::vector<std::optional<HCell>> decorations_;

    friend EnergyTable energy_table_from_leaf_values(const OccupancyForest& forest, int m_max,
                                                     EnergyTable::Kind kind,
                                                     std::vector<std::int64_t> leaf_values,
                                                     std::vector<std::optional<HCell>> decorations);
};

// DP engine shared by the plain and decorated variants.  leaf_values[id]
// holds the (nonnegative) leaf energy numerator of each occupied node.
// The table referencing `forest` must not outlive it.
EnergyTable energy_table_from_leaf_values(const OccupancyForest& forest, int m_max,
                                          EnergyTable::Kind kind,
                                          std::vector<std::int64_t> leaf_values,
                                          std::vector<std::optional<HCell>> decorations);

// Plain leaf energies max(0, label sum).
EnergyTable compute_energy(const OccupancyForest& forest, int m_max);

// Optimal complete tree for budget m (<= m_max).  Deterministic: a split is
// taken only when it strictly improves the energy, and among maximizing
// child allocations the lexicographically smallest (children in address
// order) is chosen.
CompleteTree extract_tree(const EnergyTable& table, int m);

// Plain classifier: leaves of the optimal tree with strictly positive
// eta_bar.
SetClassifier extract_classifier(const EnergyTable& table, int m);

// Exhaustive oracle over enumerate_subtrees; test use only.
std::int64_t brute_force_energy_numerator(const OccupancyForest& forest, int m,
                                          std::uint64_t limit = 1000000);
std::int64_t brute_force_energy_numerator(const OccupancyForest& forest, int m,
                                          std::span<const std::int64_t> leaf_values,
                                          std::uint64_t limit = 1000000);
double brute_force_energy(const OccupancyForest& forest, int m, std::uint64_t limit = 1000000);

} // namespace dyadtree
