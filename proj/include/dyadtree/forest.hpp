#pragma once

// Occupancy forest built from samples: every occupied cube is refined (per a
// stopping rule) down to a depth cap, and siblings are added so the whole
// structure is a complete tree whose leaves partition [0,1]^d.  Per-cube
// sample lists and label sums are cached for the energy computations.

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dyadtree/dataset.hpp"
#include "dyadtree/geometry.hpp"

namespace dyadtree {

// A set of cubes closed under parent and sibling completion.  Leaves (cubes
// with no child present) partition the domain.
class CompleteTree {
  public:
    CompleteTree() : CompleteTree(1) {}
    explicit CompleteTree(int dim);

    int dim() const { return dim_; }
    std::size_t node_count() const { return nodes_.size(); }

    bool contains(const DyadicCube& c) const { return nodes_.count(c) > 0; }
    bool has_children(const DyadicCube& c) const { return nodes_.count(child(c, 0)) > 0; }
    bool is_leaf(const DyadicCube& c) const { return contains(c) && !has_children(c); }

    // Adds all 2^d children of an existing leaf.
    void refine(const DyadicCube& leaf);

    // All leaves in address order.
    std::vector<DyadicCube> leaves() const;

    // Number of refined (internal) cubes m; a complete tree has
    // (2^d - 1) m + 1 leaves.
    int refinement_count() const;

    int max_level() const;

    DyadicCube leaf_containing(std::span<const double> p) const;

    // Builds from an explicit cube set and validates completeness.
    static CompleteTree from_cubes(int dim, const std::vector<DyadicCube>& cubes);

    // Root present, every non-root cube has its parent and all siblings.
    bool is_complete() const;

    const std::unordered_set<DyadicCube, CubeHash>& cubes() const { return nodes_; }

  private:
    int dim_;
    std::unordered_set<DyadicCube, CubeHash> nodes_;
};

enum class StopRule {
    kOneSample, // do not refine cubes holding <= 1 sample
    kOccupied,  // refine every occupied cube until the depth cap
};

struct BuildOptions {
    int j_max = 16;
    StopRule stop = StopRule::kOneSample;
};

class OccupancyForest {
  public:
    struct Node {
        DyadicCube cube;
        std::int64_t count = 0;     // samples in the cube
        std::int64_t label_sum = 0; // sum of their labels
        std::vector<std::int32_t> sample_ids;
        std::int32_t parent = -1;
        std::int32_t first_child = -1; // 2^d children stored contiguously

        bool occupied() const { return count > 0; }
        bool refined() const { return first_child >= 0; }
    };

    static OccupancyForest build(const Dataset& data, const BuildOptions& opt = {});

    int dim() const { return data_.dim; }
    int sample_count() const { return data_.size(); }
    const Dataset& data() const { return data_; }
    const BuildOptions& options() const { return options_; }

    std::int32_t root_id() const { return 0; }
    std::size_t node_count() const { return nodes_.size(); }
    const Node& node(std::int32_t id) const { return nodes_[static_cast<std::size_t>(id)]; }

    // Node id for a cube address, or -1 when absent.
    std::int32_t find(const DyadicCube& c) const;

    // Child node id for a given child ordinal (0..2^d-1); -1 if unrefined.
    std::int32_t child_id(std::int32_t id, unsigned bits) const;

    int max_level() const { return static_cast<int>(levels_.size()) - 1; }
    const std::vector<std::int32_t>& level_nodes(int level) const {
        return levels_[static_cast<std::size_t>(level)];
    }

    // Total number of refined cubes (the saturation budget: energies are
    // constant in m beyond this).
    int internal_node_count() const { return internal_count_; }

    // The full completed tree as a CompleteTree value.
    CompleteTree full_tree() const;

  private:
    Dataset data_;
    BuildOptions options_;
    std::vector<Node> nodes_;
    std::vector<std::vector<std::int32_t>> levels_;
    std::unordered_map<DyadicCube, std::int32_t, CubeHash> by_cube_;
    int internal_count_ = 0;
};

// All complete subtrees rooted at the domain, contained in the forest's tree
// and using at most m refinements.  Guarded: throws std::invalid_argument
// when the exact predicted count exceeds `limit`.
std::vector<CompleteTree> enumerate_subtrees(const OccupancyForest& forest, int m,
                                             std::uint64_t limit = 1000000);

// Exact number of such subtrees with exactly m refinements (saturating at
// 2^62 to keep the guard cheap).
std::uint64_t count_subtrees_exact(const OccupancyForest& forest, int m);

} // namespace dyadtree
