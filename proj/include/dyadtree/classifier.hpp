#pragma once

// Set classifiers: regions of [0,1]^d predicting +1 inside and -1 outside.
// Tree form covers both plain trees (positive leaves) and decorated trees
// (per-leaf half-space cells); the uniform-grid form backs the nonadaptive
// baseline.

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "dyadtree/forest.hpp"
#include "dyadtree/geometry.hpp"

namespace dyadtree {

struct TreeClassifier {
    CompleteTree tree;
    // Positive part per leaf, keyed by leaf cube.  A missing entry means the
    // leaf contributes nothing; a cell without cut is the whole leaf.
    std::unordered_map<DyadicCube, HCell, CubeHash> positive;

    int dim() const { return tree.dim(); }
    bool member(std::span<const double> p) const;
};

struct UniformGridClassifier {
    int dimension = 1;
    int cells_per_axis = 1; // l
    // Flat over index vectors in lexicographic order (axis 0 slowest).
    std::vector<std::uint8_t> positive;

    int dim() const { return dimension; }
    std::size_t flat_index(std::span<const double> p) const;
    bool member(std::span<const double> p) const;
};

enum class Algorithm { kPlain, kDecorated, kUniform };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct SetClassifier {
    Algorithm algorithm = Algorithm::kPlain;
    int budget = 0; // split budget m (grid side l for the uniform form)
    std::variant<TreeClassifier, UniformGridClassifier> form;

    int dim() const;
    bool member(std::span<const double> p) const;
    int predict(std::span<const double> p) const { return member(p) ? 1 : -1; }

    const TreeClassifier* tree_form() const { return std::get_if<TreeClassifier>(&form); }
    const UniformGridClassifier* grid_form() const {
        return std::get_if<UniformGridClassifier>(&form);
    }
};

SetClassifier empty_classifier(int dim);

// Re-expresses a power-of-two uniform grid as a complete tree of uniform
// depth (used when serializing uniform models).
SetClassifier grid_as_tree(const UniformGridClassifier& grid);

} // namespace dyadtree
