#include "dyadtree/classifier.hpp"

#include <cmath>
#include <stdexcept>

#include "dyadtree/errors.hpp"

namespace dyadtree {

bool TreeClassifier::member(std::span<const double> p) const {
    const DyadicCube leaf = tree.leaf_containing(p);
    auto it = positive.find(leaf);
    if (it == positive.end()) return false;
    const HCell& cell = it->second;
    if (!cell.cut) return true;
    return side_of(*cell.cut, p) == cell.side;
}

std::size_t UniformGridClassifier::flat_index(std::span<const double> p) const {
    if (static_cast<int>(p.size()) != dimension)
        throw std::invalid_argument("grid member: dimension mismatch");
    std::size_t flat = 0;
    for (int a = 0; a < dimension; ++a) {
        double v = std::floor(p[static_cast<std::size_t>(a)] * cells_per_axis);
        if (v < 0.0) v = 0.0;
        long k = static_cast<long>(v);
        if (k >= cells_per_axis) k = cells_per_axis - 1; // top face closed
        flat = flat * static_cast<std::size_t>(cells_per_axis) + static_cast<std::size_t>(k);
    }
    return flat;
}

bool UniformGridClassifier::member(std::span<const double> p) const {
    return positive[flat_index(p)] != 0;
}

std::string algorithm_name(Algorithm a) {
    switch (a) {
    case Algorithm::kPlain: return "plain";
    case Algorithm::kDecorated: return "decorated";
    case Algorithm::kUniform: return "uniform";
    }
    return "plain";
}

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "plain") return Algorithm::kPlain;
    if (name == "decorated") return Algorithm::kDecorated;
    if (name == "uniform") return Algorithm::kUniform;
    throw UsageError("unknown algorithm: " + name);
}

int SetClassifier::dim() const {
    if (const auto* t = tree_form()) return t->dim();
    return grid_form()->dim();
}

bool SetClassifier::member(std::span<const double> p) const {
    if (const auto* t = tree_form()) return t->member(p);
    return grid_form()->member(p);
}

SetClassifier empty_classifier(int dim) {
    SetClassifier c;
    c.algorithm = Algorithm::kPlain;
    c.budget = 0;
    c.form = TreeClassifier{CompleteTree(dim), {}};
    return c;
}

SetClassifier grid_as_tree(const UniformGridClassifier& grid) {
    const int l = grid.cells_per_axis;
    if (l < 1 || (l & (l - 1)) != 0)
        throw std::invalid_argument("grid_as_tree: cells_per_axis must be a power of two");
    int depth = 0;
    while ((1 << depth) < l) ++depth;

    TreeClassifier tc{CompleteTree(grid.dimension), {}};
    for (int lvl = 0; lvl < depth; ++lvl)
        for (const auto& leaf : tc.tree.leaves()) tc.tree.refine(leaf);

    for (const auto& leaf : tc.tree.leaves()) {
        std::size_t flat = 0;
        for (int a = 0; a < grid.dimension; ++a)
            flat = flat * static_cast<std::size_t>(l) + leaf.index[static_cast<std::size_t>(a)];
        if (grid.positive[flat]) tc.positive.emplace(leaf, HCell{leaf, std::nullopt, 0});
    }

    SetClassifier out;
    out.algorithm = Algorithm::kUniform;
    out.budget = l;
    out.form = std::move(tc);
    return out;
}

} // namespace dyadtree
