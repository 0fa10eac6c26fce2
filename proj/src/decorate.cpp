#include "dyadtree/decorate.hpp"

#include <algorithm>
#include <stdexcept>

#include "dyadtree/errors.hpp"

namespace dyadtree {

namespace {

std::int32_t require_node(const OccupancyForest& forest, const DyadicCube& cube) {
    const std::int32_t id = forest.find(cube);
    if (id < 0) throw std::invalid_argument("cube not present in forest");
    return id;
}

// Plane through d points, or nullopt when they do not span a (d-1)-flat.
std::optional<Hyperplane> through_points(const OccupancyForest& f,
                                         std::span<const std::int32_t> ids) {
    const int d = f.dim();
    const auto& data = f.data();
    Hyperplane h;
    h.normal.assign(static_cast<std::size_t>(d), 0.0);
    if (d == 1) {
        h.normal[0] = 1.0;
        h.offset = data.point(ids[0])[0];
        return h;
    }
    if (d == 2) {
        const auto p = data.point(ids[0]);
        const auto q = data.point(ids[1]);
        h.normal[0] = p[1] - q[1];
        h.normal[1] = q[0] - p[0];
        h.offset = h.normal[0] * p[0] + h.normal[1] * p[1];
    } else { // d == 3
        const auto p = data.point(ids[0]);
        const auto q = data.point(ids[1]);
        const auto r = data.point(ids[2]);
        const double u[3] = {q[0] - p[0], q[1] - p[1], q[2] - p[2]};
        const double v[3] = {r[0] - p[0], r[1] - p[1], r[2] - p[2]};
        h.normal[0] = u[1] * v[2] - u[2] * v[1];
        h.normal[1] = u[2] * v[0] - u[0] * v[2];
        h.normal[2] = u[0] * v[1] - u[1] * v[0];
        h.offset = h.normal[0] * p[0] + h.normal[1] * p[1] + h.normal[2] * p[2];
    }
    if (zero_normal(h)) return std::nullopt;
    return h;
}

} // namespace

std::vector<Hyperplane> candidate_hyperplanes(const OccupancyForest& forest, std::int32_t node_id) {
    const int d = forest.dim();
    if (d > kMaxDecorationDim)
        throw UsageError("hyperplane decorations support dimension <= 3");
    const auto& node = forest.node(node_id);
    const auto& ids = node.sample_ids;
    const int n_q = static_cast<int>(ids.size());

    std::vector<Hyperplane> out;
    if (n_q >= d) {
        // d-subsets in lexicographic order of sample indices.
        std::vector<std::int32_t> pick(static_cast<std::size_t>(d));
        std::vector<int> pos(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) pos[static_cast<std::size_t>(i)] = i;
        while (true) {
            for (int i = 0; i < d; ++i)
                pick[static_cast<std::size_t>(i)] = ids[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)])];
            if (auto h = through_points(forest, pick)) out.push_back(std::move(*h));
            int i = d - 1;
            while (i >= 0 && pos[static_cast<std::size_t>(i)] == n_q - d + i) --i;
            if (i < 0) break;
            ++pos[static_cast<std::size_t>(i)];
            for (int k = i + 1; k < d; ++k)
                pos[static_cast<std::size_t>(k)] = pos[static_cast<std::size_t>(k - 1)] + 1;
        }
    }
    if (out.empty()) {
        // Axis-aligned fallback through each sample coordinate.
        for (std::int32_t sid : ids) {
            for (int a = 0; a < d; ++a) {
                Hyperplane h;
                h.normal.assign(static_cast<std::size_t>(d), 0.0);
                h.normal[static_cast<std::size_t>(a)] = 1.0;
                h.offset = forest.data().point(sid)[static_cast<std::size_t>(a)];
                out.push_back(std::move(h));
            }
        }
    }
    return out;
}

std::vector<Hyperplane> candidate_hyperplanes(const OccupancyForest& forest,
                                              const DyadicCube& cube) {
    return candidate_hyperplanes(forest, require_node(forest, cube));
}

DecorationResult best_hcell(const OccupancyForest& forest, std::int32_t node_id) {
    const auto& node = forest.node(node_id);
    const auto& data = forest.data();

    DecorationResult result;
    result.cube = node.cube;

    // Full cube first so it wins ties against cuts of equal value.
    std::int64_t best_val = node.label_sum;
    std::optional<HCell> best_cell = HCell{node.cube, std::nullopt, 0};

    const auto candidates = candidate_hyperplanes(forest, node_id);
    result.candidate_count = static_cast<int>(candidates.size());

    for (const auto& h : candidates) {
        // Both orientations of the plane realize all four sample partitions:
        // side 0 keeps boundary samples, so (h,0)/(h,1) give the weak-lower/
        // strict-upper halves and the flipped plane gives the other pair.
        const Hyperplane hf = flipped(h);
        std::int64_t below = 0, on = 0, above = 0;
        for (std::int32_t sid : node.sample_ids) {
            const auto p = data.point(sid);
            const int s = side_of(h, p);
            const int sf = side_of(hf, p);
            if (s == 0 && sf == 0) on += data.label(sid);
            else if (s == 0) below += data.label(sid);
            else above += data.label(sid);
        }
        const HCell cells[4] = {
            {node.cube, h, 0},
            {node.cube, h, 1},
            {node.cube, hf, 0},
            {node.cube, hf, 1},
        };
        const std::int64_t vals[4] = {below + on, above, above + on, below};
        for (int k = 0; k < 4; ++k) {
            if (vals[k] > best_val) {
                best_val = vals[k];
                best_cell = cells[k];
            }
        }
    }

    if (best_val > 0) {
        result.energy_numerator = best_val;
        result.best = std::move(best_cell);
    }
    return result;
}

DecorationResult best_hcell(const OccupancyForest& forest, const DyadicCube& cube) {
    return best_hcell(forest, require_node(forest, cube));
}

EnergyTable decorated_energy(const OccupancyForest& forest, int m_max) {
    if (forest.dim() > kMaxDecorationDim)
        throw UsageError("hyperplane decorations support dimension <= 3");
    std::vector<std::int64_t> leaf_values(forest.node_count(), 0);
    std::vector<std::optional<HCell>> decorations(forest.node_count());
    for (std::size_t id = 0; id < forest.node_count(); ++id) {
        const auto sid = static_cast<std::int32_t>(id);
        if (!forest.node(sid).occupied()) continue;
        DecorationResult r = best_hcell(forest, sid);
        leaf_values[id] = r.energy_numerator;
        decorations[id] = std::move(r.best);
    }
    return energy_table_from_leaf_values(forest, m_max, EnergyTable::Kind::kDecorated,
                                         std::move(leaf_values), std::move(decorations));
}

SetClassifier extract_decorated_classifier(const EnergyTable& table, const OccupancyForest& forest,
                                           int m) {
    if (table.kind() != EnergyTable::Kind::kDecorated)
        throw std::invalid_argument("extract_decorated_classifier: table is not decorated");
    TreeClassifier tc{extract_tree(table, m), {}};
    for (const auto& leaf : tc.tree.leaves()) {
        const std::int32_t id = forest.find(leaf);
        if (id < 0) continue;
        const auto& deco = table.decoration(id);
        if (deco) tc.positive.emplace(leaf, *deco);
    }
    SetClassifier out;
    out.algorithm = Algorithm::kDecorated;
    out.budget = m;
    out.form = std::move(tc);
    return out;
}

} // namespace dyadtree
