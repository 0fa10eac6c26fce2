#include "dyadtree/energy_dp.hpp"

#include <algorithm>
#include <stdexcept>

namespace dyadtree {

namespace {

constexpr std::int64_t kInfeasible = -1; // valid energies are >= 0

// Internal-node counts of each node's subtree: the budget past which that
// subtree's energy saturates.
std::vector<int> subtree_internal_counts(const OccupancyForest& f) {
    std::vector<int> sat(f.node_count(), 0);
    const unsigned fanout = 1u << f.dim();
    for (int lvl = f.max_level(); lvl >= 0; --lvl) {
        for (std::int32_t id : f.level_nodes(lvl)) {
            const auto& n = f.node(id);
            if (!n.refined()) continue;
            int s = 1;
            for (unsigned b = 0; b < fanout; ++b) s += sat[static_cast<std::size_t>(f.child_id(id, b))];
            sat[static_cast<std::size_t>(id)] = s;
        }
    }
    return sat;
}

} // namespace

EnergyTable energy_table_from_leaf_values(const OccupancyForest& forest, int m_max,
                                          EnergyTable::Kind kind,
                                          std::vector<std::int64_t> leaf_values,
                                          std::vector<std::optional<HCell>> decorations) {
    if (m_max < 0) throw std::invalid_argument("energy table: m_max must be >= 0");
    if (leaf_values.size() != forest.node_count())
        throw std::invalid_argument("energy table: leaf value vector size mismatch");

    EnergyTable t;
    t.forest_ = &forest;
    t.kind_ = kind;
    t.m_max_ = m_max;
    t.n_ = forest.sample_count();
    t.tables_.resize(forest.node_count());
    t.has_table_.assign(forest.node_count(), 0);
    if (decorations.empty()) decorations.resize(forest.node_count());
    t.decorations_ = std::move(decorations);

    const std::vector<int> sat = subtree_internal_counts(forest);
    const unsigned fanout = 1u << forest.dim();

    for (int lvl = forest.max_level(); lvl >= 0; --lvl) {
        for (std::int32_t id : forest.level_nodes(lvl)) {
            const auto& n = forest.node(id);
            if (!n.occupied()) continue;

            auto& nt = t.tables_[static_cast<std::size_t>(id)];
            t.has_table_[static_cast<std::size_t>(id)] = 1;
            nt.cap = std::min(sat[static_cast<std::size_t>(id)], std::max(0, m_max - lvl));
            nt.gamma.assign(static_cast<std::size_t>(nt.cap) + 1, 0);
            nt.took_split.assign(static_cast<std::size_t>(nt.cap) + 1, 0);
            nt.alloc.assign(static_cast<std::size_t>(nt.cap) + 1, {});

            const std::int64_t base = leaf_values[static_cast<std::size_t>(id)];
            if (base < 0) throw std::invalid_argument("energy table: negative leaf value");
            nt.gamma[0] = base;
            if (nt.cap == 0) continue;

            for (unsigned b = 0; b < fanout; ++b) {
                const std::int32_t cid = forest.child_id(id, b);
                if (forest.node(cid).occupied()) nt.occupied_children.push_back(cid);
            }
            const int c = static_cast<int>(nt.occupied_children.size());
            const int t_max = nt.cap - 1; // children share j-1 <= cap-1

            // suffix[k][t]: best total energy of children k.. with exactly t
            // budget; the last child absorbs any surplus (its energy
            // saturates), so every t is feasible once a child remains.
            auto child_gamma = [&](int k, int s) {
                const auto& ct = t.tables_[static_cast<std::size_t>(nt.occupied_children[static_cast<std::size_t>(k)])];
                return ct.gamma[static_cast<std::size_t>(std::min(s, ct.cap))];
            };
            std::vector<std::vector<std::int64_t>> suffix(
                static_cast<std::size_t>(c) + 1,
                std::vector<std::int64_t>(static_cast<std::size_t>(t_max) + 1, kInfeasible));
            suffix[static_cast<std::size_t>(c)][0] = 0;
            for (int k = c - 1; k >= 0; --k) {
                for (int tt = 0; tt <= t_max; ++tt) {
                    std::int64_t best = kInfeasible;
                    for (int s = 0; s <= tt; ++s) {
                        const std::int64_t rest = suffix[static_cast<std::size_t>(k) + 1][static_cast<std::size_t>(tt - s)];
                        if (rest == kInfeasible) continue;
                        best = std::max(best, child_gamma(k, s) + rest);
                    }
                    suffix[static_cast<std::size_t>(k)][static_cast<std::size_t>(tt)] = best;
                }
            }

            for (int j = 1; j <= nt.cap; ++j) {
                const std::int64_t split_val = suffix[0][static_cast<std::size_t>(j - 1)];
                if (split_val > base) {
                    nt.gamma[static_cast<std::size_t>(j)] = split_val;
                    nt.took_split[static_cast<std::size_t>(j)] = 1;
                    // Lexicographically smallest maximizing allocation.
                    std::vector<std::int32_t> alloc(static_cast<std::size_t>(c), 0);
                    int rem = j - 1;
                    for (int k = 0; k < c; ++k) {
                        for (int s = 0; s <= rem; ++s) {
                            const std::int64_t rest = suffix[static_cast<std::size_t>(k) + 1][static_cast<std::size_t>(rem - s)];
                            if (rest == kInfeasible) continue;
                            if (child_gamma(k, s) + rest ==
                                suffix[static_cast<std::size_t>(k)][static_cast<std::size_t>(rem)]) {
                                alloc[static_cast<std::size_t>(k)] = s;
                                rem -= s;
                                break;
                            }
                        }
                    }
                    nt.alloc[static_cast<std::size_t>(j)] = std::move(alloc);
                } else {
                    nt.gamma[static_cast<std::size_t>(j)] = base;
                }
            }
        }
    }
    return t;
}

EnergyTable compute_energy(const OccupancyForest& forest, int m_max) {
    std::vector<std::int64_t> leaf_values(forest.node_count(), 0);
    for (std::size_t id = 0; id < forest.node_count(); ++id)
        leaf_values[id] = std::max<std::int64_t>(0, forest.node(static_cast<std::int32_t>(id)).label_sum);
    return energy_table_from_leaf_values(forest, m_max, EnergyTable::Kind::kPlain,
                                         std::move(leaf_values), {});
}

std::int64_t EnergyTable::energy_numerator(int m) const {
    if (m < 0 || m > m_max_) throw std::invalid_argument("energy_numerator: m out of range");
    const NodeTable& root = tables_[static_cast<std::size_t>(forest_->root_id())];
    return root.gamma[static_cast<std::size_t>(std::min(m, root.cap))];
}

std::int64_t EnergyTable::node_energy_numerator(const DyadicCube& cube, int j) const {
    if (j < 0) throw std::invalid_argument("node_energy_numerator: j must be >= 0");
    const std::int32_t id = forest_->find(cube);
    if (id < 0 || !has_table(id)) return 0;
    const NodeTable& nt = tables_[static_cast<std::size_t>(id)];
    return nt.gamma[static_cast<std::size_t>(std::min(j, nt.cap))];
}

namespace {

void extract_into(const EnergyTable& t, std::int32_t id, int budget, CompleteTree& out) {
    const auto& nt = t.table(id);
    const int j = std::min(budget, nt.cap);
    if (j == 0 || !nt.took_split[static_cast<std::size_t>(j)]) return;
    out.refine(t.forest().node(id).cube);
    const auto& alloc = nt.alloc[static_cast<std::size_t>(j)];
    for (std::size_t k = 0; k < nt.occupied_children.size(); ++k)
        extract_into(t, nt.occupied_children[k], alloc[k], out);
}

} // namespace

CompleteTree extract_tree(const EnergyTable& table, int m) {
    if (m < 0 || m > table.m_max()) throw std::invalid_argument("extract_tree: m out of range");
    CompleteTree out(table.forest().dim());
    extract_into(table, table.forest().root_id(), m, out);
    return out;
}

SetClassifier extract_classifier(const EnergyTable& table, int m) {
    if (table.kind() != EnergyTable::Kind::kPlain)
        throw std::invalid_argument("extract_classifier: table is not plain");
    TreeClassifier tc{extract_tree(table, m), {}};
    const OccupancyForest& f = table.forest();
    for (const auto& leaf : tc.tree.leaves()) {
        const std::int32_t id = f.find(leaf);
        if (id >= 0 && f.node(id).label_sum > 0)
            tc.positive.emplace(leaf, HCell{leaf, std::nullopt, 0});
    }
    SetClassifier out;
    out.algorithm = Algorithm::kPlain;
    out.budget = m;
    out.form = std::move(tc);
    return out;
}

std::int64_t brute_force_energy_numerator(const OccupancyForest& forest, int m,
                                          std::span<const std::int64_t> leaf_values,
                                          std::uint64_t limit) {
    if (leaf_values.size() != forest.node_count())
        throw std::invalid_argument("brute force: leaf value vector size mismatch");
    std::int64_t best = 0;
    for (const auto& tree : enumerate_subtrees(forest, m, limit)) {
        std::int64_t total = 0;
        for (const auto& leaf : tree.leaves()) {
            const std::int32_t id = forest.find(leaf);
            if (id >= 0) total += leaf_values[static_cast<std::size_t>(id)];
        }
        best = std::max(best, total);
    }
    return best;
}

std::int64_t brute_force_energy_numerator(const OccupancyForest& forest, int m,
                                          std::uint64_t limit) {
    std::vector<std::int64_t> leaf_values(forest.node_count(), 0);
    for (std::size_t id = 0; id < forest.node_count(); ++id)
        leaf_values[id] = std::max<std::int64_t>(0, forest.node(static_cast<std::int32_t>(id)).label_sum);
    return brute_force_energy_numerator(forest, m, leaf_values, limit);
}

double brute_force_energy(const OccupancyForest& forest, int m, std::uint64_t limit) {
    return static_cast<double>(brute_force_energy_numerator(forest, m, limit)) /
           static_cast<double>(forest.sample_count());
}

} // namespace dyadtree
