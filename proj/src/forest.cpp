#include "dyadtree/forest.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>

namespace dyadtree {

CompleteTree::CompleteTree(int dim) : dim_(dim) { nodes_.insert(root_cube(dim)); }

void CompleteTree::refine(const DyadicCube& leaf) {
    if (!contains(leaf)) throw std::invalid_argument("refine: cube not in tree");
    if (has_children(leaf)) throw std::invalid_argument("refine: cube already refined");
    for (auto& c : children(leaf)) nodes_.insert(std::move(c));
}

std::vector<DyadicCube> CompleteTree::leaves() const {
    std::vector<DyadicCube> out;
    for (const auto& c : nodes_)
        if (!has_children(c)) out.push_back(c);
    std::sort(out.begin(), out.end(), address_less);
    return out;
}

int CompleteTree::refinement_count() const {
    const std::size_t per_split = 1u << dim_;
    const std::size_t extra = nodes_.size() - 1;
    if (extra % per_split != 0)
        throw std::logic_error("refinement_count: node count inconsistent with completeness");
    return static_cast<int>(extra / per_split);
}

int CompleteTree::max_level() const {
    int lvl = 0;
    for (const auto& c : nodes_) lvl = std::max(lvl, c.level);
    return lvl;
}

DyadicCube CompleteTree::leaf_containing(std::span<const double> p) const {
    if (static_cast<int>(p.size()) != dim_)
        throw std::invalid_argument("leaf_containing: dimension mismatch");
    DyadicCube cur = root_cube(dim_);
    while (has_children(cur)) cur = child(cur, child_bits_toward(cur, p));
    return cur;
}

CompleteTree CompleteTree::from_cubes(int dim, const std::vector<DyadicCube>& cubes) {
    CompleteTree t(dim);
    for (const auto& c : cubes) {
        if (c.dim() != dim) throw std::invalid_argument("from_cubes: mixed dimensions");
        t.nodes_.insert(c);
    }
    if (!t.is_complete()) throw std::invalid_argument("from_cubes: cube set is not a complete tree");
    return t;
}

bool CompleteTree::is_complete() const {
    if (!contains(root_cube(dim_))) return false;
    for (const auto& c : nodes_) {
        if (c.level == 0) continue;
        const DyadicCube par = parent(c);
        if (!contains(par)) return false;
        const unsigned n = 1u << dim_;
        for (unsigned bits = 0; bits < n; ++bits)
            if (!contains(child(par, bits))) return false;
    }
    return true;
}

OccupancyForest OccupancyForest::build(const Dataset& data, const BuildOptions& opt) {
    validate(data);
    if (opt.j_max < 0 || opt.j_max > kMaxCubeLevel)
        throw std::invalid_argument("build: j_max out of range");

    OccupancyForest f;
    f.data_ = data;
    f.options_ = opt;

    Node root;
    root.cube = root_cube(data.dim);
    root.count = data.size();
    root.sample_ids.resize(static_cast<std::size_t>(data.size()));
    for (int i = 0; i < data.size(); ++i) {
        root.sample_ids[static_cast<std::size_t>(i)] = i;
        root.label_sum += data.label(i);
    }
    f.nodes_.push_back(std::move(root));
    f.by_cube_.emplace(f.nodes_[0].cube, 0);
    f.levels_.push_back({0});

    const std::int64_t min_count = opt.stop == StopRule::kOneSample ? 2 : 1;
    const unsigned fanout = 1u << data.dim;

    // Breadth-first refinement keeps node ids in (level, creation) order and
    // children of each node contiguous in lexicographic order.
    std::size_t head = 0;
    while (head < f.nodes_.size()) {
        const std::int32_t id = static_cast<std::int32_t>(head++);
        if (f.nodes_[static_cast<std::size_t>(id)].cube.level >= opt.j_max) continue;
        if (f.nodes_[static_cast<std::size_t>(id)].count < min_count) continue;

        const std::int32_t first = static_cast<std::int32_t>(f.nodes_.size());
        f.nodes_[static_cast<std::size_t>(id)].first_child = first;
        ++f.internal_count_;

        const DyadicCube parent_cube = f.nodes_[static_cast<std::size_t>(id)].cube;
        const int child_level = parent_cube.level + 1;
        if (static_cast<int>(f.levels_.size()) <= child_level) f.levels_.emplace_back();

        for (unsigned bits = 0; bits < fanout; ++bits) {
            Node n;
            n.cube = child(parent_cube, bits);
            n.parent = id;
            f.by_cube_.emplace(n.cube, static_cast<std::int32_t>(f.nodes_.size()));
            f.levels_[static_cast<std::size_t>(child_level)].push_back(
                static_cast<std::int32_t>(f.nodes_.size()));
            f.nodes_.push_back(std::move(n));
        }
        // Distribute samples in index order so per-cube lists stay ascending.
        for (std::int32_t sid : f.nodes_[static_cast<std::size_t>(id)].sample_ids) {
            const unsigned bits = child_bits_toward(parent_cube, data.point(sid));
            Node& ch = f.nodes_[static_cast<std::size_t>(first + static_cast<std::int32_t>(bits))];
            ch.sample_ids.push_back(sid);
            ch.count += 1;
            ch.label_sum += data.label(sid);
        }
    }
    return f;
}

std::int32_t OccupancyForest::find(const DyadicCube& c) const {
    auto it = by_cube_.find(c);
    return it == by_cube_.end() ? -1 : it->second;
}

std::int32_t OccupancyForest::child_id(std::int32_t id, unsigned bits) const {
    const Node& n = node(id);
    if (!n.refined()) return -1;
    return n.first_child + static_cast<std::int32_t>(bits);
}

CompleteTree OccupancyForest::full_tree() const {
    std::vector<DyadicCube> cubes;
    cubes.reserve(nodes_.size());
    for (const auto& n : nodes_) cubes.push_back(n.cube);
    return CompleteTree::from_cubes(dim(), cubes);
}

namespace {

constexpr std::uint64_t kCountCap = 1ull << 62;

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    return (a > kCountCap - b) ? kCountCap : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > kCountCap / b) return kCountCap;
    return a * b;
}

// counts[id][r] = number of complete subtrees of the forest rooted at node
// id with exactly r refinements.
struct SubtreeCounter {
    const OccupancyForest& f;
    int m;
    std::vector<std::vector<std::uint64_t>> memo;

    SubtreeCounter(const OccupancyForest& forest, int budget)
        : f(forest), m(budget), memo(forest.node_count()) {}

    const std::vector<std::uint64_t>& counts(std::int32_t id) {
        auto& row = memo[static_cast<std::size_t>(id)];
        if (!row.empty()) return row;
        row.assign(static_cast<std::size_t>(m) + 1, 0);
        row[0] = 1;
        const auto& n = f.node(id);
        if (n.refined() && m >= 1) {
            // Convolve children counts over budgets summing to r-1.
            std::vector<std::uint64_t> acc(static_cast<std::size_t>(m), 0);
            acc[0] = 1;
            const unsigned fanout = 1u << f.dim();
            for (unsigned bits = 0; bits < fanout; ++bits) {
                const std::int32_t cid = f.child_id(id, bits);
                const auto& child_counts = counts(cid);
                std::vector<std::uint64_t> next(acc.size(), 0);
                for (std::size_t t = 0; t < acc.size(); ++t) {
                    if (acc[t] == 0) continue;
                    for (std::size_t s = 0; t + s < acc.size(); ++s) {
                        if (child_counts[s] == 0) continue;
                        next[t + s] = sat_add(next[t + s], sat_mul(acc[t], child_counts[s]));
                    }
                }
                acc.swap(next);
            }
            for (int r = 1; r <= m; ++r)
                row[static_cast<std::size_t>(r)] = acc[static_cast<std::size_t>(r - 1)];
        }
        return row;
    }
};

// All subtrees rooted at `id` with exactly r refinements, as cube lists.
void enumerate_exact(const OccupancyForest& f, std::int32_t id, int r,
                     std::vector<std::vector<DyadicCube>>& out) {
    const auto& n = f.node(id);
    if (r == 0) {
        out.push_back({n.cube});
        return;
    }
    if (!n.refined()) return;

    const unsigned fanout = 1u << f.dim();

    // Compositions of r-1 over the children, depth-first in child order.
    std::vector<int> budget(fanout, 0);
    std::function<void(unsigned, int)> assign = [&](unsigned k, int left) {
        if (k == fanout) {
            if (left != 0) return;
            // Cartesian product of per-child enumerations.
            std::vector<std::vector<std::vector<DyadicCube>>> parts(fanout);
            for (unsigned b = 0; b < fanout; ++b) {
                enumerate_exact(f, f.child_id(id, b), budget[b], parts[b]);
                if (parts[b].empty()) return;
            }
            std::vector<std::size_t> pick(fanout, 0);
            while (true) {
                std::vector<DyadicCube> tree{n.cube};
                for (unsigned b = 0; b < fanout; ++b)
                    for (const auto& c : parts[b][pick[b]]) tree.push_back(c);
                out.push_back(std::move(tree));
                unsigned b = 0;
                while (b < fanout) {
                    if (++pick[b] < parts[b].size()) break;
                    pick[b] = 0;
                    ++b;
                }
                if (b == fanout) break;
            }
            return;
        }
        for (int give = 0; give <= left; ++give) {
            budget[k] = give;
            assign(k + 1, left - give);
        }
        budget[k] = 0;
    };
    assign(0, r - 1);
}

} // namespace

std::uint64_t count_subtrees_exact(const OccupancyForest& forest, int m) {
    if (m < 0) throw std::invalid_argument("count_subtrees_exact: m must be >= 0");
    SubtreeCounter counter(forest, m);
    return counter.counts(forest.root_id())[static_cast<std::size_t>(m)];
}

std::vector<CompleteTree> enumerate_subtrees(const OccupancyForest& forest, int m,
                                             std::uint64_t limit) {
    if (m < 0) throw std::invalid_argument("enumerate_subtrees: m must be >= 0");
    SubtreeCounter counter(forest, m);
    std::uint64_t predicted = 0;
    for (int r = 0; r <= m; ++r)
        predicted = sat_add(predicted, counter.counts(forest.root_id())[static_cast<std::size_t>(r)]);
    if (predicted > limit)
        throw std::invalid_argument("enumerate_subtrees: predicted count exceeds limit");

    std::vector<CompleteTree> out;
    out.reserve(static_cast<std::size_t>(predicted));
    for (int r = 0; r <= m; ++r) {
        std::vector<std::vector<DyadicCube>> trees;
        enumerate_exact(forest, forest.root_id(), r, trees);
        for (auto& cubes : trees) out.push_back(CompleteTree::from_cubes(forest.dim(), cubes));
    }
    return out;
}

} // namespace dyadtree
