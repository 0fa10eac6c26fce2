#include "dyadtree/select.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dyadtree/decorate.hpp"
#include "dyadtree/empirical.hpp"
#include "dyadtree/energy_dp.hpp"
#include "dyadtree/rng.hpp"

namespace dyadtree {

SplitHalves split_halves(const Dataset& data, std::uint64_t seed) {
    validate(data);
    if (data.size() < 4) throw std::invalid_argument("split_halves: need at least 4 samples");

    std::vector<std::int32_t> order(static_cast<std::size_t>(data.size()));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::int32_t>(i);
    Rng rng(Rng::derive(seed, 0x73706c69ull)); // stream tag: split
    for (std::size_t i = order.size() - 1; i > 0; --i)
        std::swap(order[i], order[static_cast<std::size_t>(rng.below(i + 1))]);

    SplitHalves out;
    const int half = data.size() / 2;
    out.first.dim = out.second.dim = data.dim;
    for (int i = 0; i < half; ++i)
        out.first.samples.push_back(data.samples[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]);
    for (int i = half; i < 2 * half; ++i)
        out.second.samples.push_back(data.samples[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]);
    if (data.size() % 2 != 0)
        out.dropped = data.samples[static_cast<std::size_t>(order[static_cast<std::size_t>(data.size() - 1)])];
    return out;
}

namespace {

std::vector<int> default_m_grid(int n_first, int saturation, const FitOptions& opt) {
    int top = std::min(n_first, saturation);
    if (opt.m_cap) top = std::min(top, *opt.m_cap);
    if (top < 0) top = 0;
    std::vector<int> grid(static_cast<std::size_t>(top) + 1);
    for (int m = 0; m <= top; ++m) grid[static_cast<std::size_t>(m)] = m;
    return grid;
}

// Holdout sums cached per forest node so every candidate budget is scored by
// a walk over its tree's leaves instead of relocating every point.  The
// cube sums and cell sums agree exactly with a direct eta_bar scan because
// both descend with the same half-open child selection.
class HoldoutCache {
  public:
    HoldoutCache(const OccupancyForest& forest, const Dataset& second)
        : forest_(forest),
          cube_sum_(forest.node_count(), 0),
          points_(forest.node_count()),
          cell_sum_(forest.node_count(), 0),
          cell_ready_(forest.node_count(), 0),
          second_(second) {
        for (int i = 0; i < second.size(); ++i) {
            std::int32_t id = forest.root_id();
            while (true) {
                cube_sum_[static_cast<std::size_t>(id)] += second.label(i);
                points_[static_cast<std::size_t>(id)].push_back(i);
                const auto& node = forest.node(id);
                if (!node.refined()) break;
                id = forest.child_id(id, child_bits_toward(node.cube, second.point(i)));
            }
        }
    }

    // Holdout eta numerator of the budget-m optimal tree, by walking the DP
    // backtrack; unoccupied leaves never contribute.
    std::int64_t eta_for_budget(const EnergyTable& table, int m, bool decorated) {
        return walk(table, forest_.root_id(), m, decorated);
    }

  private:
    std::int64_t walk(const EnergyTable& table, std::int32_t id, int budget, bool decorated) {
        const auto& nt = table.table(id);
        const int j = std::min(budget, nt.cap);
        if (j == 0 || !nt.took_split[static_cast<std::size_t>(j)]) {
            if (decorated) {
                const auto& deco = table.decoration(id);
                return deco ? cell_sum(id, *deco) : 0;
            }
            return forest_.node(id).label_sum > 0 ? cube_sum_[static_cast<std::size_t>(id)] : 0;
        }
        std::int64_t acc = 0;
        const auto& alloc = nt.alloc[static_cast<std::size_t>(j)];
        for (std::size_t k = 0; k < nt.occupied_children.size(); ++k)
            acc += walk(table, nt.occupied_children[k], alloc[k], decorated);
        return acc;
    }
    std::int64_t cell_sum(std::int32_t id, const HCell& cell) {
        if (!cell_ready_[static_cast<std::size_t>(id)]) {
            std::int64_t sum = 0;
            for (std::int32_t i : points_[static_cast<std::size_t>(id)])
                if (cell.contains(second_.point(i))) sum += second_.label(i);
            cell_sum_[static_cast<std::size_t>(id)] = sum;
            cell_ready_[static_cast<std::size_t>(id)] = 1;
        }
        return cell_sum_[static_cast<std::size_t>(id)];
    }

    const OccupancyForest& forest_;
    std::vector<std::int64_t> cube_sum_;
    std::vector<std::vector<std::int32_t>> points_;
    std::vector<std::int64_t> cell_sum_;
    std::vector<std::uint8_t> cell_ready_;
    const Dataset& second_;
};

} // namespace

SelectionReport select_over_halves(const Dataset& first, const Dataset& second, Algorithm algo,
                                   std::vector<int> m_grid, const FitOptions& opt) {
    validate(first);
    validate(second);
    if (algo == Algorithm::kUniform)
        throw std::invalid_argument("select_over_halves: use select_uniform for the grid family");

    const OccupancyForest forest = OccupancyForest::build(first, {opt.j_max, opt.stop});

    if (m_grid.empty()) m_grid = default_m_grid(first.size(), forest.internal_node_count(), opt);
    if (m_grid.empty()) throw std::invalid_argument("select_over_halves: empty budget grid");
    std::sort(m_grid.begin(), m_grid.end());
    if (m_grid.front() < 0 || m_grid.back() > first.size())
        throw std::invalid_argument("select_over_halves: budgets must lie in [0, n/2]");

    const int m_max = m_grid.back();
    const EnergyTable table = algo == Algorithm::kDecorated ? decorated_energy(forest, m_max)
                                                            : compute_energy(forest, m_max);

    SelectionReport report;
    report.m_grid = m_grid;
    report.n_first = first.size();
    report.n_second = second.size();

    HoldoutCache cache(forest, second);
    std::int64_t best = 0;
    bool have_best = false;
    for (std::size_t k = 0; k < m_grid.size(); ++k) {
        const int m = m_grid[k];
        const std::int64_t num =
            cache.eta_for_budget(table, m, algo == Algorithm::kDecorated);
        report.eta_second_numer.push_back(num);
        report.eta_second.push_back(static_cast<double>(num) / second.size());
        if (!have_best || num > best) { // ties keep the smallest budget
            best = num;
            have_best = true;
            report.m_star = m;
        }
    }
    report.chosen = algo == Algorithm::kDecorated
                        ? extract_decorated_classifier(table, forest, report.m_star)
                        : extract_classifier(table, report.m_star);
    return report;
}

SelectionReport select_model(const Dataset& data, Algorithm algo, std::vector<int> m_grid,
                             std::uint64_t seed, const FitOptions& opt) {
    SplitHalves halves = split_halves(data, seed);
    SelectionReport report =
        select_over_halves(halves.first, halves.second, algo, std::move(m_grid), opt);
    report.sample_dropped = halves.dropped.has_value();
    return report;
}

SetClassifier uniform_baseline(const Dataset& data, int l, std::int64_t cell_cap) {
    validate(data);
    if (l < 1) throw std::invalid_argument("uniform_baseline: l must be >= 1");
    std::int64_t cells = 1;
    for (int a = 0; a < data.dim; ++a) {
        cells *= l;
        if (cells > cell_cap) throw std::invalid_argument("uniform_baseline: l^d exceeds cell cap");
    }

    UniformGridClassifier grid;
    grid.dimension = data.dim;
    grid.cells_per_axis = l;
    grid.positive.assign(static_cast<std::size_t>(cells), 0);

    std::vector<std::int64_t> label_sum(static_cast<std::size_t>(cells), 0);
    for (int i = 0; i < data.size(); ++i)
        label_sum[grid.flat_index(data.point(i))] += data.label(i);
    for (std::size_t c = 0; c < label_sum.size(); ++c)
        if (label_sum[c] > 0) grid.positive[c] = 1;

    SetClassifier out;
    out.algorithm = Algorithm::kUniform;
    out.budget = l;
    out.form = std::move(grid);
    return out;
}

SelectionReport select_uniform(const Dataset& data, std::vector<int> l_grid, std::uint64_t seed) {
    SplitHalves halves = split_halves(data, seed);
    if (l_grid.empty()) throw std::invalid_argument("select_uniform: empty grid of side counts");
    std::sort(l_grid.begin(), l_grid.end());

    SelectionReport report;
    report.m_grid = l_grid;
    report.n_first = halves.first.size();
    report.n_second = halves.second.size();
    report.sample_dropped = halves.dropped.has_value();

    std::int64_t best = 0;
    bool have_best = false;
    for (int l : l_grid) {
        SetClassifier cand = uniform_baseline(halves.first, l);
        const std::int64_t num = eta_numerator(cand, halves.second);
        report.eta_second_numer.push_back(num);
        report.eta_second.push_back(static_cast<double>(num) / halves.second.size());
        if (!have_best || num > best) {
            best = num;
            have_best = true;
            report.m_star = l;
            report.chosen = std::move(cand);
        }
    }
    return report;
}

} // namespace dyadtree
