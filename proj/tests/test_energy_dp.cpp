#include "doctest.h"

#include <algorithm>

#include "dyadtree/empirical.hpp"
#include "dyadtree/energy_dp.hpp"
#include "helpers.hpp"

using namespace dyadtree;
using dyadtree::testing::random_dataset;
using dyadtree::testing::z1;

TEST_CASE("energies on the four-point dataset") {
    const OccupancyForest f = OccupancyForest::build(z1(), {16, StopRule::kOneSample});
    const EnergyTable t = compute_energy(f, 2);
    CHECK(t.energy_numerator(0) == 0);
    CHECK(t.energy_numerator(1) == 2); // right cell eta_bar = 1/2
    CHECK(t.energy_numerator(2) == 2); // deeper splits cannot help
    CHECK(t.energy(1) == doctest::Approx(0.5));
}

TEST_CASE("degenerate datasets") {
    Dataset one;
    one.dim = 1;
    one.samples = {{{0.42}, 1}};
    const OccupancyForest f1 = OccupancyForest::build(one, {5, StopRule::kOneSample});
    const EnergyTable t1 = compute_energy(f1, 3);
    for (int m = 0; m <= 3; ++m) CHECK(t1.energy_numerator(m) == 1);

    Dataset neg;
    neg.dim = 1;
    neg.samples = {{{0.2}, -1}, {{0.4}, -1}, {{0.8}, -1}};
    const OccupancyForest f2 = OccupancyForest::build(neg, {4, StopRule::kOneSample});
    const EnergyTable t2 = compute_energy(f2, 4);
    for (int m = 0; m <= 4; ++m) CHECK(t2.energy_numerator(m) == 0);
}

TEST_CASE("tree extraction backtracks deterministically") {
    const OccupancyForest f = OccupancyForest::build(z1(), {16, StopRule::kOneSample});
    const EnergyTable t = compute_energy(f, 2);

    const CompleteTree t0 = extract_tree(t, 0);
    CHECK(t0.node_count() == 1);

    const CompleteTree t1 = extract_tree(t, 1);
    CHECK(t1.refinement_count() == 1);
    CHECK(t1.leaves().size() == 2);

    // No split is taken when it does not strictly improve the energy.
    const CompleteTree t2 = extract_tree(t, 2);
    CHECK(t2.refinement_count() == 1);
    CHECK(t2.leaves() == t1.leaves());
}

TEST_CASE("classifier extraction keeps strictly positive leaves") {
    const OccupancyForest f = OccupancyForest::build(z1(), {16, StopRule::kOneSample});
    const EnergyTable t = compute_energy(f, 2);

    const SetClassifier m1 = extract_classifier(t, 1);
    CHECK(m1.member(std::vector<double>{0.7}));
    CHECK(m1.member(std::vector<double>{0.5}));
    CHECK_FALSE(m1.member(std::vector<double>{0.2}));

    // eta_bar(root) = 0 is not strictly positive, so m = 0 keeps nothing.
    const SetClassifier m0 = extract_classifier(t, 0);
    CHECK_FALSE(m0.member(std::vector<double>{0.7}));

    Dataset allpos;
    allpos.dim = 1;
    allpos.samples = {{{0.2}, 1}, {{0.9}, 1}};
    const OccupancyForest fp = OccupancyForest::build(allpos, {3, StopRule::kOneSample});
    const SetClassifier full = extract_classifier(compute_energy(fp, 0), 0);
    CHECK(full.member(std::vector<double>{0.01}));
    CHECK(full.member(std::vector<double>{0.99}));
}

TEST_CASE("brute-force oracle on the four-point dataset") {
    const OccupancyForest f = OccupancyForest::build(z1(), {16, StopRule::kOneSample});
    CHECK(brute_force_energy_numerator(f, 0) == 0);
    CHECK(brute_force_energy_numerator(f, 1) == 2);
    CHECK(brute_force_energy(f, 1) == doctest::Approx(0.5));
}

TEST_CASE("dp equals exhaustive search on random small instances") {
    Rng rng(1234);
    for (int rep = 0; rep < 60; ++rep) {
        const int d = 1 + static_cast<int>(rng.below(2));
        const int n = 1 + static_cast<int>(rng.below(10));
        const int j_max = static_cast<int>(rng.below(4));
        const Dataset data = random_dataset(rng, n, d);
        const OccupancyForest f = OccupancyForest::build(data, {j_max, StopRule::kOneSample});
        const EnergyTable t = compute_energy(f, 4);
        for (int m = 0; m <= 4; ++m)
            CHECK(t.energy_numerator(m) == brute_force_energy_numerator(f, m));
    }
}

TEST_CASE("energy invariants: monotone, saturating, consistent, feasible") {
    Rng rng(4321);
    for (int rep = 0; rep < 40; ++rep) {
        const int d = 1 + static_cast<int>(rng.below(2));
        const Dataset data = random_dataset(rng, 2 + static_cast<int>(rng.below(14)), d);
        const OccupancyForest f = OccupancyForest::build(data, {3, StopRule::kOneSample});
        const int m_max = f.internal_node_count() + 2;
        const EnergyTable t = compute_energy(f, m_max);

        // Monotone in the budget, for every cube.
        for (std::size_t id = 0; id < f.node_count(); ++id) {
            const auto& cube = f.node(static_cast<std::int32_t>(id)).cube;
            for (int j = 1; j <= m_max; ++j)
                CHECK(t.node_energy_numerator(cube, j) >= t.node_energy_numerator(cube, j - 1));
        }
        // Constant past the number of internal nodes.
        CHECK(t.energy_numerator(m_max) == t.energy_numerator(t.saturation()));

        for (int m = 0; m <= m_max; ++m) {
            const CompleteTree tree = extract_tree(t, m);
            CHECK(tree.refinement_count() <= m);
            std::int64_t leaf_total = 0;
            for (const auto& leaf : tree.leaves())
                leaf_total += std::max<std::int64_t>(0, eta_numerator(leaf, data));
            CHECK(leaf_total == t.energy_numerator(m));
        }
    }
}
