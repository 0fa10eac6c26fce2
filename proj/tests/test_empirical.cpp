#include "doctest.h"

#include "dyadtree/empirical.hpp"
#include "dyadtree/energy_dp.hpp"
#include "helpers.hpp"

using namespace dyadtree;
using dyadtree::testing::random_dataset;
using dyadtree::testing::z1;

namespace {

SetClassifier interval_classifier(std::initializer_list<bool> level1_positive) {
    // d=1, one refinement; positives chosen among the two level-1 cells.
    TreeClassifier tc{CompleteTree(1), {}};
    tc.tree.refine(root_cube(1));
    int k = 0;
    for (bool pos : level1_positive) {
        const DyadicCube c{1, {static_cast<std::uint32_t>(k++)}};
        if (pos) tc.positive.emplace(c, HCell{c, std::nullopt, 0});
    }
    SetClassifier s;
    s.form = std::move(tc);
    return s;
}

} // namespace

TEST_CASE("eta_bar, rho_bar and risk on the four-point dataset") {
    const Dataset data = z1();

    CHECK(eta_bar(root_cube(1), data) == doctest::Approx(0.0));
    CHECK(eta_bar(DyadicCube{1, {1}}, data) == doctest::Approx(0.5));
    CHECK(rho_bar(DyadicCube{1, {0}}, data) == doctest::Approx(0.5));
    CHECK(rho_bar(root_cube(1), data) == doctest::Approx(1.0));

    const SetClassifier empty = empty_classifier(1);
    CHECK(eta_bar(empty, data) == doctest::Approx(0.0));
    CHECK(rho_bar(empty, data) == doctest::Approx(0.0));
    CHECK(empirical_risk(empty, data) == doctest::Approx(0.5)); // two positives missed

    const SetClassifier upper = interval_classifier({false, true});
    CHECK(empirical_risk(upper, data) == doctest::Approx(0.0));

    const SetClassifier full = interval_classifier({true, true});
    CHECK(empirical_risk(full, data) == doctest::Approx(0.5)); // two negatives missed
}

TEST_CASE("epsilon diagnostics evaluate their closed forms") {
    CHECK(epsilon_vc(3, 3, 1.0, 1.0) == doctest::Approx(3.0 * std::log(3.0) / 3.0));
    CHECK(epsilon_vc(1, 100, 2.0, 1.0) == doctest::Approx(0.13815510557964275).epsilon(1e-12));
    CHECK(epsilon_vc(10, 1000, 1.0, 2.0) == doctest::Approx(0.13815510557964274).epsilon(1e-12));

    CHECK(epsilon_finite(2, 100, 1.0) == doctest::Approx(0.17661057888493453).epsilon(1e-12));
    CHECK(epsilon_finite(100, 1000, 2.0) == doctest::Approx(0.061402269146507885).epsilon(1e-12));
    // class size 1 with r -> 0 vanishes
    CHECK(epsilon_finite(1, 100, 1e-12) < 1e-12);

    CHECK_THROWS_AS(epsilon_vc(0, 10, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(epsilon_vc(1, 1, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(epsilon_finite(0, 10, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(epsilon_finite(2, 10, 0.0), std::invalid_argument);
}

TEST_CASE("risk/eta duality holds exactly on random pairs") {
    Rng rng(31);
    for (int rep = 0; rep < 150; ++rep) {
        const int d = 1 + static_cast<int>(rng.below(2));
        const Dataset fit_data = random_dataset(rng, 3 + static_cast<int>(rng.below(10)), d);
        const Dataset eval_data = random_dataset(rng, 2 + static_cast<int>(rng.below(12)), d);
        const OccupancyForest f = OccupancyForest::build(fit_data, {3, StopRule::kOneSample});
        const EnergyTable t = compute_energy(f, 3);
        const SetClassifier s = extract_classifier(t, static_cast<int>(rng.below(4)));

        const std::int64_t p = eval_data.positives();
        CHECK(misclass_count(s, eval_data) == p - eta_numerator(s, eval_data));
    }
}

TEST_CASE("eta is additive over disjoint leaves and bounded by rho") {
    Rng rng(53);
    for (int rep = 0; rep < 40; ++rep) {
        const int d = 1 + static_cast<int>(rng.below(2));
        const Dataset data = random_dataset(rng, 4 + static_cast<int>(rng.below(10)), d);
        const OccupancyForest f = OccupancyForest::build(data, {2, StopRule::kOneSample});
        std::int64_t total = 0;
        for (const auto& leaf : f.full_tree().leaves()) {
            const std::int64_t num = eta_numerator(leaf, data);
            total += num;
            CHECK(std::abs(num) <= hit_count(leaf, data));
        }
        CHECK(total == eta_numerator(root_cube(d), data));
    }
}

TEST_CASE("cached label sums agree with the direct scan") {
    Rng rng(77);
    const Dataset data = random_dataset(rng, 20, 2);
    const OccupancyForest f = OccupancyForest::build(data, {3, StopRule::kOneSample});
    for (std::size_t id = 0; id < f.node_count(); ++id) {
        const auto& n = f.node(static_cast<std::int32_t>(id));
        CHECK(n.label_sum == eta_numerator(n.cube, data));
        CHECK(n.count == hit_count(n.cube, data));
    }
}
