#include "doctest.h"

#include <cmath>

#include "dyadtree/oracle.hpp"
#include "helpers.hpp"

using namespace dyadtree;

namespace {

// d=1 plain classifier whose positive set is [lo, 1] on the dyadic grid of
// the given depth (lo must be a multiple of 2^-depth).
SetClassifier dyadic_upper_set(int depth, double lo) {
    TreeClassifier tc{CompleteTree(1), {}};
    for (int l = 0; l < depth; ++l)
        for (const auto& leaf : tc.tree.leaves()) tc.tree.refine(leaf);
    for (const auto& leaf : tc.tree.leaves())
        if (leaf.lower(0) >= lo) tc.positive.emplace(leaf, HCell{leaf, std::nullopt, 0});
    SetClassifier s;
    s.form = std::move(tc);
    return s;
}

// d=1 decorated classifier with positive set (thr, 1].
SetClassifier threshold_set(double thr) {
    TreeClassifier tc{CompleteTree(1), {}};
    const DyadicCube root = root_cube(1);
    tc.positive.emplace(root, HCell{root, Hyperplane{{1.0}, thr}, 1});
    SetClassifier s;
    s.algorithm = Algorithm::kDecorated;
    s.form = std::move(tc);
    return s;
}

} // namespace

TEST_CASE("bayes membership includes the zero level set") {
    const auto o = DistributionOracle::signed_power(1, 1.0);
    CHECK(o.bayes_member(std::vector<double>{0.7}));
    CHECK_FALSE(o.bayes_member(std::vector<double>{0.2}));
    CHECK(o.bayes_member(std::vector<double>{0.5})); // eta = 0 belongs to the Bayes set
}

TEST_CASE("oracle parameter validation") {
    CHECK_THROWS_AS(DistributionOracle::signed_power(1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(DistributionOracle::signed_power(1, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(DistributionOracle::massart(1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(DistributionOracle::massart(1, 1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(DistributionOracle::stripe(1, 1.0, 1, {1}), std::invalid_argument);
    CHECK_THROWS_AS(DistributionOracle::stripe(1, 1.0, 1, {2, 1}), std::invalid_argument);
}

TEST_CASE("sampling is seeded, coordinates first, labels after") {
    const auto sp = DistributionOracle::signed_power(2, 0.5);
    const Dataset a = sp.sample(50, 11);
    const Dataset b = sp.sample(50, 11);
    for (int i = 0; i < 50; ++i) {
        CHECK(a.samples[i].x == b.samples[i].x);
        CHECK(a.samples[i].y == b.samples[i].y);
    }
    // Coordinates depend only on (seed, n, d), not on the eta kind.
    const auto ms = DistributionOracle::massart(2, 0.5);
    const Dataset c = ms.sample(50, 11);
    for (int i = 0; i < 50; ++i) CHECK(a.samples[i].x == c.samples[i].x);
}

TEST_CASE("massart amplitude 1 labels deterministically") {
    const auto o = DistributionOracle::massart(1, 1.0);
    const Dataset data = o.sample(500, 3);
    for (const auto& s : data.samples) {
        if (s.x[0] == 0.5) continue;
        CHECK(s.y == (s.x[0] > 0.5 ? 1 : -1));
    }
}

TEST_CASE("conditional mean label matches the closed form on [0.9, 1]") {
    // For the linear signed-power profile, E[y | x in [0.9,1]] is
    // E[x - 1/2 | x in [0.9,1]] = 0.45.
    const auto o = DistributionOracle::signed_power(1, 1.0);
    const Dataset data = o.sample(100000, 17);
    double sum = 0;
    int count = 0;
    for (const auto& s : data.samples) {
        if (s.x[0] < 0.9) continue;
        sum += s.y;
        ++count;
    }
    REQUIRE(count > 5000);
    const double mean = sum / count;
    const double se = std::sqrt((1.0 - 0.45 * 0.45) / count);
    CHECK(std::fabs(mean - 0.45) <= 3.0 * se);
}

TEST_CASE("exact excess risk closed forms") {
    const auto o = DistributionOracle::signed_power(1, 1.0);

    const SetClassifier bayes = dyadic_upper_set(1, 0.5);
    CHECK(excess_risk_exact(o, bayes).value == doctest::Approx(0.0));

    const SetClassifier empty = empty_classifier(1);
    CHECK(excess_risk_exact(o, empty).value == doctest::Approx(0.125).epsilon(1e-12));

    const SetClassifier quarter = dyadic_upper_set(2, 0.25);
    CHECK(excess_risk_exact(o, quarter).value == doctest::Approx(0.03125).epsilon(1e-12));

    // Decorated d=1 and uniform-grid forms.
    CHECK(excess_risk_exact(o, threshold_set(0.5)).value == doctest::Approx(0.0));
    CHECK(excess_risk_exact(o, threshold_set(0.25)).value ==
          doctest::Approx(0.03125).epsilon(1e-12));

    const auto massart = DistributionOracle::massart(1, 0.5);
    CHECK(excess_risk_exact(massart, empty).value == doctest::Approx(0.25).epsilon(1e-12));

    const auto stripe = DistributionOracle::stripe(1, 1.0, 1, {-1, 1});
    CHECK(excess_risk_exact(stripe, empty).value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(excess_risk_exact(stripe, bayes).value == doctest::Approx(0.0));

    // Unsupported: decorated in d >= 2.
    const auto o2 = DistributionOracle::signed_power(2, 1.0);
    TreeClassifier tc{CompleteTree(2), {}};
    const DyadicCube root2 = root_cube(2);
    tc.positive.emplace(root2, HCell{root2, Hyperplane{{1.0, 1.0}, 1.0}, 1});
    SetClassifier deco2;
    deco2.algorithm = Algorithm::kDecorated;
    deco2.form = std::move(tc);
    CHECK_THROWS_AS(excess_risk_exact(o2, deco2), std::invalid_argument);
}

TEST_CASE("plain trees in d=2 integrate exactly") {
    // Positive set [1/2,1] x [0,1] against Bayes set [1/2,1] on axis 0: zero.
    const auto o = DistributionOracle::signed_power(2, 1.0, 0);
    TreeClassifier tc{CompleteTree(2), {}};
    tc.tree.refine(root_cube(2));
    for (const auto& leaf : tc.tree.leaves())
        if (leaf.index[0] == 1) tc.positive.emplace(leaf, HCell{leaf, std::nullopt, 0});
    SetClassifier s;
    s.form = std::move(tc);
    CHECK(excess_risk_exact(o, s).value == doctest::Approx(0.0));

    // Empty set: the full positive mass, same as in d=1.
    CHECK(excess_risk_exact(o, empty_classifier(2)).value ==
          doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("monte carlo agrees with the exact values") {
    const auto o = DistributionOracle::signed_power(1, 1.0);
    const SetClassifier bayes = dyadic_upper_set(1, 0.5);
    const RiskReport zero = excess_risk_mc(o, bayes, 20000, 5);
    CHECK(zero.value == 0.0); // identically zero terms

    const RiskReport mc = excess_risk_mc(o, empty_classifier(1), 200000, 6);
    CHECK(std::fabs(mc.value - 0.125) <= 4.0 * mc.std_error);

    const auto massart = DistributionOracle::massart(1, 0.5);
    const RiskReport mm = excess_risk_mc(massart, empty_classifier(1), 200000, 7);
    CHECK(std::fabs(mm.value - 0.25) <= 4.0 * mm.std_error);
}

TEST_CASE("margin mass closed forms and exponent") {
    const auto d1 = DistributionOracle::signed_power(1, 1.0);
    CHECK(d1.margin_mass(0.1) == doctest::Approx(0.2).epsilon(1e-12));
    const auto dhalf = DistributionOracle::signed_power(1, 0.5);
    CHECK(dhalf.margin_mass(0.25) == doctest::Approx(0.125).epsilon(1e-12));
    const auto ms = DistributionOracle::massart(1, 0.3);
    CHECK(ms.margin_mass(0.1) == doctest::Approx(0.0));
    CHECK(ms.margin_mass(0.3) == doctest::Approx(1.0));
    CHECK_THROWS_AS(d1.margin_mass(0.0), std::invalid_argument);

    // margin_mass(t) / t^(1/delta) is the constant 2 below the saturation point.
    for (double delta : {0.5, 0.75, 1.0}) {
        const auto o = DistributionOracle::signed_power(1, delta);
        const double t_top = std::pow(0.5, delta);
        for (double t : {0.001, 0.01, 0.1}) {
            if (t > t_top) continue;
            CHECK(o.margin_mass(t) / std::pow(t, 1.0 / delta) ==
                  doctest::Approx(2.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("excess risk shrinks as the set approaches the Bayes set") {
    const auto o = DistributionOracle::signed_power(1, 0.5);
    double prev = 1e9;
    for (double thr : {0.95, 0.8, 0.65, 0.5}) {
        const double risk = excess_risk_exact(o, threshold_set(thr)).value;
        CHECK(risk >= 0.0);
        CHECK(risk < prev);
        prev = risk;
    }
}
