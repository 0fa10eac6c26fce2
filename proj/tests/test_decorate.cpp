#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dyadtree/decorate.hpp"
#include "dyadtree/empirical.hpp"
#include "helpers.hpp"

using namespace dyadtree;
using dyadtree::testing::random_dataset;
using dyadtree::testing::z1;

namespace {

// Exhaustive d=1 oracle: best clamped label sum over all interval subsets
// obtainable with one threshold (every prefix/suffix of the sorted samples),
// plus the full and empty cells.
std::int64_t threshold_scan_best(const OccupancyForest& f, std::int32_t id) {
    const auto& node = f.node(id);
    std::vector<std::pair<double, int>> pts;
    for (std::int32_t sid : node.sample_ids)
        pts.emplace_back(f.data().point(sid)[0], f.data().label(sid));
    std::sort(pts.begin(), pts.end());

    std::int64_t best = 0;
    std::int64_t total = 0;
    for (const auto& [x, y] : pts) total += y;
    best = std::max(best, total);
    std::int64_t prefix = 0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        prefix += pts[k].second;
        // A threshold can separate here only when the next coordinate differs.
        if (k + 1 < pts.size() && pts[k].first == pts[k + 1].first) continue;
        best = std::max(best, prefix);          // lower halves
        best = std::max(best, total - prefix);  // upper halves
    }
    return best;
}

} // namespace

TEST_CASE("candidate hyperplanes follow the sample count") {
    const OccupancyForest f = OccupancyForest::build(z1(), {0, StopRule::kOneSample});
    const auto cands = candidate_hyperplanes(f, root_cube(1));
    REQUIRE(cands.size() == 4);
    CHECK(cands[0].offset == doctest::Approx(0.1));
    CHECK(cands[3].offset == doctest::Approx(0.9));

    Dataset tri;
    tri.dim = 2;
    tri.samples = {{{0.2, 0.2}, 1}, {{0.7, 0.3}, -1}, {{0.4, 0.8}, 1}};
    const OccupancyForest f2 = OccupancyForest::build(tri, {0, StopRule::kOneSample});
    CHECK(candidate_hyperplanes(f2, root_cube(2)).size() == 3);

    Dataset single;
    single.dim = 2;
    single.samples = {{{0.3, 0.6}, 1}};
    const OccupancyForest f3 = OccupancyForest::build(single, {0, StopRule::kOneSample});
    const auto axis_cands = candidate_hyperplanes(f3, root_cube(2));
    REQUIRE(axis_cands.size() == 2); // axis-aligned fallback
    CHECK(axis_cands[0].normal == std::vector<double>{1.0, 0.0});
    CHECK(axis_cands[1].normal == std::vector<double>{0.0, 1.0});
}

TEST_CASE("degenerate duplicate points fall back to axis-aligned planes") {
    Dataset dup;
    dup.dim = 2;
    dup.samples = {{{0.5, 0.5}, 1}, {{0.5, 0.5}, 1}};
    const OccupancyForest f = OccupancyForest::build(dup, {0, StopRule::kOneSample});
    CHECK(candidate_hyperplanes(f, root_cube(2)).size() == 4);
}

TEST_CASE("best cell on the four-point dataset") {
    const OccupancyForest f = OccupancyForest::build(z1(), {0, StopRule::kOneSample});
    const DecorationResult r = best_hcell(f, root_cube(1));
    CHECK(r.energy_numerator == 2); // both positives captured
    REQUIRE(r.best.has_value());
    REQUIRE(r.best->cut.has_value());
    CHECK(r.best->cut->offset == doctest::Approx(0.3));
    CHECK(r.best->side == 1);
    CHECK(r.candidate_count == 4);
    // The chosen cell is (0.3, 1].
    CHECK_FALSE(r.best->contains(std::vector<double>{0.3}));
    CHECK(r.best->contains(std::vector<double>{0.6}));
    CHECK(r.best->contains(std::vector<double>{1.0}));
}

TEST_CASE("full cube beats equal-valued cuts; losses give empty decorations") {
    Dataset onepos;
    onepos.dim = 1;
    onepos.samples = {{{0.4}, 1}};
    const OccupancyForest f1 = OccupancyForest::build(onepos, {0, StopRule::kOneSample});
    const DecorationResult r1 = best_hcell(f1, root_cube(1));
    CHECK(r1.energy_numerator == 1);
    REQUIRE(r1.best.has_value());
    CHECK_FALSE(r1.best->cut.has_value()); // whole cube

    Dataset allneg;
    allneg.dim = 1;
    allneg.samples = {{{0.2}, -1}, {{0.7}, -1}};
    const OccupancyForest f2 = OccupancyForest::build(allneg, {0, StopRule::kOneSample});
    const DecorationResult r2 = best_hcell(f2, root_cube(1));
    CHECK(r2.energy_numerator == 0);
    CHECK_FALSE(r2.best.has_value());
}

TEST_CASE("decorated energies and extraction on the four-point dataset") {
    const OccupancyForest f = OccupancyForest::build(z1(), {16, StopRule::kOneSample});
    const EnergyTable t = decorated_energy(f, 1);
    CHECK(t.energy_numerator(0) == 2); // the decoration already separates
    CHECK(t.energy_numerator(1) == 2);

    const SetClassifier s0 = extract_decorated_classifier(t, f, 0);
    CHECK(s0.member(std::vector<double>{0.31}));
    CHECK(s0.member(std::vector<double>{1.0}));
    CHECK_FALSE(s0.member(std::vector<double>{0.3}));
    CHECK_FALSE(s0.member(std::vector<double>{0.2}));

    const SetClassifier s1 = extract_decorated_classifier(t, f, 1);
    const Dataset data = z1();
    CHECK(eta_numerator(s1, data) == 2); // same empirical energy after backtrack

    Dataset allneg;
    allneg.dim = 1;
    allneg.samples = {{{0.2}, -1}, {{0.7}, -1}};
    const OccupancyForest fn = OccupancyForest::build(allneg, {2, StopRule::kOneSample});
    const SetClassifier none = extract_decorated_classifier(decorated_energy(fn, 1), fn, 1);
    CHECK_FALSE(none.member(std::vector<double>{0.5}));

    Dataset allpos;
    allpos.dim = 1;
    allpos.samples = {{{0.2}, 1}, {{0.7}, 1}};
    const OccupancyForest fp = OccupancyForest::build(allpos, {2, StopRule::kOneSample});
    const EnergyTable tp = decorated_energy(fp, 0);
    CHECK(tp.energy_numerator(0) == 2); // full-cube decoration
}

TEST_CASE("d=1 leaf search equals the exhaustive threshold scan") {
    Rng rng(808);
    int cubes_checked = 0;
    while (cubes_checked < 60) {
        const Dataset data = random_dataset(rng, 2 + static_cast<int>(rng.below(14)), 1);
        const OccupancyForest f = OccupancyForest::build(data, {3, StopRule::kOccupied});
        for (std::size_t id = 0; id < f.node_count(); ++id) {
            const auto sid = static_cast<std::int32_t>(id);
            if (!f.node(sid).occupied()) continue;
            CHECK(best_hcell(f, sid).energy_numerator == threshold_scan_best(f, sid));
            ++cubes_checked;
        }
    }
}

TEST_CASE("decorated energies dominate plain energies") {
    Rng rng(909);
    for (int rep = 0; rep < 30; ++rep) {
        const int d = 1 + static_cast<int>(rng.below(2));
        const Dataset data = random_dataset(rng, 2 + static_cast<int>(rng.below(12)), d);
        const OccupancyForest f = OccupancyForest::build(data, {2, StopRule::kOneSample});
        const int m_max = 4;
        const EnergyTable plain = compute_energy(f, m_max);
        const EnergyTable deco = decorated_energy(f, m_max);
        for (int m = 0; m <= m_max; ++m)
            CHECK(deco.energy_numerator(m) >= plain.energy_numerator(m));
    }
}

TEST_CASE("decorated dp equals the decorated exhaustive search") {
    Rng rng(333);
    for (int rep = 0; rep < 25; ++rep) {
        const int d = 1 + static_cast<int>(rng.below(2));
        const Dataset data = random_dataset(rng, 2 + static_cast<int>(rng.below(8)), d);
        const OccupancyForest f = OccupancyForest::build(data, {2, StopRule::kOccupied});
        std::vector<std::int64_t> leaf_values(f.node_count(), 0);
        for (std::size_t id = 0; id < f.node_count(); ++id)
            if (f.node(static_cast<std::int32_t>(id)).occupied())
                leaf_values[id] = best_hcell(f, static_cast<std::int32_t>(id)).energy_numerator;
        const EnergyTable t = decorated_energy(f, 3);
        for (int m = 0; m <= 3; ++m)
            CHECK(t.energy_numerator(m) ==
                  brute_force_energy_numerator(f, m, leaf_values, 2000000));
    }
}

TEST_CASE("candidate search cannot be beaten by a fine sweep of hyperplanes (d=2)") {
    Rng rng(555);
    for (int rep = 0; rep < 12; ++rep) {
        const Dataset data = random_dataset(rng, 2 + static_cast<int>(rng.below(5)), 2);
        const OccupancyForest f = OccupancyForest::build(data, {0, StopRule::kOneSample});
        const std::int64_t best = best_hcell(f, f.root_id()).energy_numerator;

        std::int64_t sweep = 0;
        const int angles = 180;
        for (int a = 0; a < angles; ++a) {
            const double theta = 3.14159265358979312 * a / angles;
            const double nx = std::cos(theta), ny = std::sin(theta);
            // All sample partitions at this angle arise between consecutive
            // sorted projections (and beyond both ends).
            std::vector<double> proj;
            for (int i = 0; i < data.size(); ++i)
                proj.push_back(nx * data.point(i)[0] + ny * data.point(i)[1]);
            std::vector<double> offs = proj;
            for (double v : proj) offs.push_back(v + 1e-9);
            offs.push_back(-10.0);
            offs.push_back(10.0);
            for (double b : offs) {
                std::int64_t low = 0, high = 0;
                for (int i = 0; i < data.size(); ++i)
                    (proj[static_cast<std::size_t>(i)] - b <= 0.0 ? low : high) +=
                        data.label(i);
                sweep = std::max({sweep, low, high});
            }
        }
        CHECK(best >= sweep);
    }
}

TEST_CASE("samples on a candidate plane count on its side 0") {
    // d=2 with dyadic coordinates keeps every product exact.
    Dataset data;
    data.dim = 2;
    data.samples = {{{0.25, 0.25}, 1}, {{0.5, 0.75}, 1}, {{0.75, 0.125}, -1}};
    const OccupancyForest f = OccupancyForest::build(data, {0, StopRule::kOneSample});
    for (const auto& h : candidate_hyperplanes(f, f.root_id())) {
        // The defining samples lie exactly on the plane, which side_of puts
        // on side 0 for either orientation.
        int on_plane = 0;
        for (int i = 0; i < data.size(); ++i)
            if (side_of(h, data.point(i)) == 0 && side_of(flipped(h), data.point(i)) == 0)
                ++on_plane;
        CHECK(on_plane >= 2);
    }
}

TEST_CASE("decorations reject unsupported dimensions") {
    Rng rng(42);
    const Dataset data = random_dataset(rng, 6, 4);
    const OccupancyForest f = OccupancyForest::build(data, {1, StopRule::kOneSample});
    CHECK_THROWS_AS(decorated_energy(f, 1), UsageError);
}
