#pragma once

// Empirical measures over a region S: eta_bar = (1/n) sum y_i 1{x_i in S},
// rho_bar = fraction of samples in S, and the empirical misclassification
// risk.  Numerators are kept as exact integers so argmax comparisons and
// tie-breaking never depend on floating-point rounding.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "dyadtree/classifier.hpp"
#include "dyadtree/dataset.hpp"
#include "dyadtree/geometry.hpp"

namespace dyadtree {

template <class Member>
std::int64_t eta_numerator_of(const Dataset& data, Member&& in_region) {
    std::int64_t num = 0;
    for (int i = 0; i < data.size(); ++i)
        if (in_region(data.point(i))) num += data.label(i);
    return num;
}

template <class Member>
std::int64_t hit_count_of(const Dataset& data, Member&& in_region) {
    std::int64_t hits = 0;
    for (int i = 0; i < data.size(); ++i)
        if (in_region(data.point(i))) ++hits;
    return hits;
}

template <class Member>
std::int64_t misclass_count_of(const Dataset& data, Member&& in_region) {
    std::int64_t miss = 0;
    for (int i = 0; i < data.size(); ++i) {
        const int predicted = in_region(data.point(i)) ? 1 : -1;
        if (predicted != data.label(i)) ++miss;
    }
    return miss;
}

inline std::int64_t eta_numerator(const SetClassifier& s, const Dataset& data) {
    return eta_numerator_of(data, [&](std::span<const double> p) { return s.member(p); });
}
inline std::int64_t eta_numerator(const DyadicCube& c, const Dataset& data) {
    return eta_numerator_of(data, [&](std::span<const double> p) { return cube_contains(c, p); });
}
inline std::int64_t eta_numerator(const HCell& cell, const Dataset& data) {
    return eta_numerator_of(data, [&](std::span<const double> p) { return cell.contains(p); });
}

template <class Region>
double eta_bar(const Region& region, const Dataset& data) {
    return static_cast<double>(eta_numerator(region, data)) / data.size();
}

inline std::int64_t hit_count(const SetClassifier& s, const Dataset& data) {
    return hit_count_of(data, [&](std::span<const double> p) { return s.member(p); });
}
inline std::int64_t hit_count(const DyadicCube& c, const Dataset& data) {
    return hit_count_of(data, [&](std::span<const double> p) { return cube_contains(c, p); });
}
inline std::int64_t hit_count(const HCell& cell, const Dataset& data) {
    return hit_count_of(data, [&](std::span<const double> p) { return cell.contains(p); });
}

template <class Region>
double rho_bar(const Region& region, const Dataset& data) {
    return static_cast<double>(hit_count(region, data)) / data.size();
}

inline std::int64_t misclass_count(const SetClassifier& s, const Dataset& data) {
    return misclass_count_of(data, [&](std::span<const double> p) { return s.member(p); });
}

// Satisfies n * risk == positives - eta_numerator exactly.
inline double empirical_risk(const SetClassifier& s, const Dataset& data) {
    return static_cast<double>(misclass_count(s, data)) / data.size();
}

// VC-type fluctuation scale A * max{r+1, V} * log(n) / n (diagnostic only).
inline double epsilon_vc(int vc_dim, int n, double r, double a) {
    if (n < 2 || vc_dim < 1 || !(r > 0.0) || !(a > 0.0))
        throw std::invalid_argument("epsilon_vc: need n>=2, V>=1, r>0, A>0");
    const double v = std::max(r + 1.0, static_cast<double>(vc_dim));
    return a * v * std::log(static_cast<double>(n)) / n;
}

// Finite-class scale 10 (log #S + r log n) / (3n) (diagnostic only).
inline double epsilon_finite(std::int64_t class_size, int n, double r) {
    if (class_size < 1 || n < 2 || !(r > 0.0))
        throw std::invalid_argument("epsilon_finite: need #S>=1, n>=2, r>0");
    const double ln_n = std::log(static_cast<double>(n));
    return 10.0 * (std::log(static_cast<double>(class_size)) + r * ln_n) / (3.0 * n);
}

} // namespace dyadtree
