#include "dyadtree/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dyadtree/rng.hpp"

namespace dyadtree {

namespace {

void check_common(int dim, int axis, double amplitude) {
    if (dim < 1) throw std::invalid_argument("oracle: dimension must be >= 1");
    if (axis < 0 || axis >= dim) throw std::invalid_argument("oracle: axis out of range");
    if (!(amplitude > 0.0 && amplitude <= 1.0))
        throw std::invalid_argument("oracle: amplitude must be in (0,1]");
}

} // namespace

DistributionOracle DistributionOracle::signed_power(int dim, double delta, int axis) {
    check_common(dim, axis, 1.0);
    if (!(delta > 0.0 && delta <= 1.0))
        throw std::invalid_argument("oracle: delta must be in (0,1]");
    DistributionOracle o;
    o.kind_ = EtaKind::kSignedPower;
    o.dim_ = dim;
    o.axis_ = axis;
    o.delta_ = delta;
    return o;
}

DistributionOracle DistributionOracle::massart(int dim, double amplitude, int axis) {
    check_common(dim, axis, amplitude);
    DistributionOracle o;
    o.kind_ = EtaKind::kMassart;
    o.dim_ = dim;
    o.axis_ = axis;
    o.amplitude_ = amplitude;
    return o;
}

DistributionOracle DistributionOracle::stripe(int dim, double amplitude, int level,
                                              std::vector<int> pattern, int axis) {
    check_common(dim, axis, amplitude);
    if (level < 0 || level > 20) throw std::invalid_argument("oracle: stripe level out of range");
    const std::size_t slabs = static_cast<std::size_t>(1) << level;
    if (pattern.size() != slabs)
        throw std::invalid_argument("oracle: stripe pattern must have 2^level entries");
    for (int v : pattern)
        if (v != 1 && v != -1) throw std::invalid_argument("oracle: stripe pattern entries are +/-1");
    DistributionOracle o;
    o.kind_ = EtaKind::kStripe;
    o.dim_ = dim;
    o.axis_ = axis;
    o.amplitude_ = amplitude;
    o.stripe_level_ = level;
    o.pattern_ = std::move(pattern);
    return o;
}

double DistributionOracle::eta_axis(double t) const {
    switch (kind_) {
    case EtaKind::kSignedPower: {
        const double u = t - 0.5;
        if (u == 0.0) return 0.0;
        return (u > 0.0 ? 1.0 : -1.0) * std::pow(std::fabs(u), delta_);
    }
    case EtaKind::kMassart: {
        const double u = t - 0.5;
        if (u == 0.0) return 0.0;
        return u > 0.0 ? amplitude_ : -amplitude_;
    }
    case EtaKind::kStripe: {
        const double scale = std::ldexp(1.0, stripe_level_);
        long s = static_cast<long>(std::floor(t * scale));
        const long top = static_cast<long>(pattern_.size()) - 1;
        if (s < 0) s = 0;
        if (s > top) s = top;
        return amplitude_ * pattern_[static_cast<std::size_t>(s)];
    }
    }
    return 0.0;
}

double DistributionOracle::eta(std::span<const double> p) const {
    if (static_cast<int>(p.size()) != dim_)
        throw std::invalid_argument("oracle eta: dimension mismatch");
    return eta_axis(p[static_cast<std::size_t>(axis_)]);
}

Dataset DistributionOracle::sample(int n, std::uint64_t seed) const {
    if (n < 1) throw std::invalid_argument("oracle sample: n must be >= 1");
    Rng rng(seed);
    Dataset data;
    data.dim = dim_;
    data.samples.resize(static_cast<std::size_t>(n));
    for (auto& s : data.samples) {
        s.x.resize(static_cast<std::size_t>(dim_));
        for (double& v : s.x) v = rng.uniform();
    }
    for (auto& s : data.samples) {
        const double p_plus = 0.5 * (1.0 + eta(s.x));
        s.y = rng.uniform() < p_plus ? 1 : -1;
    }
    return data;
}

double DistributionOracle::margin_mass(double t) const {
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("margin_mass: t must be in (0,1]");
    switch (kind_) {
    case EtaKind::kSignedPower: return std::min(1.0, 2.0 * std::pow(t, 1.0 / delta_));
    case EtaKind::kMassart:
    case EtaKind::kStripe: return t < amplitude_ ? 0.0 : 1.0;
    }
    return 0.0;
}

double DistributionOracle::abs_eta_integral(double lo, double hi) const {
    if (hi <= lo) return 0.0;
    switch (kind_) {
    case EtaKind::kSignedPower: {
        // Primitive of |t-1/2|^delta on either side of 1/2.
        const auto half_piece = [&](double a, double b) { // requires 1/2 <= a <= b or a <= b <= 1/2
            const double fa = std::pow(std::fabs(a - 0.5), delta_ + 1.0) / (delta_ + 1.0);
            const double fb = std::pow(std::fabs(b - 0.5), delta_ + 1.0) / (delta_ + 1.0);
            return std::fabs(fb - fa);
        };
        if (hi <= 0.5 || lo >= 0.5) return half_piece(lo, hi);
        return half_piece(lo, 0.5) + half_piece(0.5, hi);
    }
    case EtaKind::kMassart: return amplitude_ * (hi - lo);
    case EtaKind::kStripe: return amplitude_ * (hi - lo);
    }
    return 0.0;
}

std::vector<std::pair<double, double>> DistributionOracle::positive_axis_intervals() const {
    if (kind_ != EtaKind::kStripe) return {{0.5, 1.0}};
    std::vector<std::pair<double, double>> out;
    const double width = std::ldexp(1.0, -stripe_level_);
    for (std::size_t s = 0; s < pattern_.size(); ++s) {
        if (pattern_[s] < 0) continue;
        const double lo = static_cast<double>(s) * width;
        const double hi = lo + width;
        if (!out.empty() && out.back().second == lo) out.back().second = hi;
        else out.emplace_back(lo, hi);
    }
    return out;
}

double DistributionOracle::margin_alpha() const {
    if (kind_ == EtaKind::kSignedPower) return 1.0 / delta_;
    return std::numeric_limits<double>::infinity();
}

double DistributionOracle::smoothness_beta() const {
    if (kind_ == EtaKind::kSignedPower) return delta_;
    return 1.0;
}

namespace {

struct AxisBox {
    double lo = 0.0, hi = 0.0; // interval on the active axis
    double cross = 1.0;        // volume of the orthogonal cross-section
};

void append_tree_boxes(const TreeClassifier& tc, int axis, std::vector<AxisBox>& out) {
    const int d = tc.dim();
    for (const auto& [leaf, cell] : tc.positive) {
        AxisBox box;
        box.lo = leaf.lower(axis);
        box.hi = leaf.upper(axis);
        box.cross = 1.0;
        for (int a = 0; a < d; ++a)
            if (a != axis) box.cross *= leaf.side();
        if (cell.cut) {
            if (d != 1)
                throw std::invalid_argument(
                    "excess_risk_exact: decorated classifiers supported in d=1 only");
            const double w = cell.cut->normal[0];
            const double thr = cell.cut->offset / w;
            // side 0 is {w x <= offset}; endpoint measure does not matter.
            const bool keep_below = (w > 0.0) == (cell.side == 0);
            if (keep_below) box.hi = std::min(box.hi, thr);
            else box.lo = std::max(box.lo, thr);
            if (box.hi <= box.lo) continue;
        }
        out.push_back(box);
    }
}

void append_grid_boxes(const UniformGridClassifier& grid, int axis, std::vector<AxisBox>& out) {
    const int d = grid.dimension;
    const int l = grid.cells_per_axis;
    const double width = 1.0 / l;
    double cross = 1.0;
    for (int a = 0; a < d; ++a)
        if (a != axis) cross *= width;
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    for (std::size_t flat = 0; flat < grid.positive.size(); ++flat) {
        if (grid.positive[flat]) {
            std::size_t rem = flat;
            for (int a = d - 1; a >= 0; --a) {
                idx[static_cast<std::size_t>(a)] = static_cast<int>(rem % static_cast<std::size_t>(l));
                rem /= static_cast<std::size_t>(l);
            }
            AxisBox box;
            box.lo = idx[static_cast<std::size_t>(axis)] * width;
            box.hi = box.lo + width;
            box.cross = cross;
            out.push_back(box);
        }
    }
}

} // namespace

RiskReport excess_risk_exact(const DistributionOracle& oracle, const SetClassifier& s) {
    if (s.dim() != oracle.dim())
        throw std::invalid_argument("excess_risk_exact: dimension mismatch");

    std::vector<AxisBox> boxes;
    if (const auto* tc = s.tree_form()) append_tree_boxes(*tc, oracle.axis(), boxes);
    else append_grid_boxes(*s.grid_form(), oracle.axis(), boxes);

    const auto positive = oracle.positive_axis_intervals();
    const auto pos_part = [&](double lo, double hi) {
        double v = 0.0;
        for (const auto& [a, b] : positive) {
            const double u = std::max(lo, a);
            const double w = std::min(hi, b);
            if (w > u) v += oracle.abs_eta_integral(u, w);
        }
        return v;
    };

    double pos_total = pos_part(0.0, 1.0);
    double acc = pos_total;
    for (const auto& box : boxes) {
        const double pos = pos_part(box.lo, box.hi);
        const double neg = oracle.abs_eta_integral(box.lo, box.hi) - pos;
        acc += box.cross * (neg - pos);
    }

    RiskReport report;
    report.method = RiskReport::Method::kExact;
    report.value = std::max(0.0, acc);
    return report;
}

RiskReport excess_risk_mc(const DistributionOracle& oracle, const SetClassifier& s,
                          std::int64_t n_draws, std::uint64_t seed) {
    if (n_draws < 1) throw std::invalid_argument("excess_risk_mc: need at least one draw");
    if (s.dim() != oracle.dim())
        throw std::invalid_argument("excess_risk_mc: dimension mismatch");

    Rng rng(seed);
    std::vector<double> u(static_cast<std::size_t>(oracle.dim()));
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t i = 0; i < n_draws; ++i) {
        for (double& v : u) v = rng.uniform();
        double term = 0.0;
        if (s.member(u) != oracle.bayes_member(u)) term = std::fabs(oracle.eta(u));
        sum += term;
        sumsq += term * term;
    }
    const double mean = sum / static_cast<double>(n_draws);

    RiskReport report;
    report.method = RiskReport::Method::kMonteCarlo;
    report.value = mean;
    if (n_draws > 1) {
        const double var =
            std::max(0.0, (sumsq - static_cast<double>(n_draws) * mean * mean)) /
            static_cast<double>(n_draws - 1);
        report.std_error = std::sqrt(var / static_cast<double>(n_draws));
    }
    return report;
}

} // namespace dyadtree
