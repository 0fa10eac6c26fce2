#pragma once

// Synthetic distributions with uniform marginal on [0,1]^d and a regression
// function eta depending on a single axis, so the Bayes set and the excess
// risk of interval-structured classifiers have closed forms.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dyadtree/classifier.hpp"
#include "dyadtree/dataset.hpp"

namespace dyadtree {

enum class EtaKind {
    kSignedPower, // eta = sign(t - 1/2) |t - 1/2|^delta
    kMassart,     // eta = A sign(t - 1/2)
    kStripe,      // eta = +/-A constant on the 2^level dyadic slabs
};

class DistributionOracle {
  public:
    static DistributionOracle signed_power(int dim, double delta, int axis = 0);
    static DistributionOracle massart(int dim, double amplitude, int axis = 0);
    static DistributionOracle stripe(int dim, double amplitude, int level,
                                     std::vector<int> pattern, int axis = 0);

    int dim() const { return dim_; }
    int axis() const { return axis_; }
    EtaKind kind() const { return kind_; }
    double delta() const { return delta_; }
    double amplitude() const { return amplitude_; }

    double eta(std::span<const double> p) const;
    bool bayes_member(std::span<const double> p) const { return eta(p) >= 0.0; }

    // x uniform, then y = +1 with probability (1+eta(x))/2; all coordinates
    // are drawn before any label so datasets are reproducible.
    Dataset sample(int n, std::uint64_t seed) const;

    // Exact mass of {|eta| <= t} for 0 < t <= 1.
    double margin_mass(double t) const;

    // eta as a function of the active coordinate.
    double eta_axis(double t) const;
    // Integral of |eta_axis| over [lo, hi] in closed form.
    double abs_eta_integral(double lo, double hi) const;
    // Disjoint sorted intervals where eta_axis >= 0.
    std::vector<std::pair<double, double>> positive_axis_intervals() const;

    // Margin exponent (infinity for the constant-|eta| kinds) and the
    // smoothness exponent that governs the theoretical rate.
    double margin_alpha() const;
    double smoothness_beta() const;

  private:
    DistributionOracle() = default;
    EtaKind kind_ = EtaKind::kSignedPower;
    int dim_ = 1;
    int axis_ = 0;
    double delta_ = 1.0;
    double amplitude_ = 1.0;
    int stripe_level_ = 1;
    std::vector<int> pattern_;
};

struct RiskReport {
    enum class Method { kExact, kMonteCarlo };
    double value = 0.0;
    Method method = Method::kExact;
    double std_error = 0.0; // Monte Carlo only
};

// Closed-form excess risk for classifiers whose positive set is a union of
// axis-interval x box pieces: plain trees (any d), decorated trees in d=1,
// and uniform grids.  Throws std::invalid_argument otherwise.
RiskReport excess_risk_exact(const DistributionOracle& oracle, const SetClassifier& s);

// (1/N) sum |eta(u)| 1{u in S symdiff Bayes set} over uniform draws, with
// its standard error.
RiskReport excess_risk_mc(const DistributionOracle& oracle, const SetClassifier& s,
                          std::int64_t n_draws, std::uint64_t seed);

} // namespace dyadtree
