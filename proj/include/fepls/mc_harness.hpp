#pragma once

// Monte Carlo experiments on the synthetic model, the empirical rate check,
// and executable forms of the order-statistic identities behind the
// random-threshold analysis.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "fepls/func_space.hpp"
#include "fepls/heavy_tails.hpp"
#include "fepls/synth_model.hpp"

namespace fepls {

struct ExperimentPlan {
    ModelSpec spec;
    std::size_t replications = 500;
    std::vector<std::size_t> k_values;
    std::vector<double> tau_values;
    std::uint64_t seed = 0;
    std::size_t k_min = 5;
    // Defaults to floor(n/5).
    std::optional<std::size_t> k_max;
    // Every replication reuses the stream of replication 0.
    bool reuse_seed = false;

    void validate() const;
};

struct TauSummary {
    double tau = 0.0;
    bool admissible = false;
    // Per k in k_values, averaged over successful replications.
    std::vector<double> mean_inner;
    std::vector<double> mean_correlation;
    // Pointwise 5% quantile, mean and 95% quantile of beta_phi(Y_{n-khat+1,n})(t).
    std::vector<double> band_lower;
    std::vector<double> band_mean;
    std::vector<double> band_upper;
    std::map<std::size_t, std::size_t> selected_k;
    // Per successful replication, at the selected k.
    std::vector<double> inner_at_selected;
    std::vector<double> errors;
    double mean_inner_at_selected = 0.0;
};

struct ExperimentResult {
    std::vector<TauSummary> per_tau;
    std::size_t successes = 0;
    std::size_t failures = 0;
};

// Replication r uses split_seed(plan.seed, r); results are reduced in
// replication order and do not depend on scheduling.
ExperimentResult run_experiment(const ExperimentPlan& plan);

struct RateRegression {
    std::vector<std::size_t> n_values;
    std::vector<std::size_t> k_values;
    std::vector<double> deltas;
    std::vector<double> median_errors;
    std::size_t failures = 0;
    // Set when every median error is at rounding level; no slope is fitted.
    bool exact_fit = false;
    std::optional<double> slope;

    bool consistent() const { return exact_fit || (slope && *slope >= 0.5 && *slope <= 1.5); }
};

// Least-squares slope of log median ||beta_phi(Y_{n-k+1,n}) - beta|| on
// log delta_{n,k}, with y_{n,k} = U(n/k) from the model law.
RateRegression rate_regression(const ModelSpec& spec, const std::vector<std::size_t>& n_values,
                               const std::function<std::size_t(std::size_t)>& k_rule, std::size_t replications,
                               std::uint64_t seed, double q = 4.0);

// Density of Y_{n-k+1,n}.
double order_stat_density(const BurrLaw& law, std::size_t n, std::size_t k, double y);

struct JointDensity {
    double value = 0.0;
    bool in_support = true;
};

// Joint density of (Y_i, Y_{n-k+1,n}) at (t, y) on the region y <= t.
JointDensity order_stat_joint_density(const BurrLaw& law, std::size_t n, std::size_t k, double t, double y);
// Joint density of (Y_i, Y_{n-k+1,n}) at (t, y) on the region t < y.
JointDensity order_stat_joint_density_below(const BurrLaw& law, std::size_t n, std::size_t k, double t, double y);

// Components of the threshold density obtained by integrating the joint law
// of (Y_i, Y_{n-k+1,n}) over t.
struct Marginalization {
    double above = 0.0;  // integral over t > y of the joint density
    double below = 0.0;  // integral over t < y
    double atom = 0.0;   // Y_i is the threshold itself (probability 1/n)
    double order_density = 0.0;
    double total() const { return above + below + atom; }
};
Marginalization marginalize_joint_density(const BurrLaw& law, std::size_t n, std::size_t k, double y);

struct TailMomentOracle {
    double exact = 0.0;
    double quadrature_error = 0.0;
    // ((k-1)/n) h(y) / (1 - h_index gamma), when the regular-variation index of h is given.
    std::optional<double> asymptotic;
};

// E(h(Y_i) 1{Y_i > Y_{n-k+1,n}} | Y_{n-k+1,n} = y) = ((k-1)/n) (1/F(y)) int_y^inf h f,
// by adaptive quadrature.
TailMomentOracle conditional_tail_moment_oracle(const BurrLaw& law, const std::function<double(double)>& h,
                                                std::size_t n, std::size_t k, double y,
                                                std::optional<double> h_index = std::nullopt);

struct MonteCarloEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t hits = 0;
    std::size_t draws = 0;
};

// Conditional Monte Carlo counterpart of the oracle: samples of size n are
// kept when Y_{n-k+1,n} falls in [y, y + 0.05 y], escalating the number of
// samples until at least min_hits are kept.
MonteCarloEstimate conditional_tail_moment_mc(const BurrLaw& law, const std::function<double(double)>& h,
                                              std::size_t n, std::size_t k, double y, std::uint64_t seed,
                                              std::size_t min_hits = 500);

struct DensityCell {
    double t_lo, t_hi, y_lo, y_hi;
};

// Histogram estimate of the joint density of (Y_1, Y_{n-k+1,n}) on each cell.
std::vector<MonteCarloEstimate> joint_density_histogram(const BurrLaw& law, std::size_t n, std::size_t k,
                                                        const std::vector<DensityCell>& cells, std::size_t draws,
                                                        std::uint64_t seed);

// Cell average of order_stat_joint_density by Gauss-Legendre quadrature.
double joint_density_cell_average(const BurrLaw& law, std::size_t n, std::size_t k, const DensityCell& cell);

}  // namespace fepls
