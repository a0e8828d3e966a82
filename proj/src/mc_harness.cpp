#include "fepls/mc_harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fepls/cond_extremes.hpp"
#include "fepls/errors.hpp"
#include "fepls/fepls_core.hpp"
#include "fepls/parallel.hpp"
#include "fepls/rng.hpp"

namespace fepls {

void ExperimentPlan::validate() const {
    spec.validate();
    if (replications < 2) throw DomainError("an experiment needs at least 2 replications");
    if (tau_values.empty()) throw DomainError("an experiment needs at least one tau");
    for (std::size_t k : k_values)
        if (k < 1 || k > spec.n) throw DomainError("k values must lie in [1, n]");
    const std::size_t upper = k_max.value_or(spec.n / 5);
    if (k_min < 5 || upper < k_min || upper > spec.n) throw DomainError("invalid k range for threshold selection");
}

namespace {

struct TauReplication {
    std::vector<double> inner;
    std::vector<double> correlation;
    std::vector<double> direction;
    std::size_t k_hat = 0;
    double inner_at_selected = 0.0;
    double error = 0.0;
};

struct Replication {
    bool ok = false;
    std::vector<TauReplication> per_tau;
};

Replication run_replication(const ExperimentPlan& plan, std::uint64_t seed) {
    Replication rep;
    const Dataset data = generate(plan.spec, seed);
    const FunctionSample& beta = *data.index;
    const std::size_t k_max = plan.k_max.value_or(plan.spec.n / 5);
    for (double tau : plan.tau_values) {
        TailScan scan(data, TestFunction{tau});
        TauReplication out;
        for (std::size_t k : plan.k_values) {
            out.inner.push_back(inner_product(scan.fit(k).direction, beta));
            out.correlation.push_back(scan.correlation(k));
        }
        std::vector<double> r;
        for (std::size_t k = plan.k_min; k <= k_max; ++k) r.push_back(scan.correlation(k));
        out.k_hat = argmax_k(r, plan.k_min, SelectionMode::simulation);
        const FeplsFit fit = scan.fit(out.k_hat);
        out.direction.assign(fit.direction.values().begin(), fit.direction.values().end());
        out.inner_at_selected = inner_product(fit.direction, beta);
        out.error = norm(fit.direction - beta);
        rep.per_tau.push_back(std::move(out));
    }
    rep.ok = true;
    return rep;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? std::numeric_limits<double>::quiet_NaN() : s / static_cast<double>(v.size());
}

}  // namespace

ExperimentResult run_experiment(const ExperimentPlan& plan) {
    plan.validate();
    std::vector<Replication> reps(plan.replications);
    parallel_for(plan.replications, [&](std::size_t r) {
        const std::uint64_t seed = split_seed(plan.seed, plan.reuse_seed ? 0 : r);
        try {
            reps[r] = run_replication(plan, seed);
        } catch (const std::exception&) {
            reps[r].ok = false;
        }
    });

    ExperimentResult result;
    for (const auto& rep : reps) (rep.ok ? result.successes : result.failures)++;

    const std::size_t d = plan.spec.grid().size();
    for (std::size_t j = 0; j < plan.tau_values.size(); ++j) {
        TauSummary summary;
        summary.tau = plan.tau_values[j];
        ModelSpec spec_tau = plan.spec;
        spec_tau.tau = summary.tau;
        summary.admissible = spec_tau.admissible();
        summary.mean_inner.assign(plan.k_values.size(), 0.0);
        summary.mean_correlation.assign(plan.k_values.size(), 0.0);
        std::vector<std::vector<double>> pointwise(d);
        for (const auto& rep : reps) {
            if (!rep.ok) continue;
            const TauReplication& t = rep.per_tau[j];
            for (std::size_t i = 0; i < plan.k_values.size(); ++i) {
                summary.mean_inner[i] += t.inner[i];
                summary.mean_correlation[i] += t.correlation[i];
            }
            for (std::size_t p = 0; p < d; ++p) pointwise[p].push_back(t.direction[p]);
            summary.selected_k[t.k_hat]++;
            summary.inner_at_selected.push_back(t.inner_at_selected);
            summary.errors.push_back(t.error);
        }
        const double count = static_cast<double>(result.successes);
        for (std::size_t i = 0; i < plan.k_values.size(); ++i) {
            summary.mean_inner[i] /= count;
            summary.mean_correlation[i] /= count;
        }
        if (result.successes > 0) {
            for (std::size_t p = 0; p < d; ++p) {
                summary.band_lower.push_back(sample_quantile(pointwise[p], 0.05));
                summary.band_mean.push_back(mean_of(pointwise[p]));
                summary.band_upper.push_back(sample_quantile(pointwise[p], 0.95));
            }
        }
        summary.mean_inner_at_selected = mean_of(summary.inner_at_selected);
        result.per_tau.push_back(std::move(summary));
    }
    return result;
}

RateRegression rate_regression(const ModelSpec& spec, const std::vector<std::size_t>& n_values,
                               const std::function<std::size_t(std::size_t)>& k_rule, std::size_t replications,
                               std::uint64_t seed, double q) {
    if (n_values.size() < 3) throw DomainError("rate regression needs at least 3 sample sizes");
    for (std::size_t i = 1; i < n_values.size(); ++i)
        if (n_values[i] <= n_values[i - 1]) throw DomainError("sample sizes must increase");
    if (replications < 1) throw DomainError("rate regression needs replications");

    RateRegression out;
    out.n_values = n_values;
    for (std::size_t n : n_values) {
        ModelSpec spec_n = spec;
        spec_n.n = n;
        const std::size_t k = k_rule(n);
        if (k < 1 || k >= n) throw DomainError("k rule must give 1 <= k < n");
        std::vector<double> errors(replications, std::numeric_limits<double>::quiet_NaN());
        const std::uint64_t seed_n = split_seed(seed, n);
        parallel_for(replications, [&](std::size_t r) {
            try {
                const Dataset data = generate(spec_n, split_seed(seed_n, r));
                TailScan scan(data, TestFunction{spec.tau});
                errors[r] = norm(scan.fit(k).direction - *data.index);
            } catch (const std::exception&) {
            }
        });
        std::vector<double> ok;
        for (double e : errors)
            if (std::isfinite(e)) ok.push_back(e);
        out.failures += replications - ok.size();
        if (ok.empty()) throw NumericalError("every replication failed for n = " + std::to_string(n));
        const double y_nk = spec.law.tail_quantile(static_cast<double>(n) / static_cast<double>(k));
        out.k_values.push_back(k);
        out.deltas.push_back(rate_delta(spec.link(y_nk), k, n, q));
        out.median_errors.push_back(sample_quantile(ok, 0.5));
    }

    out.exact_fit = std::all_of(out.median_errors.begin(), out.median_errors.end(), [](double e) { return e < 1e-12; });
    if (out.exact_fit) return out;

    const std::size_t m = out.deltas.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += std::log(out.deltas[i]);
        my += std::log(out.median_errors[i]);
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dx = std::log(out.deltas[i]) - mx;
        sxy += dx * (std::log(out.median_errors[i]) - my);
        sxx += dx * dx;
    }
    if (!(sxx > 0.0)) throw NumericalError("rate regression is degenerate: all delta values coincide");
    out.slope = sxy / sxx;
    return out;
}

namespace {

void check_joint_range(std::size_t n, std::size_t k) {
    if (k < 2 || k >= n) throw DomainError("joint order-statistic density needs 2 <= k < n");
}

double log_factorial(double m) { return std::lgamma(m + 1.0); }

}  // namespace

double order_stat_density(const BurrLaw& law, std::size_t n, std::size_t k, double y) {
    if (k < 1 || k > n) throw DomainError("order statistic needs 1 <= k <= n");
    if (!(y > 0.0)) return 0.0;
    const double nd = static_cast<double>(n), kd = static_cast<double>(k);
    const double log_c = log_factorial(nd) - log_factorial(nd - kd) - log_factorial(kd - 1.0);
    const double sf = law.survival(y);
    return law.density(y) * std::exp(log_c + (nd - kd) * std::log1p(-sf) + (kd - 1.0) * std::log(sf));
}

JointDensity order_stat_joint_density(const BurrLaw& law, std::size_t n, std::size_t k, double t, double y) {
    check_joint_range(n, k);
    if (y > t) return {0.0, false};
    if (!(y > 0.0)) return {0.0, true};
    const double nd = static_cast<double>(n), kd = static_cast<double>(k);
    const double log_c = log_factorial(nd - 1.0) - log_factorial(nd - kd) - log_factorial(kd - 2.0);
    const double sf = law.survival(y);
    const double value = law.density(t) * law.density(y) *
                         std::exp(log_c + (nd - kd) * std::log1p(-sf) + (kd - 2.0) * std::log(sf));
    return {value, true};
}

JointDensity order_stat_joint_density_below(const BurrLaw& law, std::size_t n, std::size_t k, double t, double y) {
    check_joint_range(n, k);
    if (!(t < y)) return {0.0, false};
    if (!(t > 0.0)) return {0.0, true};
    const double nd = static_cast<double>(n), kd = static_cast<double>(k);
    const double log_c = log_factorial(nd - 1.0) - log_factorial(nd - kd - 1.0) - log_factorial(kd - 1.0);
    const double sf = law.survival(y);
    const double value = law.density(t) * law.density(y) *
                         std::exp(log_c + (nd - kd - 1.0) * std::log1p(-sf) + (kd - 1.0) * std::log(sf));
    return {value, true};
}

Marginalization marginalize_joint_density(const BurrLaw& law, std::size_t n, std::size_t k, double y) {
    check_joint_range(n, k);
    if (!(y > 0.0)) throw DomainError("marginalization needs y > 0");
    Marginalization out;
    boost::math::quadrature::exp_sinh<double> upper;
    out.above = upper.integrate([&](double t) { return order_stat_joint_density(law, n, k, t, y).value; }, y,
                                std::numeric_limits<double>::infinity(), 1e-14);
    out.below = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double t) { return order_stat_joint_density_below(law, n, k, t, y).value; }, 0.0, y, 15, 1e-14);
    out.order_density = order_stat_density(law, n, k, y);
    out.atom = out.order_density / static_cast<double>(n);
    return out;
}

TailMomentOracle conditional_tail_moment_oracle(const BurrLaw& law, const std::function<double(double)>& h,
                                                std::size_t n, std::size_t k, double y,
                                                std::optional<double> h_index) {
    if (k < 2 || k > n) throw DomainError("tail-moment identity needs 2 <= k <= n");
    if (!(y >= 0.0)) throw DomainError("tail-moment identity needs y >= 0");
    const double lower = std::max(y, std::numeric_limits<double>::min());
    boost::math::quadrature::exp_sinh<double> integrator;
    double integral = 0.0, error = 0.0, l1 = 0.0;
    try {
        integral = integrator.integrate([&](double t) { return h(t) * law.density(t); }, lower,
                                        std::numeric_limits<double>::infinity(), 1e-13, &error, &l1);
    } catch (const std::exception& e) {
        throw DomainError(std::string("tail integral does not converge: ") + e.what());
    }
    if (!std::isfinite(integral) || !std::isfinite(error) || error > 1e-6 * std::max(l1, 1e-300))
        throw DomainError("tail integral does not converge");

    const double scale = static_cast<double>(k - 1) / static_cast<double>(n);
    const double sf = law.survival(y);
    TailMomentOracle out;
    out.exact = scale * integral / sf;
    out.quadrature_error = scale * error / sf;
    if (h_index) out.asymptotic = scale * h(y) / (1.0 - *h_index * law.gamma());
    return out;
}

namespace {

// k-th largest of the sample; reorders `sample`.
double kth_largest(std::vector<double>& sample, std::size_t k) {
    const auto pos = sample.begin() + static_cast<std::ptrdiff_t>(sample.size() - k);
    std::nth_element(sample.begin(), pos, sample.end());
    return *pos;
}

}  // namespace

MonteCarloEstimate conditional_tail_moment_mc(const BurrLaw& law, const std::function<double(double)>& h,
                                              std::size_t n, std::size_t k, double y, std::uint64_t seed,
                                              std::size_t min_hits) {
    if (k < 2 || k > n) throw DomainError("tail-moment identity needs 2 <= k <= n");
    if (!(y > 0.0)) throw DomainError("conditioning level must be positive");
    const double y_hi = y * 1.05;
    constexpr std::size_t kMaxDraws = 100'000'000;

    MonteCarloEstimate out;
    double sum = 0.0, sum_sq = 0.0;
    std::vector<double> sample(n);
    std::size_t batch = 10 * min_hits;
    while (out.hits < min_hits) {
        if (out.draws >= kMaxDraws) throw NumericalError("conditioning window is too rarely hit");
        const std::size_t end = out.draws + batch;
        for (; out.draws < end; ++out.draws) {
            Rng rng(split_seed(seed, out.draws));
            for (double& v : sample) v = law.draw(rng);
            const double first = sample[0];
            const double threshold = kth_largest(sample, k);
            if (threshold < y || threshold > y_hi) continue;
            const double value = first > threshold ? h(first) : 0.0;
            sum += value;
            sum_sq += value * value;
            ++out.hits;
        }
        batch *= 2;
    }
    const double hits = static_cast<double>(out.hits);
    out.mean = sum / hits;
    const double var = std::max(0.0, (sum_sq / hits - out.mean * out.mean) * hits / (hits - 1.0));
    out.standard_error = std::sqrt(var / hits);
    return out;
}

std::vector<MonteCarloEstimate> joint_density_histogram(const BurrLaw& law, std::size_t n, std::size_t k,
                                                        const std::vector<DensityCell>& cells, std::size_t draws,
                                                        std::uint64_t seed) {
    check_joint_range(n, k);
    std::vector<std::size_t> counts(cells.size(), 0);
    std::vector<double> sample(n);
    for (std::size_t r = 0; r < draws; ++r) {
        Rng rng(split_seed(seed, r));
        for (double& v : sample) v = law.draw(rng);
        const double first = sample[0];
        const double threshold = kth_largest(sample, k);
        if (!(first > threshold)) continue;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const DensityCell& cell = cells[c];
            if (first >= cell.t_lo && first < cell.t_hi && threshold >= cell.y_lo && threshold < cell.y_hi)
                ++counts[c];
        }
    }
    std::vector<MonteCarloEstimate> out;
    const double total = static_cast<double>(draws);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const DensityCell& cell = cells[c];
        const double area = (cell.t_hi - cell.t_lo) * (cell.y_hi - cell.y_lo);
        const double p = static_cast<double>(counts[c]) / total;
        out.push_back({p / area, std::sqrt(p * (1.0 - p) / total) / area, counts[c], draws});
    }
    return out;
}

double joint_density_cell_average(const BurrLaw& law, std::size_t n, std::size_t k, const DensityCell& cell) {
    using boost::math::quadrature::gauss;
    const double integral = gauss<double, 30>::integrate(
        [&](double y) {
            return gauss<double, 30>::integrate(
                [&](double t) { return order_stat_joint_density(law, n, k, t, y).value; }, cell.t_lo, cell.t_hi);
        },
        cell.y_lo, cell.y_hi);
    return integral / ((cell.t_hi - cell.t_lo) * (cell.y_hi - cell.y_lo));
}

}  // namespace fepls
