#include "fepls/cond_extremes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fepls/errors.hpp"
#include "fepls/parallel.hpp"

namespace fepls {

CovariateView CovariateView::projected(FunctionSample direction) {
    if (std::abs(norm(direction) - 1.0) > 1e-10) throw DomainError("projection direction must have unit norm");
    return CovariateView(std::move(direction));
}

std::vector<double> covariate_distances(const Dataset& data, const CovariateView& view, const CovariatePoint& z) {
    std::vector<double> out(data.size());
    if (view.is_projected()) {
        const double* t = std::get_if<double>(&z);
        if (!t) throw DomainError("projected view needs a scalar conditioning point");
        for (std::size_t i = 0; i < data.size(); ++i)
            out[i] = std::abs(inner_product(data.X[i], view.direction()) - *t);
    } else {
        const FunctionSample* f = std::get_if<FunctionSample>(&z);
        if (!f) throw DomainError("functional view needs a function as conditioning point");
        for (std::size_t i = 0; i < data.size(); ++i) out[i] = norm(data.X[i] - *f);
    }
    return out;
}

double gaussian_kernel(double u) noexcept { return std::exp(-0.5 * u * u); }

ConditionalDistribution::ConditionalDistribution(std::span<const double> Y, std::span<const double> distances,
                                                 double bandwidth) {
    if (Y.empty()) throw InsufficientDataError("conditional distribution of an empty sample");
    if (Y.size() != distances.size()) throw DomainError("responses and distances differ in length");
    if (!(bandwidth > 0.0)) throw DomainError("bandwidth must be positive");

    // Kernel weights relative to the closest observation; the common factor
    // cancels in the ratio and keeps the denominator away from underflow.
    const double u_min = *std::min_element(distances.begin(), distances.end()) / bandwidth;
    std::vector<std::size_t> order(Y.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return Y[a] < Y[b]; });

    sorted_y_.reserve(Y.size());
    cumulative_.assign(1, 0.0);
    for (std::size_t idx : order) {
        const double u = distances[idx] / bandwidth;
        sorted_y_.push_back(Y[idx]);
        cumulative_.push_back(cumulative_.back() + std::exp(-0.5 * (u * u - u_min * u_min)));
    }
}

double ConditionalDistribution::cdf(double y) const {
    const auto j = static_cast<std::size_t>(std::upper_bound(sorted_y_.begin(), sorted_y_.end(), y) - sorted_y_.begin());
    return cumulative_[j] / cumulative_.back();
}

double ConditionalDistribution::quantile(double alpha) const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("quantile level must lie in (0,1)");
    const double total = cumulative_.back();
    const auto it = std::find_if(std::next(cumulative_.begin()), cumulative_.end(),
                                 [&](double c) { return c / total >= alpha; });
    std::size_t j = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
    if (sorted_y_[j] <= 0.0) {
        const auto pos = std::upper_bound(sorted_y_.begin(), sorted_y_.end(), 0.0);
        if (pos == sorted_y_.end()) throw DomainError("no positive response to serve as quantile");
        j = static_cast<std::size_t>(pos - sorted_y_.begin());
    }
    return sorted_y_[j];
}

double adaptive_bandwidth(std::span<const double> distances) {
    const std::size_t n = distances.size();
    if (n < 5) throw InsufficientDataError("adaptive bandwidth needs n >= 5");
    const std::size_t m = n / 5;
    std::vector<double> sorted(distances.begin(), distances.end());
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(m - 1), sorted.end());
    const double dm = sorted[m - 1];
    return dm + 1e-12 * (1.0 + dm);
}

double adaptive_bandwidth(const Dataset& data, const CovariateView& view, const CovariatePoint& z) {
    return adaptive_bandwidth(covariate_distances(data, view, z));
}

namespace {

ConditionalDistribution conditional_law(const Dataset& data, const CovariateView& view, const CovariatePoint& z,
                                        const KernelConfig& cfg) {
    if (data.size() == 0) throw InsufficientDataError("empty dataset");
    const std::vector<double> dist = covariate_distances(data, view, z);
    const double h = cfg.bandwidth ? *cfg.bandwidth : adaptive_bandwidth(dist);
    return ConditionalDistribution(data.Y, dist, h);
}

}  // namespace

double conditional_cdf(const Dataset& data, const CovariateView& view, const CovariatePoint& z,
                       const KernelConfig& cfg, double y) {
    return conditional_law(data, view, z, cfg).cdf(y);
}

double conditional_quantile(const Dataset& data, const CovariateView& view, const CovariatePoint& z,
                            const KernelConfig& cfg, double alpha) {
    return conditional_law(data, view, z, cfg).quantile(alpha);
}

double functional_hill_from_quantiles(const std::function<double(double)>& quantile, double alpha, std::size_t J) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("tail level must lie in (0,1)");
    if (J < 2) throw DomainError("functional Hill needs J >= 2");
    const double base = quantile(alpha);
    if (!(base > 0.0)) throw DomainError("functional Hill needs positive quantiles");
    const double log_base = std::log(base);
    double sum = 0.0;
    for (std::size_t j = 1; j <= J; ++j) {
        const double qj = quantile(1.0 - (1.0 - alpha) / static_cast<double>(j));
        if (!(qj > 0.0)) throw DomainError("functional Hill needs positive quantiles");
        sum += std::log(qj) - log_base;
    }
    return sum / std::lgamma(static_cast<double>(J) + 1.0);
}

double functional_hill(const Dataset& data, const CovariateView& view, const CovariatePoint& z,
                       const KernelConfig& cfg, double alpha, std::size_t J) {
    const ConditionalDistribution law = conditional_law(data, view, z, cfg);
    return functional_hill_from_quantiles([&](double a) { return law.quantile(a); }, alpha, J);
}

double sample_quantile(std::vector<double> values, double p) {
    if (values.empty()) throw InsufficientDataError("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

BoxplotSummary boxplot_summary(std::span<const double> values, std::size_t excluded) {
    BoxplotSummary out;
    out.excluded = excluded;
    out.count = values.size();
    if (values.empty()) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out.min = out.q1 = out.median = out.q3 = out.max = out.lower_whisker = out.upper_whisker = nan;
        return out;
    }
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    out.min = v.front();
    out.max = v.back();
    out.q1 = sample_quantile(v, 0.25);
    out.median = sample_quantile(v, 0.5);
    out.q3 = sample_quantile(v, 0.75);
    const double iqr = out.q3 - out.q1;
    const double lo_fence = out.q1 - 1.5 * iqr;
    const double hi_fence = out.q3 + 1.5 * iqr;
    out.lower_whisker = *std::find_if(v.begin(), v.end(), [&](double x) { return x >= lo_fence; });
    out.upper_whisker = *std::find_if(v.rbegin(), v.rend(), [&](double x) { return x <= hi_fence; });
    return out;
}

RelativeErrorCurve relative_error_curve(const Dataset& data, const FunctionSample& x_dir,
                                        const FunctionSample& tilde_beta, double alpha, TargetMeasure psi,
                                        std::size_t grid_size, std::size_t J) {
    data.validate();
    if (grid_size == 0) throw DomainError("error curve needs at least one grid point");
    if (data.size() < 5) throw InsufficientDataError("error curve needs n >= 5");
    const std::size_t n = data.size();

    std::vector<double> along_x(n), projected(n);
    for (std::size_t i = 0; i < n; ++i) {
        along_x[i] = inner_product(data.X[i], x_dir);
        projected[i] = inner_product(data.X[i], tilde_beta);
    }
    const double lo = *std::min_element(along_x.begin(), along_x.end());
    const double hi = *std::max_element(along_x.begin(), along_x.end());
    const double x_on_beta = inner_product(x_dir, tilde_beta);

    RelativeErrorCurve curve;
    curve.s.resize(grid_size);
    for (std::size_t l = 0; l < grid_size; ++l)
        curve.s[l] = grid_size == 1 ? lo
                                    : lo + (hi - lo) * static_cast<double>(l) / static_cast<double>(grid_size - 1);
    curve.delta.assign(grid_size, std::numeric_limits<double>::quiet_NaN());
    curve.excluded.assign(grid_size, false);

    auto estimate = [&](const ConditionalDistribution& law) {
        if (psi == TargetMeasure::quantile) return law.quantile(alpha);
        return functional_hill_from_quantiles([&](double a) { return law.quantile(a); }, alpha, J);
    };

    std::vector<char> flags(grid_size, 0);
    parallel_for(grid_size, [&](std::size_t l) {
        const double s = curve.s[l];
        std::vector<double> dist_f(n), dist_p(n);
        const auto xv = x_dir.values();
        for (std::size_t i = 0; i < n; ++i) {
            const auto xi = data.X[i].values();
            double acc = 0.0;
            for (std::size_t p = 0; p < xi.size(); ++p) {
                const double diff = xi[p] - s * xv[p];
                acc += diff * diff;
            }
            dist_f[i] = std::sqrt(acc / static_cast<double>(xi.size()));
            dist_p[i] = std::abs(projected[i] - s * x_on_beta);
        }
        try {
            const ConditionalDistribution f_law(data.Y, dist_f, adaptive_bandwidth(dist_f));
            const ConditionalDistribution p_law(data.Y, dist_p, adaptive_bandwidth(dist_p));
            const double pf = estimate(f_law);
            const double pp = estimate(p_law);
            if (pp == 0.0 || !std::isfinite(pp) || !std::isfinite(pf)) {
                flags[l] = 1;
                return;
            }
            curve.delta[l] = 100.0 * std::abs((pf - pp) / pp);
        } catch (const DomainError&) {
            flags[l] = 1;
        }
    });

    std::vector<double> kept;
    for (std::size_t l = 0; l < grid_size; ++l) {
        curve.excluded[l] = flags[l] != 0;
        if (curve.excluded[l])
            ++curve.excluded_count;
        else
            kept.push_back(curve.delta[l]);
    }
    curve.summary = boxplot_summary(kept, curve.excluded_count);
    return curve;
}

}  // namespace fepls
