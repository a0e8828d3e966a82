#include "fepls/fepls_core.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <string>

#include "fepls/errors.hpp"

namespace fepls {

double TestFunction::operator()(double y) const {
    if (!(y > 0.0)) throw DomainError("test function is defined for y > 0 only");
    return std::pow(y, tau);
}

double tail_moment_scalar(std::span<const double> W, std::span<const double> Y, double y) {
    if (Y.empty()) throw DomainError("tail moment of an empty sample");
    if (W.size() != Y.size()) throw DomainError("tail moment inputs differ in length");
    double sum = 0.0;
    for (std::size_t i = 0; i < Y.size(); ++i)
        if (Y[i] >= y) sum += W[i];
    return sum / static_cast<double>(Y.size());
}

FunctionSample tail_moment_functional(std::span<const FunctionSample> X, std::span<const double> weights,
                                      std::span<const double> Y, double y) {
    if (Y.empty()) throw DomainError("tail moment of an empty sample");
    if (X.size() != Y.size() || weights.size() != Y.size())
        throw DomainError("tail moment inputs differ in length");
    FunctionSample sum = FunctionSample::zeros(X.front().grid());
    for (std::size_t i = 0; i < Y.size(); ++i)
        if (Y[i] >= y) sum.add_scaled(X[i], weights[i]);
    return (1.0 / static_cast<double>(Y.size())) * std::move(sum);
}

std::vector<std::size_t> descending_order(std::span<const double> Y) {
    std::vector<std::size_t> order(Y.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return Y[a] > Y[b]; });
    return order;
}

double rate_delta(double g_eval, std::size_t k, std::size_t n, double q) {
    if (!(g_eval > 0.0)) throw DomainError("rate needs g(y) > 0");
    if (k == 0 || k > n) throw DomainError("rate needs 0 < k <= n");
    if (!(q > 2.0)) throw DomainError("rate needs q > 2");
    const double frac = static_cast<double>(k) / static_cast<double>(n);
    return 1.0 / (g_eval * std::pow(frac, 1.0 / q));
}

TailScan::TailScan(const Dataset& data, TestFunction phi)
    : data_(data), phi_(phi), order_(descending_order(data.Y)) {
    data.validate();
    if (data.size() == 0) throw InsufficientDataError("empty dataset");
    prefix_.push_back(std::vector<double>(data.grid.size(), 0.0));
    dropped_.push_back(0);
}

double TailScan::threshold(std::size_t k) const {
    if (k == 0 || k > order_.size())
        throw DomainError("k must lie in [1, n], got " + std::to_string(k));
    return data_.Y[order_[k - 1]];
}

std::size_t TailScan::exceedances(std::size_t k) const {
    const double t = threshold(k);
    std::size_t m = k;
    while (m < order_.size() && data_.Y[order_[m]] >= t) ++m;
    return m;
}

void TailScan::extend_to(std::size_t m) {
    while (prefix_.size() <= m) {
        const std::size_t idx = order_[prefix_.size() - 1];
        std::vector<double> next = prefix_.back();
        std::size_t dropped = dropped_.back();
        const double y = data_.Y[idx];
        if (y > 0.0) {
            const double w = phi_(y);
            const auto x = data_.X[idx].values();
            for (std::size_t p = 0; p < next.size(); ++p) next[p] += w * x[p];
        } else {
            ++dropped;
        }
        prefix_.push_back(std::move(next));
        dropped_.push_back(dropped);
    }
}

FeplsFit TailScan::fit(std::size_t k, const FitOptions& options) {
    const std::size_t m = exceedances(k);
    extend_to(m);
    const double inv_n = 1.0 / static_cast<double>(order_.size());
    std::vector<double> v = prefix_[m];
    for (double& x : v) x *= inv_n;
    FunctionSample raw(data_.grid, std::move(v));

    FeplsFit fit{.direction = normalize(raw),
                 .k = k,
                 .threshold = threshold(k),
                 .tau = phi_.tau,
                 .raw_norm = norm(raw),
                 .q = options.q,
                 .rate = std::nullopt,
                 .dropped_nonpositive = dropped_[m]};
    if (options.kappa && fit.threshold > 0.0)
        fit.rate = rate_delta(std::pow(fit.threshold, *options.kappa), k, order_.size(), options.q);
    return fit;
}

double TailScan::correlation(std::size_t k) {
    const FeplsFit f = fit(k);
    double sy = 0.0, sp = 0.0, syp = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
        const std::size_t idx = concomitant(i);
        const double p = inner_product(f.direction, data_.X[idx]);
        const double y = data_.Y[idx];
        sy += y;
        sp += p;
        syp += y * p;
    }
    const double kd = static_cast<double>(k);
    return syp / kd - (sy / kd) * (sp / kd);
}

FeplsFit fepls_direction(const Dataset& data, TestFunction phi, std::size_t k, const FitOptions& options) {
    TailScan scan(data, phi);
    FeplsFit fit = scan.fit(k, options);
    if (fit.dropped_nonpositive > 0)
        std::clog << "warning: " << fit.dropped_nonpositive
                  << " tail observation(s) with non-positive response left out of the FEPLS sum\n";
    return fit;
}

FunctionSample cov_direction(const Dataset& data, double y) {
    data.validate();
    const std::size_t n = data.size();
    std::size_t count = 0;
    for (double v : data.Y)
        if (v >= y) ++count;
    if (count < 2) throw InsufficientDataError("conditional covariance needs at least 2 exceedances");

    const std::vector<double> ones(n, 1.0);
    const double surv = tail_moment_scalar(ones, data.Y, y);
    const double m_y = tail_moment_scalar(data.Y, data.Y, y);
    const FunctionSample m_x = tail_moment_functional(data.X, ones, data.Y, y);
    const FunctionSample m_xy = tail_moment_functional(data.X, data.Y, data.Y, y);
    FunctionSample v = surv * m_xy;
    v.add_scaled(m_x, -m_y);
    return normalize(v);
}

std::vector<double> correlation_curve(const Dataset& data, TestFunction phi, std::size_t k_min, std::size_t k_max) {
    if (k_min < 2 || k_max > data.size() || k_min > k_max)
        throw DomainError("correlation range must satisfy 2 <= k_min <= k_max <= n");
    TailScan scan(data, phi);
    std::vector<double> r;
    r.reserve(k_max - k_min + 1);
    for (std::size_t k = k_min; k <= k_max; ++k) r.push_back(scan.correlation(k));
    return r;
}

std::size_t argmax_k(std::span<const double> r, std::size_t k_min, SelectionMode mode) {
    std::size_t best = k_min;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < r.size(); ++j) {
        const double v = (mode == SelectionMode::data) ? std::abs(r[j]) : r[j];
        if (v > best_value) {
            best_value = v;
            best = k_min + j;
        }
    }
    return best;
}

std::size_t select_k(const Dataset& data, TestFunction phi, SelectionMode mode, const KRange& range) {
    const std::size_t n = data.size();
    if (n < 25) throw InsufficientDataError("threshold selection needs n >= 25");
    const std::size_t k_max = range.max.value_or(n / 5);
    if (range.min < 5 || k_max < range.min || k_max > n)
        throw DomainError("invalid k range for threshold selection");
    return argmax_k(correlation_curve(data, phi, range.min, k_max), range.min, mode);
}

}  // namespace fepls
