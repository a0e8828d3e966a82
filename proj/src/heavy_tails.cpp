#include "fepls/heavy_tails.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fepls/errors.hpp"

namespace fepls {

BurrLaw::BurrLaw(double gamma, double rho) : gamma_(gamma), rho_(rho) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("Burr tail index must lie in (0,1)");
    if (!(rho < 0.0)) throw DomainError("Burr second-order parameter must be negative");
}

double BurrLaw::survival(double y) const {
    if (!(y >= 0.0)) throw DomainError("survival needs y >= 0, got " + std::to_string(y));
    if (y == 0.0) return 1.0;
    return std::exp(std::log1p(std::pow(y, -rho_ / gamma_)) / rho_);
}

double BurrLaw::density(double y) const {
    if (!(y > 0.0)) throw DomainError("density needs y > 0, got " + std::to_string(y));
    const double a = -rho_ / gamma_;
    const double ya = std::pow(y, a);
    // (1/gamma) y^{a-1} (1 + y^a)^{1/rho - 1}
    return std::exp(std::log(ya / y) + (1.0 / rho_ - 1.0) * std::log1p(ya)) / gamma_;
}

double BurrLaw::tail_quantile(double t) const {
    if (!(t > 1.0)) throw DomainError("tail quantile needs t > 1, got " + std::to_string(t));
    return std::pow(std::expm1(-rho_ * std::log(t)), -gamma_ / rho_);
}

double BurrLaw::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile level must lie in (0,1)");
    // 1/(1-p) computed through log1p to keep precision for small p.
    return std::pow(std::expm1(rho_ * std::log1p(-p)), -gamma_ / rho_);
}

double BurrLaw::auxiliary(double t) const {
    const double tr = std::pow(t, rho_);
    return gamma_ * tr / (1.0 - tr);
}

double BurrLaw::draw(Rng& rng) const {
    // U(1/V) = (V^rho - 1)^{-gamma/rho}
    return std::pow(std::expm1(rho_ * std::log(rng.uniform())), -gamma_ / rho_);
}

std::vector<double> BurrLaw::sample(std::size_t n, std::uint64_t seed) const {
    if (n == 0) throw DomainError("sample size must be positive");
    Rng rng(seed);
    std::vector<double> out(n);
    for (double& y : out) y = draw(rng);
    return out;
}

std::vector<double> BurrLaw::second_order_check(double y, std::span<const double> t_values) const {
    if (!(y > 0.0)) throw DomainError("second-order check needs y > 0");
    std::vector<double> out;
    out.reserve(t_values.size());
    const double yg = std::pow(y, gamma_);
    for (double t : t_values) {
        if (!(t > 1.0)) throw DomainError("second-order check needs t > 1");
        const double ratio = tail_quantile(t * y) / tail_quantile(t);
        out.push_back((ratio - yg) / auxiliary(t));
    }
    return out;
}

double BurrLaw::second_order_limit(double y) const {
    return std::pow(y, gamma_) * (std::pow(y, rho_) - 1.0) / rho_;
}

SortedSample::SortedSample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw DomainError("sorted sample needs at least one value");
    std::stable_sort(values_.begin(), values_.end());
}

double SortedSample::top(std::size_t i) const {
    if (i == 0 || i > values_.size()) throw DomainError("order statistic index out of range");
    return values_[values_.size() - i];
}

namespace {

void check_tail_range(const SortedSample& sorted, std::size_t k) {
    if (k < 1 || k + 1 > sorted.size())
        throw DomainError("k must lie in [1, n-1], got " + std::to_string(k));
    if (!(sorted.top(k + 1) > 0.0))
        throw DomainError("threshold order statistic must be positive");
}

}  // namespace

double hill(const SortedSample& sorted, std::size_t k) {
    check_tail_range(sorted, k);
    const double log_threshold = std::log(sorted.top(k + 1));
    double sum = 0.0;
    for (std::size_t i = 1; i <= k; ++i) sum += std::log(sorted.top(i)) - log_threshold;
    return sum / static_cast<double>(k);
}

QqPlot qq_plot_data(const SortedSample& sorted, std::size_t k) {
    check_tail_range(sorted, k);
    const double threshold = sorted.top(k + 1);
    QqPlot plot;
    plot.points.reserve(k);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
        const double x = std::log(static_cast<double>(k + 1) / static_cast<double>(i));
        const double y = std::log(sorted.top(i) / threshold);
        plot.points.push_back({x, y});
        sxy += x * y;
        sxx += x * x;
    }
    plot.slope = sxy / sxx;
    return plot;
}

}  // namespace fepls
