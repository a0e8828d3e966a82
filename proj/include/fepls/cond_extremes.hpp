#pragma once

// Kernel (Nadaraya-Watson) conditional distribution, quantile and tail-index
// estimators given a functional covariate or its projection on a direction.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "fepls/dataset.hpp"
#include "fepls/func_space.hpp"

namespace fepls {

// How observations are compared with the conditioning point.
class CovariateView {
public:
    // Distance ||X_i - z|| in the discretized L2 norm.
    static CovariateView functional() { return CovariateView(std::nullopt); }
    // Distance |<X_i, direction> - t|; the direction must have unit norm.
    static CovariateView projected(FunctionSample direction);

    bool is_projected() const noexcept { return direction_.has_value(); }
    const FunctionSample& direction() const { return *direction_; }

private:
    explicit CovariateView(std::optional<FunctionSample> direction) : direction_(std::move(direction)) {}
    std::optional<FunctionSample> direction_;
};

// A function for the functional view, a scalar for the projected view.
using CovariatePoint = std::variant<FunctionSample, double>;

struct KernelConfig {
    // Fixed bandwidth; the adaptive rule h*(z) is used when empty.
    std::optional<double> bandwidth;
};

// Documented fixed bandwidth of the projected VaR scatter curves.
inline constexpr double kScatterBandwidth = 5e-5;

std::vector<double> covariate_distances(const Dataset& data, const CovariateView& view, const CovariatePoint& z);

// Step conditional cdf built from responses and kernel weights.
class ConditionalDistribution {
public:
    ConditionalDistribution(std::span<const double> Y, std::span<const double> distances, double bandwidth);

    double cdf(double y) const;
    // inf{y > 0 : F(y) >= alpha}, attained at an observed response.
    double quantile(double alpha) const;

private:
    std::vector<double> sorted_y_;
    std::vector<double> cumulative_;  // cumulative_[j] = weight of the j smallest responses
};

double gaussian_kernel(double u) noexcept;

// min{h > 0 : #{i : dist_i < h} = floor(n/5)}, realized as d_(m) + 1e-12 (1 + d_(m)).
double adaptive_bandwidth(std::span<const double> distances);
double adaptive_bandwidth(const Dataset& data, const CovariateView& view, const CovariatePoint& z);

double conditional_cdf(const Dataset& data, const CovariateView& view, const CovariatePoint& z,
                       const KernelConfig& cfg, double y);
double conditional_quantile(const Dataset& data, const CovariateView& view, const CovariatePoint& z,
                            const KernelConfig& cfg, double alpha);

inline constexpr std::size_t kDefaultHillTerms = 9;

// (1/log J!) sum_{j=1}^J (log q(1 - (1-alpha)/j) - log q(alpha)) for any quantile map q.
double functional_hill_from_quantiles(const std::function<double(double)>& quantile, double alpha,
                                      std::size_t J = kDefaultHillTerms);
double functional_hill(const Dataset& data, const CovariateView& view, const CovariatePoint& z,
                       const KernelConfig& cfg, double alpha, std::size_t J = kDefaultHillTerms);

enum class TargetMeasure { quantile, tail_index };

struct BoxplotSummary {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    // Most extreme values within 1.5 IQR of the quartiles.
    double lower_whisker = 0.0;
    double upper_whisker = 0.0;
    std::size_t count = 0;
    std::size_t excluded = 0;
};

// Linear-interpolation sample quantile (type 7) of unsorted values.
double sample_quantile(std::vector<double> values, double p);
BoxplotSummary boxplot_summary(std::span<const double> values, std::size_t excluded = 0);

struct RelativeErrorCurve {
    std::vector<double> s;
    // 100 |(psi_functional - psi_projected) / psi_projected|; NaN where excluded.
    std::vector<double> delta;
    std::vector<bool> excluded;
    std::size_t excluded_count = 0;
    BoxplotSummary summary;
};

// Relative error between the functional estimate at s x and the projected
// estimate at s <x, tilde_beta>, over grid_size equispaced s spanning the
// range of <X_i, x>. Both sides use the adaptive bandwidth.
RelativeErrorCurve relative_error_curve(const Dataset& data, const FunctionSample& x_dir,
                                        const FunctionSample& tilde_beta, double alpha, TargetMeasure psi,
                                        std::size_t grid_size, std::size_t J = kDefaultHillTerms);

}  // namespace fepls
