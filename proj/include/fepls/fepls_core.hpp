#pragma once

// Functional extreme-PLS estimators: tail moments, the direction estimate
// beta_phi(Y_{n-k+1,n}), the conditional-covariance direction, threshold
// selection and the consistency rate delta_{n,k}.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fepls/dataset.hpp"
#include "fepls/func_space.hpp"

namespace fepls {

// phi(y) = y^tau, defined for y > 0.
struct TestFunction {
    double tau = 0.0;
    double operator()(double y) const;
};

struct FitOptions {
    // Integrability order used for the rate.
    double q = 4.0;
    // Link exponent of g(y) = y^kappa; the rate is only reported when known.
    std::optional<double> kappa;
};

struct FeplsFit {
    FunctionSample direction;
    std::size_t k = 0;
    // Y_{n-k+1,n}
    double threshold = 0.0;
    double tau = 0.0;
    // Norm of the unnormalized tail moment.
    double raw_norm = 0.0;
    double q = 4.0;
    std::optional<double> rate;
    // Tail observations with Y_i <= 0, left out of the weighted sum.
    std::size_t dropped_nonpositive = 0;
};

enum class SelectionMode {
    simulation,  // maximize r(k)
    data,        // maximize |r(k)|
};

struct KRange {
    std::size_t min = 5;
    // Defaults to floor(n/5).
    std::optional<std::size_t> max;
};

// (1/n) sum W_i 1{Y_i >= y}
double tail_moment_scalar(std::span<const double> W, std::span<const double> Y, double y);

// (1/n) sum X_i w_i 1{Y_i >= y}
FunctionSample tail_moment_functional(std::span<const FunctionSample> X, std::span<const double> weights,
                                      std::span<const double> Y, double y);

// Indices ordering Y from largest to smallest; tied values keep their
// original relative order.
std::vector<std::size_t> descending_order(std::span<const double> Y);

FeplsFit fepls_direction(const Dataset& data, TestFunction phi, std::size_t k, const FitOptions& options = {});

// Unit direction of F(y) m_XY(y) - m_X(y) m_Y(y), the maximizer of the
// empirical covariance of <w, X> and Y given Y >= y.
FunctionSample cov_direction(const Dataset& data, double y);

// r(k) for k = k_min..k_max.
std::vector<double> correlation_curve(const Dataset& data, TestFunction phi, std::size_t k_min, std::size_t k_max);

std::size_t select_k(const Dataset& data, TestFunction phi, SelectionMode mode, const KRange& range = {});

// Argmax of r(k) (or |r(k)|) over k_min + offset; ties go to the smallest k.
std::size_t argmax_k(std::span<const double> r, std::size_t k_min, SelectionMode mode);

// (g(y_{n,k}) (k/n)^{1/q})^{-1}
double rate_delta(double g_eval, std::size_t k, std::size_t n, double q);

// Incremental evaluation of beta_phi(Y_{n-k+1,n}) and r(k) for increasing k.
// Tail sums are accumulated along descending_order(Y), so the direction at k
// is bitwise identical to fepls_direction(data, phi, k).
class TailScan {
public:
    TailScan(const Dataset& data, TestFunction phi);

    std::size_t size() const noexcept { return order_.size(); }
    // Original index of Y_{n-i+1,n} (i = 1..n).
    std::size_t concomitant(std::size_t i) const { return order_[i - 1]; }
    double threshold(std::size_t k) const;

    FeplsFit fit(std::size_t k, const FitOptions& options = {});
    double correlation(std::size_t k);

private:
    // Number of observations with Y_i >= Y_{n-k+1,n}.
    std::size_t exceedances(std::size_t k) const;
    void extend_to(std::size_t m);

    const Dataset& data_;
    TestFunction phi_;
    std::vector<std::size_t> order_;
    // prefix_[m] = sum of X phi(Y) over the m largest responses (unscaled).
    std::vector<std::vector<double>> prefix_;
    std::vector<std::size_t> dropped_;
};

}  // namespace fepls
