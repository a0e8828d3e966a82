#pragma once

// Burr response law and univariate tail diagnostics.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fepls/rng.hpp"

namespace fepls {

// Burr law with survival (1 + y^{-rho/gamma})^{1/rho}, y >= 0.
//
// Its tail quantile function U(t) = (t^{-rho} - 1)^{-gamma/rho} is second-order
// regularly varying with index (gamma, rho) and auxiliary function
// A(t) = gamma t^rho / (1 - t^rho).
class BurrLaw {
public:
    BurrLaw(double gamma, double rho);

    double gamma() const noexcept { return gamma_; }
    double rho() const noexcept { return rho_; }

    double survival(double y) const;
    double cdf(double y) const { return 1.0 - survival(y); }
    double density(double y) const;
    double tail_quantile(double t) const;
    // F^-(p) for p in (0, 1).
    double quantile(double p) const;
    double auxiliary(double t) const;

    // One inverse-transform draw U(1/V), V uniform on (0,1).
    double draw(Rng& rng) const;
    std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

    // (U(ty)/U(t) - y^gamma) / A(t) for each t; tends to y^gamma (y^rho - 1)/rho.
    std::vector<double> second_order_check(double y, std::span<const double> t_values) const;
    double second_order_limit(double y) const;

private:
    double gamma_;
    double rho_;
};

// Order statistics Y_{1,n} <= ... <= Y_{n,n}.
class SortedSample {
public:
    explicit SortedSample(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    // Y_{n-i+1,n}: the i-th largest value, i = 1..n.
    double top(std::size_t i) const;

private:
    std::vector<double> values_;
};

double hill(const SortedSample& sorted, std::size_t k);

struct QqPoint {
    double abscissa;
    double ordinate;
};

struct QqPlot {
    std::vector<QqPoint> points;
    // Least-squares slope through the origin.
    double slope;
};

// Exponential QQ-plot of the log-excesses over Y_{n-k,n}.
QqPlot qq_plot_data(const SortedSample& sorted, std::size_t k);

}  // namespace fepls
