#pragma once

// Discretized L2([0,1]): functions sampled on a uniform grid with the
// plain 1/d-weighted inner product.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fepls {

// Uniform grid 0 = x_1 < ... < x_d = 1. A one-point grid holds {0}.
class Grid {
public:
    explicit Grid(std::size_t d);

    std::size_t size() const noexcept { return d_; }
    double point(std::size_t k) const noexcept;
    std::vector<double> points() const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t d_;
};

class FunctionSample {
public:
    FunctionSample(Grid grid, std::vector<double> values);

    static FunctionSample zeros(Grid grid);
    static FunctionSample constant(Grid grid, double c);
    static FunctionSample from_function(Grid grid, const std::function<double(double)>& f);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t k) const noexcept { return values_[k]; }

    FunctionSample& operator+=(const FunctionSample& other);
    FunctionSample& operator-=(const FunctionSample& other);
    FunctionSample& operator*=(double c) noexcept;

    // this += c * other
    void add_scaled(const FunctionSample& other, double c);

    friend FunctionSample operator+(FunctionSample a, const FunctionSample& b) { return a += b; }
    friend FunctionSample operator-(FunctionSample a, const FunctionSample& b) { return a -= b; }
    friend FunctionSample operator*(double c, FunctionSample a) { return a *= c; }
    friend FunctionSample operator-(FunctionSample a) { return a *= -1.0; }

private:
    Grid grid_;
    std::vector<double> values_;
};

double inner_product(const FunctionSample& a, const FunctionSample& b);
double norm(const FunctionSample& a);

// Threshold below which normalize() reports a degenerate direction.
double degeneracy_threshold(const Grid& grid) noexcept;

FunctionSample normalize(const FunctionSample& a);

// One Gram-Schmidt step: the unit component of `a` orthogonal to the
// unit-norm `against`.
FunctionSample orthogonalize(const FunctionSample& a, const FunctionSample& against);

}  // namespace fepls
