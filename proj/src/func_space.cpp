#include "fepls/func_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fepls/errors.hpp"

namespace fepls {

Grid::Grid(std::size_t d) : d_(d) {
    if (d == 0) throw DomainError("grid needs at least one point");
}

double Grid::point(std::size_t k) const noexcept {
    if (d_ == 1) return 0.0;
    if (k + 1 == d_) return 1.0;
    return static_cast<double>(k) / static_cast<double>(d_ - 1);
}

std::vector<double> Grid::points() const {
    std::vector<double> out(d_);
    for (std::size_t k = 0; k < d_; ++k) out[k] = point(k);
    return out;
}

FunctionSample::FunctionSample(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw GridMismatchError("function has " + std::to_string(values_.size()) +
                                " values on a grid of " + std::to_string(grid_.size()) + " points");
    for (double v : values_)
        if (!std::isfinite(v)) throw DomainError("function values must be finite");
}

FunctionSample FunctionSample::zeros(Grid grid) {
    return FunctionSample(grid, std::vector<double>(grid.size(), 0.0));
}

FunctionSample FunctionSample::constant(Grid grid, double c) {
    return FunctionSample(grid, std::vector<double>(grid.size(), c));
}

FunctionSample FunctionSample::from_function(Grid grid, const std::function<double(double)>& f) {
    std::vector<double> values(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) values[k] = f(grid.point(k));
    return FunctionSample(grid, std::move(values));
}

namespace {

void require_same_grid(const FunctionSample& a, const FunctionSample& b) {
    if (!(a.grid() == b.grid()))
        throw GridMismatchError("grids differ: " + std::to_string(a.grid().size()) + " vs " +
                                std::to_string(b.grid().size()) + " points");
}

}  // namespace

FunctionSample& FunctionSample::operator+=(const FunctionSample& other) {
    add_scaled(other, 1.0);
    return *this;
}

FunctionSample& FunctionSample::operator-=(const FunctionSample& other) {
    add_scaled(other, -1.0);
    return *this;
}

FunctionSample& FunctionSample::operator*=(double c) noexcept {
    for (double& v : values_) v *= c;
    return *this;
}

void FunctionSample::add_scaled(const FunctionSample& other, double c) {
    require_same_grid(*this, other);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += c * other.values_[k];
}

double inner_product(const FunctionSample& a, const FunctionSample& b) {
    require_same_grid(a, b);
    const auto va = a.values();
    const auto vb = b.values();
    const double sum = std::inner_product(va.begin(), va.end(), vb.begin(), 0.0);
    return sum / static_cast<double>(a.size());
}

double norm(const FunctionSample& a) { return std::sqrt(inner_product(a, a)); }

double degeneracy_threshold(const Grid& grid) noexcept {
    return 1e-300 * static_cast<double>(grid.size());
}

FunctionSample normalize(const FunctionSample& a) {
    const double n = norm(a);
    if (!(n > degeneracy_threshold(a.grid())))
        throw DegenerateDirectionError("cannot normalize a direction of norm " + std::to_string(n));
    return (1.0 / n) * a;
}

FunctionSample orthogonalize(const FunctionSample& a, const FunctionSample& against) {
    FunctionSample residual = a;
    residual.add_scaled(against, -inner_product(a, against));
    // A second pass removes what rounding left behind.
    residual.add_scaled(against, -inner_product(residual, against));
    const double scale = std::max(norm(a), 1.0);
    if (norm(residual) <= 1e-12 * scale)
        throw DegenerateDirectionError("direction is collinear with the reference");
    return normalize(residual);
}

}  // namespace fepls
