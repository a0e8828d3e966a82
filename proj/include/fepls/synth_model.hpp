#pragma once

// Inverse single-index model X = g(Y) beta + eps with conditional
// fractional-Brownian-motion noise.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fepls/dataset.hpp"
#include "fepls/func_space.hpp"
#include "fepls/heavy_tails.hpp"
#include "fepls/rng.hpp"

namespace fepls {

// Covariance (sigma^2/2)(t^{2H} + s^{2H} - |t-s|^{2H}) of sigma * B^H.
double fbm_covariance(double hurst, double sigma, double s, double t);

// Samples mu + sigma * B^H on a grid. The Cholesky factor of the unit-sigma
// covariance on the positive grid points is computed once per generator;
// the value at x = 0 is pinned to mu.
class FbmGenerator {
public:
    FbmGenerator(double hurst, Grid grid);

    double hurst() const noexcept { return hurst_; }
    const Grid& grid() const noexcept { return grid_; }
    // Diagonal jitter that was added before the factorization succeeded.
    double jitter() const noexcept { return jitter_; }
    double min_pivot() const noexcept { return min_pivot_; }

    FunctionSample sample(double sigma, double mu, Rng& rng) const;

private:
    double hurst_;
    Grid grid_;
    std::size_t m_;              // number of positive grid points
    std::vector<double> lower_;  // row-major lower-triangular factor, m x m
    double jitter_ = 0.0;
    double min_pivot_ = 0.0;
};

FunctionSample sample_fbm(double hurst, double sigma, double mu, const Grid& grid, std::uint64_t seed);

// sqrt(2) sin(2 pi t) on the grid, not renormalized.
FunctionSample default_index(const Grid& grid);

struct ModelSpec {
    BurrLaw law{0.5, -1.0};
    double kappa = 1.5;
    double tau = -2.0;
    FunctionSample index = FunctionSample::constant(Grid(1), 1.0);
    double hurst = 1.0 / 3.0;
    double mu = 200.0;
    // Noise standard deviation as a multiple of g(y) = y^kappa.
    double sigma_scale = 0.1;
    // Replaces sigma_scale * g(y) when set.
    std::function<double(double)> sigma_override;
    std::size_t n = 500;

    const Grid& grid() const noexcept { return index.grid(); }
    double link(double y) const;
    double sigma(double y) const;
    // Whether 0 < 2 (kappa + tau) gamma < 1.
    bool admissible() const;

    // Throws on violated invariants (unit index, hurst range, kappa > 0, n > 0).
    void validate() const;

    // Default design: Burr(gamma, rho), beta = sqrt(2) sin(2 pi .) renormalized
    // on a d-point grid, (H, mu) = (1/3, 200), sigma = g/10.
    static ModelSpec design(double gamma, double rho, double kappa, double tau, std::size_t d,
                            std::size_t n);
};

// Draws observations first_index .. first_index + spec.n - 1. Observation i
// uses the stream split_seed(seed, i), so consecutive calls concatenate.
Dataset generate(const ModelSpec& spec, std::uint64_t seed, std::size_t first_index = 0,
                 bool keep_noise = false);

}  // namespace fepls
