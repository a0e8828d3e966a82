#include "fepls/synth_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fepls/errors.hpp"
#include "fepls/parallel.hpp"

namespace fepls {

void Dataset::validate() const {
    if (X.size() != Y.size())
        throw ValidationError("dataset has " + std::to_string(X.size()) + " curves and " +
                              std::to_string(Y.size()) + " responses");
    for (const auto& x : X)
        if (!(x.grid() == grid)) throw GridMismatchError("dataset curve is not on the dataset grid");
    if (index && !(index->grid() == grid)) throw GridMismatchError("index is not on the dataset grid");
}

double fbm_covariance(double hurst, double sigma, double s, double t) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("Hurst parameter must lie in (0,1)");
    if (!(sigma >= 0.0)) throw DomainError("fBm scale must be nonnegative");
    if (!(s >= 0.0 && s <= 1.0 && t >= 0.0 && t <= 1.0)) throw DomainError("fBm times must lie in [0,1]");
    const double h2 = 2.0 * hurst;
    return 0.5 * sigma * sigma * (std::pow(t, h2) + std::pow(s, h2) - std::pow(std::abs(t - s), h2));
}

namespace {

// In-place Cholesky of a row-major symmetric matrix; returns the smallest
// pivot, or a non-positive value at the first failing pivot.
double cholesky(std::vector<double>& a, std::size_t m) {
    double min_pivot = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
        double diag = a[j * m + j];
        for (std::size_t p = 0; p < j; ++p) diag -= a[j * m + p] * a[j * m + p];
        min_pivot = std::min(min_pivot, diag);
        if (!(diag > 0.0)) return diag;
        const double ljj = std::sqrt(diag);
        a[j * m + j] = ljj;
        for (std::size_t i = j + 1; i < m; ++i) {
            double v = a[i * m + j];
            for (std::size_t p = 0; p < j; ++p) v -= a[i * m + p] * a[j * m + p];
            a[i * m + j] = v / ljj;
        }
        for (std::size_t i = 0; i < j; ++i) a[i * m + j] = 0.0;
    }
    return min_pivot;
}

}  // namespace

FbmGenerator::FbmGenerator(double hurst, Grid grid) : hurst_(hurst), grid_(grid), m_(grid.size() - 1) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("Hurst parameter must lie in (0,1)");
    std::vector<double> cov(m_ * m_);
    double max_diag = 0.0;
    for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t j = 0; j < m_; ++j) {
            cov[i * m_ + j] = fbm_covariance(hurst, 1.0, grid.point(i + 1), grid.point(j + 1));
            if (i == j) max_diag = std::max(max_diag, cov[i * m_ + j]);
        }
    // Up to three escalations of the diagonal jitter, x10 each.
    double jitter = 0.0;
    for (int attempt = 0; attempt <= 4; ++attempt) {
        lower_ = cov;
        for (std::size_t i = 0; i < m_; ++i) lower_[i * m_ + i] += jitter;
        min_pivot_ = cholesky(lower_, m_);
        if (m_ == 0 || min_pivot_ > 0.0) {
            jitter_ = jitter;
            return;
        }
        jitter = (attempt == 0) ? 1e-12 * max_diag : jitter * 10.0;
    }
    throw NumericalError("fBm covariance factorization failed after jitter escalation");
}

FunctionSample FbmGenerator::sample(double sigma, double mu, Rng& rng) const {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("fBm scale must be finite and nonnegative");
    std::vector<double> z(m_);
    for (double& v : z) v = rng.normal();
    std::vector<double> values(m_ + 1, mu);
    for (std::size_t i = 0; i < m_; ++i) {
        const double* row = &lower_[i * m_];
        double acc = 0.0;
        for (std::size_t j = 0; j <= i; ++j) acc += row[j] * z[j];
        values[i + 1] = mu + sigma * acc;
    }
    return FunctionSample(grid_, std::move(values));
}

FunctionSample sample_fbm(double hurst, double sigma, double mu, const Grid& grid, std::uint64_t seed) {
    FbmGenerator gen(hurst, grid);
    Rng rng(seed);
    return gen.sample(sigma, mu, rng);
}

FunctionSample default_index(const Grid& grid) {
    return FunctionSample::from_function(
        grid, [](double t) { return std::numbers::sqrt2 * std::sin(2.0 * std::numbers::pi * t); });
}

double ModelSpec::link(double y) const { return std::pow(y, kappa); }

double ModelSpec::sigma(double y) const {
    if (sigma_override) return sigma_override(y);
    return sigma_scale * link(y);
}

bool ModelSpec::admissible() const {
    const double c = 2.0 * (kappa + tau) * law.gamma();
    return c > 0.0 && c < 1.0;
}

void ModelSpec::validate() const {
    if (!(kappa > 0.0)) throw DomainError("link exponent kappa must be positive");
    if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("Hurst parameter must lie in (0,1)");
    if (n == 0) throw DomainError("sample size must be positive");
    if (std::abs(norm(index) - 1.0) > 1e-10) throw DomainError("index must have unit norm");
    if (!(sigma_scale >= 0.0)) throw DomainError("noise scale must be nonnegative");
}

ModelSpec ModelSpec::design(double gamma, double rho, double kappa, double tau, std::size_t d,
                            std::size_t n) {
    ModelSpec spec;
    spec.law = BurrLaw(gamma, rho);
    spec.kappa = kappa;
    spec.tau = tau;
    spec.index = normalize(default_index(Grid(d)));
    spec.n = n;
    return spec;
}

Dataset generate(const ModelSpec& spec, std::uint64_t seed, std::size_t first_index, bool keep_noise) {
    spec.validate();
    const Grid grid = spec.grid();
    const FbmGenerator fbm(spec.hurst, grid);

    std::vector<double> Y(spec.n);
    std::vector<std::optional<FunctionSample>> X(spec.n);
    std::vector<std::optional<FunctionSample>> noise(keep_noise ? spec.n : 0);
    parallel_for(spec.n, [&](std::size_t j) {
        Rng rng(split_seed(seed, first_index + j));
        const double y = spec.law.draw(rng);
        FunctionSample eps = fbm.sample(spec.sigma(y), spec.mu, rng);
        const double g = spec.link(y);
        std::vector<double> values(grid.size());
        for (std::size_t k = 0; k < values.size(); ++k) values[k] = g * spec.index[k] + eps[k];
        Y[j] = y;
        X[j].emplace(grid, std::move(values));
        if (keep_noise) noise[j].emplace(std::move(eps));
    });

    Dataset data;
    data.grid = grid;
    data.Y = std::move(Y);
    data.X.reserve(spec.n);
    for (auto& x : X) data.X.push_back(std::move(*x));
    for (auto& e : noise) data.noise.push_back(std::move(*e));
    data.index = spec.index;
    data.seed = seed;
    return data;
}

}  // namespace fepls
