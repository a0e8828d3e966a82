// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status
// when any criterion fails. Extra NOTE lines carry diagnostics.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "fepls/cond_extremes.hpp"
#include "fepls/errors.hpp"
#include "fepls/fepls_core.hpp"
#include "fepls/heavy_tails.hpp"
#include "fepls/io.hpp"
#include "fepls/mc_harness.hpp"
#include "fepls/pipeline.hpp"
#include "fepls/rng.hpp"
#include "fepls/synth_model.hpp"

namespace fs = std::filesystem;
using namespace fepls;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 4) {
    std::ostringstream s;
    s.precision(prec);
    s << v;
    return s.str();
}

// Diagnostics are buffered and printed after the criterion's verdict line.
std::vector<std::string> pending_notes;

void note(const std::string& text) { pending_notes.push_back(text); }

// Table of admissible test-function exponents per (kappa, gamma) cell.
struct Cell {
    double kappa, gamma;
    std::vector<double> taus;
};

const std::vector<Cell> kCells{
    {1.0, 1.0 / 3.0, {0, -1, -2}}, {1.0, 0.5, {-1, -2, -3}}, {1.0, 0.9, {-1, -2, -3}},
    {1.5, 1.0 / 3.0, {-1, -2, -3}}, {1.5, 0.5, {-1, -2, -3}}, {1.5, 0.9, {-1, -2, -3}},
    {2.0, 1.0 / 3.0, {-1, -2, -3}}, {2.0, 0.5, {-2, -3, -4}}, {2.0, 0.9, {-2, -3, -4}},
};

// ------------------------------------------------------------------ 1
Outcome noiseless_exactness() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    std::size_t fits = 0;
    for (const Cell& c : kCells)
        for (double tau : c.taus) {
            auto spec = ModelSpec::design(c.gamma, -2.0 * c.gamma, c.kappa, tau, 101, 500);
            spec.sigma_scale = 0.0;
            spec.mu = 0.0;
            const Dataset data = generate(spec, 1000 + fits);
            TailScan scan(data, TestFunction{tau});
            for (std::size_t k = 5; k <= 100; ++k) {
                worst = std::max(worst, std::abs(inner_product(scan.fit(k).direction, spec.index) - 1.0));
                ++fits;
            }
        }
    const double secs = seconds_since(t0);
    return {worst <= 1e-12 && secs < 5.0, "max |<b,beta> - 1| = " + fmt(worst) + " over " + std::to_string(fits) +
                                              " fits, " + fmt(secs, 3) + " s"};
}

// ------------------------------------------------------------------ 2
double tail_covariance(const Dataset& data, std::span<const double> w, double y) {
    double sxy = 0.0, sx = 0.0, sy = 0.0, c = 0.0;
    const double d = static_cast<double>(data.grid.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data.Y[i] < y) continue;
        double p = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) p += w[j] * data.X[i][j];
        p /= d;
        sxy += p * data.Y[i];
        sx += p;
        sy += data.Y[i];
        c += 1.0;
    }
    return sxy / c - (sx / c) * (sy / c);
}

// Unit directions (discrete norm) spread evenly over the circle or sphere.
std::vector<std::vector<double>> direction_scan(std::size_t d, std::size_t count) {
    std::vector<std::vector<double>> out;
    const double s = std::sqrt(static_cast<double>(d));
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t j = 0; j < count; ++j) {
        if (d == 2) {
            const double a = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(count);
            out.push_back({s * std::cos(a), s * std::sin(a)});
        } else {
            const double z = 1.0 - (2.0 * static_cast<double>(j) + 1.0) / static_cast<double>(count);
            const double r = std::sqrt(1.0 - z * z);
            const double phi = golden * static_cast<double>(j);
            out.push_back({s * r * std::cos(phi), s * r * std::sin(phi), s * z});
        }
    }
    return out;
}

Outcome covariance_oracle() {
    const auto t0 = Clock::now();
    const auto circle = direction_scan(2, 100000);
    const auto sphere = direction_scan(3, 100000);
    double worst = 0.0;
    for (std::uint64_t inst = 0; inst < 20; ++inst) {
        Rng rng(split_seed(77, inst));
        const std::size_t d = 2 + inst % 2;
        const std::size_t n = 5 + inst % 4;
        Dataset data;
        data.grid = Grid(d);
        for (std::size_t i = 0; i < n; ++i) {
            const double y = 0.2 - std::log(rng.uniform());
            std::vector<double> x(d);
            for (std::size_t j = 0; j < d; ++j) x[j] = rng.normal() + (0.5 + j) * y;
            data.X.emplace_back(data.grid, std::move(x));
            data.Y.push_back(y);
        }
        const double y = SortedSample(data.Y).top(n - 2);  // n - 2 exceedances
        const FunctionSample v = cov_direction(data, y);
        const auto& scan = d == 2 ? circle : sphere;
        double best = -1e300;
        std::size_t arg = 0;
        for (std::size_t j = 0; j < scan.size(); ++j) {
            const double c = tail_covariance(data, scan[j], y);
            if (c > best) {
                best = c;
                arg = j;
            }
        }
        const FunctionSample w(data.grid, scan[arg]);
        const double cosine = std::clamp(inner_product(w, v) / (norm(w) * norm(v)), -1.0, 1.0);
        worst = std::max(worst, std::acos(cosine));
    }
    const double secs = seconds_since(t0);
    return {worst < 1e-2 && secs < 30.0,
            "max angle = " + fmt(worst) + " rad over 20 instances, " + fmt(secs, 3) + " s"};
}

// ------------------------------------------------------------------ 3
Outcome constant_h_identity() {
    const BurrLaw law(0.5, -1.0);
    double worst = 0.0, worst_res = 0.0;
    for (auto [n, k] : {std::pair{10u, 3u}, std::pair{100u, 20u}, std::pair{500u, 51u}})
        for (double y : {0.1, 1.0, 5.0, 50.0, 1000.0}) {
            const auto o = conditional_tail_moment_oracle(law, [](double) { return 1.0; }, n, k, y);
            worst = std::max(worst, std::abs(o.exact - static_cast<double>(k - 1) / n));
            worst_res = std::max(worst_res, o.quadrature_error);
        }
    return {worst < 1e-10 && worst_res < 1e-10,
            "max |E - (k-1)/n| = " + fmt(worst) + ", max quadrature residual = " + fmt(worst_res)};
}

// ------------------------------------------------------------------ 4
Outcome joint_density_marginalization() {
    const auto t0 = Clock::now();
    const BurrLaw law(0.5, -1.0);
    double worst_total = 0.0, worst_above = 0.0;
    for (auto [n, k] : {std::pair{5u, 3u}, std::pair{10u, 4u}})
        for (double y : {0.2, 0.7, 1.0, 2.5, 10.0}) {
            const Marginalization m = marginalize_joint_density(law, n, k, y);
            worst_total = std::max(worst_total, std::abs(m.total() / m.order_density - 1.0));
            const double share = static_cast<double>(k - 1) / static_cast<double>(n);
            worst_above = std::max(worst_above, std::abs(m.above / (share * m.order_density) - 1.0));
        }
    note("the upper integral alone carries the share (k-1)/n of the order-statistic density; "
         "the lower integral and the atom {Y_i = threshold} carry the rest");

    std::vector<DensityCell> cells;
    for (double ylo : {0.5, 0.7, 0.9, 1.1, 1.3})
        for (auto [tlo, thi] : {std::pair{1.5, 2.0}, std::pair{2.0, 3.0}}) cells.push_back({tlo, thi, ylo, ylo + 0.2});
    const auto est = joint_density_histogram(law, 5, 3, cells, 10'000'000, 2024);
    double worst_z = 0.0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const double exact = joint_density_cell_average(law, 5, 3, cells[c]);
        worst_z = std::max(worst_z, std::abs(est[c].mean - exact) / est[c].standard_error);
    }
    const double secs = seconds_since(t0);
    const bool ok = worst_total < 1e-6 && worst_above < 1e-6 && worst_z <= 3.0 && secs < 120.0;
    return {ok, "relative marginalization error = " + fmt(worst_total) + ", upper-share error = " +
                    fmt(worst_above) + ", max |z| over 10 cells = " + fmt(worst_z, 3) + ", " + fmt(secs, 3) + " s"};
}

// ------------------------------------------------------------------ 5
ExperimentResult run_cell(const Cell& c, double mu, std::size_t reps, std::uint64_t seed) {
    ExperimentPlan plan;
    plan.spec = ModelSpec::design(c.gamma, -2.0 * c.gamma, c.kappa, -2.0, 101, 500);
    plan.spec.mu = mu;
    plan.replications = reps;
    plan.k_values = {5};
    plan.tau_values = {-2.0};
    plan.seed = seed;
    return run_experiment(plan);
}

Outcome simulation_study() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    for (std::size_t j = 0; j < kCells.size(); ++j) {
        const Cell& c = kCells[j];
        const ExperimentResult res = run_cell(c, 200.0, 100, 500 + j);
        const double m = res.per_tau[0].mean_inner_at_selected;
        const bool strict = (c.kappa >= 1.5) && (c.gamma >= 0.5);
        const double floor = strict ? 0.95 : 0.85;
        ok = ok && res.failures == 0 && m >= floor;
        detail += (detail.empty() ? "" : ", ") + std::string("(") + fmt(c.kappa, 2) + "," + fmt(c.gamma, 3) +
                  ")=" + fmt(m, 3);
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 900.0;
    if (!ok) {
        std::string alt;
        for (std::size_t j = 0; j < kCells.size(); ++j) {
            const double m = run_cell(kCells[j], 0.0, 100, 500 + j).per_tau[0].mean_inner_at_selected;
            alt += (alt.empty() ? "" : ", ") + fmt(m, 4);
        }
        note("same design with a zero noise mean gives " + alt);
    }
    return {ok, "mean <b(k_hat), beta> per (kappa,gamma): " + detail + "; " + fmt(secs, 3) + " s"};
}

// ------------------------------------------------------------------ 6
RateRegression rate_check(double mu) {
    auto spec = ModelSpec::design(0.5, -1.0, 1.5, -1.0, 101, 250);
    spec.mu = mu;
    const auto rule = [](std::size_t n) {
        return static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 0.6)));
    };
    return rate_regression(spec, {250, 500, 1000, 2000}, rule, 50, 99, 4.0);
}

Outcome rate_regression_slope() {
    const auto t0 = Clock::now();
    const RateRegression r = rate_check(200.0);
    const double secs = seconds_since(t0);
    std::string errs;
    for (double e : r.median_errors) errs += (errs.empty() ? "" : ",") + fmt(e, 3);
    const bool ok = r.consistent() && secs < 1200.0;
    if (!ok) {
        const RateRegression alt = rate_check(0.0);
        note("same design with a zero noise mean gives slope " + (alt.slope ? fmt(*alt.slope, 3) : "n/a"));
    }
    return {ok, "slope = " + (r.slope ? fmt(*r.slope, 3) : std::string("n/a")) + ", median errors = " + errs +
                    ", " + fmt(secs, 3) + " s"};
}

// ------------------------------------------------------------------ 7
Outcome hill_estimator() {
    const std::size_t n = 10000;
    std::vector<double> pareto(n);
    for (std::size_t i = 1; i <= n; ++i)
        pareto[i - 1] = std::pow(static_cast<double>(n + 1) / static_cast<double>(i), 0.35);
    const double g1 = hill(SortedSample(pareto), 200);

    const BurrLaw law(0.5, -1.0);
    std::vector<double> estimates;
    for (std::uint64_t s = 0; s < 50; ++s) estimates.push_back(hill(SortedSample(law.sample(n, 300 + s)), 100));
    const double med = sample_quantile(estimates, 0.5);
    return {std::abs(g1 - 0.35) <= 0.02 && std::abs(med - 0.5) <= 0.1,
            "Pareto plug-in: " + fmt(g1, 5) + ", Burr median over 50 seeds: " + fmt(med, 4)};
}

// ------------------------------------------------------------------ 8
Outcome functional_hill_identity() {
    double worst = 0.0;
    for (double gamma : {0.1, 0.35, 0.5, 1.0, 2.0})
        for (double alpha : {0.5, 0.7, 0.9, 0.95, 0.99}) {
            const auto q = [gamma](double a) { return std::pow(1.0 - a, -gamma); };
            worst = std::max(worst, std::abs(functional_hill_from_quantiles(q, alpha, 9) - gamma));
        }
    return {worst < 1e-12, "max deviation = " + fmt(worst)};
}

// ------------------------------------------------------------------ 9
Outcome fbm_sampler() {
    const std::size_t d = 21, reps = 50000;
    const Grid grid(d);
    double worst_z = 0.0, worst_diag = 0.0;
    for (double h : {1.0 / 3.0, 0.5}) {
        const FbmGenerator gen(h, grid);
        std::vector<double> m1(d * d, 0.0), m2(d * d, 0.0);
        Rng rng(split_seed(9, static_cast<std::uint64_t>(h * 1000)));
        for (std::size_t r = 0; r < reps; ++r) {
            const FunctionSample f = gen.sample(1.0, 0.0, rng);
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = a; b < d; ++b) {
                    const double p = f[a] * f[b];
                    m1[a * d + b] += p;
                    m2[a * d + b] += p * p;
                }
        }
        const double N = static_cast<double>(reps);
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = a; b < d; ++b) {
                const double mean = m1[a * d + b] / N;
                const double se = std::sqrt(std::max(0.0, m2[a * d + b] / N - mean * mean) / (N - 1.0));
                const double exact = fbm_covariance(h, 1.0, grid.point(a), grid.point(b));
                const double diff = std::abs(mean - exact);
                if (diff > 0.0) worst_z = std::max(worst_z, se > 0.0 ? diff / se : 1e300);
                if (h == 0.5 && a == b && a > 0)
                    worst_diag = std::max(worst_diag, std::abs(mean / grid.point(a) - 1.0));
            }
    }
    return {worst_z <= 3.0 && worst_diag <= 0.05,
            "max |z| over covariance entries = " + fmt(worst_z, 3) + ", max relative diagonal error (H=1/2) = " +
                fmt(worst_diag, 3)};
}

// ------------------------------------------------------------------ 10
Outcome kernel_oracles() {
    double worst = 0.0;
    std::size_t galois_violations = 0, quantile_mismatch = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        Rng rng(split_seed(1234, s));
        const std::size_t n = 30 + 7 * s, d = 4;
        Dataset data;
        data.grid = Grid(d);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> x(d);
            for (auto& v : x) v = rng.normal();
            data.X.emplace_back(data.grid, std::move(x));
            data.Y.push_back(std::exp(rng.normal()));
        }
        const auto view = CovariateView::functional();
        const CovariatePoint z = FunctionSample::zeros(data.grid);
        const std::vector<double> dist = covariate_distances(data, view, z);
        const ConditionalDistribution wide(data.Y, dist, 1e9);
        std::vector<double> sorted = data.Y;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t j = 0; j < n; ++j) {
            const double emp = static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), sorted[j]) -
                                                   sorted.begin()) / static_cast<double>(n);
            worst = std::max(worst, std::abs(wide.cdf(sorted[j]) - emp));
        }
        const ConditionalDistribution local(data.Y, dist, adaptive_bandwidth(dist));
        // At levels j/n the generalized inverse jumps, so mid-step levels are the well-posed comparison.
        for (std::size_t j = 0; j < n; ++j) {
            const double a = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
            if (wide.quantile(a) != sorted[j]) ++quantile_mismatch;
        }
        for (double a = 0.02; a < 1.0; a += 0.02) {
            for (const ConditionalDistribution* law : {&wide, &local}) {
                const double q = law->quantile(a);
                for (double y : sorted)
                    if ((law->cdf(y) >= a) != (y >= q)) ++galois_violations;
            }
        }
    }
    return {worst < 1e-10 && quantile_mismatch == 0 && galois_violations == 0,
            "max cdf deviation = " + fmt(worst) + ", quantile mismatches = " + std::to_string(quantile_mismatch) +
                ", Galois violations = " + std::to_string(galois_violations)};
}

// ------------------------------------------------------------------ CLI helpers
const fs::path kWork = fs::temp_directory_path() / "fepls_acceptance";

int run_cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + "'" + std::string(FEPLS_CLI_PATH) + "' " + args +
                            " > '" + (kWork / "cli_stdout.txt").string() + "' 2> '" +
                            (kWork / "cli_stderr.txt").string() + "'";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string manifest_entry(const fs::path& dir, const std::string& key) {
    const Manifest m = Manifest::read(dir / "manifest.txt");
    const std::string* v = m.find(key);
    return v ? *v : std::string();
}

// ------------------------------------------------------------------ 11
std::string iso_minute(std::int64_t minute) {
    using namespace std::chrono;
    const sys_days day{days{minute / 1440}};
    const year_month_day ymd{day};
    const std::int64_t rem = minute % 1440;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(rem / 60), static_cast<long long>(rem % 60));
    return buf;
}

// Two synthetic minute series whose shared returns yield 341 blocks pairs
// of 1440 minutes. The response misses one minute in every 1000.
void write_market(const fs::path& cov_path, const fs::path& resp_path) {
    const std::int64_t start = parse_timestamp("2013-01-02T00:00");
    const std::int64_t target = 341 * 2 * 1440 + 700;
    std::int64_t span = target;
    const auto shared = [](std::int64_t T) { return T - (T + 1) / 1000; };
    while (shared(span) < target) ++span;

    const BurrLaw jumps(0.35, -0.7);
    Rng rng(split_seed(5150, 0));
    std::ofstream cov(cov_path), resp(resp_path);
    cov << "timestamp,price\n";
    resp << "timestamp,price\n";
    double lc = std::log(15000.0), lr = std::log(1500.0);
    for (std::int64_t t = 0; t <= span; ++t) {
        const double common = 1e-4 * rng.normal();
        lc += common + 3e-4 * rng.normal();
        const double shock = rng.uniform() < 0.002 ? 1e-3 * jumps.draw(rng) : 0.0;
        lr += 0.5 * common + 2e-4 * rng.normal() + shock;
        const std::string stamp = iso_minute(start + t);
        cov << stamp << ',' << format_double(std::exp(lc)) << '\n';
        if (t % 1000 != 999) resp << stamp << ',' << format_double(std::exp(lr)) << '\n';
    }
}

Outcome real_data_structure() {
    const fs::path cov = kWork / "covariate_prices.csv", resp = kWork / "response_prices.csv";
    write_market(cov, resp);
    note("proprietary minute prices are not available; structural check on synthetic minute series");
    const fs::path ingest = kWork / "ingest", fit = kWork / "fit", var = kWork / "var", cq = kWork / "cmp_q",
                   ct = kWork / "cmp_t";
    for (const auto& p : {ingest, fit, var, cq, ct}) fs::remove_all(p);
    std::string problems;
    const auto expect = [&](bool cond, const std::string& what) {
        if (!cond) problems += (problems.empty() ? "" : "; ") + what;
    };
    expect(run_cli("ingest --covariate " + cov.string() + " --response " + resp.string() + " --out " +
                   ingest.string()) == 0,
           "ingest failed");
    const std::string before = manifest_entry(ingest, "n_before"), after = manifest_entry(ingest, "n_after");
    expect(before == "341", "n before removal = " + before);
    expect(after == "339", "n after removal = " + after);

    const std::string common = " --input " + ingest.string() + " --mode data --tau 1 --k-min 15 --k-max 65";
    expect(run_cli("fit" + common + " --out " + fit.string()) == 0, "fit failed");
    const std::string k_hat = manifest_entry(fit, "k");
    const long k = k_hat.empty() ? -1 : std::stol(k_hat);
    expect(k >= 15 && k <= 65, "k_hat = " + k_hat);

    expect(run_cli("var" + common + " --alphas 0.9,0.98,0.995 --grid-size 200 --out " + var.string()) == 0,
           "var failed");
    std::size_t non_monotone = 0;
    if (fs::exists(var / "var_curves.csv"))
        for (const auto& row : read_numeric_csv(var / "var_curves.csv"))
            if (!(row[1] <= row[2] && row[2] <= row[3])) ++non_monotone;
    expect(non_monotone == 0, std::to_string(non_monotone) + " VaR grid points not monotone in alpha");

    std::size_t labelled = 0;
    for (const auto& [dir, extra] : {std::pair{cq, std::string(" --alpha 0.95")},
                                     std::pair{ct, std::string(" --measure tail-index --alpha 0.7")}}) {
        expect(run_cli("compare" + common + extra + " --out " + dir.string()) == 0, "compare failed");
        std::istringstream box(slurp(dir / "boxplots.csv"));
        std::string line;
        std::vector<std::string> labels;
        std::getline(box, line);
        while (std::getline(box, line)) labels.push_back(line.substr(0, line.find(',')));
        if (labels == std::vector<std::string>{"FEPLS", "Beta", "Beta v2", "Ortho"}) ++labelled;
    }
    expect(labelled == 2, "boxplot labels missing");
    return {problems.empty(), problems.empty() ? "n = " + before + " -> " + after + ", k_hat = " + k_hat +
                                                     " (data mode), four labelled boxplots for both measures, "
                                                     "VaR curves monotone in alpha"
                                               : problems};
}

// ------------------------------------------------------------------ 12
std::vector<std::pair<std::string, std::string>> result_csvs(const fs::path& dir) {
    std::vector<std::pair<std::string, std::string>> out;
    if (!fs::exists(dir)) return out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".csv") out.emplace_back(e.path().filename().string(), slurp(e.path()));
    std::sort(out.begin(), out.end());
    return out;
}

Outcome determinism() {
    const fs::path sim = kWork / "det_input";
    fs::remove_all(sim);
    if (run_cli("simulate --seed 42 --n 300 --d 51 --out " + sim.string()) != 0) return {false, "simulate failed"};
    const std::vector<std::string> commands{
        "simulate --seed 42 --n 300 --d 51",
        "experiment --seed 8 --n 200 --d 51 --replications 10 --taus -1,-2 --rate-n 100,200,400",
        "fit --input " + sim.string(),
        "tail --input " + sim.string(),
        "var --input " + sim.string() + " --grid-size 50 --bandwidth 3",
        "compare --input " + sim.string() + " --grid-size 101",
        "compare --input " + sim.string() + " --grid-size 101 --measure tail-index --alpha 0.7",
    };
    std::size_t identical = 0;
    std::string failed;
    for (std::size_t j = 0; j < commands.size(); ++j) {
        const fs::path a = kWork / ("det_a" + std::to_string(j)), b = kWork / ("det_b" + std::to_string(j));
        fs::remove_all(a);
        fs::remove_all(b);
        const int ca = run_cli(commands[j] + " --out " + a.string());
        const int cb = run_cli(commands[j] + " --out " + b.string(), "FEPLS_NUM_THREADS=3");
        const auto fa = result_csvs(a), fb = result_csvs(b);
        if (ca == 0 && cb == 0 && !fa.empty() && fa == fb)
            ++identical;
        else
            failed += " [" + commands[j].substr(0, commands[j].find(' ')) + "]";
    }
    return {identical == commands.size(),
            std::to_string(identical) + "/" + std::to_string(commands.size()) +
                " seeded commands byte-identical across two runs" + failed};
}

}  // namespace

int main() {
    fs::create_directories(kWork);
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"noiseless exactness", noiseless_exactness},
        {"closed-form covariance direction vs exhaustive scan", covariance_oracle},
        {"tail-moment identity with constant h", constant_h_identity},
        {"joint order-statistic density", joint_density_marginalization},
        {"simulation study accuracy floors", simulation_study},
        {"rate regression slope", rate_regression_slope},
        {"Hill estimator", hill_estimator},
        {"functional Hill identity", functional_hill_identity},
        {"fBm sampler covariance", fbm_sampler},
        {"kernel cdf and quantile oracles", kernel_oracles},
        {"real-data pipeline structure", real_data_structure},
        {"determinism of seeded commands", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << (i + 1) << "  " << criteria[i].first << ": "
                  << o.detail << std::endl;
        for (const auto& text : pending_notes) std::cout << "  NOTE " << text << std::endl;
        pending_notes.clear();
    }
    std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
