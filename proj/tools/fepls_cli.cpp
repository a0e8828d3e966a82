// fepls: command-line front end for simulation, estimation and the
// minute-price pipeline. Every run writes CSV results plus a manifest.txt
// echoing the resolved configuration into its --out directory.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fepls/cond_extremes.hpp"
#include "fepls/errors.hpp"
#include "fepls/fepls_core.hpp"
#include "fepls/heavy_tails.hpp"
#include "fepls/io.hpp"
#include "fepls/mc_harness.hpp"
#include "fepls/pipeline.hpp"
#include "fepls/synth_model.hpp"

namespace fs = std::filesystem;
using namespace fepls;

namespace {

enum ExitCode { kOk = 0, kRuntime = 1, kUsage = 2, kValidation = 3 };

struct Options {
    double gamma = 0.5;
    double rho = -1.0;
    double kappa = 1.5;
    double tau = -2.0;
    double hurst = 1.0 / 3.0;
    double mu = 200.0;
    double sigma_scale = 0.1;
    std::uint64_t seed = 0;
    std::size_t n = 500;
    std::size_t d = 101;
    std::size_t k_min = 5;
    std::optional<std::size_t> k_max;
    std::optional<std::size_t> k;
    double alpha = 0.95;
    std::size_t big_j = kDefaultHillTerms;
    std::size_t grid_size = 1001;
    std::string mode = "sim";
    std::string out;
    std::string input;

    // experiment
    std::size_t replications = 100;
    std::vector<double> taus;
    std::vector<std::size_t> k_values;
    std::vector<std::size_t> rate_n;
    double rate_exponent = 0.6;
    double q = 4.0;

    // var / compare
    std::vector<double> alphas{0.98, 0.995};
    double bandwidth = kScatterBandwidth;
    std::string measure = "quantile";

    // ingest
    std::string covariate;
    std::string response;
    std::size_t remove_top = 2;
    std::size_t block = 1440;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

void validate_model(const Options& o) {
    require(o.gamma > 0.0, "--gamma must be positive");
    require(o.rho < 0.0, "--rho must be negative");
    require(o.kappa > 0.0, "--kappa must be positive");
    require(o.hurst > 0.0 && o.hurst < 1.0, "--hurst must lie in (0,1)");
    require(o.sigma_scale >= 0.0, "--sigma-scale must be non-negative");
    require(o.n >= 1, "--n must be positive");
    require(o.d >= 1, "--d must be positive");
}

void validate_selection(const Options& o) {
    require(o.k_min >= 5, "--k-min must be at least 5");
    if (o.k_max) require(*o.k_max >= o.k_min, "--k-max must not be below --k-min");
}

void require_out(const Options& o) { require(!o.out.empty(), "--out is required"); }

void require_input(const Options& o) { require(!o.input.empty(), "--input is required"); }

SelectionMode selection_mode(const Options& o) {
    return o.mode == "data" ? SelectionMode::data : SelectionMode::simulation;
}

ModelSpec model_spec(const Options& o) {
    ModelSpec spec = ModelSpec::design(o.gamma, o.rho, o.kappa, o.tau, o.d, o.n);
    spec.hurst = o.hurst;
    spec.mu = o.mu;
    spec.sigma_scale = o.sigma_scale;
    return spec;
}

// Every option with a long name, as given or defaulted.
Manifest config_manifest(const CLI::App& app, const std::string& subcommand) {
    Manifest m;
    m.set("subcommand", subcommand);
    for (const CLI::Option* opt : app.get_options()) {
        const std::string name = opt->get_single_name();
        if (name.empty() || name == "help" || name == "config") continue;
        std::string value;
        if (opt->count() > 0) {
            for (const auto& r : opt->results()) value += (value.empty() ? "" : " ") + r;
        } else {
            value = opt->get_default_str();
        }
        m.set("config." + name, value);
    }
    return m;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::vector<double> as_doubles(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

std::size_t choose_k(const Options& o, const Dataset& data, TestFunction phi) {
    if (o.k) return *o.k;
    return select_k(data, phi, selection_mode(o), KRange{.min = o.k_min, .max = o.k_max});
}

void record_fit(Manifest& m, const FeplsFit& fit, const Dataset& data) {
    m.set("k", fit.k);
    m.set("threshold", fit.threshold);
    m.set("tau", fit.tau);
    m.set("raw_norm", fit.raw_norm);
    m.set("q", fit.q);
    m.set("rate", fit.rate ? format_double(*fit.rate) : std::string("na"));
    m.set("dropped_nonpositive", fit.dropped_nonpositive);
    if (data.index) m.set("inner_with_index", inner_product(fit.direction, *data.index));
}

void print_summary(const Manifest& m, const std::vector<std::string>& keys) {
    for (const auto& key : keys)
        if (const std::string* v = m.find(key)) std::cout << key << " = " << *v << '\n';
}

// ---------------------------------------------------------------- commands

void cmd_simulate(const Options& o, Manifest m) {
    validate_model(o);
    require_out(o);
    const ModelSpec spec = model_spec(o);
    spec.validate();
    const Dataset data = generate(spec, o.seed);
    m.set("seed", static_cast<long long>(o.seed));
    m.set("admissible", spec.admissible() ? "true" : "false");
    save_dataset(o.out, data, m);
    std::cout << "n = " << data.size() << "\nd = " << data.grid.size() << '\n';
}

void cmd_experiment(const Options& o, Manifest m) {
    validate_model(o);
    validate_selection(o);
    require_out(o);
    require(o.replications >= 2, "--replications must be at least 2");
    ExperimentPlan plan;
    plan.spec = model_spec(o);
    plan.replications = o.replications;
    plan.tau_values = o.taus.empty() ? std::vector<double>{o.tau} : o.taus;
    plan.seed = o.seed;
    plan.k_min = o.k_min;
    plan.k_max = o.k_max;
    const std::size_t upper = o.k_max.value_or(o.n / 5);
    if (o.k_values.empty())
        for (std::size_t k = 1; k <= upper; ++k) plan.k_values.push_back(k);
    else
        plan.k_values = o.k_values;
    plan.validate();

    const ExperimentResult res = run_experiment(plan);
    fs::create_directories(o.out);
    m.set("successes", res.successes);
    m.set("failures", res.failures);
    const Grid& grid = plan.spec.grid();
    for (std::size_t j = 0; j < res.per_tau.size(); ++j) {
        const TauSummary& t = res.per_tau[j];
        const std::string tag = "tau" + format_double(t.tau);
        write_columns_csv(fs::path(o.out) / ("curves_" + tag + ".csv"), {"k", "mean_inner", "mean_correlation"},
                          {as_doubles(plan.k_values), t.mean_inner, t.mean_correlation});
        write_columns_csv(fs::path(o.out) / ("band_" + tag + ".csv"), {"t", "lower", "mean", "upper"},
                          {grid.points(), t.band_lower, t.band_mean, t.band_upper});
        std::vector<double> ks, counts;
        for (const auto& [k, c] : t.selected_k) {
            ks.push_back(static_cast<double>(k));
            counts.push_back(static_cast<double>(c));
        }
        write_columns_csv(fs::path(o.out) / ("selected_k_" + tag + ".csv"), {"k", "count"}, {ks, counts});
        write_columns_csv(fs::path(o.out) / ("errors_" + tag + ".csv"), {"inner", "error"},
                          {t.inner_at_selected, t.errors});
        m.set(tag + ".admissible", t.admissible ? "true" : "false");
        m.set(tag + ".mean_inner_at_selected", t.mean_inner_at_selected);
        std::cout << tag << ": mean inner at selected k = " << format_double(t.mean_inner_at_selected)
                  << (t.admissible ? "" : " (tau outside the admissible range)") << '\n';
    }

    if (!o.rate_n.empty()) {
        const double e = o.rate_exponent;
        const auto rule = [e](std::size_t n) {
            return static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), e)));
        };
        const RateRegression rate = rate_regression(plan.spec, o.rate_n, rule, o.replications, o.seed, o.q);
        write_columns_csv(fs::path(o.out) / "rate.csv", {"n", "k", "delta", "median_error"},
                          {as_doubles(rate.n_values), as_doubles(rate.k_values), rate.deltas, rate.median_errors});
        m.set("rate.slope", rate.slope ? format_double(*rate.slope) : std::string("na"));
        m.set("rate.exact_fit", rate.exact_fit ? "true" : "false");
        m.set("rate.failures", rate.failures);
    }
    m.write(fs::path(o.out) / "manifest.txt");
}

void cmd_fit(const Options& o, Manifest m) {
    require_input(o);
    require_out(o);
    validate_selection(o);
    const Dataset data = load_dataset(o.input);
    const TestFunction phi{o.tau};
    const std::size_t k = choose_k(o, data, phi);
    FitOptions fo{.q = o.q, .kappa = std::nullopt};
    if (o.mode == "sim") fo.kappa = o.kappa;
    const FeplsFit fit = fepls_direction(data, phi, k, fo);

    fs::create_directories(o.out);
    write_function_csv(fs::path(o.out) / "direction.csv", fit.direction);
    const std::size_t upper = std::min(o.k_max.value_or(data.size() / 5), data.size());
    if (upper >= 2) {
        const std::size_t lower = std::min<std::size_t>(o.k_min, upper);
        const auto r = correlation_curve(data, phi, lower, upper);
        std::vector<double> ks;
        for (std::size_t j = lower; j <= upper; ++j) ks.push_back(static_cast<double>(j));
        write_columns_csv(fs::path(o.out) / "correlation.csv", {"k", "r"}, {ks, r});
    }
    record_fit(m, fit, data);
    m.set("n", data.size());
    m.write(fs::path(o.out) / "manifest.txt");
    print_summary(m, {"n", "k", "threshold", "raw_norm", "rate", "inner_with_index"});
}

void cmd_tail(const Options& o, Manifest m) {
    require_input(o);
    require_out(o);
    validate_selection(o);
    const Dataset data = load_dataset(o.input);
    const SortedSample sorted(data.Y);
    const std::size_t n = data.size();
    const std::size_t upper = std::min(o.k_max.value_or(n / 5), n - 1);
    require(upper >= o.k_min, "k range is empty for this sample size");
    std::vector<double> ks, gammas;
    for (std::size_t k = o.k_min; k <= upper; ++k) {
        ks.push_back(static_cast<double>(k));
        gammas.push_back(hill(sorted, k));
    }
    fs::create_directories(o.out);
    write_columns_csv(fs::path(o.out) / "hill.csv", {"k", "gamma"}, {ks, gammas});

    const std::size_t k = choose_k(o, data, TestFunction{o.tau});
    const QqPlot qq = qq_plot_data(sorted, k);
    std::vector<double> a, b;
    for (const auto& p : qq.points) {
        a.push_back(p.abscissa);
        b.push_back(p.ordinate);
    }
    write_columns_csv(fs::path(o.out) / "qq.csv", {"log_ratio_rank", "log_excess"}, {a, b});
    m.set("k", k);
    m.set("qq_slope", qq.slope);
    m.set("hill_at_k", hill(sorted, k));
    m.write(fs::path(o.out) / "manifest.txt");
    print_summary(m, {"k", "qq_slope", "hill_at_k"});
}

void cmd_var(const Options& o, Manifest m) {
    require_input(o);
    require_out(o);
    validate_selection(o);
    require(!o.alphas.empty(), "--alphas needs at least one level");
    for (double a : o.alphas) require(a > 0.0 && a < 1.0, "--alphas must lie in (0,1)");
    require(o.bandwidth > 0.0, "--bandwidth must be positive");
    require(o.grid_size >= 1, "--grid-size must be positive");
    const Dataset data = load_dataset(o.input);
    const TestFunction phi{o.tau};
    const std::size_t k = choose_k(o, data, phi);
    const FeplsFit fit = fepls_direction(data, phi, k);
    const auto view = CovariateView::projected(fit.direction);

    std::vector<double> proj(data.size()), top(data.size(), 0.0);
    for (std::size_t i = 0; i < data.size(); ++i) proj[i] = inner_product(data.X[i], fit.direction);
    for (std::size_t i = 0; i < data.size(); ++i) top[i] = data.Y[i] >= fit.threshold ? 1.0 : 0.0;
    fs::create_directories(o.out);
    write_columns_csv(fs::path(o.out) / "scatter.csv", {"projection", "y", "top"}, {proj, data.Y, top});
    write_function_csv(fs::path(o.out) / "direction.csv", fit.direction);

    const double lo = *std::min_element(proj.begin(), proj.end());
    const double hi = *std::max_element(proj.begin(), proj.end());
    std::vector<std::string> header{"t"};
    std::vector<std::vector<double>> cols(1);
    for (std::size_t l = 0; l < o.grid_size; ++l)
        cols[0].push_back(o.grid_size == 1 ? lo : lo + (hi - lo) * static_cast<double>(l) / double(o.grid_size - 1));
    const KernelConfig cfg{.bandwidth = o.bandwidth};
    for (double a : o.alphas) {
        header.push_back("q_" + format_double(a));
        std::vector<double> q;
        for (double t : cols[0]) q.push_back(conditional_quantile(data, view, t, cfg, a));
        cols.push_back(std::move(q));
    }
    write_columns_csv(fs::path(o.out) / "var_curves.csv", header, cols);
    m.set("k", k);
    m.write(fs::path(o.out) / "manifest.txt");
    print_summary(m, {"k"});
}

void cmd_compare(const Options& o, Manifest m) {
    require_input(o);
    require_out(o);
    validate_selection(o);
    require(o.alpha > 0.0 && o.alpha < 1.0, "--alpha must lie in (0,1)");
    require(o.grid_size >= 1, "--grid-size must be positive");
    require(o.big_j >= 2, "--big-j must be at least 2");
    const Dataset data = load_dataset(o.input);
    const TestFunction phi{o.tau};
    const std::size_t k = choose_k(o, data, phi);
    const FeplsFit fit = fepls_direction(data, phi, k);

    const Grid& grid = data.grid;
    const FunctionSample x = default_index(grid);
    const FunctionSample beta2 =
        normalize(FunctionSample::from_function(grid, [](double t) { return std::exp(-t * t + t); }));
    const std::vector<std::pair<std::string, FunctionSample>> directions{
        {"FEPLS", fit.direction},
        {"Beta", normalize(x)},
        {"Beta v2", beta2},
        {"Ortho", orthogonalize(beta2, fit.direction)},
    };
    const TargetMeasure psi = o.measure == "tail-index" ? TargetMeasure::tail_index : TargetMeasure::quantile;

    std::vector<std::string> header{"s"};
    std::vector<std::vector<double>> cols;
    std::ostringstream box;
    box << "label,min,q1,median,q3,max,lower_whisker,upper_whisker,count,excluded\n";
    for (const auto& [label, dir] : directions) {
        const RelativeErrorCurve c = relative_error_curve(data, x, dir, o.alpha, psi, o.grid_size, o.big_j);
        if (cols.empty()) cols.push_back(c.s);
        header.push_back(label);
        cols.push_back(c.delta);
        const BoxplotSummary& b = c.summary;
        box << label << ',' << format_double(b.min) << ',' << format_double(b.q1) << ','
            << format_double(b.median) << ',' << format_double(b.q3) << ',' << format_double(b.max) << ','
            << format_double(b.lower_whisker) << ',' << format_double(b.upper_whisker) << ',' << b.count << ','
            << b.excluded << '\n';
        m.set("median." + label, b.median);
        std::cout << label << ": median relative error = " << format_double(b.median) << " % (" << b.excluded
                  << " excluded)\n";
    }
    fs::create_directories(o.out);
    write_columns_csv(fs::path(o.out) / "relative_errors.csv", header, cols);
    write_text(fs::path(o.out) / "boxplots.csv", box.str());
    m.set("k", k);
    m.write(fs::path(o.out) / "manifest.txt");
}

void cmd_ingest(const Options& o, Manifest m, bool block_given) {
    require(!o.covariate.empty() && !o.response.empty(), "--covariate and --response are required");
    require_out(o);
    const std::size_t d = block_given ? o.d : o.block;
    require(d >= 1, "block length must be positive");
    const PriceSeries cov = read_price_csv(o.covariate, "covariate");
    const PriceSeries resp = read_price_csv(o.response, "response");
    const BlockSample all = align_and_block(cov, resp, d);
    const BlockSample kept = remove_top_outliers(all, o.remove_top);

    m.set("block_length", d);
    m.set("n_before", all.size());
    m.set("n_after", kept.size());
    m.set("removed", o.remove_top);
    save_dataset(o.out, kept.to_dataset(), m);
    write_columns_csv(fs::path(o.out) / "blocks.csv", {"covariate_block", "response_block", "y"},
                      {as_doubles(kept.covariate_block), as_doubles(kept.response_block), kept.Y});
    print_summary(m, {"n_before", "n_after", "block_length"});
}

void emit_error(const std::string& kind, const std::string& message, int code) {
    const nlohmann::json record{{"status", "error"}, {"kind", kind}, {"message", message}, {"exit_code", code}};
    std::cerr << record.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Functional extreme-PLS: simulation, estimation and conditional tail analysis"};
    app.set_config("--config", "", "TOML or INI file setting any long flag; the command line wins");
    app.require_subcommand(1, 1);
    app.fallthrough();

    Options o;
    app.add_option("--gamma", o.gamma, "Burr tail index")->capture_default_str();
    app.add_option("--rho", o.rho, "Burr second-order parameter")->capture_default_str();
    app.add_option("--kappa", o.kappa, "link exponent of g(y) = y^kappa")->capture_default_str();
    app.add_option("--tau", o.tau, "test-function exponent")->capture_default_str();
    app.add_option("--hurst", o.hurst, "Hurst index of the noise")->capture_default_str();
    app.add_option("--mu", o.mu, "noise mean")->capture_default_str();
    app.add_option("--sigma-scale", o.sigma_scale, "noise scale as a multiple of g")->capture_default_str();
    app.add_option("--seed", o.seed, "master seed")->capture_default_str();
    app.add_option("--n", o.n, "sample size")->capture_default_str();
    auto* d_opt = app.add_option("--d", o.d, "grid size / block length")->capture_default_str();
    app.add_option("--k-min", o.k_min, "lower bound of the threshold search")->capture_default_str();
    app.add_option("--k-max", o.k_max, "upper bound of the threshold search (default n/5)");
    app.add_option("--k", o.k, "fixed number of exceedances instead of the data-driven choice");
    app.add_option("--alpha", o.alpha, "tail level")->capture_default_str();
    app.add_option("--big-j", o.big_j, "terms of the functional Hill estimator")->capture_default_str();
    app.add_option("--grid-size", o.grid_size, "points of the evaluation grid")->capture_default_str();
    app.add_option("--mode", o.mode, "threshold selection: signed r(k) (sim) or |r(k)| (data)")
        ->check(CLI::IsMember({"sim", "data"}))
        ->capture_default_str();
    app.add_option("--out", o.out, "output directory");
    app.add_option("--input", o.input, "dataset directory written by simulate or ingest");
    app.add_option("--replications", o.replications, "Monte Carlo replications")->capture_default_str();
    app.add_option("--taus", o.taus, "several test-function exponents")->delimiter(',');
    app.add_option("--k-values", o.k_values, "k values of the exceedance curves")->delimiter(',');
    app.add_option("--rate-n", o.rate_n, "sample sizes of the rate regression")->delimiter(',');
    app.add_option("--rate-exponent", o.rate_exponent, "k = ceil(n^e) in the rate regression")->capture_default_str();
    app.add_option("--q", o.q, "integrability order of the rate")->capture_default_str();
    app.add_option("--alphas", o.alphas, "levels of the VaR curves")->delimiter(',')->capture_default_str();
    app.add_option("--bandwidth", o.bandwidth, "kernel bandwidth of the VaR curves")->capture_default_str();
    app.add_option("--measure", o.measure, "target of the relative errors")
        ->check(CLI::IsMember({"quantile", "tail-index"}))
        ->capture_default_str();
    app.add_option("--covariate", o.covariate, "price CSV supplying the covariate curves");
    app.add_option("--response", o.response, "price CSV supplying the block maxima");
    app.add_option("--remove-top", o.remove_top, "pairs with the largest responses to drop")->capture_default_str();

    auto* simulate = app.add_subcommand("simulate", "draw a dataset from the synthetic model");
    auto* experiment = app.add_subcommand("experiment", "Monte Carlo study of the FEPLS direction");
    auto* fit = app.add_subcommand("fit", "FEPLS direction, selected k and correlation curve");
    auto* tail = app.add_subcommand("tail", "Hill plot and exponential QQ data of the responses");
    auto* var = app.add_subcommand("var", "projected scatter and conditional VaR curves");
    auto* compare = app.add_subcommand("compare", "relative errors of projected conditional estimates");
    auto* ingest = app.add_subcommand("ingest", "minute prices to a block sample");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("usage", e.what(), kUsage);
        return kUsage;
    }

    const CLI::App* sub = app.get_subcommands().front();
    try {
        Manifest m = config_manifest(app, sub->get_name());
        if (sub == simulate) cmd_simulate(o, m);
        else if (sub == experiment) cmd_experiment(o, m);
        else if (sub == fit) cmd_fit(o, m);
        else if (sub == tail) cmd_tail(o, m);
        else if (sub == var) cmd_var(o, m);
        else if (sub == compare) cmd_compare(o, m);
        else if (sub == ingest) cmd_ingest(o, m, d_opt->count() > 0);
    } catch (const ValidationError& e) {
        emit_error("validation", e.what(), kValidation);
        return kValidation;
    } catch (const DomainError& e) {
        emit_error("domain", e.what(), kValidation);
        return kValidation;
    } catch (const InsufficientDataError& e) {
        emit_error("insufficient_data", e.what(), kValidation);
        return kValidation;
    } catch (const GridMismatchError& e) {
        emit_error("grid_mismatch", e.what(), kValidation);
        return kValidation;
    } catch (const std::exception& e) {
        emit_error("runtime", e.what(), kRuntime);
        return kRuntime;
    }
    return kOk;
}
