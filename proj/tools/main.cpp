// countstat command-line tool: wires a counting model described in a JSON
// file to the library's analyses and writes machine-readable CSV/JSON.
//
// Exit codes: 0 success, 1 malformed flags, 2 invalid model file,
// 3 numerical failure. One-line diagnostics go to stderr.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "countstat/bayes.hpp"
#include "countstat/errors.hpp"
#include "countstat/distributions.hpp"
#include "countstat/ensemble.hpp"
#include "countstat/hypothesis.hpp"
#include "countstat/neyman.hpp"
#include "countstat/profile.hpp"
#include "countstat/special_functions.hpp"
#include "json.hpp"

namespace {

using countstat::Belt;
using countstat::CountingModel;
using countstat::Distribution;
using countstat::Interval;
using countstat::OrderingRule;
using json = nlohmann::json;

constexpr int kExitFlags = 1;
constexpr int kExitModel = 2;
constexpr int kExitNumerical = 3;

struct ModelFileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelSpec {
    int n = 0;
    double b = 0.0;
    double db = 0.0;
    std::optional<double> q_override;
    std::optional<std::uint64_t> seed;

    CountingModel build() const {
        if (q_override.has_value()) {
            return CountingModel::with_q_override(n, b, db, *q_override);
        }
        return CountingModel::from_estimate(n, b, db);
    }
};

ModelSpec load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelFileError("cannot open model file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ModelFileError("model file is not valid JSON: " + std::string(e.what()));
    }
    ModelSpec spec;
    try {
        spec.n = doc.at("N").get<int>();
        spec.b = doc.at("B").get<double>();
        spec.db = doc.at("dB").get<double>();
        if (doc.contains("Q_override")) spec.q_override = doc["Q_override"].get<double>();
        if (doc.contains("seed")) spec.seed = doc["seed"].get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw ModelFileError("model file is missing or mistypes a field: " +
                             std::string(e.what()));
    }
    if (spec.n < 0 || !(spec.b > 0.0) || !(spec.db > 0.0) ||
        (spec.q_override && !(*spec.q_override > 0.0))) {
        throw ModelFileError("model file violates N >= 0, B > 0, dB > 0, Q_override > 0");
    }
    return spec;
}

// all CSV numbers carry nine significant digits
std::string num9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
    if (!out) throw ModelFileError("cannot open output file: " + path);
    return out;
}

void print_json(const json& j) { std::cout << j.dump() << "\n"; }

int run_neyman_band(const std::string& rule_name, double cl, double s_max,
                    const std::string& out_path) {
    const OrderingRule rule = countstat::ordering_rule_from_name(rule_name);
    if (rule == OrderingRule::root_n) {
        throw CLI::ValidationError("--rule", "root-n has no belt; it is a direct formula");
    }
    const double step = countstat::belt_defaults::step;
    const int n_points = static_cast<int>(std::round(s_max / step)) + 1;
    const int d_max = static_cast<int>(s_max + 10.0 * std::sqrt(s_max + 1.0) + 30.0);
    const Belt belt = countstat::construct_belt(0.0, s_max, n_points, rule, cl, d_max);

    auto out = open_out(out_path);
    out << "s,d_lo,d_hi\n";
    for (std::size_t i = 0; i < belt.s_grid().size(); ++i) {
        const auto& set = belt.accepted(i);
        out << num9(belt.s_grid()[i]) << ',' << set.d_min << ',' << set.d_max << '\n';
    }
    return 0;
}

int run_interval_widths(double cl, int d_max, const std::string& out_path) {
    // grid high enough that u(D) is complete for every D requested
    const double s_top = d_max + 4.0 * std::sqrt(static_cast<double>(d_max)) + 10.0;
    const int n_points = static_cast<int>(std::round(s_top / countstat::belt_defaults::step)) + 1;
    const int d_cap = static_cast<int>(s_top + 10.0 * std::sqrt(s_top + 1.0) + 30.0);
    const Belt fc =
        countstat::construct_belt(0.0, s_top, n_points, OrderingRule::feldman_cousins, cl, d_cap);
    const Belt mode =
        countstat::construct_belt(0.0, s_top, n_points, OrderingRule::mode_centered, cl, d_cap);

    auto out = open_out(out_path);
    out << "D,central_lo,central_hi,fc_lo,fc_hi,mode_lo,mode_hi,rootn_lo,rootn_hi\n";
    for (int d = 0; d <= d_max; ++d) {
        const Interval central = countstat::central_interval_exact(d, cl);
        const Interval fci = countstat::interval_for_observation(fc, d);
        const Interval modei = countstat::interval_for_observation(mode, d);
        const Interval rootn = countstat::root_n_interval(d);
        out << d << ',' << num9(central.lower) << ',' << num9(central.upper) << ','
            << num9(fci.lower) << ',' << num9(fci.upper) << ',' << num9(modei.lower) << ','
            << num9(modei.upper) << ',' << num9(rootn.lower) << ',' << num9(rootn.upper) << '\n';
    }
    return 0;
}

int run_coverage_scan(const std::string& rule_name, double cl, double s_max, double step,
                      const std::string& out_path) {
    const OrderingRule rule = countstat::ordering_rule_from_name(rule_name);
    const int d_max = static_cast<int>(s_max + 10.0 * std::sqrt(s_max + 1.0) + 30.0);

    std::optional<Belt> belt;
    std::vector<Interval> exact;  // per-D table for the formula-based rules
    if (rule == OrderingRule::feldman_cousins || rule == OrderingRule::mode_centered) {
        const double belt_step = std::min(step, countstat::belt_defaults::step);
        const int n_points = static_cast<int>(std::round(s_max / belt_step)) + 1;
        belt.emplace(countstat::construct_belt(0.0, s_max, n_points, rule, cl, d_max));
        // grid-inverted rule: state the inversion grid next to the values
        std::cerr << "note: " << rule_name << " intervals inverted on an s-grid with step "
                  << num9(belt_step) << " over [0, " << num9(s_max) << "]\n";
    } else {
        exact.reserve(d_max + 1);
        for (int d = 0; d <= d_max; ++d) {
            exact.push_back(rule == OrderingRule::central
                                ? countstat::central_interval_exact(d, cl)
                                : countstat::root_n_interval(d));
        }
    }

    auto out = open_out(out_path);
    out << "s,coverage\n";
    const int n_rows = static_cast<int>(std::floor(s_max / step + 1e-9)) + 1;
    for (int i = 0; i < n_rows; ++i) {
        const double s = i * step;
        const double c = belt ? countstat::coverage(*belt, s) : countstat::coverage(exact, s);
        out << num9(s) << ',' << num9(c) << '\n';
    }
    return 0;
}

int run_profile_interval(const ModelSpec& spec, double n_sigma) {
    const CountingModel m = spec.build();
    const auto fit = countstat::mle(m);
    const Interval iv = countstat::wilks_interval(m, n_sigma);
    const double sqrt_t0 = std::sqrt(countstat::profile_t(m, 0.0));
    print_json(json{{"s_hat", fit.s_hat},
                    {"b_hat", fit.b_hat},
                    {"boundary", fit.boundary},
                    {"lower", iv.lower},
                    {"upper", iv.upper},
                    {"nsigma", n_sigma},
                    {"sqrt_t0", sqrt_t0},
                    {"q", m.q_sideband}});
    return 0;
}

int run_profile_curve(const ModelSpec& spec, double s_max, double step,
                      const std::string& out_path) {
    const CountingModel m = spec.build();
    const int n_points = static_cast<int>(std::round(s_max / step)) + 1;
    const auto curve = countstat::profile_curve(m, 0.0, s_max, n_points);
    auto out = open_out(out_path);
    out << "s,neg_ln_lambda\n";
    for (std::size_t i = 0; i < curve.s_values.size(); ++i) {
        out << num9(curve.s_values[i]) << ',' << num9(0.5 * curve.t_values[i]) << '\n';
    }
    return 0;
}

int run_pvalue(const ModelSpec& spec) {
    const countstat::TestSetup setup{Distribution::poisson(spec.b), std::nullopt, 0.05};
    const double p = countstat::p_value(setup, spec.n);
    print_json(json{{"p_value", p}, {"z", countstat::z_value(p)}});
    return 0;
}

countstat::SignalPrior parse_prior(const std::string& text) {
    if (text == "flat") return countstat::SignalPrior::flat();
    if (text.rfind("gamma:", 0) == 0) {
        double q = 0.0, mm = 0.0;
        if (std::sscanf(text.c_str(), "gamma:%lf,%lf", &q, &mm) != 2) {
            throw CLI::ValidationError("--prior", "expected gamma:q,M");
        }
        return countstat::SignalPrior::gamma_prior(q, mm);
    }
    throw CLI::ValidationError("--prior", "expected 'flat' or 'gamma:q,M', got '" + text + "'");
}

int run_bayes_posterior(const ModelSpec& spec, const std::string& prior_text, double cl,
                        const std::string& out_path) {
    const CountingModel m = spec.build();
    const auto prior = parse_prior(prior_text);
    const auto curve = countstat::signal_posterior(m, prior);
    const Interval iv = countstat::credible_interval(curve, cl);

    auto out = open_out(out_path);
    out << "s,density\n";
    for (std::size_t i = 0; i < curve.s_values.size(); ++i) {
        out << num9(curve.s_values[i]) << ',' << num9(curve.density[i]) << '\n';
    }
    print_json(json{{"cl", cl}, {"lower", iv.lower}, {"upper", iv.upper}});
    return 0;
}

int run_bayes_factor(const ModelSpec& spec, double s1) {
    const CountingModel m = spec.build();
    const auto bf = countstat::bayes_factor(m, s1);
    print_json(json{{"b10", bf.b10}, {"z", bf.z}, {"s1", s1}});
    return 0;
}

Distribution parse_generator(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    std::vector<double> params;
    if (colon != std::string::npos) {
        std::string rest = text.substr(colon + 1);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            std::size_t used = 0;
            try {
                params.push_back(std::stod(rest.substr(pos), &used));
            } catch (const std::exception&) {
                throw CLI::ValidationError("--generator", "bad numeric parameter in '" + text + "'");
            }
            pos += used;
            if (pos < rest.size() && rest[pos] == ',') ++pos;
        }
    }
    const auto want = [&](std::size_t count) {
        if (params.size() != count) {
            throw CLI::ValidationError("--generator", kind + " takes " + std::to_string(count) +
                                                          " parameter(s)");
        }
    };
    if (kind == "poisson") { want(1); return Distribution::poisson(params[0]); }
    if (kind == "gaussian") { want(2); return Distribution::gaussian(params[0], params[1]); }
    if (kind == "binomial") { want(2); return Distribution::binomial(static_cast<int>(params[0]), params[1]); }
    if (kind == "uniform") { want(1); return Distribution::uniform(params[0]); }
    if (kind == "exponential") { want(1); return Distribution::exponential(params[0]); }
    if (kind == "lognormal") { want(2); return Distribution::lognormal(params[0], params[1]); }
    if (kind == "chisq") { want(1); return Distribution::chisq(params[0]); }
    if (kind == "gamma") { want(2); return Distribution::gamma(params[0], params[1]); }
    if (kind == "beta") { want(2); return Distribution::beta(params[0], params[1]); }
    throw CLI::ValidationError("--generator", "unknown distribution '" + kind + "'");
}

int run_ensemble_sim(const std::string& generator_text, const std::string& estimator_name,
                     std::size_t n_per_replica, std::size_t replicas, std::uint64_t seed,
                     std::optional<double> truth) {
    const Distribution generator = parse_generator(generator_text);
    countstat::Estimator estimator;
    double mu = 0.0;
    if (estimator_name == "mean") {
        estimator = [](std::span<const double> xs) { return countstat::sample_mean(xs); };
        mu = truth.value_or(generator.mean());
    } else if (estimator_name == "variance") {
        estimator = [](std::span<const double> xs) { return countstat::sample_variance(xs); };
        mu = truth.value_or(generator.variance());
    } else {
        throw CLI::ValidationError("--estimator", "expected 'mean' or 'variance'");
    }
    const auto summary =
        countstat::summarize_estimator(estimator, mu, generator, n_per_replica, replicas, seed);
    print_json(json{{"ensemble_average", summary.ensemble_average},
                    {"bias", summary.bias},
                    {"variance", summary.variance},
                    {"std_dev", summary.std_dev},
                    {"mse", summary.mse},
                    {"rms", summary.rms},
                    {"n_replicas", summary.n_replicas},
                    {"truth", mu},
                    {"seed", seed}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"frequentist and Bayesian inference for Poisson counting experiments"};
    app.require_subcommand(1);

    std::string model_path, out_path, rule_name = "central", prior_text = "flat";
    std::string generator_text = "poisson:3.8", estimator_name = "mean";
    double cl = countstat::belt_defaults::cl;
    double s_max = countstat::belt_defaults::s_max;
    double step = 0.01;
    double n_sigma = 1.0, s1 = 14.0;
    int d_max = 30;
    std::size_t n_per_replica = 5, replicas = 100000;
    std::uint64_t seed = 12345;
    std::optional<double> truth;

    const auto check_cl = CLI::Range(1e-9, 1.0 - 1e-9);

    auto* band = app.add_subcommand("neyman-band", "belt edges d_lo(s), d_hi(s) as CSV");
    band->add_option("--rule", rule_name, "central | feldman-cousins | mode-centered");
    band->add_option("--cl", cl, "confidence level")->check(check_cl);
    band->add_option("--smax", s_max, "top of the signal grid");
    band->add_option("--out", out_path, "output CSV path")->required();

    auto* widths = app.add_subcommand("interval-widths",
                                      "per-D interval endpoints for all four rules as CSV");
    widths->add_option("--cl", cl, "confidence level")->check(check_cl);
    widths->add_option("--dmax", d_max, "largest observed count")->check(CLI::NonNegativeNumber);
    widths->add_option("--out", out_path, "output CSV path")->required();

    auto* cov = app.add_subcommand("coverage-scan", "coverage probability over s as CSV");
    cov->add_option("--rule", rule_name,
                    "central | feldman-cousins | mode-centered | root-n");
    cov->add_option("--cl", cl, "confidence level")->check(check_cl);
    cov->add_option("--smax", s_max, "top of the scan");
    cov->add_option("--step", step, "scan step")->check(CLI::PositiveNumber);
    cov->add_option("--out", out_path, "output CSV path")->required();

    auto* pint = app.add_subcommand("profile-interval",
                                    "MLEs, Wilks interval and sqrt(t0) as JSON");
    pint->add_option("--model", model_path, "model JSON file")->required();
    pint->add_option("--nsigma", n_sigma, "interval half-width in sigma")
        ->check(CLI::PositiveNumber);

    auto* pcurve = app.add_subcommand("profile-curve", "-ln lambda(s) table as CSV");
    pcurve->add_option("--model", model_path, "model JSON file")->required();
    pcurve->add_option("--smax", s_max, "top of the signal grid");
    pcurve->add_option("--step", step, "grid step")->check(CLI::PositiveNumber);
    pcurve->add_option("--out", out_path, "output CSV path")->required();

    auto* pv = app.add_subcommand("pvalue", "background-only p-value and Z as JSON");
    pv->add_option("--model", model_path, "model JSON file")->required();

    auto* post = app.add_subcommand("bayes-posterior",
                                    "signal posterior as CSV plus credible interval as JSON");
    post->add_option("--model", model_path, "model JSON file")->required();
    post->add_option("--prior", prior_text, "flat | gamma:q,M");
    post->add_option("--cl", cl, "credible level")->check(check_cl);
    post->add_option("--out", out_path, "output CSV path")->required();

    auto* bf = app.add_subcommand("bayes-factor", "B10 of s = s1 against s = 0 as JSON");
    bf->add_option("--model", model_path, "model JSON file")->required();
    bf->add_option("--s1", s1, "signal hypothesis")->check(CLI::PositiveNumber);

    auto* sim = app.add_subcommand("ensemble-sim",
                                   "Monte Carlo ensemble summary of an estimator as JSON");
    sim->add_option("--generator", generator_text, "kind:params, e.g. poisson:3.8");
    sim->add_option("--estimator", estimator_name, "mean | variance");
    sim->add_option("--n", n_per_replica, "sample size per replica")
        ->check(CLI::PositiveNumber);
    sim->add_option("--replicas", replicas, "number of replicas")->check(CLI::PositiveNumber);
    sim->add_option("--seed", seed, "random seed");
    sim->add_option("--truth", truth, "true value the estimator targets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: " << e.what() << "\n";
        return kExitFlags;
    }

    try {
        if (band->parsed()) return run_neyman_band(rule_name, cl, s_max, out_path);
        if (widths->parsed()) return run_interval_widths(cl, d_max, out_path);
        if (cov->parsed()) return run_coverage_scan(rule_name, cl, s_max, step, out_path);
        if (pint->parsed()) return run_profile_interval(load_model(model_path), n_sigma);
        if (pcurve->parsed()) {
            return run_profile_curve(load_model(model_path), s_max, step, out_path);
        }
        if (pv->parsed()) return run_pvalue(load_model(model_path));
        if (post->parsed()) {
            return run_bayes_posterior(load_model(model_path), prior_text, cl, out_path);
        }
        if (bf->parsed()) return run_bayes_factor(load_model(model_path), s1);
        if (sim->parsed()) {
            return run_ensemble_sim(generator_text, estimator_name, n_per_replica, replicas,
                                    seed, truth);
        }
    } catch (const ModelFileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitModel;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFlags;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFlags;
    } catch (const countstat::numerical_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
