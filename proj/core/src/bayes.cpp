#include "countstat/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "countstat/distributions.hpp"
#include "countstat/errors.hpp"
#include "countstat/special_functions.hpp"

namespace countstat {

SignalPrior SignalPrior::delta(double s0) {
    if (!(s0 >= 0.0)) throw std::domain_error("SignalPrior: delta location must be >= 0");
    return SignalPrior{Kind::delta, s0, 0.0, 0.0};
}

SignalPrior SignalPrior::gamma_prior(double q, double m) {
    if (!(q > 0.0)) throw std::domain_error("SignalPrior: gamma rate q must be > 0");
    if (!(m >= 0.0)) throw std::domain_error("SignalPrior: gamma M must be >= 0");
    return SignalPrior{Kind::gamma, 0.0, q, m};
}

double background_posterior(double b, const CountingModel& m) {
    if (!(b >= 0.0)) throw std::domain_error("background_posterior: b must be >= 0");
    if (b == 0.0) return m.q_sideband > 0.0 ? 0.0 : m.k_scale;
    const double kb = m.k_scale * b;
    return std::exp(-kb + m.q_sideband * std::log(kb) + std::log(m.k_scale) -
                    log_gamma(m.q_sideband + 1.0));
}

namespace {

// Beta density of Eq-form Beta(x, r+1, Q) at x = 1/(1+k), r = 0..N
std::vector<double> beta_weights(const CountingModel& m) {
    const double x = 1.0 / (1.0 + m.k_scale);
    const double q = m.q_sideband;
    std::vector<double> w(m.n_observed + 1);
    for (int r = 0; r <= m.n_observed; ++r) {
        w[r] = std::exp(log_gamma(r + 1.0 + q) - log_gamma(r + 1.0) - log_gamma(q) +
                        r * std::log(x) + (q - 1.0) * std::log1p(-x));
    }
    return w;
}

}  // namespace

double marginal_likelihood(const CountingModel& m, double s) {
    if (!(s >= 0.0)) throw std::domain_error("marginal_likelihood: s must be >= 0");
    const double x = 1.0 / (1.0 + m.k_scale);
    const auto w = beta_weights(m);
    double sum = 0.0;
    for (int r = 0; r <= m.n_observed; ++r) {
        sum += w[r] * poisson_pmf(m.n_observed - r, s);
    }
    const double one_minus_x = 1.0 - x;
    return sum * one_minus_x * one_minus_x / m.q_sideband;
}

PosteriorCurve signal_posterior(const CountingModel& m, const SignalPrior& prior,
                                std::span<const double> s_grid) {
    if (prior.kind == SignalPrior::Kind::delta) {
        throw std::domain_error("signal_posterior: a delta prior is a point mass, not a curve");
    }
    if (s_grid.size() < 2) throw std::domain_error("signal_posterior: grid needs >= 2 points");
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        if (!(s_grid[i] >= 0.0) || (i > 0 && !(s_grid[i] > s_grid[i - 1]))) {
            throw std::domain_error("signal_posterior: grid must be >= 0 and increasing");
        }
    }

    const auto w = beta_weights(m);
    PosteriorCurve curve;
    curve.prior = prior;
    curve.s_values.assign(s_grid.begin(), s_grid.end());
    curve.density.resize(s_grid.size());

    if (prior.kind == SignalPrior::Kind::flat) {
        // sum_r Beta_r Poisson(N-r | s) / sum_r Beta_r; each Poisson term
        // integrates to one in s, so the curve is an exact density
        double denom = 0.0;
        for (double wr : w) denom += wr;
        for (std::size_t i = 0; i < curve.s_values.size(); ++i) {
            double num = 0.0;
            for (int r = 0; r <= m.n_observed; ++r) {
                num += w[r] * poisson_pmf(m.n_observed - r, curve.s_values[i]);
            }
            curve.density[i] = num / denom;
        }
    } else {
        // gamma prior: conjugacy with the Poisson terms gives a mixture of
        // Gamma(s; rate 1+q, shape N-r+M+1) densities with weights
        // w_r' = Beta_r Gamma(N-r+M+1) / ((N-r)! (1+q)^(N-r+M+1))
        const double rate = 1.0 + prior.q;
        const double ln_rate = std::log(rate);
        std::vector<double> mix(w.size());
        double denom = 0.0;
        for (int r = 0; r <= m.n_observed; ++r) {
            const double shape = m.n_observed - r + prior.m + 1.0;
            mix[r] = w[r] * std::exp(log_gamma(shape) - log_gamma(m.n_observed - r + 1.0) -
                                     shape * ln_rate);
            denom += mix[r];
        }
        for (std::size_t i = 0; i < curve.s_values.size(); ++i) {
            const double s = curve.s_values[i];
            double num = 0.0;
            for (int r = 0; r <= m.n_observed; ++r) {
                const double shape = m.n_observed - r + prior.m + 1.0;
                const double ln_gamma_pdf =
                    s == 0.0 ? (shape == 1.0 ? ln_rate : -std::numeric_limits<double>::infinity())
                             : (shape - 1.0) * std::log(s) + shape * ln_rate - rate * s -
                                   log_gamma(shape);
                num += mix[r] * std::exp(ln_gamma_pdf);
            }
            curve.density[i] = num / denom;
        }
    }

    // trapezoid mass on the grid; renormalize so the tabulated curve is a
    // proper density on its own range
    double integral = 0.0;
    for (std::size_t i = 1; i < curve.s_values.size(); ++i) {
        integral += 0.5 * (curve.density[i] + curve.density[i - 1]) *
                    (curve.s_values[i] - curve.s_values[i - 1]);
    }
    if (!(integral > 0.0)) throw numerical_error("signal_posterior: zero mass on the grid");
    curve.normalization_check = integral;
    for (double& d : curve.density) d /= integral;
    return curve;
}

PosteriorCurve signal_posterior(const CountingModel& m, const SignalPrior& prior) {
    std::vector<double> grid(posterior_defaults::n_points);
    const double step = posterior_defaults::s_max / (posterior_defaults::n_points - 1);
    for (int i = 0; i < posterior_defaults::n_points; ++i) grid[i] = i * step;
    return signal_posterior(m, prior, grid);
}

Interval credible_interval(const PosteriorCurve& curve, double cl) {
    if (!(cl > 0.0 && cl < 1.0)) throw std::domain_error("credible_interval: cl must be in (0, 1)");
    const auto& s = curve.s_values;
    const auto& f = curve.density;

    // trapezoid CDF, nondecreasing by construction (density >= 0)
    std::vector<double> cdf(s.size(), 0.0);
    for (std::size_t i = 1; i < s.size(); ++i) {
        cdf[i] = cdf[i - 1] + 0.5 * (f[i] + f[i - 1]) * (s[i] - s[i - 1]);
    }
    const double total = cdf.back();

    const auto quantile = [&](double p) {
        const double target = p * total;
        auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
        if (it == cdf.begin()) return s.front();
        if (it == cdf.end()) return s.back();
        const std::size_t i = static_cast<std::size_t>(it - cdf.begin());
        const double seg = cdf[i] - cdf[i - 1];
        const double frac = seg > 0.0 ? (target - cdf[i - 1]) / seg : 0.0;
        return s[i - 1] + frac * (s[i] - s[i - 1]);
    };

    return Interval{quantile(0.5 * (1.0 - cl)), quantile(0.5 * (1.0 + cl))};
}

namespace {

BayesFactorResult from_evidences(double num, double den) {
    if (!(den > 0.0)) throw numerical_error("bayes_factor: p(D | 0) vanishes");
    const double b10 = num / den;
    const double ln_b10 = std::log(b10);
    const double z = (ln_b10 < 0.0 ? -1.0 : 1.0) * std::sqrt(2.0 * std::abs(ln_b10));
    return BayesFactorResult{b10, z};
}

}  // namespace

BayesFactorResult bayes_factor(const CountingModel& m, double s1) {
    if (!(s1 > 0.0)) throw std::domain_error("bayes_factor: s1 must be > 0");
    return bayes_factor(m, SignalPrior::delta(s1));
}

BayesFactorResult bayes_factor(const CountingModel& m, const SignalPrior& prior) {
    if (!prior.proper()) {
        throw std::domain_error(
            "bayes_factor: the signal occurs only in H1, so its prior must be proper; "
            "the flat prior is not allowed here");
    }
    const double den = marginal_likelihood(m, 0.0);
    if (prior.kind == SignalPrior::Kind::delta) {
        return from_evidences(marginal_likelihood(m, prior.s0), den);
    }

    // gamma prior: p(D | H1) = integral of the marginal likelihood against
    // the prior; each Poisson(N-r | s) term integrates in closed form to
    // q^(M+1) Gamma(N-r+M+1) / ((N-r)! Gamma(M+1) (1+q)^(N-r+M+1))
    const double x = 1.0 / (1.0 + m.k_scale);
    const auto w = beta_weights(m);
    const double rate = 1.0 + prior.q;
    double sum = 0.0;
    for (int r = 0; r <= m.n_observed; ++r) {
        const double n_left = m.n_observed - r;
        const double shape = n_left + prior.m + 1.0;
        sum += w[r] * std::exp((prior.m + 1.0) * std::log(prior.q) + log_gamma(shape) -
                               log_gamma(n_left + 1.0) - log_gamma(prior.m + 1.0) -
                               shape * std::log(rate));
    }
    const double one_minus_x = 1.0 - x;
    const double evidence = sum * one_minus_x * one_minus_x / m.q_sideband;
    return from_evidences(evidence, den);
}

}  // namespace countstat
