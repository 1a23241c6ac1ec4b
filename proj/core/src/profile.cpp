#include "countstat/profile.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "countstat/errors.hpp"
#include "countstat/special_functions.hpp"

namespace countstat {

namespace {

void check_model_inputs(int n, double b, double db) {
    if (n < 0) throw std::domain_error("CountingModel: N must be >= 0");
    if (!(b > 0.0)) throw std::domain_error("CountingModel: B must be > 0");
    if (!(db > 0.0)) throw std::domain_error("CountingModel: dB must be > 0");
}

}  // namespace

CountingModel CountingModel::from_estimate(int n, double b, double db) {
    check_model_inputs(n, b, db);
    const double ratio = b / db;
    return CountingModel{n, b, db, ratio * ratio, b / (db * db)};
}

CountingModel CountingModel::with_q_override(int n, double b, double db, double q) {
    check_model_inputs(n, b, db);
    if (!(q > 0.0)) throw std::domain_error("CountingModel: Q override must be > 0");
    return CountingModel{n, b, db, q, b / (db * db)};
}

CountingModel CountingModel::from_sideband(int n, double q, double k) {
    // Q = 0 (an empty sideband) is a legitimate observation here, unlike
    // in the estimate-based constructors where B > 0 forces Q > 0
    if (n < 0) throw std::domain_error("CountingModel: N must be >= 0");
    if (!(q >= 0.0)) throw std::domain_error("CountingModel: Q must be >= 0");
    if (!(k > 0.0)) throw std::domain_error("CountingModel: k must be > 0");
    return CountingModel{n, q / k, std::sqrt(q) / k, q, k};
}

double log_likelihood(const CountingModel& m, double s, double b) {
    if (!(s >= 0.0) || !(b >= 0.0)) {
        throw std::domain_error("log_likelihood: s and b must be >= 0");
    }
    const double mu = s + b;
    double ln = -mu - log_gamma(m.n_observed + 1.0);
    if (m.n_observed > 0) {
        if (mu == 0.0) return -std::numeric_limits<double>::infinity();
        ln += m.n_observed * std::log(mu);
    }
    const double bk = b * m.k_scale;
    ln += -bk - log_gamma(m.q_sideband + 1.0);
    if (m.q_sideband > 0.0) {
        if (bk == 0.0) return -std::numeric_limits<double>::infinity();
        ln += m.q_sideband * std::log(bk);
    }
    return ln;
}

MleResult mle(const CountingModel& m) {
    const double s_hat = m.n_observed - m.b_estimate;
    if (s_hat <= 0.0) {
        // N <= B: the maximum sits on the s = 0 boundary, where Wilks'
        // asymptotics do not apply
        return MleResult{0.0, conditional_mle_b(m, 0.0), true};
    }
    return MleResult{s_hat, m.b_estimate, false};
}

double conditional_mle_b(const CountingModel& m, double s) {
    if (!(s >= 0.0)) throw std::domain_error("conditional_mle_b: s must be >= 0");
    const double one_k = 1.0 + m.k_scale;
    const double g = m.n_observed + m.q_sideband - one_k * s;
    const double disc = g * g + 4.0 * one_k * m.q_sideband * s;
    return (g + std::sqrt(disc)) / (2.0 * one_k);
}

namespace {

// peak of the profile likelihood: s = N - Q/k clamped at the boundary.
// Q/k equals B for formula-built models; models with an overridden Q have
// their true maximum here, not at N - B.
double profile_peak_s(const CountingModel& m) {
    const double s = m.n_observed - m.q_sideband / m.k_scale;
    return s < 0.0 ? 0.0 : s;
}

}  // namespace

double profile_t(const CountingModel& m, double s) {
    const double s_peak = profile_peak_s(m);
    const double ln_max = log_likelihood(m, s_peak, conditional_mle_b(m, s_peak));
    const double ln_prof = log_likelihood(m, s, conditional_mle_b(m, s));
    const double t = -2.0 * (ln_prof - ln_max);
    return t < 0.0 ? 0.0 : t;  // clip rounding noise at the peak
}

ProfileCurve profile_curve(const CountingModel& m, double s_min, double s_max, int n_points) {
    if (!(s_min >= 0.0 && s_min < s_max)) {
        throw std::domain_error("profile_curve: need 0 <= s_min < s_max");
    }
    if (n_points < 2) throw std::domain_error("profile_curve: need at least two points");
    ProfileCurve curve;
    curve.s_values.resize(n_points);
    curve.t_values.resize(n_points);
    const double step = (s_max - s_min) / (n_points - 1);
    for (int i = 0; i < n_points; ++i) {
        const double s = s_min + i * step;
        curve.s_values[i] = s;
        curve.t_values[i] = profile_t(m, s);
    }
    return curve;
}

Interval wilks_interval(const CountingModel& m, double n_sigma, double s_max) {
    if (!(n_sigma > 0.0)) throw std::domain_error("wilks_interval: n_sigma must be > 0");
    const double target = n_sigma * n_sigma;
    const double s_hat = profile_peak_s(m);
    constexpr double tol = 1e-8;
    constexpr int max_iter = 200;

    // t is strictly increasing away from s_hat on either side, so plain
    // bisection on each branch is unconditionally convergent
    const auto bisect = [&](double lo, double hi, bool rising) {
        for (int i = 0; i < max_iter; ++i) {
            const double mid = 0.5 * (lo + hi);
            const double f = profile_t(m, mid) - target;
            if (std::abs(f) <= tol) return mid;
            if ((f > 0.0) == rising) hi = mid;
            else lo = mid;
        }
        throw numerical_error("wilks_interval: bisection did not converge");
    };

    double lower = 0.0;
    if (profile_t(m, 0.0) > target) {
        lower = bisect(0.0, s_hat, false);  // t falls toward s_hat
    }
    if (profile_t(m, s_max) < target) {
        throw numerical_error("wilks_interval: upper root not bracketed below s_max = " +
                              std::to_string(s_max));
    }
    const double upper = bisect(s_hat, s_max, true);
    return Interval{lower, upper};
}

double wilks_pvalue(double t0, int dof) {
    if (!(t0 >= 0.0)) throw std::domain_error("wilks_pvalue: t0 must be >= 0");
    if (dof < 1) throw std::domain_error("wilks_pvalue: dof must be >= 1");
    if (t0 == 0.0) return 1.0;
    return reg_gamma_upper(0.5 * dof, 0.5 * t0);
}

}  // namespace countstat
