#pragma once

#include <vector>

#include "countstat/neyman.hpp"  // Interval

namespace countstat {

// Counting experiment with a sideband-constrained background: N observed
// events, background estimate B +- dB re-expressed as an effective
// sideband count Q = (B/dB)^2 at scale factor k = B/dB^2, so that
// p(D | s, b) = Poisson(N, s + b) * Poisson(Q, b k), with the second
// factor continued to non-integer Q via (bk)^Q e^(-bk) / Gamma(Q+1).
struct CountingModel {
    int n_observed = 0;       // N
    double b_estimate = 0.0;  // B = Q/k
    double b_uncertainty = 0.0;  // dB = sqrt(Q)/k
    double q_sideband = 0.0;  // Q
    double k_scale = 0.0;     // k

    // from (N, B, dB) with Q and k derived from the formulas above
    static CountingModel from_estimate(int n, double b, double db);
    // same, but with Q pinned to a given value (replays of published
    // numbers whose Q differs from the formula)
    static CountingModel with_q_override(int n, double b, double db, double q);
    // from a directly observed sideband count (pseudo-experiments)
    static CountingModel from_sideband(int n, double q, double k);
};

// log of Poisson(N, s+b) * Poisson(Q, bk), computed in log space;
// -inf when s + b = 0 with N > 0
double log_likelihood(const CountingModel& m, double s, double b);

// Closed-form maximum likelihood estimate (s_hat, b_hat) = (N - B, B).
// When N < B the signal estimate is clamped to the boundary s = 0 (and
// b_hat becomes the conditional MLE there); `boundary` flags the clamp,
// since Wilks' theorem assumes the MLE is interior.
struct MleResult {
    double s_hat;
    double b_hat;
    bool boundary;
};
MleResult mle(const CountingModel& m);

// Conditional MLE of the background at fixed signal,
// b_hat(s) = [g + sqrt(g^2 + 4(1+k)Qs)] / (2(1+k)), g = N + Q - (1+k)s.
double conditional_mle_b(const CountingModel& m, double s);

// Profile likelihood ratio statistic t(N, s) = -2 ln lambda(N, s) with
// lambda = p(N | s, b_hat(s)) / p(N | s_hat, b_hat(s_hat)); zero at the MLE.
double profile_t(const CountingModel& m, double s);

struct ProfileCurve {
    std::vector<double> s_values;
    std::vector<double> t_values;
};
ProfileCurve profile_curve(const CountingModel& m, double s_min, double s_max, int n_points);

// The two roots of t(s) = n_sigma^2 bracketing s_hat, located by bisection
// on each monotone branch to |t - n^2| <= 1e-8. The lower root clamps to 0
// when t(0) < n^2; a numerical_error is thrown when the upper root is not
// bracketed below s_max (default 100).
Interval wilks_interval(const CountingModel& m, double n_sigma, double s_max = 100.0);

// Upper-tail chi-square probability P(chi2_dof > t0), the asymptotic
// p-value of the Wilks statistic.
double wilks_pvalue(double t0, int dof);

}  // namespace countstat
