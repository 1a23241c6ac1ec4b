#pragma once

#include <span>
#include <vector>

#include "countstat/neyman.hpp"  // Interval
#include "countstat/profile.hpp"

namespace countstat {

// Prior for the signal mean. The flat prior pi(s) = 1 is improper; it is
// accepted for posterior curves but rejected for Bayes factors. The gamma
// prior is pi(s) = q (qs)^M e^(-qs) / Gamma(M+1), i.e. s ~ Gamma(rate q,
// shape M+1), proper for any q > 0, M >= 0.
struct SignalPrior {
    enum class Kind { flat, delta, gamma };
    Kind kind = Kind::flat;
    double s0 = 0.0;  // delta location
    double q = 0.0;   // gamma rate
    double m = 0.0;   // gamma shape - 1

    static SignalPrior flat() { return SignalPrior{Kind::flat, 0.0, 0.0, 0.0}; }
    static SignalPrior delta(double s0);
    static SignalPrior gamma_prior(double q, double m);
    bool proper() const { return kind != Kind::flat; }
};

// Posterior density of the background from the sideband alone, with a
// flat prior pi0(b) = 1:
//   p(b | Q, k) = e^(-kb) (kb)^Q k / Gamma(Q+1),
// a Gamma(rate k, shape Q+1) density in b. Mode Q/k = B, mean (Q+1)/k.
double background_posterior(double b, const CountingModel& m);

// Marginal likelihood p(D | s, H1) = integral of Poisson(N, s+b) against
// the background posterior, in the exact closed form
//   (1/Q) (1-x)^2 sum_{r=0..N} Beta(x, r+1, Q) Poisson(N-r | s),
// with x = 1/(1+k) and Beta the beta *density* at x.
double marginal_likelihood(const CountingModel& m, double s);

// Tabulated signal posterior, normalized on its grid by the trapezoid
// rule. normalization_check records the integral of the analytic
// (pre-normalization) density over the grid range; values away from 1
// indicate mass truncated by the grid.
struct PosteriorCurve {
    std::vector<double> s_values;
    std::vector<double> density;
    SignalPrior prior;
    double normalization_check = 0.0;
};

namespace posterior_defaults {
inline constexpr double s_max = 40.0;
inline constexpr int n_points = 4001;
}  // namespace posterior_defaults

// Posterior curve under a flat or gamma prior (a delta prior is a point
// mass, not a curve). Flat: the closed form
//   sum_r Beta(x, r+1, Q) Poisson(N-r | s) / sum_r Beta(x, r+1, Q).
// Gamma: the conjugate mixture sum_r w_r Gamma(s; 1+q, N-r+M+1).
PosteriorCurve signal_posterior(const CountingModel& m, const SignalPrior& prior,
                                std::span<const double> s_grid);
PosteriorCurve signal_posterior(const CountingModel& m, const SignalPrior& prior);

// Central (equal-tail) credible interval: the (1-cl)/2 and (1+cl)/2
// quantiles of the curve by monotone linear inversion of the trapezoid CDF.
Interval credible_interval(const PosteriorCurve& curve, double cl);

// Global Bayes factor for H1 against the nested H0: s = 0,
// B10 = p(D | H1) / p(D | 0), with the signed sigma-like measure
// Z = sign(ln B10) sqrt(2 |ln B10|). The two-argument form uses the
// delta prior at s1, so p(D | H1) = p(D | s1). A proper prior is
// mandatory for the parameter that exists only in H1; the flat prior is
// rejected with a hard error.
struct BayesFactorResult {
    double b10;
    double z;
};
BayesFactorResult bayes_factor(const CountingModel& m, double s1);
BayesFactorResult bayes_factor(const CountingModel& m, const SignalPrior& prior);

}  // namespace countstat
