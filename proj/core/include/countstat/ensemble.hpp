#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "countstat/distributions.hpp"

namespace countstat {

// sample mean (1/N) sum x_i; throws on an empty sample
double sample_mean(std::span<const double> xs);

// sample variance with divisor N (not N-1): mean of squares minus square
// of the mean. Its ensemble average is V(1 - 1/N).
double sample_variance(std::span<const double> xs);

// Ensemble quantities of a simulated estimator: average, bias, variance,
// standard deviation, mean square error and root MSE.
struct EnsembleSummary {
    double ensemble_average = 0.0;
    double bias = 0.0;       // <x> - mu
    double variance = 0.0;   // <(x - <x>)^2>
    double std_dev = 0.0;
    double mse = 0.0;        // <(x - mu)^2> = variance + bias^2
    double rms = 0.0;
    std::int64_t n_replicas = 0;
};

using Estimator = std::function<double(std::span<const double>)>;

// Monte Carlo ensemble study: draws n_replicas independent samples of size
// n_per_replica from the generator, applies the estimator to each, and
// summarizes the resulting estimates against the stated truth.
// Deterministic for a fixed seed. Accumulation is single-pass with
// compensated (Kahan) sums, shifted by the truth, so the decomposition
// mse = variance + bias^2 holds to rounding even at 1e6 replicas.
EnsembleSummary summarize_estimator(const Estimator& estimator, double truth,
                                    const Distribution& generator,
                                    std::size_t n_per_replica, std::size_t n_replicas,
                                    std::uint64_t seed);

// The two estimators of the squared selection efficiency from k passing
// events out of n: p_hat = k/n, the naive square (k/n)^2, and the exactly
// unbiased k(k-1)/(n(n-1)). For k = 1 the latter gives 0.
struct EfficiencyEstimates {
    double p_hat;
    double p2_naive;
    double p2_unbiased;
};
EfficiencyEstimates efficiency_estimates(int k, int n);

}  // namespace countstat
