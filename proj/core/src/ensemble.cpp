#include "countstat/ensemble.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace countstat {

namespace {

// Kahan-compensated accumulator
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

void check_finite(std::span<const double> xs) {
    for (double x : xs) {
        if (!std::isfinite(x)) throw std::domain_error("sample contains a non-finite entry");
    }
}

}  // namespace

double sample_mean(std::span<const double> xs) {
    if (xs.empty()) throw std::domain_error("sample_mean: empty sample");
    check_finite(xs);
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.sum / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
    if (xs.empty()) throw std::domain_error("sample_variance: empty sample");
    check_finite(xs);
    // shift by the first entry for stability, then mean-of-squares form
    const double shift = xs.front();
    CompensatedSum s1, s2;
    for (double x : xs) {
        const double d = x - shift;
        s1.add(d);
        s2.add(d * d);
    }
    const double n = static_cast<double>(xs.size());
    const double m = s1.sum / n;
    const double v = s2.sum / n - m * m;
    return v < 0.0 ? 0.0 : v;
}

EnsembleSummary summarize_estimator(const Estimator& estimator, double truth,
                                    const Distribution& generator,
                                    std::size_t n_per_replica, std::size_t n_replicas,
                                    std::uint64_t seed) {
    if (n_replicas < 2) throw std::domain_error("summarize_estimator: need n_replicas >= 2");
    if (n_per_replica < 1) throw std::domain_error("summarize_estimator: need n_per_replica >= 1");

    RandomStream rng(seed);
    std::vector<double> replica;
    CompensatedSum s1, s2;  // sums of (x - truth) and (x - truth)^2
    for (std::size_t r = 0; r < n_replicas; ++r) {
        replica.clear();
        generator.sample(rng, n_per_replica, replica);
        const double d = estimator(replica) - truth;
        s1.add(d);
        s2.add(d * d);
    }

    const double n = static_cast<double>(n_replicas);
    EnsembleSummary out;
    out.n_replicas = static_cast<std::int64_t>(n_replicas);
    out.bias = s1.sum / n;
    out.ensemble_average = truth + out.bias;
    out.mse = s2.sum / n;
    const double v = out.mse - out.bias * out.bias;
    out.variance = v < 0.0 ? 0.0 : v;
    out.std_dev = std::sqrt(out.variance);
    out.rms = std::sqrt(out.mse);
    return out;
}

EfficiencyEstimates efficiency_estimates(int k, int n) {
    if (n < 1) throw std::domain_error("efficiency_estimates: n must be >= 1");
    if (k < 0 || k > n) throw std::domain_error("efficiency_estimates: need 0 <= k <= n");
    if (n < 2) throw std::domain_error("efficiency_estimates: unbiased p^2 needs n >= 2");
    const double p_hat = static_cast<double>(k) / n;
    return EfficiencyEstimates{
        p_hat,
        p_hat * p_hat,
        static_cast<double>(k) * (k - 1.0) / (static_cast<double>(n) * (n - 1.0)),
    };
}

}  // namespace countstat
