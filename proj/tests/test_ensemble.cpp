#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "countstat/ensemble.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace countstat;

TEST_SUITE_BEGIN("ensemble");

TEST_CASE("sample statistics") {
    const std::vector<double> one{5.0};
    CHECK(sample_mean(one) == 5.0);
    const std::vector<double> three{1.0, 2.0, 3.0};
    CHECK(sample_mean(three) == doctest::Approx(2.0).epsilon(1e-15));

    const std::vector<double> constant{4.2, 4.2, 4.2};
    CHECK(sample_variance(constant) == 0.0);
    const std::vector<double> pair{1.0, 3.0};
    CHECK(sample_variance(pair) == doctest::Approx(1.0).epsilon(1e-14));
    // hand computation with the N divisor: mean 2.5, <(x - 2.5)^2> = 1.25
    const std::vector<double> four{1.0, 2.0, 3.0, 4.0};
    CHECK(sample_variance(four) == doctest::Approx(1.25).epsilon(1e-14));

    const std::vector<double> empty;
    CHECK_THROWS_AS(sample_mean(empty), std::domain_error);
    CHECK_THROWS_AS(sample_variance(empty), std::domain_error);
}

TEST_CASE("sample mean of 1e6 poisson draws") {
    RandomStream rng(11);
    const auto xs = Distribution::poisson(3.8).sample(rng, 1000000);
    CHECK(std::abs(sample_mean(xs) - 3.8) <= 0.01);
}

TEST_CASE("the sample mean is unbiased") {
    const auto summary = summarize_estimator(
        [](std::span<const double> xs) { return sample_mean(xs); }, 0.0,
        Distribution::gaussian(0.0, 1.0), 8, 20000, 21);
    CHECK(std::abs(summary.bias) <= 5.0 / std::sqrt(8.0 * 20000.0));
}

TEST_CASE("the N-divisor sample variance is biased by -V/N") {
    // <s^2> = V (1 - 1/N) = 0.8 for V = 1, N = 5
    const auto summary = summarize_estimator(
        [](std::span<const double> xs) { return sample_variance(xs); }, 1.0,
        Distribution::gaussian(0.0, 1.0), 5, 1000000, 2024);
    CHECK(summary.ensemble_average == doctest::Approx(0.8).epsilon(0.01 / 0.8));
    CHECK(summary.bias < 0.0);
}

TEST_CASE("mse = variance + bias^2 on the same replica set") {
    for (std::uint64_t seed : {1ull, 7ull, 31ull}) {
        const auto summary = summarize_estimator(
            [](std::span<const double> xs) { return sample_variance(xs); }, 1.0,
            Distribution::gaussian(0.0, 1.0), 5, 5000, seed);
        CHECK(std::abs(summary.mse - summary.variance - summary.bias * summary.bias) <= 1e-12);
        CHECK(summary.std_dev == doctest::Approx(std::sqrt(summary.variance)).epsilon(1e-14));
        CHECK(summary.rms == doctest::Approx(std::sqrt(summary.mse)).epsilon(1e-14));
        CHECK(summary.mse >= summary.variance);
    }
}

TEST_CASE("summaries are deterministic in the seed") {
    const auto run = [] {
        return summarize_estimator(
            [](std::span<const double> xs) { return sample_mean(xs); }, 3.8,
            Distribution::poisson(3.8), 5, 1000, 77);
    };
    const auto a = run();
    const auto b = run();
    CHECK(a.ensemble_average == b.ensemble_average);
    CHECK(a.mse == b.mse);
}

TEST_CASE("exact expectation of s^2 over enumerable generators") {
    // every N-tuple of an enumerable generator, weighted by its product
    // probability: E[s^2] must equal V (1 - 1/N) exactly
    struct Case { int n_binom; double p; int n_sample; };
    for (const auto& c : {Case{4, 0.3, 3}, Case{12, 0.5, 2}, Case{6, 0.85, 3}}) {
        std::vector<double> pmf(c.n_binom + 1);
        for (int k = 0; k <= c.n_binom; ++k) {
            pmf[k] = testsupport::brute_binomial_pmf(k, c.n_binom, c.p);
        }
        const double v = c.n_binom * c.p * (1.0 - c.p);

        double expect_s2 = 0.0;
        std::vector<int> idx(c.n_sample, 0);
        std::vector<double> tuple(c.n_sample);
        for (;;) {
            double w = 1.0;
            for (int i = 0; i < c.n_sample; ++i) {
                w *= pmf[idx[i]];
                tuple[i] = idx[i];
            }
            expect_s2 += w * sample_variance(tuple);
            int pos = 0;
            while (pos < c.n_sample && ++idx[pos] > c.n_binom) idx[pos++] = 0;
            if (pos == c.n_sample) break;
        }
        CHECK(std::abs(expect_s2 - v * (1.0 - 1.0 / c.n_sample)) <= 1e-12);
    }
}

TEST_CASE("efficiency estimates") {
    for (int n : {3, 10}) {
        const auto e = efficiency_estimates(1, n);
        CHECK(e.p_hat == doctest::Approx(1.0 / n));
        CHECK(e.p2_unbiased == 0.0);  // a single success says nothing about p^2
    }
    const auto full = efficiency_estimates(7, 7);
    CHECK(full.p_hat == 1.0);
    CHECK(full.p2_unbiased == 1.0);
    CHECK_THROWS_AS(efficiency_estimates(5, 4), std::domain_error);
    CHECK_THROWS_AS(efficiency_estimates(1, 1), std::domain_error);
    CHECK_THROWS_AS(efficiency_estimates(-1, 4), std::domain_error);
}

TEST_CASE("k(k-1)/(n(n-1)) is exactly unbiased for p^2") {
    for (int n : {2, 5, 10}) {
        for (double p : {0.1, 0.5, 0.9}) {
            double expect = 0.0;
            for (int k = 0; k <= n; ++k) {
                expect += testsupport::brute_binomial_pmf(k, n, p) *
                          efficiency_estimates(k, n).p2_unbiased;
            }
            CHECK(std::abs(expect - p * p) <= 1e-12);
        }
    }
}

TEST_CASE("(k/n)^2 has positive bias exactly V/n") {
    for (int n : {2, 5, 10}) {
        for (double p : {0.1, 0.3, 0.5, 0.9}) {
            double expect = 0.0;
            for (int k = 0; k <= n; ++k) {
                expect += testsupport::brute_binomial_pmf(k, n, p) *
                          efficiency_estimates(k, n).p2_naive;
            }
            const double bias = expect - p * p;
            const double v_over_n = p * (1.0 - p) / n;  // V of one Bernoulli over n
            CHECK(std::abs(bias - v_over_n) <= 1e-12);
            CHECK(bias > 0.0);
        }
    }
}

TEST_SUITE_END();
