#include <benchmark/benchmark.h>

#include "countstat/bayes.hpp"
#include "countstat/distributions.hpp"
#include "countstat/ensemble.hpp"
#include "countstat/neyman.hpp"
#include "countstat/profile.hpp"
#include "countstat/special_functions.hpp"

namespace {

const countstat::CountingModel kTop = countstat::CountingModel::from_estimate(17, 3.8, 0.6);

void BM_accepted_set_fc(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(countstat::accepted_set(
            3.8, countstat::OrderingRule::feldman_cousins, 0.6827, 90));
    }
}
BENCHMARK(BM_accepted_set_fc);

void BM_construct_belt(benchmark::State& state) {
    const auto rule = state.range(0) == 0 ? countstat::OrderingRule::central
                                          : countstat::OrderingRule::feldman_cousins;
    const int n_points = static_cast<int>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(countstat::construct_belt(0.0, 30.0, n_points, rule, 0.6827, 90));
    }
}
BENCHMARK(BM_construct_belt)->Args({0, 601})->Args({0, 6001})->Args({1, 601})->Args({1, 6001});

void BM_central_interval_exact(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(countstat::central_interval_exact(17, 0.6827));
    }
}
BENCHMARK(BM_central_interval_exact);

void BM_coverage_central(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            countstat::coverage(countstat::OrderingRule::central, 0.6827, 5.0, 90));
    }
}
BENCHMARK(BM_coverage_central);

void BM_wilks_interval(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(countstat::wilks_interval(kTop, 1.0));
    }
}
BENCHMARK(BM_wilks_interval);

void BM_marginal_likelihood(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(countstat::marginal_likelihood(kTop, 14.0));
    }
}
BENCHMARK(BM_marginal_likelihood);

void BM_signal_posterior(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            countstat::signal_posterior(kTop, countstat::SignalPrior::flat()));
    }
}
BENCHMARK(BM_signal_posterior);

void BM_summarize_estimator(benchmark::State& state) {
    const auto generator = countstat::Distribution::poisson(3.8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(countstat::summarize_estimator(
            [](std::span<const double> xs) { return countstat::sample_mean(xs); }, 3.8,
            generator, 5, static_cast<std::size_t>(state.range(0)), 11));
    }
}
BENCHMARK(BM_summarize_estimator)->Arg(10000)->Arg(100000);

void BM_reg_gamma_lower(benchmark::State& state) {
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(countstat::reg_gamma_lower(17.0, x));
        x = x < 40.0 ? x + 0.1 : 0.1;
    }
}
BENCHMARK(BM_reg_gamma_lower);

}  // namespace

BENCHMARK_MAIN();
