#pragma once

#include <optional>

#include "countstat/distributions.hpp"

namespace countstat {

// A test of a null statistic density H0 against an optional alternative
// H1 at fixed significance alpha.
struct TestSetup {
    Distribution null_dist;
    std::optional<Distribution> alt_dist;
    double alpha = 0.05;
};

// p-value(x0) = P(x > x0 | H0) for continuous statistics,
// P(x >= x0 | H0) for discrete ones.
double p_value(const TestSetup& setup, double x0);

// Z = sqrt(2) erf^-1(1 - 2p), the one-sided Gaussian-sigma scale;
// equivalently -normal_quantile(p).
double z_value(double p);

// Fixed-size Neyman test. The threshold solves alpha = P(x > x_alpha | H0)
// to 1e-9 for continuous nulls; for discrete nulls it is the smallest
// integer threshold with tail <= alpha (the exact size is unattainable).
// H0 is rejected when x0 > x_alpha. beta = P(x <= x_alpha | H1) and
// power = 1 - beta are filled when an alternative is given.
struct TestDecision {
    double threshold;
    bool reject;
    std::optional<double> beta;
    std::optional<double> power;
};
TestDecision neyman_test(const TestSetup& setup, double x0);

}  // namespace countstat
