#pragma once

// Test-side oracles, independent of the library implementation paths they
// check: quadrature, brute-force Poisson sums, 1-D maximization, and a
// Kolmogorov-Smirnov distance.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace testsupport {

// adaptive Simpson with absolute tolerance
inline double simpson_step(const std::function<double(double)>& f, double a, double b,
                           double fa, double fm, double fb, double whole, double eps,
                           int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double eps = 1e-12, int depth = 40) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, eps, depth);
}

// piecewise adaptive Simpson; waypoints keep narrow humps from being
// missed by the first subdivision of a wide range
inline double integrate_segments(const std::function<double(double)>& f,
                                 const std::vector<double>& waypoints, double eps = 1e-13) {
    double total = 0.0;
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
        total += integrate(f, waypoints[i - 1], waypoints[i], eps);
    }
    return total;
}

// Poisson pmf by plain multiplication, nothing shared with the library
inline double brute_poisson_pmf(int k, double mu) {
    double p = std::exp(-mu);
    for (int i = 1; i <= k; ++i) p *= mu / i;
    return p;
}

// sum_{k=lo}^{hi} Poisson(k, mu)
inline double brute_poisson_sum(int lo, int hi, double mu) {
    double total = 0.0;
    for (int k = lo; k <= hi; ++k) total += brute_poisson_pmf(k, mu);
    return total;
}

// binomial pmf via pascal recursion on logs of factorials kept in doubles
inline double brute_binomial_pmf(int k, int n, double p) {
    if (k < 0 || k > n) return 0.0;
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c *= static_cast<double>(n - k + i) / i;
    return c * std::pow(p, k) * std::pow(1.0 - p, n - k);
}

// golden-section maximum of a unimodal function on [lo, hi]
inline double maximize(const std::function<double(double)>& f, double lo, double hi,
                       int iters = 200) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

// two-sided KS distance of a sample against Uniform(0, 1)
inline double ks_uniform_distance(std::vector<double> u) {
    std::sort(u.begin(), u.end());
    const double n = static_cast<double>(u.size());
    double d = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        d = std::max(d, std::max((i + 1.0) / n - u[i], u[i] - i / n));
    }
    return d;
}

}  // namespace testsupport
