#include "countstat/hypothesis.hpp"

#include <cmath>
#include <stdexcept>

#include "countstat/errors.hpp"
#include "countstat/special_functions.hpp"

namespace countstat {

double p_value(const TestSetup& setup, double x0) {
    return setup.null_dist.tail_probability(x0);
}

double z_value(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("z_value: p must be in (0, 1)");
    return -normal_quantile(p);
}

namespace {

// continuous threshold: tail(x) = alpha solved by bisection after an
// exponential bracket search around the mean
double continuous_threshold(const Distribution& null_dist, double alpha) {
    const double mu = null_dist.mean();
    const double spread = std::sqrt(null_dist.variance());
    double lo = mu - 2.0 * spread;
    double hi = mu + 2.0 * spread;
    double width = 4.0 * spread;
    for (int i = 0; i < 200 && null_dist.tail_probability(lo) < alpha; ++i) {
        lo -= width;
        width *= 2.0;
    }
    width = 4.0 * spread;
    for (int i = 0; i < 200 && null_dist.tail_probability(hi) > alpha; ++i) {
        hi += width;
        width *= 2.0;
    }
    if (null_dist.tail_probability(lo) < alpha || null_dist.tail_probability(hi) > alpha) {
        throw numerical_error("neyman_test: could not bracket the threshold");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f = null_dist.tail_probability(mid) - alpha;
        if (std::abs(f) <= 1e-9) return mid;
        if (f > 0.0) lo = mid;
        else hi = mid;
    }
    throw numerical_error("neyman_test: threshold bisection did not converge");
}

// discrete threshold: smallest integer x with P(X > x) <= alpha, i.e.
// P(X >= x+1) <= alpha; conservative since the exact size is unattainable
double discrete_threshold(const Distribution& null_dist, double alpha) {
    const double cap = null_dist.mean() + 20.0 * std::sqrt(null_dist.variance() + 1.0) + 60.0;
    for (double x = 0.0; x <= cap; x += 1.0) {
        if (null_dist.tail_probability(x + 1.0) <= alpha) return x;
    }
    throw numerical_error("neyman_test: no discrete threshold below the support cap");
}

}  // namespace

TestDecision neyman_test(const TestSetup& setup, double x0) {
    if (!(setup.alpha > 0.0 && setup.alpha < 1.0)) {
        throw std::domain_error("neyman_test: alpha must be in (0, 1)");
    }
    TestDecision decision{};
    decision.threshold = setup.null_dist.is_discrete()
                             ? discrete_threshold(setup.null_dist, setup.alpha)
                             : continuous_threshold(setup.null_dist, setup.alpha);
    decision.reject = x0 > decision.threshold;
    if (setup.alt_dist.has_value()) {
        // beta = P(x <= x_alpha | H1) = 1 - P(x > x_alpha | H1)
        const double tail = setup.alt_dist->is_discrete()
                                ? setup.alt_dist->tail_probability(decision.threshold + 1.0)
                                : setup.alt_dist->tail_probability(decision.threshold);
        decision.beta = 1.0 - tail;
        decision.power = tail;
    }
    return decision;
}

}  // namespace countstat
