#include "countstat/neyman.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "countstat/distributions.hpp"
#include "countstat/errors.hpp"
#include "countstat/special_functions.hpp"

namespace countstat {

namespace {

void check_cl(double cl) {
    if (!(cl > 0.0 && cl < 1.0)) throw std::domain_error("confidence level must be in (0, 1)");
}

// pmf table Poisson(0..d_max | s) with the 1e-12 truncation-mass guard
std::vector<double> pmf_table(double s, int d_max_obs) {
    if (d_max_obs < 0) throw std::domain_error("d_max must be >= 0");
    std::vector<double> pmf(d_max_obs + 1);
    for (int d = 0; d <= d_max_obs; ++d) pmf[d] = poisson_pmf(d, s);
    const double above = s == 0.0 ? 0.0 : reg_gamma_lower(d_max_obs + 1.0, s);
    if (above >= 1e-12) {
        throw numerical_error("accepted_set: d_max = " + std::to_string(d_max_obs) +
                              " leaves Poisson mass " + std::to_string(above) + " above it at s = " +
                              std::to_string(s));
    }
    return pmf;
}

AcceptedSet central_set(double cl, const std::vector<double>& pmf) {
    const double alpha_tail = 0.5 * (1.0 - cl);
    const int d_max_obs = static_cast<int>(pmf.size()) - 1;

    // lo: largest d with mass strictly below d still <= alpha/2
    int lo = 0;
    double below = 0.0;
    for (int d = 1; d <= d_max_obs; ++d) {
        below += pmf[d - 1];
        if (below <= alpha_tail) lo = d;
        else break;
    }
    // hi: smallest d with mass strictly above d <= alpha/2
    int hi = d_max_obs;
    double above = 0.0;
    for (int d = d_max_obs - 1; d >= 0; --d) {
        above += pmf[d + 1];
        if (above <= alpha_tail) hi = d;
        else break;
    }

    AcceptedSet set;
    set.d_min = lo;
    set.d_max = hi;
    set.selected.resize(hi - lo + 1);
    std::iota(set.selected.begin(), set.selected.end(), lo);
    for (int d = lo; d <= hi; ++d) set.probability += pmf[d];
    return set;
}

AcceptedSet greedy_set(double cl, const std::vector<double>& pmf, const std::vector<double>& score) {
    const int d_max_obs = static_cast<int>(pmf.size()) - 1;
    std::vector<int> order(d_max_obs + 1);
    std::iota(order.begin(), order.end(), 0);
    // descending score; equal scores admit the smaller D first
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return score[a] > score[b]; });

    AcceptedSet set;
    set.d_min = d_max_obs + 1;
    set.d_max = -1;
    for (int d : order) {
        set.selected.push_back(d);
        set.probability += pmf[d];
        set.d_min = std::min(set.d_min, d);
        set.d_max = std::max(set.d_max, d);
        if (set.probability >= cl) return set;
    }
    throw numerical_error("accepted_set: observation space exhausted before reaching cl");
}

}  // namespace

OrderingRule ordering_rule_from_name(std::string_view name) {
    if (name == "central") return OrderingRule::central;
    if (name == "feldman-cousins") return OrderingRule::feldman_cousins;
    if (name == "mode-centered") return OrderingRule::mode_centered;
    if (name == "root-n") return OrderingRule::root_n;
    throw std::domain_error("unknown ordering rule: " + std::string(name));
}

std::string_view to_string(OrderingRule rule) {
    switch (rule) {
        case OrderingRule::central: return "central";
        case OrderingRule::feldman_cousins: return "feldman-cousins";
        case OrderingRule::mode_centered: return "mode-centered";
        case OrderingRule::root_n: return "root-n";
    }
    return "?";
}

AcceptedSet accepted_set(double s, OrderingRule rule, double cl, int d_max_obs) {
    check_cl(cl);
    if (!(s >= 0.0)) throw std::domain_error("accepted_set: s must be >= 0");
    const auto pmf = pmf_table(s, d_max_obs);

    switch (rule) {
        case OrderingRule::central:
            return central_set(cl, pmf);
        case OrderingRule::mode_centered:
            // order D by descending p(D | s)
            return greedy_set(cl, pmf, pmf);
        case OrderingRule::feldman_cousins: {
            // order by the likelihood ratio p(D | s) / p(D | s_hat), with
            // the Poisson MLE s_hat = D
            std::vector<double> ratio(pmf.size());
            for (std::size_t d = 0; d < pmf.size(); ++d) {
                ratio[d] = pmf[d] / poisson_pmf(static_cast<double>(d), static_cast<double>(d));
            }
            return greedy_set(cl, pmf, ratio);
        }
        case OrderingRule::root_n:
            throw std::domain_error("root-n is a direct interval formula, not a belt rule");
    }
    throw std::domain_error("accepted_set: bad rule");
}

Belt::Belt(std::vector<double> s_grid, double cl, OrderingRule rule, int d_max_obs,
           std::vector<AcceptedSet> sets)
    : s_grid_(std::move(s_grid)), cl_(cl), rule_(rule), d_max_obs_(d_max_obs),
      sets_(std::move(sets)) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    lower_.assign(d_max_obs_ + 1, nan);
    upper_.assign(d_max_obs_ + 1, nan);
    for (std::size_t i = 0; i < s_grid_.size(); ++i) {
        for (int d = sets_[i].d_min; d <= sets_[i].d_max; ++d) {
            if (std::isnan(lower_[d])) lower_[d] = s_grid_[i];
            upper_[d] = s_grid_[i];
        }
    }
}

bool Belt::has_interval(int d) const {
    return d >= 0 && d <= d_max_obs_ && !std::isnan(lower_[d]);
}

Interval Belt::interval_for(int d) const {
    if (d < 0 || d > d_max_obs_) throw std::domain_error("interval_for: D outside observation space");
    if (std::isnan(lower_[d])) {
        throw numerical_error("interval_for: D = " + std::to_string(d) +
                              " is never accepted on the belt grid; extend the grid range");
    }
    return Interval{lower_[d], upper_[d]};
}

Belt construct_belt(double s_min, double s_max, int n_points, OrderingRule rule, double cl,
                    int d_max_obs) {
    check_cl(cl);
    if (!(s_min >= 0.0 && s_min < s_max)) {
        throw std::domain_error("construct_belt: need 0 <= s_min < s_max");
    }
    if (n_points < 2) throw std::domain_error("construct_belt: need at least two grid points");

    std::vector<double> grid(n_points);
    const double step = (s_max - s_min) / (n_points - 1);
    for (int i = 0; i < n_points; ++i) grid[i] = s_min + i * step;
    grid.back() = s_max;

    std::vector<AcceptedSet> sets;
    sets.reserve(grid.size());
    for (double s : grid) sets.push_back(accepted_set(s, rule, cl, d_max_obs));
    return Belt(std::move(grid), cl, rule, d_max_obs, std::move(sets));
}

Interval interval_for_observation(const Belt& belt, int d) { return belt.interval_for(d); }

Interval central_interval_exact(int d, double cl) {
    check_cl(cl);
    if (d < 0) throw std::domain_error("central_interval_exact: D must be >= 0");
    const double alpha_tail = 0.5 * (1.0 - cl);
    constexpr double tol = 1e-9;
    constexpr int max_iter = 200;

    // Poisson tails in the mean: P(x <= D | m) = Q(D+1, m) decreases in m,
    // P(x >= D | m) = P(D, m) increases in m. Bisection against each tail.
    const auto solve = [&](auto tail, double target, double lo, double hi) {
        double f_lo = tail(lo) - target;
        for (int i = 0; i < max_iter; ++i) {
            const double mid = 0.5 * (lo + hi);
            const double f_mid = tail(mid) - target;
            if (std::abs(f_mid) <= tol) return mid;
            if ((f_lo > 0.0) == (f_mid > 0.0)) {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        throw numerical_error("central_interval_exact: tail equation did not converge");
    };

    const double hi_bracket = d + 10.0 * std::sqrt(d + 1.0) + 10.0;
    const double upper = solve([&](double m) { return reg_gamma_upper(d + 1.0, m); },
                               alpha_tail, 0.0, hi_bracket);
    double lower = 0.0;
    if (d > 0) {
        lower = solve([&](double m) { return reg_gamma_lower(static_cast<double>(d), m); },
                      alpha_tail, 0.0, hi_bracket);
    }
    return Interval{lower, upper};
}

Interval root_n_interval(int d) {
    if (d < 0) throw std::domain_error("root_n_interval: D must be >= 0");
    const double r = std::sqrt(static_cast<double>(d));
    return Interval{d - r, d + r};
}

namespace {

// sum of Poisson(D, s) over D whose interval contains s
double coverage_sum(double s, const std::function<bool(int)>& covers) {
    if (s == 0.0) return covers(0) ? 1.0 : 0.0;
    double total = 0.0;
    const int d_top = static_cast<int>(s + 20.0 * std::sqrt(s + 1.0) + 60.0);
    for (int d = 0; d <= d_top; ++d) {
        const double p = poisson_pmf(d, s);
        if (covers(d)) total += p;
    }
    return total;
}

}  // namespace

double coverage(const Belt& belt, double s) {
    if (!(s >= 0.0)) throw std::domain_error("coverage: s must be >= 0");
    return coverage_sum(s, [&](int d) {
        // never accepted on the grid: the true interval lies entirely
        // above the grid top, so it cannot contain s <= s_max
        if (!belt.has_interval(d)) return false;
        return belt.interval_for(d).contains(s);
    });
}

double coverage(std::span<const Interval> interval_by_count, double s) {
    if (!(s >= 0.0)) throw std::domain_error("coverage: s must be >= 0");
    return coverage_sum(s, [&](int d) {
        return d < static_cast<int>(interval_by_count.size()) &&
               interval_by_count[d].contains(s);
    });
}

double coverage(OrderingRule rule, double cl, double s, int d_max_obs) {
    check_cl(cl);
    if (!(s >= 0.0)) throw std::domain_error("coverage: s must be >= 0");
    switch (rule) {
        case OrderingRule::central:
            return coverage_sum(s, [&](int d) { return central_interval_exact(d, cl).contains(s); });
        case OrderingRule::root_n:
            return coverage_sum(s, [&](int d) { return root_n_interval(d).contains(s); });
        case OrderingRule::feldman_cousins:
        case OrderingRule::mode_centered: {
            const double top = std::max(belt_defaults::s_max, s);
            const int n_points = static_cast<int>(std::round(top / belt_defaults::step)) + 1;
            const Belt belt = construct_belt(0.0, top, n_points, rule, cl, d_max_obs);
            return coverage(belt, s);
        }
    }
    throw std::domain_error("coverage: bad rule");
}

}  // namespace countstat
