#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace countstat {

// Rules for selecting the accepted observations at each signal value.
// root_n is a direct per-observation formula, [D - sqrt(D), D + sqrt(D)];
// it takes part in interval and coverage queries but not in belt
// construction.
enum class OrderingRule { central, feldman_cousins, mode_centered, root_n };

OrderingRule ordering_rule_from_name(std::string_view name);  // "central", "feldman-cousins", ...
std::string_view to_string(OrderingRule rule);

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
    double width() const { return upper - lower; }
    bool contains(double s) const { return lower <= s && s <= upper; }
};

// Accepted observations at one signal value. For the greedy rules,
// `selected` is in selection order (highest score first); for the central
// rule it is the contiguous range in ascending order. The acceptance
// region used for inversion is the span [d_min, d_max].
struct AcceptedSet {
    std::vector<int> selected;
    int d_min = 0;
    int d_max = 0;
    double probability = 0.0;  // total Poisson mass of `selected`, >= cl
};

// Minimal accepted set at signal s under the given rule. d_max_obs caps
// the observation space and must leave Poisson mass < 1e-12 above it,
// otherwise a numerical_error is thrown.
AcceptedSet accepted_set(double s, OrderingRule rule, double cl, int d_max_obs);

// The Neyman band: per-s acceptance spans over a uniform s grid, plus the
// inverted interval curves l(D), u(D).
class Belt {
  public:
    Belt(std::vector<double> s_grid, double cl, OrderingRule rule, int d_max_obs,
         std::vector<AcceptedSet> sets);

    const std::vector<double>& s_grid() const { return s_grid_; }
    double confidence_level() const { return cl_; }
    OrderingRule rule() const { return rule_; }
    int d_max_obs() const { return d_max_obs_; }
    const AcceptedSet& accepted(std::size_t grid_index) const { return sets_[grid_index]; }

    // true when D lies in the acceptance span at grid point i
    bool accepts(std::size_t grid_index, int d) const {
        return sets_[grid_index].d_min <= d && d <= sets_[grid_index].d_max;
    }

    // true when D is accepted somewhere on the grid
    bool has_interval(int d) const;

    // [min s : D accepted, max s : D accepted] over the grid; throws
    // numerical_error when D is never accepted (grid range too small)
    Interval interval_for(int d) const;

  private:
    std::vector<double> s_grid_;
    double cl_;
    OrderingRule rule_;
    int d_max_obs_;
    std::vector<AcceptedSet> sets_;
    std::vector<double> lower_, upper_;  // inverted curves, indexed by D
};

namespace belt_defaults {
// Default construction grid for cl ~ 0.68 studies. The grid step keeps the
// inversion error well below the 0.1 precision of reported endpoints; the
// observation cap keeps the truncated Poisson mass below 1e-12 everywhere
// on the grid.
inline constexpr double s_max = 30.0;
inline constexpr double step = 0.005;
inline constexpr int d_max_obs = 90;
inline constexpr double cl = 0.6827;
}  // namespace belt_defaults

// Belt over n_points uniformly spaced signal values in [s_min, s_max].
Belt construct_belt(double s_min, double s_max, int n_points, OrderingRule rule,
                    double cl, int d_max_obs);

Interval interval_for_observation(const Belt& belt, int d);

// Central interval from the two tail equations P(x <= D | u) = (1-cl)/2
// and P(x >= D | l) = (1-cl)/2, solved by bisection on the Poisson tails
// to 1e-9. The lower endpoint is 0 for D = 0.
Interval central_interval_exact(int d, double cl);

// the well-known root(N) interval
Interval root_n_interval(int d);

// Exact coverage probability sum_D Poisson(D, s) 1[l(D) <= s <= u(D)].
// Central and root_n use exact per-D intervals; Feldman-Cousins and
// mode-centered invert the supplied belt (or, in the rule-only overload,
// a belt built on the default grid). The span overload takes a
// precomputed table indexed by D (counts beyond the table never cover),
// which scan loops should prefer since the intervals do not depend on s.
double coverage(const Belt& belt, double s);
double coverage(OrderingRule rule, double cl, double s, int d_max_obs);
double coverage(std::span<const Interval> interval_by_count, double s);

}  // namespace countstat
