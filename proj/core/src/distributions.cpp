#include "countstat/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "countstat/special_functions.hpp"

namespace countstat {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_integer(double x) { return x == std::floor(x); }

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

double binomial_pmf(int k, int n, double p) {
    if (k < 0 || k > n) return 0.0;
    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (p == 1.0) return k == n ? 1.0 : 0.0;
    const double ln = log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0) +
                      k * std::log(p) + (n - k) * std::log1p(-p);
    return std::exp(ln);
}

double gaussian_pdf(double x, double mu, double sigma) {
    const double z = (x - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * kPi));
}

// Marsaglia-Tsang for shape >= 1; shape < 1 is boosted through
// gamma(shape+1) * u^(1/shape). Returns a draw with the given rate.
double sample_gamma(RandomStream& rng, double rate, double shape) {
    if (shape < 1.0) {
        const double u = rng.uniform();
        return sample_gamma(rng, rate, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
}

// cumulative pmf table for inverse-CDF sampling of a discrete kind;
// extends until the remaining tail mass is negligible
std::vector<double> poisson_cumulative(double a) {
    std::vector<double> cum;
    const std::size_t cap = static_cast<std::size_t>(a + 20.0 * std::sqrt(a + 1.0) + 60.0);
    double p = std::exp(-a);
    double c = p;
    cum.push_back(c);
    for (std::size_t k = 1; k <= cap && c < 1.0 - 1e-15; ++k) {
        p *= a / static_cast<double>(k);
        c += p;
        cum.push_back(c);
    }
    return cum;
}

std::vector<double> binomial_cumulative(int n, double p) {
    std::vector<double> cum(n + 1);
    double c = 0.0;
    for (int k = 0; k <= n; ++k) {
        c += binomial_pmf(k, n, p);
        cum[k] = c;
    }
    return cum;
}

double draw_from_cumulative(RandomStream& rng, const std::vector<double>& cum) {
    const double u = rng.uniform();
    const auto it = std::lower_bound(cum.begin(), cum.end(), u);
    return static_cast<double>(it == cum.end() ? cum.size() - 1 : it - cum.begin());
}

}  // namespace

double poisson_pmf(double x, double a) {
    if (a == 0.0) return x == 0.0 ? 1.0 : 0.0;
    if (x < 0.0) return 0.0;
    return std::exp(x * std::log(a) - a - log_gamma(x + 1.0));
}

Distribution Distribution::binomial(int n, double p) {
    require(n >= 1, "binomial: n must be a positive integer");
    require(p >= 0.0 && p <= 1.0, "binomial: p must be a probability");
    return Distribution(Kind{Binomial{n, p}});
}

Distribution Distribution::poisson(double a) {
    require(a >= 0.0, "poisson: mean must be >= 0");
    return Distribution(Kind{Poisson{a}});
}

Distribution Distribution::multinomial(int n, std::vector<double> p) {
    require(n >= 1, "multinomial: n must be a positive integer");
    require(p.size() >= 2, "multinomial: need at least two categories");
    double sum = 0.0;
    for (double pi : p) {
        require(pi >= 0.0 && pi <= 1.0, "multinomial: p_i must be probabilities");
        sum += pi;
    }
    require(std::abs(sum - 1.0) <= 1e-12, "multinomial: probabilities must sum to 1");
    return Distribution(Kind{Multinomial{n, std::move(p)}});
}

Distribution Distribution::uniform(double a) {
    require(a > 0.0, "uniform: a must be > 0");
    return Distribution(Kind{Uniform{a}});
}

Distribution Distribution::gaussian(double mu, double sigma) {
    require(sigma > 0.0, "gaussian: sigma must be > 0");
    return Distribution(Kind{Gaussian{mu, sigma}});
}

Distribution Distribution::lognormal(double mu, double sigma) {
    require(sigma > 0.0, "lognormal: sigma must be > 0");
    return Distribution(Kind{LogNormal{mu, sigma}});
}

Distribution Distribution::chisq(double n) {
    require(n > 0.0, "chisq: degrees of freedom must be > 0");
    return Distribution(Kind{Chisq{n}});
}

Distribution Distribution::gamma(double rate, double shape) {
    require(rate > 0.0, "gamma: rate must be > 0");
    require(shape > 0.0, "gamma: shape must be > 0");
    return Distribution(Kind{Gamma{rate, shape}});
}

Distribution Distribution::exponential(double rate) {
    require(rate > 0.0, "exponential: rate must be > 0");
    return Distribution(Kind{Exponential{rate}});
}

Distribution Distribution::beta(double n, double m) {
    require(n > 0.0 && m > 0.0, "beta: shape parameters must be > 0");
    return Distribution(Kind{Beta{n, m}});
}

bool Distribution::is_discrete() const {
    return visit([](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        return std::is_same_v<T, Binomial> || std::is_same_v<T, Poisson> ||
               std::is_same_v<T, Multinomial>;
    });
}

std::string Distribution::name() const {
    return visit([](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Binomial>) return "binomial";
        else if constexpr (std::is_same_v<T, Poisson>) return "poisson";
        else if constexpr (std::is_same_v<T, Multinomial>) return "multinomial";
        else if constexpr (std::is_same_v<T, Uniform>) return "uniform";
        else if constexpr (std::is_same_v<T, Gaussian>) return "gaussian";
        else if constexpr (std::is_same_v<T, LogNormal>) return "lognormal";
        else if constexpr (std::is_same_v<T, Chisq>) return "chisq";
        else if constexpr (std::is_same_v<T, Gamma>) return "gamma";
        else if constexpr (std::is_same_v<T, Exponential>) return "exponential";
        else return "beta";
    });
}

double Distribution::mass_or_density(double x) const {
    return visit([x](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Binomial>) {
            require(is_integer(x) && x >= 0.0 && x <= k.n, "binomial: x outside support");
            return binomial_pmf(static_cast<int>(x), k.n, k.p);
        } else if constexpr (std::is_same_v<T, Poisson>) {
            require(x >= 0.0, "poisson: x outside support");
            return poisson_pmf(x, k.a);
        } else if constexpr (std::is_same_v<T, Multinomial>) {
            throw std::domain_error("multinomial: use multinomial_mass with a count vector");
        } else if constexpr (std::is_same_v<T, Uniform>) {
            require(x >= 0.0 && x <= k.a, "uniform: x outside support");
            return 1.0 / k.a;
        } else if constexpr (std::is_same_v<T, Gaussian>) {
            return gaussian_pdf(x, k.mu, k.sigma);
        } else if constexpr (std::is_same_v<T, LogNormal>) {
            require(x > 0.0, "lognormal: x outside support");
            return gaussian_pdf(std::log(x), k.mu, k.sigma) / x;
        } else if constexpr (std::is_same_v<T, Chisq>) {
            require(x >= 0.0, "chisq: x outside support");
            if (x == 0.0) return k.n < 2.0 ? std::numeric_limits<double>::infinity()
                                           : (k.n == 2.0 ? 0.5 : 0.0);
            return std::exp((0.5 * k.n - 1.0) * std::log(x) - 0.5 * x -
                            0.5 * k.n * std::log(2.0) - log_gamma(0.5 * k.n));
        } else if constexpr (std::is_same_v<T, Gamma>) {
            require(x >= 0.0, "gamma: x outside support");
            if (x == 0.0) return k.shape < 1.0 ? std::numeric_limits<double>::infinity()
                                               : (k.shape == 1.0 ? k.rate : 0.0);
            return std::exp((k.shape - 1.0) * std::log(x) + k.shape * std::log(k.rate) -
                            k.rate * x - log_gamma(k.shape));
        } else if constexpr (std::is_same_v<T, Exponential>) {
            require(x >= 0.0, "exponential: x outside support");
            return k.rate * std::exp(-k.rate * x);
        } else {  // Beta
            require(x >= 0.0 && x <= 1.0, "beta: x outside support");
            if (x == 0.0 || x == 1.0) {
                const double edge_shape = x == 0.0 ? k.n : k.m;
                if (edge_shape < 1.0) return std::numeric_limits<double>::infinity();
                if (edge_shape > 1.0) return 0.0;
            }
            return std::exp(log_gamma(k.n + k.m) - log_gamma(k.n) - log_gamma(k.m) +
                            (k.n - 1.0) * std::log(x) + (k.m - 1.0) * std::log1p(-x));
        }
    });
}

double Distribution::multinomial_mass(std::span<const int> counts) const {
    const auto* m = std::get_if<Multinomial>(&kind_);
    if (m == nullptr) throw std::domain_error("multinomial_mass: not a multinomial");
    require(counts.size() == m->p.size(), "multinomial: count vector length mismatch");
    int total = 0;
    for (int c : counts) {
        require(c >= 0, "multinomial: counts must be >= 0");
        total += c;
    }
    require(total == m->n, "multinomial: counts must sum to n");
    double ln = log_gamma(m->n + 1.0);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0 && m->p[i] == 0.0) return 0.0;
        ln -= log_gamma(counts[i] + 1.0);
        if (counts[i] > 0) ln += counts[i] * std::log(m->p[i]);
    }
    return std::exp(ln);
}

std::vector<int> Distribution::multinomial_sample(RandomStream& rng) const {
    const auto* m = std::get_if<Multinomial>(&kind_);
    if (m == nullptr) throw std::domain_error("multinomial_sample: not a multinomial");
    std::vector<int> counts(m->p.size(), 0);
    int remaining = m->n;
    double mass_left = 1.0;
    for (std::size_t i = 0; i + 1 < m->p.size() && remaining > 0; ++i) {
        const double cond_p = std::clamp(m->p[i] / mass_left, 0.0, 1.0);
        const auto cum = binomial_cumulative(remaining, cond_p);
        counts[i] = static_cast<int>(draw_from_cumulative(rng, cum));
        remaining -= counts[i];
        mass_left -= m->p[i];
    }
    counts.back() += remaining;
    return counts;
}

double Distribution::tail_probability(double x0) const {
    return visit([x0](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Binomial>) {
            // P(X >= x0), exact partial sum (support is finite)
            const int lo = static_cast<int>(std::ceil(x0));
            if (lo <= 0) return 1.0;
            if (lo > k.n) return 0.0;
            double tail = 0.0;
            for (int j = k.n; j >= lo; --j) tail += binomial_pmf(j, k.n, k.p);
            return tail;
        } else if constexpr (std::is_same_v<T, Poisson>) {
            // P(X >= x0) = P(ceil(x0), a), the regularized lower gamma
            const double lo = std::ceil(x0);
            if (lo <= 0.0) return 1.0;
            if (k.a == 0.0) return 0.0;
            return reg_gamma_lower(lo, k.a);
        } else if constexpr (std::is_same_v<T, Multinomial>) {
            throw std::domain_error("multinomial: scalar tail probability undefined");
        } else if constexpr (std::is_same_v<T, Uniform>) {
            return std::clamp(1.0 - x0 / k.a, 0.0, 1.0);
        } else if constexpr (std::is_same_v<T, Gaussian>) {
            return normal_cdf(-(x0 - k.mu) / k.sigma);
        } else if constexpr (std::is_same_v<T, LogNormal>) {
            if (x0 <= 0.0) return 1.0;
            return normal_cdf(-(std::log(x0) - k.mu) / k.sigma);
        } else if constexpr (std::is_same_v<T, Chisq>) {
            if (x0 <= 0.0) return 1.0;
            return reg_gamma_upper(0.5 * k.n, 0.5 * x0);
        } else if constexpr (std::is_same_v<T, Gamma>) {
            if (x0 <= 0.0) return 1.0;
            return reg_gamma_upper(k.shape, k.rate * x0);
        } else if constexpr (std::is_same_v<T, Exponential>) {
            if (x0 <= 0.0) return 1.0;
            return std::exp(-k.rate * x0);
        } else {  // Beta
            if (x0 <= 0.0) return 1.0;
            if (x0 >= 1.0) return 0.0;
            return 1.0 - reg_beta(x0, k.n, k.m);
        }
    });
}

double Distribution::mean() const {
    return visit([](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Binomial>) return k.n * k.p;
        else if constexpr (std::is_same_v<T, Poisson>) return k.a;
        else if constexpr (std::is_same_v<T, Multinomial>)
            throw std::domain_error("multinomial: scalar mean undefined");
        else if constexpr (std::is_same_v<T, Uniform>) return 0.5 * k.a;
        else if constexpr (std::is_same_v<T, Gaussian>) return k.mu;
        else if constexpr (std::is_same_v<T, LogNormal>) return std::exp(k.mu + 0.5 * k.sigma * k.sigma);
        else if constexpr (std::is_same_v<T, Chisq>) return k.n;
        else if constexpr (std::is_same_v<T, Gamma>) return k.shape / k.rate;
        else if constexpr (std::is_same_v<T, Exponential>) return 1.0 / k.rate;
        else return k.n / (k.n + k.m);
    });
}

double Distribution::variance() const {
    return visit([](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Binomial>) return k.n * k.p * (1.0 - k.p);
        else if constexpr (std::is_same_v<T, Poisson>) return k.a;
        else if constexpr (std::is_same_v<T, Multinomial>)
            throw std::domain_error("multinomial: scalar variance undefined");
        else if constexpr (std::is_same_v<T, Uniform>) return k.a * k.a / 12.0;
        else if constexpr (std::is_same_v<T, Gaussian>) return k.sigma * k.sigma;
        else if constexpr (std::is_same_v<T, LogNormal>) {
            const double s2 = k.sigma * k.sigma;
            return (std::exp(s2) - 1.0) * std::exp(2.0 * k.mu + s2);
        }
        else if constexpr (std::is_same_v<T, Chisq>) return 2.0 * k.n;
        else if constexpr (std::is_same_v<T, Gamma>) return k.shape / (k.rate * k.rate);
        else if constexpr (std::is_same_v<T, Exponential>) return 1.0 / (k.rate * k.rate);
        else {
            const double s = k.n + k.m;
            return k.n * k.m / (s * s * (s + 1.0));
        }
    });
}

void Distribution::sample(RandomStream& rng, std::size_t count, std::vector<double>& out) const {
    out.reserve(out.size() + count);
    visit([&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Binomial>) {
            const auto cum = binomial_cumulative(k.n, k.p);
            for (std::size_t i = 0; i < count; ++i) out.push_back(draw_from_cumulative(rng, cum));
        } else if constexpr (std::is_same_v<T, Poisson>) {
            if (k.a == 0.0) {
                out.insert(out.end(), count, 0.0);
                return;
            }
            const auto cum = poisson_cumulative(k.a);
            for (std::size_t i = 0; i < count; ++i) out.push_back(draw_from_cumulative(rng, cum));
        } else if constexpr (std::is_same_v<T, Multinomial>) {
            throw std::domain_error("multinomial: scalar draws undefined, use multinomial_sample");
        } else if constexpr (std::is_same_v<T, Uniform>) {
            for (std::size_t i = 0; i < count; ++i) out.push_back(k.a * rng.uniform());
        } else if constexpr (std::is_same_v<T, Gaussian>) {
            for (std::size_t i = 0; i < count; ++i) out.push_back(k.mu + k.sigma * rng.normal());
        } else if constexpr (std::is_same_v<T, LogNormal>) {
            for (std::size_t i = 0; i < count; ++i)
                out.push_back(std::exp(k.mu + k.sigma * rng.normal()));
        } else if constexpr (std::is_same_v<T, Chisq>) {
            for (std::size_t i = 0; i < count; ++i)
                out.push_back(sample_gamma(rng, 0.5, 0.5 * k.n));
        } else if constexpr (std::is_same_v<T, Gamma>) {
            for (std::size_t i = 0; i < count; ++i)
                out.push_back(sample_gamma(rng, k.rate, k.shape));
        } else if constexpr (std::is_same_v<T, Exponential>) {
            for (std::size_t i = 0; i < count; ++i)
                out.push_back(-std::log(rng.uniform()) / k.rate);
        } else {  // Beta
            for (std::size_t i = 0; i < count; ++i) {
                const double x = sample_gamma(rng, 1.0, k.n);
                const double y = sample_gamma(rng, 1.0, k.m);
                out.push_back(x / (x + y));
            }
        }
    });
}

std::vector<double> Distribution::sample(RandomStream& rng, std::size_t count) const {
    std::vector<double> out;
    sample(rng, count, out);
    return out;
}

double binomial_mgf(double t, int n, double p) {
    require(n >= 1 && p >= 0.0 && p <= 1.0, "binomial_mgf: invalid parameters");
    return std::pow(std::exp(t) * p + 1.0 - p, n);
}

double binomial_moment(int r, int n, double p) {
    require(n >= 1 && p >= 0.0 && p <= 1.0, "binomial_moment: invalid parameters");
    const double np = n * p;
    switch (r) {
        case 1: return np;
        case 2: return np * np + np - np * p;
        default: throw std::domain_error("binomial_moment: only r = 1, 2 supported");
    }
}

}  // namespace countstat
