#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "countstat/rng.hpp"

namespace countstat {

// Poisson pmf continued to non-integer counts, a^x e^-a / Gamma(x+1),
// evaluated in log space. Agrees with the integer pmf at integer x.
// a = 0 is the degenerate distribution at x = 0.
double poisson_pmf(double x, double a);

// The distribution catalogue. Parameter conventions:
//   binomial(n, p)           C(n,k) p^k (1-p)^(n-k)
//   poisson(a)               a^k e^-a / k!
//   multinomial(n, p)        n!/(k_1!..k_K!) prod p_i^k_i,  sum p_i = 1
//   uniform(a)               1/a on [0, a]
//   gaussian(mu, sigma)      exp(-(x-mu)^2/(2 sigma^2)) / (sigma sqrt(2 pi))
//   lognormal(mu, sigma)     exp(-(ln x-mu)^2/(2 sigma^2)) / (x sigma sqrt(2 pi))
//   chisq(n)                 x^(n/2-1) e^(-x/2) / (2^(n/2) Gamma(n/2))
//   gamma(a, b)              x^(b-1) a^b e^(-a x) / Gamma(b)   (a = rate, b = shape)
//   exponential(a)           a e^(-a x)
//   beta(n, m)               Gamma(n+m)/(Gamma(n) Gamma(m)) x^(n-1) (1-x)^(m-1)
class Distribution {
  public:
    struct Binomial { int n; double p; };
    struct Poisson { double a; };
    struct Multinomial { int n; std::vector<double> p; };
    struct Uniform { double a; };
    struct Gaussian { double mu, sigma; };
    struct LogNormal { double mu, sigma; };
    struct Chisq { double n; };
    struct Gamma { double rate, shape; };
    struct Exponential { double rate; };
    struct Beta { double n, m; };

    static Distribution binomial(int n, double p);
    static Distribution poisson(double a);
    static Distribution multinomial(int n, std::vector<double> p);
    static Distribution uniform(double a);
    static Distribution gaussian(double mu, double sigma);
    static Distribution lognormal(double mu, double sigma);
    static Distribution chisq(double n);
    static Distribution gamma(double rate, double shape);
    static Distribution exponential(double rate);
    static Distribution beta(double n, double m);

    bool is_discrete() const;
    std::string name() const;

    // pmf / pdf at x. Discrete kinds require integer x (the Poisson also
    // accepts non-integer counts through the Gamma continuation); throws
    // std::domain_error outside the support. Multinomial needs a vector
    // argument, see multinomial_mass.
    double mass_or_density(double x) const;

    // multinomial pmf at a vector of counts with sum(counts) = n
    double multinomial_mass(std::span<const int> counts) const;

    // one multinomial draw (a count per category), by sequential
    // conditional binomials
    std::vector<int> multinomial_sample(RandomStream& rng) const;

    // P(x > x0) for continuous kinds, P(x >= x0) for discrete kinds.
    // The Poisson case delegates to reg_gamma_lower.
    double tail_probability(double x0) const;

    double mean() const;
    double variance() const;

    // count reproducible draws appended to out; only the caller-owned
    // stream is mutated
    void sample(RandomStream& rng, std::size_t count, std::vector<double>& out) const;
    std::vector<double> sample(RandomStream& rng, std::size_t count) const;

    template <typename Visitor>
    decltype(auto) visit(Visitor&& v) const { return std::visit(std::forward<Visitor>(v), kind_); }

  private:
    using Kind = std::variant<Binomial, Poisson, Multinomial, Uniform, Gaussian,
                              LogNormal, Chisq, Gamma, Exponential, Beta>;
    explicit Distribution(Kind kind) : kind_(std::move(kind)) {}
    Kind kind_;
};

// Binomial moment generating function G(t) = <e^(t k)> = (e^t p + 1 - p)^n
// and its low-order moments mu_r = sum_k k^r p(k), r in {1, 2}:
// mu_1 = n p, mu_2 = (n p)^2 + n p - n p^2.
double binomial_mgf(double t, int n, double p);
double binomial_moment(int r, int n, double p);

}  // namespace countstat
