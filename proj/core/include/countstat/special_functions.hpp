#pragma once

// Self-contained special-function kernel used by every other component.
// All functions are pure and thread-safe.

namespace countstat {

// ln Gamma(x) for x > 0. Lanczos approximation (g = 7, 9 coefficients),
// relative error below 1e-13 on [1e-3, 1e6]. Throws std::domain_error
// for x <= 0.
double log_gamma(double x);

// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a),
// a > 0, x >= 0. Series for x < a + 1, Lentz continued fraction otherwise.
// P(N, mu) equals the Poisson upper tail sum_{k>=N} e^-mu mu^k / k!.
double reg_gamma_lower(double a, double x);

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double reg_gamma_upper(double a, double x);

// Regularized incomplete beta I_x(a, b) for x in [0, 1], a, b > 0.
// Continued fraction with the symmetry switch at x = (a+1)/(a+b+2).
double reg_beta(double x, double a, double b);

// Error function and its inverse. erf_inv is defined on (-1, 1) and is
// accurate to full double precision (Newton-refined against erf).
double erf(double x);
double erf_inv(double y);

// Standard normal CDF and its inverse. normal_quantile(p) returns z with
// Phi(z) = p for p in (0, 1); Acklam's rational approximation polished by
// one Halley step against erfc.
double normal_cdf(double z);
double normal_quantile(double p);

}  // namespace countstat
