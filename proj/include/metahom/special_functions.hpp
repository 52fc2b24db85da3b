#pragma once

namespace metahom {

// ln Gamma(x) for x > 0 (Lanczos, g = 7, n = 9).
double log_gamma(double x);

// Regularized lower incomplete gamma P(a, x).
double reg_gamma_p(double shape, double x);

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), evaluated
// directly so that tiny tail probabilities keep full relative precision.
double reg_gamma_q(double shape, double x);

// Upper tail of a chi-square with df degrees of freedom (df need not be
// an integer).
double chi_square_sf(double x, double df);

// Standard normal quantile (Wichura AS 241, ~1e-16 relative accuracy).
double normal_quantile(double p);

// Quantile of Gamma(shape, scale): x with P(shape, x / scale) = u.
double gamma_quantile(double u, double shape, double scale);

// Upper-tail quantile: x with Q(shape, x / scale) = q. Equivalent to
// gamma_quantile(1 - q, ...) without the cancellation in 1 - q.
double gamma_quantile_upper(double q, double shape, double scale);

}  // namespace metahom
