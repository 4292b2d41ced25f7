#pragma once

namespace bessel {

// log Gamma(x) for x > 0, Lanczos approximation (g = 7, 9 terms), relative
// accuracy around 1e-14 across [1e-3, 1e6].
double log_gamma(double x);

// Regularized lower incomplete gamma P(s, x) = gamma(s, x) / Gamma(s) and its
// complement Q(s, x) = 1 - P(s, x).  Series for x < s + 1, continued fraction
// otherwise, so each is computed accurately where it is small.
double reg_gamma_p(double s, double x);
double reg_gamma_q(double s, double x);

// Error function via erf(x) = sgn(x) * P(1/2, x^2).
double erf(double x);

}  // namespace bessel
