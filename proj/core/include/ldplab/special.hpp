#pragma once

namespace ldplab {

// log Gamma(x) for x > 0 (Lanczos approximation, g = 671/128, 14 terms).
double log_gamma(double x);

double normal_cdf(double x);

// log(exp(a) + exp(b)) without overflow; -inf absorbs.
double log_add_exp(double a, double b);

}  // namespace ldplab
