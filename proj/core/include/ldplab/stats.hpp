#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ldplab {

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
    // Effective sample size (n for one sample, n1*n2/(n1+n2) for two).
    double effective_n = 0.0;
};

// P(K > lambda) for the Kolmogorov limiting distribution.
double kolmogorov_survival(double lambda);

// sqrt(-log(alpha / 2) / 2) / sqrt(n); about 1.628 / sqrt(n) at alpha = 0.01.
double ks_critical_value(double effective_n, double alpha);

KsResult ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct SampleMoments {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double stderr_mean = 0.0;
    // Delta-method standard error of the sample variance, sqrt((m4 - s^4) / n).
    double stderr_variance = 0.0;
};

SampleMoments sample_moments(std::span<const double> xs);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};

// Weighted least squares y = intercept + slope * x. Needs >= 2 distinct x.
LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> weights);

}  // namespace ldplab
