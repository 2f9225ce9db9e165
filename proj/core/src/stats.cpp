#include "ldplab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ldplab/errors.hpp"

namespace ldplab {

double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) {
        return 1.0;
    }
    if (lambda < 1.18) {
        // Small-lambda form of the CDF converges faster.
        const double pi2 = std::numbers::pi * std::numbers::pi;
        const double factor = std::sqrt(2.0 * std::numbers::pi) / lambda;
        double cdf = 0.0;
        for (int j = 1; j <= 20; ++j) {
            const double odd = 2.0 * j - 1.0;
            cdf += std::exp(-odd * odd * pi2 / (8.0 * lambda * lambda));
        }
        return std::clamp(1.0 - factor * cdf, 0.0, 1.0);
    }
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += (j % 2 == 1 ? term : -term);
        if (term < 1e-18) {
            break;
        }
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_critical_value(double effective_n, double alpha) {
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(effective_n);
}

namespace {

double stephens_p_value(double d, double effective_n) {
    const double root = std::sqrt(effective_n);
    return kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
}

}  // namespace

KsResult ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) {
        throw DomainError("ks_one_sample: empty sample");
    }
    std::vector<double> xs(sample.begin(), sample.end());
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return {d, stephens_p_value(d, n), n};
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw DomainError("ks_two_sample: empty sample");
    }
    std::vector<double> xs(a.begin(), a.end());
    std::vector<double> ys(b.begin(), b.end());
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const double n1 = static_cast<double>(xs.size());
    const double n2 = static_cast<double>(ys.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < xs.size() && j < ys.size()) {
        const double v = std::min(xs[i], ys[j]);
        while (i < xs.size() && xs[i] == v) {
            ++i;
        }
        while (j < ys.size() && ys[j] == v) {
            ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
    }
    const double effective = n1 * n2 / (n1 + n2);
    return {d, stephens_p_value(d, effective), effective};
}

SampleMoments sample_moments(std::span<const double> xs) {
    if (xs.size() < 2) {
        throw DomainError("sample_moments: need at least two values");
    }
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) {
        mean += x;
    }
    mean /= n;
    double m2 = 0.0;
    double m4 = 0.0;
    for (double x : xs) {
        const double d = x - mean;
        const double d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    const double variance = m2 / (n - 1.0);
    m2 /= n;
    m4 /= n;
    SampleMoments out;
    out.mean = mean;
    out.variance = variance;
    out.stderr_mean = std::sqrt(variance / n);
    out.stderr_variance = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
    return out;
}

LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> weights) {
    if (x.size() != y.size() || x.size() != weights.size()) {
        throw DimensionMismatch("weighted_linear_fit: length mismatch");
    }
    if (x.size() < 2) {
        throw DomainError("weighted_linear_fit: need at least two points");
    }
    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += weights[i];
        sx += weights[i] * x[i];
        sy += weights[i] * y[i];
    }
    const double xbar = sx / sw;
    const double ybar = sy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - xbar;
        sxx += weights[i] * dx * dx;
        sxy += weights[i] * dx * (y[i] - ybar);
    }
    if (!(sxx > 0.0)) {
        throw DomainError("weighted_linear_fit: abscissae are all equal");
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    // With weights 1/sigma^2 the slope variance is 1/sxx.
    fit.slope_stderr = std::sqrt(1.0 / sxx);
    return fit;
}

}  // namespace ldplab
