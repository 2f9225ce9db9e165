#include "ldplab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ldplab/densities.hpp"
#include "ldplab/errors.hpp"
#include "ldplab/parallel.hpp"
#include "ldplab/projections.hpp"
#include "ldplab/quadrature.hpp"
#include "ldplab/samplers.hpp"
#include "ldplab/special.hpp"

namespace ldplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMonteCarloChunk = 1 << 14;
constexpr int kGridPerRadius = 50;

void require_n_values(const std::vector<int>& n_values) {
    if (n_values.size() < 2) {
        throw DomainError("n_values needs at least two entries");
    }
    for (std::size_t i = 1; i < n_values.size(); ++i) {
        if (n_values[i] <= n_values[i - 1]) {
            throw DomainError("n_values must be strictly increasing");
        }
    }
}

double scalar_rate(double x) {
    return std::abs(x) >= 1.0 - kUnitLowerSlack ? kInf : -0.5 * std::log1p(-x * x);
}

// Grid of step r/50 over [a - r, a + r], then golden section around the best
// node.
double scalar_rate_reference(double a, double r) {
    const double lo = a - r;
    const double hi = a + r;
    const int nodes = 2 * kGridPerRadius;
    int best = 0;
    double best_value = kInf;
    for (int i = 0; i <= nodes; ++i) {
        const double x = lo + (hi - lo) * i / nodes;
        const double v = scalar_rate(x);
        if (v < best_value) {
            best_value = v;
            best = i;
        }
    }
    if (std::isinf(best_value)) {
        return kInf;
    }
    double left = lo + (hi - lo) * std::max(0, best - 1) / nodes;
    double right = lo + (hi - lo) * std::min(nodes, best + 1) / nodes;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = right - phi * (right - left);
    double x2 = left + phi * (right - left);
    double f1 = scalar_rate(x1);
    double f2 = scalar_rate(x2);
    for (int it = 0; it < 100 && right - left > 1e-15; ++it) {
        if (f1 <= f2) {
            right = x2;
            x2 = x1;
            f2 = f1;
            x1 = right - phi * (right - left);
            f1 = scalar_rate(x1);
        } else {
            left = x1;
            x1 = x2;
            f1 = f2;
            x2 = left + phi * (right - left);
            f2 = scalar_rate(x2);
        }
    }
    return std::min({best_value, f1, f2});
}

DenseMatrix project_to_ball(const DenseMatrix& b, const DenseMatrix& centre, double r) {
    const DenseMatrix d = b - centre;
    const double norm = d.norm();
    return norm <= r ? b : DenseMatrix(centre + d * (r / norm));
}

double matrix_rate(const DenseMatrix& b) {
    return rate_finite(b).value;
}

// Projected gradient descent with backtracking; I is convex on the ball
// intersected with the support.
double matrix_rate_reference(const DenseMatrix& target, double r) {
    const double dist = target.norm();
    DenseMatrix b = target * (1.0 - r / dist);
    double value = matrix_rate(b);
    // Radial grid as a fallback start when the nearest-to-origin point is
    // not the best one found.
    for (int i = 0; i <= 2 * kGridPerRadius; ++i) {
        const double t = -1.0 + static_cast<double>(i) / kGridPerRadius;
        const DenseMatrix c = target + target * (t * r / dist);
        const double v = matrix_rate(c);
        if (v < value) {
            value = v;
            b = c;
        }
    }
    if (std::isinf(value)) {
        return kInf;
    }
    const int k = static_cast<int>(b.rows());
    double step = 1.0;
    for (int it = 0; it < 2000; ++it) {
        const DenseMatrix complement = DenseMatrix::Identity(k, k) - b * b.transpose();
        const DenseMatrix grad = complement.ldlt().solve(b);
        bool moved = false;
        while (step > 1e-16) {
            const DenseMatrix trial = project_to_ball(b - step * grad, target, r);
            const double v = matrix_rate(trial);
            if (v < value - 1e-16) {
                moved = (trial - b).norm() > 1e-15;
                b = trial;
                value = v;
                step *= 2.0;
                break;
            }
            step *= 0.5;
        }
        if (!moved) {
            break;
        }
    }
    return value;
}

void fit_slope(SlopeReport& report, bool weighted) {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> w;
    for (const auto& pt : report.per_n) {
        x.push_back(pt.n);
        y.push_back(-pt.log_prob);
        w.push_back(weighted ? 1.0 / (pt.stderr_log_prob * pt.stderr_log_prob) : 1.0);
    }
    const LinearFit fit = weighted_linear_fit(x, y, w);
    report.fitted_slope = fit.slope;
    report.slope_stderr = fit.slope_stderr;
    report.intercept = fit.intercept;
    const double ref = report.rate_reference.value;
    if (std::isfinite(ref) && ref > 0.0) {
        report.relative_gap = std::abs(fit.slope - ref) / ref;
    } else if (ref == 0.0) {
        report.relative_gap = std::abs(fit.slope);
    } else {
        report.relative_gap = kInf;
    }
}

void guard_feasible(double rate, int n_max, int samples) {
    const double budget = std::log(static_cast<double>(samples) / 10.0);
    if (!(rate * n_max <= budget)) {
        throw InfeasibleExperiment("rate * n_max = " + std::to_string(rate * n_max) +
                                   " exceeds log(samples / 10) = " + std::to_string(budget));
    }
}

// Hit frequency -> log-probability point; stderr of log p-hat by the delta
// method, with one extra miss as a floor so that p-hat = 1 keeps a weight.
SlopePoint monte_carlo_point(int n, long long hits, long long samples) {
    if (hits == 0) {
        throw InfeasibleExperiment("no hits at n = " + std::to_string(n) + " with " +
                                   std::to_string(samples) + " samples");
    }
    SlopePoint pt;
    pt.n = n;
    pt.hits = hits;
    pt.samples = samples;
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    pt.log_prob = std::log(p);
    const double miss = std::max(1.0 - p, 1.0 / static_cast<double>(samples));
    pt.stderr_log_prob = std::sqrt(miss / static_cast<double>(hits));
    return pt;
}

template <class Event>
long long count_hits(const SeededRng& stream, int samples, Event&& event) {
    const std::size_t total = static_cast<std::size_t>(samples);
    const std::size_t chunks = chunk_count(total, kMonteCarloChunk);
    std::vector<long long> hits(chunks, 0);
    parallel_for_chunks(chunks, [&](std::size_t c) {
        SeededRng local = stream.substream(c);
        const std::size_t end = std::min(total, (c + 1) * kMonteCarloChunk);
        long long h = 0;
        for (std::size_t j = c * kMonteCarloChunk; j < end; ++j) {
            h += event(local) ? 1 : 0;
        }
        hits[c] = h;
    });
    long long sum = 0;
    for (long long h : hits) {
        sum += h;
    }
    return sum;
}

// log of the integral of c_n (1 - x^2)^{(n-3)/2} over [a - r, a + r].
double quadrature_log_prob(double a, double r, int n) {
    if (n < 3) {
        throw DomainError("quadrature needs n >= 3");
    }
    const double lo = std::max(-1.0, a - r);
    const double hi = std::min(1.0, a + r);
    if (!(hi > lo)) {
        return -kInf;
    }
    const double half = 0.5 * (n - 3);
    const auto exponent = [half](double x) { return half * std::log1p(-x * x); };
    const double peak = exponent(std::clamp(0.0, lo, hi));
    QuadratureOptions opts;
    opts.abs_tol = 0.0;
    opts.rel_tol = 1e-13;
    const auto result = integrate([&](double x) { return std::exp(exponent(x) - peak); }, lo, hi, opts);
    if (!result.converged) {
        throw NumericalFailure("quadrature did not converge at n = " + std::to_string(n));
    }
    const double log_c = log_corner_density(DenseMatrix::Zero(1, 1), 1, 1, n);
    return log_c + peak + std::log(result.value);
}

}  // namespace

RateValue corner_rate_reference(const DenseMatrix& target, double radius) {
    if (!(radius > 0.0)) {
        throw DomainError("radius must be positive");
    }
    if (target.norm() <= radius) {
        return {};
    }
    if (target.size() == 1) {
        return {scalar_rate_reference(target(0, 0), radius), false};
    }
    return {matrix_rate_reference(target, radius), false};
}

SlopeReport run_ldp_corner(const SeededRng& rng, const LdpExperiment& exp) {
    require_n_values(exp.n_values);
    if (exp.k < 1 || exp.ell < 1) {
        throw DomainError("k and ell must be >= 1");
    }
    if (exp.target.rows() != exp.k || exp.target.cols() != exp.ell) {
        throw DimensionMismatch("target must be k x ell");
    }
    if (exp.n_values.front() < exp.k + exp.ell) {
        throw DomainError("every n must be >= k + ell");
    }
    SlopeReport report;
    report.rate_reference = corner_rate_reference(exp.target, exp.radius);

    if (exp.method == EstimationMethod::Quadrature) {
        if (exp.k != 1 || exp.ell != 1) {
            throw DomainError("quadrature requires k = ell = 1");
        }
        for (int n : exp.n_values) {
            SlopePoint pt;
            pt.n = n;
            pt.log_prob = quadrature_log_prob(exp.target(0, 0), exp.radius, n);
            report.per_n.push_back(pt);
        }
        fit_slope(report, false);
        return report;
    }

    if (exp.samples_per_n < 10) {
        throw DomainError("samples_per_n must be >= 10");
    }
    guard_feasible(report.rate_reference.value, exp.n_values.back(), exp.samples_per_n);
    for (std::size_t i = 0; i < exp.n_values.size(); ++i) {
        const int n = exp.n_values[i];
        const long long hits = count_hits(rng.substream(i), exp.samples_per_n, [&](SeededRng& local) {
            const DenseMatrix corner = stiefel_corner(local, exp.k, exp.ell, n);
            return (corner - exp.target).norm() <= exp.radius;
        });
        report.per_n.push_back(monte_carlo_point(n, hits, exp.samples_per_n));
    }
    fit_slope(report, true);
    return report;
}

bool configuration_event(const DenseMatrix& v, const PointConfiguration& target, double r,
                         double rho) {
    int big = 0;
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        if (v.col(j).norm() >= r) {
            ++big;
        }
    }
    if (big != target.pair_count()) {
        return false;
    }
    for (const auto& atom : target.atoms()) {
        int near = 0;
        for (Eigen::Index j = 0; j < v.cols(); ++j) {
            const double d = std::min((v.col(j) - atom.point).norm(), (v.col(j) + atom.point).norm());
            if (d < rho) {
                ++near;
            }
        }
        if (near != atom.multiplicity) {
            return false;
        }
    }
    return true;
}

SlopeReport run_ldp_configuration(const SeededRng& rng, int k, const PointConfiguration& target,
                                  double r, double rho, const std::vector<int>& n_values,
                                  int samples_per_n) {
    require_n_values(n_values);
    if (target.dim() != k) {
        throw DimensionMismatch("target dimension must equal k");
    }
    if (!(r > 0.0) || !(rho > 0.0)) {
        throw DomainError("r and rho must be positive");
    }
    if (samples_per_n < 10) {
        throw DomainError("samples_per_n must be >= 10");
    }
    if (n_values.front() < k) {
        throw DomainError("every n must be >= k");
    }
    const auto& atoms = target.atoms();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!(atoms[i].point.norm() > r)) {
            throw DomainError("target atoms must have norm > r");
        }
        for (std::size_t j = 0; j < i; ++j) {
            const double d = std::min((atoms[i].point - atoms[j].point).norm(),
                                      (atoms[i].point + atoms[j].point).norm());
            if (d < 2.0 * rho) {
                throw DomainError("target atoms must be rho-separated");
            }
        }
        if (atoms[i].point.norm() < rho) {
            throw DomainError("rho-balls around +D and -D must be disjoint");
        }
    }

    SlopeReport report;
    report.rate_reference = rate_configuration(target);
    guard_feasible(report.rate_reference.value, n_values.back(), samples_per_n);
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        const int n = n_values[i];
        const long long hits = count_hits(rng.substream(i), samples_per_n, [&](SeededRng& local) {
            return configuration_event(haar_stiefel(local, k, n), target, r, rho);
        });
        report.per_n.push_back(monte_carlo_point(n, hits, samples_per_n));
    }
    fit_slope(report, true);
    return report;
}

double DistributionReport::min_p_value() const {
    double p = 1.0;
    for (const auto& c : checks) {
        p = std::min(p, c.ks.p_value);
    }
    return p;
}

DistributionReport run_dickey_check(const SeededRng& rng, int k, int m, int n, int samples,
                                    int dof_offset) {
    if (k < 1 || m < 1 || samples < 10) {
        throw DomainError("run_dickey_check: k, m >= 1 and samples >= 10 required");
    }
    if (n < m + k) {
        throw DomainError("run_dickey_check: need n >= m + k");
    }
    const int dof = n - m - k + 1 + dof_offset;
    if (dof < 1) {
        throw DomainError("run_dickey_check: degrees of freedom must be >= 1");
    }
    const std::size_t entries = static_cast<std::size_t>(k * m);
    const std::size_t total = static_cast<std::size_t>(samples);
    std::vector<std::vector<double>> haar(entries, std::vector<double>(total));
    std::vector<std::vector<double>> dickey(entries, std::vector<double>(total));
    const SeededRng haar_stream = rng.substream(0);
    const SeededRng dickey_stream = rng.substream(1);
    parallel_for_chunks(chunk_count(total, kMonteCarloChunk), [&](std::size_t c) {
        SeededRng a = haar_stream.substream(c);
        SeededRng b = dickey_stream.substream(c);
        const std::size_t end = std::min(total, (c + 1) * kMonteCarloChunk);
        for (std::size_t s = c * kMonteCarloChunk; s < end; ++s) {
            const DenseMatrix v = haar_stiefel(a, k, n);
            const DenseMatrix t = dickey_corner(b, k, m, dof);
            for (int i = 0; i < k; ++i) {
                for (int j = 0; j < m; ++j) {
                    const auto e = static_cast<std::size_t>(i * m + j);
                    haar[e][s] = v(i, j);
                    dickey[e][s] = t(i, j);
                }
            }
        }
    });
    DistributionReport report;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < m; ++j) {
            const auto e = static_cast<std::size_t>(i * m + j);
            report.checks.push_back({"entry(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")",
                                     ks_two_sample(haar[e], dickey[e])});
        }
    }
    return report;
}

DistributionReport run_clt_check(const SeededRng& rng, int k, double p, int n, int samples) {
    if (k < 1 || n < k) {
        throw DomainError("run_clt_check: need 1 <= k <= n");
    }
    const PGaussianParams params(p);
    SeededRng stream = rng.substream(0);
    const DenseMatrix v = haar_stiefel(stream, k, n);
    const EmpiricalMeasure cloud = params.is_uniform()
                                       ? project_product(rng.substream(1), v, params, samples)
                                       : project_lp_ball(rng.substream(1), v, p, samples);
    const double sigma = std::sqrt(sigma_p_squared(p));
    DistributionReport report;
    for (int i = 0; i < k; ++i) {
        const auto xs = cloud.coordinate(i);
        report.checks.push_back({"marginal(" + std::to_string(i + 1) + ")",
                                 ks_one_sample(xs, [sigma](double x) { return normal_cdf(x / sigma); })});
    }
    return report;
}

}  // namespace ldplab
