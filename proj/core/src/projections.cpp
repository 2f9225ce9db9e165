#include "ldplab/projections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

#include "ldplab/densities.hpp"
#include "ldplab/errors.hpp"
#include "ldplab/parallel.hpp"
#include "ldplab/quadrature.hpp"

namespace ldplab {

namespace {

constexpr std::size_t kSampleChunk = 2048;
constexpr double kStiefelTolerance = 1e-8;

// sin(s)/s with the removable singularity at 0.
double sinc(double s) {
    if (std::abs(s) < 1e-4) {
        const double s2 = s * s;
        return 1.0 - s2 / 6.0 + s2 * s2 / 120.0;
    }
    return std::sin(s) / s;
}

void require_count(int count) {
    if (count < 1) {
        throw DomainError("count must be >= 1");
    }
}

void require_stiefel(const DenseMatrix& v) {
    if (v.rows() < 1 || v.rows() > v.cols()) {
        throw DimensionMismatch("V must be k x n with 1 <= k <= n");
    }
    if (orthonormality_defect(v) > kStiefelTolerance) {
        throw DomainError("V must have orthonormal rows");
    }
}

// Integral of 2 cos(s x) f_p(x) (or -2 x sin(s x) f_p(x)) over the half line,
// truncated where f_p drops below e^{-50}.
double p_gaussian_cf_integral(double p, double s, bool derivative) {
    const double upper = std::pow(50.0 * p, 1.0 / p);
    const auto integrand = [p, s, derivative](double x) {
        const double f = std::exp(log_p_gaussian_density(x, p));
        return derivative ? -2.0 * x * std::sin(s * x) * f : 2.0 * std::cos(s * x) * f;
    };
    QuadratureOptions opts;
    opts.abs_tol = 1e-13;
    opts.rel_tol = 1e-12;
    opts.max_intervals = 20000;
    return integrate(integrand, 0.0, upper, opts).value;
}

}  // namespace

EmpiricalMeasure::EmpiricalMeasure(DenseMatrix points) : points_(std::move(points)) {
    if (points_.rows() < 1 || points_.cols() < 1) {
        throw DomainError("EmpiricalMeasure: needs at least one point of positive dimension");
    }
    if (!points_.allFinite()) {
        throw DomainError("EmpiricalMeasure: non-finite coordinate");
    }
}

std::vector<double> EmpiricalMeasure::coordinate(int i) const {
    if (i < 0 || i >= dim()) {
        throw DimensionMismatch("EmpiricalMeasure: coordinate out of range");
    }
    std::vector<double> out(size());
    for (std::size_t j = 0; j < size(); ++j) {
        out[j] = points_(i, static_cast<Eigen::Index>(j));
    }
    return out;
}

Vector EmpiricalMeasure::mean() const {
    return points_.rowwise().mean();
}

DenseMatrix EmpiricalMeasure::covariance() const {
    if (size() < 2) {
        throw DomainError("EmpiricalMeasure: covariance needs two points");
    }
    const DenseMatrix centred = points_.colwise() - mean();
    return centred * centred.transpose() / static_cast<double>(size() - 1);
}

std::complex<double> EmpiricalMeasure::empirical_cf(const Vector& t) const {
    if (t.size() != dim()) {
        throw DimensionMismatch("empirical_cf: argument dimension");
    }
    double re = 0.0;
    double im = 0.0;
    for (Eigen::Index j = 0; j < points_.cols(); ++j) {
        const double phase = t.dot(points_.col(j));
        re += std::cos(phase);
        im += std::sin(phase);
    }
    const double n = static_cast<double>(size());
    return {re / n, im / n};
}

// phi and phi' of a p-Gaussian on s = 0, h, ..., s_max; cubic Hermite in
// between, direct quadrature beyond s_max.
struct ProductLaw::CfTable {
    static constexpr double kStep = 0.02;
    static constexpr double kMax = 30.0;

    double p = 2.0;
    std::vector<double> value;
    std::vector<double> slope;

    explicit CfTable(double p_) : p(p_) {
        const auto nodes = static_cast<std::size_t>(std::lround(kMax / kStep)) + 1;
        value.resize(nodes);
        slope.resize(nodes);
        for (std::size_t i = 0; i < nodes; ++i) {
            const double s = kStep * static_cast<double>(i);
            value[i] = p_gaussian_cf_integral(p, s, false);
            slope[i] = p_gaussian_cf_integral(p, s, true);
        }
        value[0] = 1.0;
        slope[0] = 0.0;
    }

    double operator()(double s) const {
        s = std::abs(s);
        if (s >= kMax) {
            return p_gaussian_cf_integral(p, s, false);
        }
        const auto i = static_cast<std::size_t>(s / kStep);
        const double h = kStep;
        const double u = (s - h * static_cast<double>(i)) / h;
        const double u2 = u * u;
        const double u3 = u2 * u;
        const double h00 = 2 * u3 - 3 * u2 + 1;
        const double h10 = u3 - 2 * u2 + u;
        const double h01 = -2 * u3 + 3 * u2;
        const double h11 = u3 - u2;
        return h00 * value[i] + h10 * h * slope[i] + h01 * value[i + 1] + h11 * h * slope[i + 1];
    }
};

ProductLaw::ProductLaw(Kind kind, double variance) : kind_(kind), variance_(variance) {}

ProductLaw ProductLaw::p_gaussian(const PGaussianParams& params) {
    ProductLaw law(Kind::PGaussian, sigma_p_squared(params.p()));
    law.params_ = params;
    const double p = params.p();
    if (!params.is_uniform() && p != 1.0 && p != 2.0) {
        static std::mutex cache_mutex;
        static std::vector<std::shared_ptr<const CfTable>> cache;
        std::lock_guard lock(cache_mutex);
        for (const auto& t : cache) {
            if (t->p == p) {
                law.table_ = t;
            }
        }
        if (!law.table_) {
            law.table_ = std::make_shared<const CfTable>(p);
            cache.push_back(law.table_);
        }
    }
    return law;
}

ProductLaw ProductLaw::rademacher() {
    return ProductLaw(Kind::Rademacher, 1.0);
}

ProductLaw ProductLaw::custom(std::function<double(SeededRng&)> sampler, double variance,
                              std::function<double(double)> cf) {
    if (!sampler) {
        throw DomainError("ProductLaw::custom: sampler required");
    }
    if (!(variance > 0.0) || !std::isfinite(variance)) {
        throw DomainError("ProductLaw::custom: variance must be positive and finite");
    }
    ProductLaw law(Kind::Custom, variance);
    law.sampler_ = std::move(sampler);
    law.custom_cf_ = std::move(cf);
    return law;
}

double ProductLaw::sample(SeededRng& rng) const {
    switch (kind_) {
    case Kind::PGaussian:
        return ldplab::p_gaussian(rng, *params_);
    case Kind::Rademacher:
        return (rng.next_u32() & 1u) ? 1.0 : -1.0;
    case Kind::Custom:
        return sampler_(rng);
    }
    return 0.0;
}

bool ProductLaw::has_cf() const noexcept {
    return kind_ != Kind::Custom || static_cast<bool>(custom_cf_);
}

double ProductLaw::cf(double s) const {
    switch (kind_) {
    case Kind::Rademacher:
        return std::cos(s);
    case Kind::Custom:
        if (!custom_cf_) {
            throw UnsupportedLaw("characteristic function of custom law not provided");
        }
        return custom_cf_(s);
    case Kind::PGaussian:
        break;
    }
    if (params_->is_uniform()) {
        return sinc(s);
    }
    const double p = params_->p();
    if (p == 2.0) {
        return std::exp(-0.5 * s * s);
    }
    if (p == 1.0) {
        return 1.0 / (1.0 + s * s);
    }
    return (*table_)(s);
}

ProjectedLaw::ProjectedLaw(ColumnList a, double noise_variance, ProductLaw law)
    : a_(std::move(a)),
      noise_variance_(noise_variance),
      law_(std::move(law)),
      complement_(DenseMatrix::Identity(a_.dim(), a_.dim())) {
    if (!(noise_variance_ > 0.0) || !std::isfinite(noise_variance_)) {
        throw DomainError("ProjectedLaw: noise variance must be positive");
    }
    const SymmetricPSD s = gram(a_);
    if (s.largest_eigenvalue() > 1.0 + kUnitUpperSlack) {
        throw DomainError("ProjectedLaw: ||A A^T|| exceeds 1");
    }
    complement_ = complement_clamped(s);
    gaussian_factor_ = psd_sqrt(complement_).matrix();
}

EmpiricalMeasure sample_projected_law(const SeededRng& rng, const ProjectedLaw& law, int count) {
    require_count(count);
    const int k = law.dim();
    const DenseMatrix a = law.a().to_matrix();
    const DenseMatrix factor = std::sqrt(law.noise_variance()) * law.gaussian_factor();
    DenseMatrix out(k, count);
    const std::size_t total = static_cast<std::size_t>(count);
    parallel_for_chunks(chunk_count(total, kSampleChunk), [&](std::size_t c) {
        SeededRng local = rng.substream(c);
        Vector y(a.cols());
        Vector g(k);
        const std::size_t end = std::min(total, (c + 1) * kSampleChunk);
        for (std::size_t j = c * kSampleChunk; j < end; ++j) {
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                y(i) = law.law().sample(local);
            }
            for (int i = 0; i < k; ++i) {
                g(i) = local.normal();
            }
            out.col(static_cast<Eigen::Index>(j)) = a * y + factor * g;
        }
    });
    return EmpiricalMeasure(std::move(out));
}

EmpiricalMeasure project_product(const SeededRng& rng, const DenseMatrix& v,
                                 const PGaussianParams& law, int count) {
    require_count(count);
    require_stiefel(v);
    const auto n = v.cols();
    DenseMatrix out(v.rows(), count);
    const std::size_t total = static_cast<std::size_t>(count);
    parallel_for_chunks(chunk_count(total, kSampleChunk), [&](std::size_t c) {
        SeededRng local = rng.substream(c);
        Vector z(n);
        const std::size_t end = std::min(total, (c + 1) * kSampleChunk);
        for (std::size_t j = c * kSampleChunk; j < end; ++j) {
            for (Eigen::Index i = 0; i < n; ++i) {
                z(i) = p_gaussian(local, law);
            }
            out.col(static_cast<Eigen::Index>(j)) = v * z;
        }
    });
    return EmpiricalMeasure(std::move(out));
}

EmpiricalMeasure project_lp_ball(const SeededRng& rng, const DenseMatrix& v, double p, int count) {
    require_count(count);
    require_stiefel(v);
    const int n = static_cast<int>(v.cols());
    const double scale = std::pow(static_cast<double>(n), 1.0 / p);
    DenseMatrix out(v.rows(), count);
    const std::size_t total = static_cast<std::size_t>(count);
    parallel_for_chunks(chunk_count(total, kSampleChunk), [&](std::size_t c) {
        SeededRng local = rng.substream(c);
        const std::size_t end = std::min(total, (c + 1) * kSampleChunk);
        for (std::size_t j = c * kSampleChunk; j < end; ++j) {
            out.col(static_cast<Eigen::Index>(j)) = v * uniform_lp_ball(local, p, n, scale);
        }
    });
    return EmpiricalMeasure(std::move(out));
}

namespace {

// Smallest eps >= 0 with t <= #{d < s + eps} / n + eps, where d is sorted.
// Candidates are eps = d_(j) - s (open ball reaches j points) against the
// deficit t - j / n.
double minimal_eps(const std::vector<double>& d, double s, double t) {
    const std::size_t n = d.size();
    const auto cost = [&](std::size_t j) {
        const double reach = j == 0 ? 0.0 : std::max(0.0, d[j - 1] - s);
        const double deficit = t - static_cast<double>(j) / static_cast<double>(n);
        return std::max({reach, deficit, 0.0});
    };
    // reach is non-decreasing in j and deficit decreasing: binary search for
    // the crossing, then check its neighbours.
    std::size_t lo = 0;
    std::size_t hi = n;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        const double reach = mid == 0 ? 0.0 : std::max(0.0, d[mid - 1] - s);
        const double deficit = t - static_cast<double>(mid) / static_cast<double>(n);
        if (reach >= deficit) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    double best = cost(lo);
    if (lo > 0) {
        best = std::min(best, cost(lo - 1));
    }
    return best;
}

std::vector<double> sorted_distances(const DenseMatrix& pts, const Vector& x) {
    std::vector<double> d(static_cast<std::size_t>(pts.cols()));
    for (Eigen::Index j = 0; j < pts.cols(); ++j) {
        d[static_cast<std::size_t>(j)] = (pts.col(j) - x).norm();
    }
    std::sort(d.begin(), d.end());
    return d;
}

// Fraction of sorted distances <= s (closed ball).
double closed_mass(const std::vector<double>& d, double s) {
    const auto it = std::upper_bound(d.begin(), d.end(), s);
    return static_cast<double>(it - d.begin()) / static_cast<double>(d.size());
}

}  // namespace

double levy_prokhorov(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, int grid) {
    if (mu.dim() != nu.dim()) {
        throw DimensionMismatch("levy_prokhorov: dimensions differ");
    }
    if (mu.dim() > 3) {
        throw DomainError("levy_prokhorov: supported for k <= 3");
    }
    if (grid < 1) {
        throw DomainError("levy_prokhorov: grid must be >= 1");
    }
    const std::size_t pooled = mu.size() + nu.size();
    const std::size_t stride =
        std::max<std::size_t>(1, (pooled + kLevyProkhorovMaxCenters - 1) / kLevyProkhorovMaxCenters);
    std::vector<std::size_t> centres;
    for (std::size_t i = 0; i < pooled; i += stride) {
        centres.push_back(i);
    }

    std::vector<double> worst(centres.size(), 0.0);
    parallel_for_chunks(centres.size(), [&](std::size_t c) {
        const std::size_t idx = centres[c];
        const Vector x = idx < mu.size() ? Vector(mu.points().col(static_cast<Eigen::Index>(idx)))
                                         : Vector(nu.points().col(static_cast<Eigen::Index>(idx - mu.size())));
        const auto dm = sorted_distances(mu.points(), x);
        const auto dn = sorted_distances(nu.points(), x);
        const double reach = std::max(dm.back(), dn.back());
        double eps = 0.0;
        for (int m = 0; m <= grid; ++m) {
            const double s = reach * static_cast<double>(m) / static_cast<double>(grid);
            eps = std::max(eps, minimal_eps(dn, s, closed_mass(dm, s)));
            eps = std::max(eps, minimal_eps(dm, s, closed_mass(dn, s)));
        }
        worst[c] = eps;
    });
    double eps = 0.0;
    for (double w : worst) {
        eps = std::max(eps, w);
    }
    return std::min(eps, 1.0);
}

std::vector<std::pair<int, double>> compare_ball_vs_product(const SeededRng& rng, int k, double p,
                                                            const std::vector<int>& n_list,
                                                            int count, int grid) {
    if (count < 1000) {
        throw DomainError("compare_ball_vs_product: count must be >= 1000");
    }
    if (!(p >= 1.0) || std::isinf(p)) {
        throw DomainError("compare_ball_vs_product: p must lie in [1, inf)");
    }
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < k || (i > 0 && n_list[i] <= n_list[i - 1])) {
            throw DomainError("compare_ball_vs_product: n_list must be increasing with n >= k");
        }
    }
    const PGaussianParams law(p);
    std::vector<std::pair<int, double>> out;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        const int n = n_list[i];
        SeededRng stream = rng.substream(i);
        const DenseMatrix v = haar_stiefel(stream, k, n);
        const double scale = std::pow(static_cast<double>(n), 1.0 / p);
        DenseMatrix ball(k, count);
        DenseMatrix product(k, count);
        const std::size_t total = static_cast<std::size_t>(count);
        const SeededRng draws = stream.substream(1);
        parallel_for_chunks(chunk_count(total, kSampleChunk), [&](std::size_t c) {
            SeededRng local = draws.substream(c);
            Vector z(n);
            const std::size_t end = std::min(total, (c + 1) * kSampleChunk);
            for (std::size_t j = c * kSampleChunk; j < end; ++j) {
                for (int t = 0; t < n; ++t) {
                    z(t) = p_gaussian(local, law);
                }
                const double radius = scale * std::pow(local.uniform(), 1.0 / n) / lp_norm(z, p);
                const auto col = static_cast<Eigen::Index>(j);
                product.col(col) = v * z;
                ball.col(col) = radius * product.col(col);
            }
        });
        out.emplace_back(n, levy_prokhorov(EmpiricalMeasure(std::move(ball)),
                                           EmpiricalMeasure(std::move(product)), grid));
    }
    return out;
}

std::complex<double> characteristic_function(const ProjectedLaw& law, const Vector& t) {
    if (t.size() != law.dim()) {
        throw DimensionMismatch("characteristic_function: argument dimension");
    }
    if (!law.law().has_cf()) {
        throw UnsupportedLaw("characteristic function of the product law unavailable");
    }
    const double quad = t.dot(law.complement().matrix() * t);
    double value = std::exp(-0.5 * law.noise_variance() * quad);
    for (const auto& c : law.a().columns()) {
        value *= law.law().cf(t.dot(c));
    }
    return {value, 0.0};
}

}  // namespace ldplab
